use super::{sweep, VerificationReport, SAMPLING_NOTE, SWEEP_TOLERANCE};
use crate::boundary::{alpha, z};
use crate::special::{phi_odd, psi_even};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Convex,
    Concave,
    Nondecreasing,
    Nonincreasing,
}

impl Shape {
    fn name(self) -> &'static str {
        match self {
            Shape::Convex => "convex",
            Shape::Concave => "concave",
            Shape::Nondecreasing => "nondecreasing",
            Shape::Nonincreasing => "nonincreasing",
        }
    }
}

/// Checks the sign of discrete first or second differences of sampled data.
///
/// Second differences are measured as the deviation of the middle sample
/// from the chord through its neighbours, which tolerates uneven spacing.
pub fn check_discrete_shape(
    samples: &[(f64, f64)],
    shape: Shape,
    tol: f64,
) -> Result<VerificationReport> {
    let needed = match shape {
        Shape::Convex | Shape::Concave => 3,
        Shape::Nondecreasing | Shape::Nonincreasing => 2,
    };
    if samples.len() < needed {
        return Err(Error::domain(
            "samples",
            format!("{} check needs {needed} points, got {}", shape.name(), samples.len()),
        ));
    }
    if let Some(w) = samples.windows(2).find(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::domain(
            "samples",
            format!("x must be strictly increasing, got {} then {}", w[0].0, w[1].0),
        ));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut at = Vec::new();
    let mut consider = |v: f64, x: f64| {
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v > worst {
            worst = v;
            at = vec![x];
        }
    };
    match shape {
        Shape::Nondecreasing | Shape::Nonincreasing => {
            for w in samples.windows(2) {
                let d = w[1].1 - w[0].1;
                consider(if shape == Shape::Nondecreasing { -d } else { d }, w[1].0);
            }
        }
        Shape::Convex | Shape::Concave => {
            for w in samples.windows(3) {
                let ((x0, y0), (x1, y1), (x2, y2)) = (w[0], w[1], w[2]);
                let r = (x1 - x0) / (x2 - x0);
                let chord = y0 + r * (y2 - y0);
                let dev = y1 - chord;
                consider(if shape == Shape::Convex { dev } else { -dev }, x1);
            }
        }
    }
    Ok(VerificationReport::new(
        format!("shape_{}", shape.name()),
        samples.len(),
        worst,
        at,
        tol,
        SAMPLING_NOTE,
    ))
}

const SHAPE_POINTS: usize = 1000;
const SHAPE_TAU_MAX: f64 = 3.0;
const ODE_STEP: f64 = 1e-4;
const ODE_TOLERANCE: f64 = 1e-4;
const KINK_WINDOW: f64 = 1e-3;

fn tau_grid() -> impl Iterator<Item = f64> {
    (1..=SHAPE_POINTS).map(|k| SHAPE_TAU_MAX * k as f64 / SHAPE_POINTS as f64)
}

fn alpha_odd(t: f64) -> f64 {
    alpha(t.abs()).copysign(t)
}

fn z_even(t: f64) -> f64 {
    z(t.abs())
}

fn relabel(mut r: VerificationReport, name: &str) -> VerificationReport {
    r.name = name.to_string();
    r
}

/// Shape and ODE checks of the boundary curves on `τ ∈ (0, 3]`:
/// α concave in `S = Φ(τ)`, `z/Ψ` convex in `T = τ/Ψ(τ)`, `α/Φ` nonincreasing,
/// and the residuals of `τα′ + α″ = 0` and `z″ + τz′ − z = 0` away from `τ = 1`.
pub fn check_boundary_shapes() -> Vec<VerificationReport> {
    let in_s: Vec<(f64, f64)> = std::iter::once((0.0, 0.0))
        .chain(tau_grid().map(|t| (phi_odd(t), alpha(t))))
        .collect();
    let in_t: Vec<(f64, f64)> = std::iter::once((0.0, z(0.0)))
        .chain(tau_grid().map(|t| {
            let psi = psi_even(t);
            (t / psi, z(t) / psi)
        }))
        .collect();
    let ratio: Vec<(f64, f64)> = tau_grid().map(|t| (t, alpha(t) / phi_odd(t))).collect();

    let mut out = vec![
        relabel(
            check_discrete_shape(&in_s, Shape::Concave, SWEEP_TOLERANCE).expect("valid grid"),
            "alpha_concave_in_S",
        ),
        relabel(
            check_discrete_shape(&in_t, Shape::Convex, SWEEP_TOLERANCE).expect("valid grid"),
            "beta_convex_in_T",
        ),
        relabel(
            check_discrete_shape(&ratio, Shape::Nonincreasing, SWEEP_TOLERANCE)
                .expect("valid grid"),
            "alpha_over_phi_monotone",
        ),
    ];

    let h = ODE_STEP;
    let grid: Vec<f64> = tau_grid()
        .filter(|t| (t - 1.0).abs() >= 0.5 * KINK_WINDOW)
        .collect();
    out.push(sweep("alpha_ode_residual", grid.len(), ODE_TOLERANCE, |tr| {
        let t = grid[tr.row()];
        let d1 = (alpha_odd(t + h) - alpha_odd(t - h)) / (2.0 * h);
        let d2 = (alpha_odd(t + h) - 2.0 * alpha_odd(t) + alpha_odd(t - h)) / (h * h);
        tr.record((t * d1 + d2).abs(), &[t]);
    }));
    out.push(sweep("z_ode_residual", grid.len(), ODE_TOLERANCE, |tr| {
        let t = grid[tr.row()];
        let d1 = (z_even(t + h) - z_even(t - h)) / (2.0 * h);
        let d2 = (z_even(t + h) - 2.0 * z_even(t) + z_even(t - h)) / (h * h);
        tr.record((d2 + t * d1 - z_even(t)).abs(), &[t]);
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_is_convex() {
        let s: Vec<(f64, f64)> = (0..100).map(|i| (i as f64, (i * i) as f64)).collect();
        assert!(check_discrete_shape(&s, Shape::Convex, 1e-12).unwrap().passed);
        assert!(!check_discrete_shape(&s, Shape::Concave, 1e-12).unwrap().passed);
        assert!(check_discrete_shape(&s, Shape::Nondecreasing, 0.0).unwrap().passed);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(check_discrete_shape(&[(0.0, 0.0), (1.0, 1.0)], Shape::Convex, 0.0).is_err());
        let s = [(0.0, 0.0), (0.0, 1.0), (1.0, 2.0)];
        assert!(check_discrete_shape(&s, Shape::Nondecreasing, 0.0).is_err());
    }

    #[test]
    fn boundary_curves_have_their_shapes() {
        for r in check_boundary_shapes() {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn z_is_convex_in_tau() {
        let s: Vec<(f64, f64)> = (0..=300).map(|i| (i as f64 / 100.0, z(i as f64 / 100.0))).collect();
        assert!(check_discrete_shape(&s, Shape::Convex, 1e-12).unwrap().passed);
    }
}
