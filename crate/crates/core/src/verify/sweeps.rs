use std::f64::consts::FRAC_1_SQRT_2;

use super::{sweep, VerificationReport, SWEEP_TOLERANCE};
use crate::boundary::{alpha, eta_f0, lb, rescale_pair, theta_f0, z};
use crate::special::{phi_odd, psi_even, psi_inverse, sharp_constant};

/// Distance kept from singular edges (`x → 1` in the rescaling, `τ = 1`).
pub const EDGE_EPS: f64 = 1e-6;

/// Shrink applied to open regions before sampling them as closed ranges.
pub const OPEN_EPS: f64 = 1e-9;

fn steps(grid_steps: usize) -> usize {
    assert!(grid_steps >= 2, "grid_steps must be at least 2");
    grid_steps
}

fn gaussian(x: f64) -> f64 {
    (-0.5 * x * x).exp()
}

/// `Φ(X⁺) + Φ(X⁻) − 2Φ(τ)` over `0 ≤ x ≤ τ < 1`.
pub fn check_phi_midpoint(grid_steps: usize) -> VerificationReport {
    let n = steps(grid_steps);
    let h = (1.0 - EDGE_EPS) / n as f64;
    sweep("phi_midpoint", n + 1, SWEEP_TOLERANCE, |t| {
        let i = t.row();
        let tau = i as f64 * h;
        for j in 0..=i {
            let x = (j as f64 * h).min(tau);
            let (minus, plus) = rescale_pair(tau, x).expect("x < 1");
            let v = phi_odd(plus) + phi_odd(minus) - 2.0 * phi_odd(tau);
            t.record(v, &[tau, x]);
        }
    })
}

fn y_even(x: f64) -> f64 {
    alpha(x.abs())
}

/// `y(X⁺) + y(X⁻) − 2y(τ)` for `y = α`, `τ ∈ [0, 3]`, `0 ≤ x ≤ min(τ, 1 − ε)`.
pub fn check_supersolution_alpha(grid_steps: usize) -> VerificationReport {
    let n = steps(grid_steps);
    sweep("supersolution_alpha", n + 1, SWEEP_TOLERANCE, |t| {
        let tau = 3.0 * t.row() as f64 / n as f64;
        let x_max = tau.min(1.0 - EDGE_EPS);
        for j in 0..=n {
            let x = x_max * j as f64 / n as f64;
            let (minus, plus) = rescale_pair(tau, x).expect("x < 1");
            let v = y_even(plus) + y_even(minus) - 2.0 * y_even(tau);
            t.record(v, &[tau, x]);
        }
    })
}

fn g(tau: f64, x: f64) -> f64 {
    2.0 * tau * x / (1.0 - x * x) - ((tau * x).ln_1p() - (-tau * x).ln_1p())
}

fn g_prime(tau: f64, x: f64) -> f64 {
    let q = 1.0 - x * x;
    2.0 * tau * ((1.0 + x * x) / (q * q) - 1.0 / (1.0 - x * x * tau * tau))
}

/// `G ≥ 0`, `G` nondecreasing along the grid and `G′ ≥ 0` over `0 ≤ x ≤ τ < 1`.
pub fn check_g_monotone(grid_steps: usize) -> VerificationReport {
    let n = steps(grid_steps);
    sweep("G_monotone", n + 1, SWEEP_TOLERANCE, |t| {
        let tau = (1.0 - EDGE_EPS) * t.row() as f64 / n as f64;
        let mut prev = None;
        for j in 0..=n {
            let x = tau * j as f64 / n as f64;
            let gx = g(tau, x);
            let mut v = (-gx).max(-g_prime(tau, x));
            if let Some(p) = prev {
                v = v.max(p - gx);
            }
            prev = Some(gx);
            t.record(v, &[tau, x]);
        }
    })
}

fn l_value(g: f64, mu: f64) -> f64 {
    if mu > 0.0 {
        lb(g, mu).expect("mu > 0")
    } else {
        g.abs()
    }
}

/// `2L(x, 1) − L(x − t, 1 − t²) − L(x + t, 1 − t²)` for `x ∈ [0, 1.5]`, `t ∈ [0, 1)`.
pub fn check_l_main_inequality(grid_steps: usize) -> VerificationReport {
    let n = steps(grid_steps);
    sweep("L_main", n + 1, SWEEP_TOLERANCE, |t| {
        let x = 1.5 * t.row() as f64 / n as f64;
        let centre = 2.0 * l_value(x, 1.0);
        for j in 0..=n {
            let a = (1.0 - EDGE_EPS) * j as f64 / n as f64;
            let mu = 1.0 - a * a;
            let v = centre - l_value(x - a, mu) - l_value(x + a, mu);
            t.record(v, &[x, a]);
        }
    })
}

/// One report each for bo1, bo3, patulya1, erti1, ori and sami.
pub fn check_named_subsolution_pieces(grid_steps: usize) -> Vec<VerificationReport> {
    let n = steps(grid_steps);
    let fine = n * n;
    let c = sharp_constant();
    let mut out = Vec::with_capacity(6);

    out.push(sweep("bo1", n + 1, SWEEP_TOLERANCE, |t| {
        let x = (1.0 - EDGE_EPS) * t.row() as f64 / n as f64;
        let centre = 2.0 * psi_even(x);
        for j in 0..=n {
            let tau = x * j as f64 / n as f64;
            let s = (1.0 - tau * tau).sqrt();
            let v = centre - psi_even((x + tau) / s) - psi_even((x - tau) / s);
            t.record(v, &[x, tau]);
        }
    }));

    out.push(sweep("bo3", n + 1, SWEEP_TOLERANCE, |t| {
        let i = t.row();
        let a = -1.0 + 2.0 * i as f64 / n as f64;
        for j in i + 1..=n {
            let b = -1.0 + 2.0 * j as f64 / n as f64;
            let ends = 0.5 * (gaussian(a) + gaussian(b));
            let midpoint = ends - gaussian(0.5 * (a + b));
            let average = ends - (phi_odd(b) - phi_odd(a)) / (b - a);
            t.record(midpoint.max(average), &[a, b]);
        }
    }));

    let lo = FRAC_1_SQRT_2;
    out.push(sweep("patulya1", fine + 1, SWEEP_TOLERANCE, |t| {
        let s = (lo + (1.0 - lo) * t.row() as f64 / fine as f64).min(1.0);
        let x = s - (1.0 - s * s).sqrt();
        let bound = psi_inverse((c * s).max(1.0)).expect("argument at least 1");
        t.record(x - bound, &[s]);
    }));

    out.push(sweep("erti1", n + 1, SWEEP_TOLERANCE, |t| {
        let x = t.row() as f64 / n as f64;
        let r = (2.0 - x * x).sqrt();
        let (lo, hi) = (0.5 * (r - x) + OPEN_EPS, 0.5 * (x + r) - OPEN_EPS);
        if lo > hi {
            return;
        }
        let shift = 2.0 * psi_even(x) / c - x;
        for j in 0..=n {
            let s = lo + (hi - lo) * j as f64 / n as f64;
            let q = (1.0 - s * s).sqrt();
            let e = psi_even((s - x) / q) + c * ((s - shift) / q);
            t.record(-e, &[x, s]);
        }
    }));

    out.push(sweep("ori", fine + 1, SWEEP_TOLERANCE, |t| {
        let x = t.row() as f64 / fine as f64;
        t.record(c * x - psi_even(x), &[x]);
    }));

    out.push(sweep("sami", fine + 1, SWEEP_TOLERANCE, |t| {
        let x = t.row() as f64 / fine as f64;
        let v = 0.5 * (x + (2.0 - x * x).sqrt()) * (2.0 * psi_even(x) / c - x) - 1.0;
        t.record(v, &[x]);
    }));

    out
}

/// `|θ₀(η₀(p)) − p|` on a uniform `p` grid, plus the breakpoint identity `θ₀(z(0)) = 1`.
pub fn check_duality(p_steps: usize) -> VerificationReport {
    let n = steps(p_steps);
    sweep("duality", n + 2, SWEEP_TOLERANCE, |t| {
        let i = t.row();
        if i > n {
            t.record((theta_f0(z(0.0)) - 1.0).abs(), &[f64::NAN]);
            return;
        }
        let p = i as f64 / n as f64;
        let eta = eta_f0(p).expect("p in [0, 1]");
        t.record((theta_f0(eta) - p).abs(), &[p]);
    })
}
