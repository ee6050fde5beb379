//! The special functions of the problem:
//!
//! ```text
//! Φ(τ) = ∫_0^τ e^{−x²/2} dx,      Ψ(τ) = τΦ(τ) + e^{−τ²/2},      C = Ψ(1).
//! ```
//!
//! `Ψ′ = Φ` and `Ψ″(τ) = e^{−τ²/2}`, so `Ψ` is convex, nondecreasing on
//! `[0, ∞)` and has its minimum `Ψ(0) = 1` there.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Beyond this point the series is abandoned for quadrature.
const SERIES_LIMIT: f64 = 4.0;

/// `e^{−x²/2}` underflows long before this point.
const INTEGRAND_CUTOFF: f64 = 40.0;

/// Accuracy knobs for [`phi`] and friends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecialFnConfig {
    pub abs_tolerance: f64,
    /// Maximum recursion depth of the adaptive Simpson fallback.
    pub max_refinement: u32,
}

impl Default for SpecialFnConfig {
    fn default() -> Self {
        SpecialFnConfig {
            abs_tolerance: 1e-12,
            max_refinement: 40,
        }
    }
}

impl SpecialFnConfig {
    pub fn new(abs_tolerance: f64, max_refinement: u32) -> Result<Self> {
        if !(abs_tolerance > 0.0) {
            return Err(Error::domain(
                "abs_tolerance",
                format!("must be positive, got {abs_tolerance}"),
            ));
        }
        Ok(SpecialFnConfig {
            abs_tolerance,
            max_refinement,
        })
    }

    pub fn phi(&self, tau: f64) -> Result<f64> {
        check_nonnegative("tau", tau)?;
        Ok(self.phi_raw(tau))
    }

    pub fn psi(&self, tau: f64) -> Result<f64> {
        check_nonnegative("tau", tau)?;
        Ok(self.psi_raw(tau))
    }

    /// The `τ ≥ 0` with `Ψ(τ) = y`, by bisection down to adjacent floats.
    pub fn psi_inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 1.0) || !y.is_finite() {
            return Err(Error::domain(
                "y",
                format!("Ψ takes values in [1, ∞) on [0, ∞); got {y}"),
            ));
        }
        if y == 1.0 {
            return Ok(0.0);
        }
        let mut lo = 0.0;
        let mut hi = 1.0;
        while self.psi_raw(hi) < y {
            lo = hi;
            hi *= 2.0;
        }
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.psi_raw(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (elo, ehi) = ((self.psi_raw(lo) - y).abs(), (self.psi_raw(hi) - y).abs());
        Ok(if elo <= ehi { lo } else { hi })
    }

    fn phi_raw(&self, tau: f64) -> f64 {
        if tau <= SERIES_LIMIT {
            maclaurin(tau, self.abs_tolerance)
        } else {
            let upper = tau.min(INTEGRAND_CUTOFF);
            maclaurin(SERIES_LIMIT, self.abs_tolerance)
                + adaptive_simpson(
                    gaussian,
                    SERIES_LIMIT,
                    upper,
                    self.abs_tolerance,
                    self.max_refinement,
                )
        }
    }

    fn psi_raw(&self, tau: f64) -> f64 {
        tau * self.phi_raw(tau) + gaussian(tau)
    }
}

fn check_nonnegative(name: &'static str, x: f64) -> Result<()> {
    if !(x >= 0.0) {
        return Err(Error::domain(name, format!("must be nonnegative, got {x}")));
    }
    Ok(())
}

fn gaussian(x: f64) -> f64 {
    (-0.5 * x * x).exp()
}

/// `Σ_k (−1)^k τ^{2k+1} / (2^k k! (2k+1))`, stopped once the terms have started
/// to decrease and the last one added is below `tol`.
fn maclaurin(tau: f64, tol: f64) -> f64 {
    let t2 = tau * tau;
    let mut power = tau; // τ^{2k+1} / (2^k k!)
    let mut sum = 0.0;
    let mut k = 0u32;
    loop {
        let term = power / f64::from(2 * k + 1);
        sum += if k % 2 == 0 { term } else { -term };
        k += 1;
        if term.abs() <= tol && f64::from(k) > 0.5 * t2 {
            break;
        }
        power *= t2 / (2.0 * f64::from(k));
    }
    sum
}

fn adaptive_simpson(f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: impl Fn(f64) -> f64 + Copy,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, depth)
}

/// `Φ(τ)` for `τ ≥ 0` with the default configuration.
pub fn phi(tau: f64) -> Result<f64> {
    SpecialFnConfig::default().phi(tau)
}

/// `Ψ(τ)` for `τ ≥ 0` with the default configuration.
pub fn psi(tau: f64) -> Result<f64> {
    SpecialFnConfig::default().psi(tau)
}

/// `Ψ⁻¹(y)` on `[1, ∞)` with the default configuration.
pub fn psi_inverse(y: f64) -> Result<f64> {
    SpecialFnConfig::default().psi_inverse(y)
}

/// Odd extension of `Φ` to the whole line.
pub fn phi_odd(x: f64) -> f64 {
    let v = SpecialFnConfig::default().phi_raw(x.abs());
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Even extension of `Ψ` to the whole line.
pub fn psi_even(x: f64) -> f64 {
    SpecialFnConfig::default().psi_raw(x.abs())
}

/// `Φ(1)`, cached.
pub fn phi_one() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| SpecialFnConfig::default().phi_raw(1.0))
}

/// The sharp weak-type constant `C = Ψ(1) = Φ(1) + e^{−1/2}`.
pub fn sharp_constant() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| SpecialFnConfig::default().psi_raw(1.0))
}
