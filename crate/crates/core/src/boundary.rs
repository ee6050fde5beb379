//! Closed-form boundary values of the normalized Bellman functions.
//!
//! With `τ = f/√λ`, `γ = F/√λ`:
//!
//! - `α(τ) = θ(τ, τ)`: the measure function on the boundary `F = |f|`;
//! - `z(τ) = η(τ, 1)`: the L¹ function on the boundary `p = 1`;
//! - `θ₀(γ) = θ(0, γ)` and `η₀(p) = η(0, p)`: both functions on `f = 0`.
//!
//! Normalized functions accept `τ ≥ 0` only; the dimensional wrappers
//! [`mb`] and [`lb`] apply evenness in `f`.

use crate::special::{phi_odd, phi_one, psi_even, sharp_constant};
use crate::{Error, Result};

/// A point of the normalized domain: `(τ, γ)` for θ or `(τ, p)` for η.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedPoint {
    pub tau: f64,
    pub gamma_or_p: f64,
}

impl NormalizedPoint {
    /// `(τ, γ)` with `|τ| ≤ γ`.
    pub fn theta_side(tau: f64, gamma: f64) -> Result<Self> {
        if !(tau.abs() <= gamma) {
            return Err(Error::domain(
                "gamma",
                format!("need |tau| <= gamma, got tau={tau}, gamma={gamma}"),
            ));
        }
        Ok(NormalizedPoint {
            tau,
            gamma_or_p: gamma,
        })
    }

    /// `(τ, p)` with `0 ≤ p ≤ 1`.
    pub fn eta_side(tau: f64, p: f64) -> Result<Self> {
        check_probability(p)?;
        if !tau.is_finite() {
            return Err(Error::domain("tau", format!("must be finite, got {tau}")));
        }
        Ok(NormalizedPoint { tau, gamma_or_p: p })
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p", format!("must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// `α(τ) = min(Φ(τ)/Φ(1), 1)`.
pub fn alpha(tau: f64) -> f64 {
    debug_assert!(tau >= 0.0);
    if tau >= 1.0 {
        1.0
    } else {
        phi_odd(tau) / phi_one()
    }
}

/// `z(τ) = Ψ(τ)/Ψ(1)` below 1 and `τ` from 1 on.
pub fn z(tau: f64) -> f64 {
    debug_assert!(tau >= 0.0);
    if tau >= 1.0 {
        tau
    } else {
        psi_even(tau) / sharp_constant()
    }
}

/// `θ(0, γ) = min(Ψ(1)·γ, 1)`.
pub fn theta_f0(gamma: f64) -> f64 {
    debug_assert!(gamma >= 0.0);
    (sharp_constant() * gamma).min(1.0)
}

/// `η(0, p) = p/Ψ(1)`.
pub fn eta_f0(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(p / sharp_constant())
}

/// `(X⁻, X⁺) = ((τ − x)/√(1 − x²), (τ + x)/√(1 − x²))`: the normalized
/// coordinates of the two children after a jump of relative size `x`.
pub fn rescale_pair(tau: f64, x: f64) -> Result<(f64, f64)> {
    if !(x.abs() < 1.0) {
        return Err(Error::domain("x", format!("need |x| < 1, got {x}")));
    }
    let s = (1.0 - x * x).sqrt();
    Ok(((tau - x) / s, (tau + x) / s))
}

fn check_lambda(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(
            "lambda",
            format!("must be positive and finite, got {lambda}"),
        ));
    }
    Ok(lambda.sqrt())
}

/// `M(f, |f|, λ) = α(|f|/√λ)`.
pub fn mb(f: f64, lambda: f64) -> Result<f64> {
    let root = check_lambda(lambda)?;
    Ok(alpha(f.abs() / root))
}

/// `L(f, 1, λ) = √λ·z(|f|/√λ)`.
pub fn lb(f: f64, lambda: f64) -> Result<f64> {
    let root = check_lambda(lambda)?;
    Ok(root * z(f.abs() / root))
}
