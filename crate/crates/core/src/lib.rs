//! Bellman functions for the weak (1,1) inequality of the dyadic square function.
//!
//! The crate computes, approximates and numerically certifies the two Bellman
//! functions of the problem
//!
//! ```text
//! M(f, F, λ) = sup |{S²φ ≥ λ}| / |J|   over ⟨φ⟩ = f, ⟨|φ|⟩ = F
//! L(f, p, λ) = inf ⟨|φ|⟩              over ⟨φ⟩ = f, |{S²φ ≥ λ}| / |J| = p
//! ```
//!
//! whose ratio at `f = 0` yields the sharp constant `C = Ψ(1)`.
//!
//! Modules:
//!
//! - [`dyadic`]: Haar/martingale-difference expansions on the unit dyadic tree,
//!   the square function and level-set measures.
//! - [`special`]: `Φ`, `Ψ`, `Ψ⁻¹` and the sharp constant.
//! - [`boundary`]: closed-form boundary values of the normalized Bellman functions.
//! - [`verify`]: grid sweeps, exact Sturm root counting and supersolution /
//!   subsolution certificates.
//! - [`dp`]: finite-depth dynamic programming for the normalized functions θ and η.
//! - [`extremal`]: explicit witnesses, including the Bollobás copy-planting iteration.

pub mod boundary;
pub mod dp;
pub mod dyadic;
mod error;
pub mod extremal;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
