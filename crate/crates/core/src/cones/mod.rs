//! Extremal quadratic forms over the fractional cones.
//!
//! `λ_α(W) = min ⟨ψ, Wψ⟩` and `μ_α(W) = max ⟨ψ, Wψ⟩ = −λ_α(−W)` over
//! α-admissible unit vectors `ψ`. `W ∈ BP_α` iff `λ_α(W) ≥ 0`.

mod isotropic;
mod lambda;

pub use isotropic::{
    isotropic_bp_membership, isotropic_k_membership, twirl_isotropic, witness_coefficients, witness_operator,
    IsotropicCoefficients,
};
pub use lambda::{
    lambda_numeric, lambda_numeric_with_seeds, LambdaConfig, LambdaEstimate, DEFAULT_MAX_ITERS, DEFAULT_SEED, DEFAULT_STARTS,
    DEFAULT_TOL_DECREASE, MAX_RESIDUAL,
};

use crate::admissibility::FractionalLevel;
use crate::error::{Error, Result};
use crate::thresholds::f_d;

fn check_level(d: usize, level: &FractionalLevel) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("need d ≥ 2, got {d}")));
    }
    if level.alpha() > d as f64 {
        return Err(Error::LevelOutOfRange { alpha: level.alpha(), d });
    }
    Ok(())
}

/// `λ_α(C_{Φ_t}) = 1 − t(k+θ)²/(k+θ²)` on the depolarizing ray, `t ≥ 0`.
pub fn lambda_depolarizing_closed_form(d: usize, t: f64, level: &FractionalLevel) -> Result<f64> {
    check_level(d, level)?;
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!("closed form is stated for t ≥ 0, got t = {t}")));
    }
    let (k, theta) = (level.k() as f64, level.theta());
    Ok(1.0 - t * (k + theta) * (k + theta) / (k + theta * theta))
}

/// `μ_α(P_ω) = (k+θ)²/(d(k+θ²))`, which is `f_d(α)`.
pub fn mu_alpha_pomega(d: usize, level: &FractionalLevel) -> f64 {
    f_d(d, level)
}
