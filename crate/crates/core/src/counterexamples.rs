//! Constructive demonstrations: strict inclusion `V_k ⊊ V_α ⊊ V_{k+1}`,
//! and a CP post-composition `Ad_A ∘ Φ_t` that leaves `P_α`.

use serde::Serialize;

use crate::admissibility::{
    is_admissible_vector, strict_inclusion_pair, AdmissibilityReport, FractionalLevel, DEFAULT_TOL,
};
use crate::choi::{choi_depolarizing, choi_postcompose};
use crate::cones::witness_operator;
use crate::error::{Error, Result};
use crate::linalg::{c64, identity, BipartiteDims, BipartiteVector, CMatrix};
use crate::thresholds::t_star;

/// Largest accepted gap between the computed and predicted quadratic value.
pub const PREDICTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrictInclusionReport {
    pub k: usize,
    pub theta: f64,
    pub theta_prime: f64,
    pub psi_theta: BipartiteVector,
    pub psi_theta_prime: BipartiteVector,
    /// `ψ_θ` at levels `α` and `k`.
    pub psi_at_alpha: AdmissibilityReport,
    pub psi_at_k: AdmissibilityReport,
    /// `ψ_θ′` at levels `k+1` and `α`.
    pub psi_prime_at_k_plus_1: AdmissibilityReport,
    pub psi_prime_at_alpha: AdmissibilityReport,
    /// `Tr(W_k ψ_θψ_θ*)`, negative: `ψ_θψ_θ* ∉ K_k`.
    pub witness_pairing: f64,
}

pub fn demo_strict_inclusion(k: usize, theta: f64, dims: BipartiteDims) -> Result<StrictInclusionReport> {
    if !dims.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "the witness lives on d ⊗ d, got {}x{}",
            dims.n(),
            dims.m()
        )));
    }
    let (psi, psi_prime) = strict_inclusion_pair(k, theta, dims)?;
    let d = dims.d();
    let lower = FractionalLevel::integer(k, d)?;
    let level = FractionalLevel::new(k as f64 + theta, d)?;
    let upper = FractionalLevel::integer(k + 1, d)?;
    let witness = witness_operator(d, &lower)?;
    let witness_pairing = witness.pair(&psi.projector());
    if witness_pairing >= 0.0 {
        return Err(Error::Verification(format!("witness pairing {witness_pairing} is not negative")));
    }
    Ok(StrictInclusionReport {
        k,
        theta,
        theta_prime: (1.0 + theta) / 2.0,
        psi_at_alpha: is_admissible_vector(&psi, &level, DEFAULT_TOL)?,
        psi_at_k: is_admissible_vector(&psi, &lower, DEFAULT_TOL)?,
        psi_prime_at_k_plus_1: is_admissible_vector(&psi_prime, &upper, DEFAULT_TOL)?,
        psi_prime_at_alpha: is_admissible_vector(&psi_prime, &level, DEFAULT_TOL)?,
        psi_theta: psi,
        psi_theta_prime: psi_prime,
        witness_pairing,
    })
}

/// Audit trail of the CP-failure construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpFailureCertificate {
    pub d: usize,
    pub level: FractionalLevel,
    pub t: f64,
    /// Scaling `t_A` of `f_{k+1}`.
    pub attenuation: f64,
    /// Flat rank-`(k+1)` vector with `⟨φ, C_{Φ_t} φ⟩ < 0`.
    pub phi: BipartiteVector,
    pub phi_value: f64,
    /// `ψ̃_t` before normalization and its squared norm.
    pub psi_tilde: BipartiteVector,
    pub psi_tilde_norm_sq: f64,
    pub psi_t: BipartiteVector,
    pub psi_t_report: AdmissibilityReport,
    pub quadratic_value: f64,
    pub predicted_value: f64,
}

/// The admissible window `(t*_{k+1}, t*_α]` of depolarizing parameters
/// with `Φ_t ∈ P_α \ P_{k+1}`.
pub fn cp_failure_window(level: &FractionalLevel) -> Result<(f64, f64)> {
    if level.is_integer() {
        return Err(Error::Domain(format!("integer level {} has an empty window", level.alpha())));
    }
    Ok((1.0 / (level.k() + 1) as f64, t_star(level)))
}

pub fn demo_cp_failure(d: usize, level: &FractionalLevel, t: f64) -> Result<CpFailureCertificate> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("need d ≥ 2, got {d}")));
    }
    if level.alpha() > d as f64 {
        return Err(Error::LevelOutOfRange { alpha: level.alpha(), d });
    }
    let (lo, hi) = cp_failure_window(level)?;
    if !(t > lo && t <= hi) {
        return Err(Error::Domain(format!(
            "t = {t} outside ({lo}, {hi}]: Φ_t is not in P_α \\ P_{}",
            level.k() + 1
        )));
    }
    let (k, theta) = (level.k(), level.theta());
    let dims = BipartiteDims::square(d)?;
    let s = 1.0 / ((k + 1) as f64).sqrt();
    let attenuation = 1.0 / theta;

    let mut phi_w = vec![0.0; d];
    let mut tilde_w = vec![0.0; d];
    for i in 0..=k {
        phi_w[i] = s;
        tilde_w[i] = if i == k { s / attenuation } else { s };
    }
    let phi = diagonal(&phi_w, dims)?;
    let psi_tilde = diagonal(&tilde_w, dims)?;
    let psi_tilde_norm_sq = psi_tilde.norm().powi(2);
    let psi_t = psi_tilde.normalized()?;

    let mut a = identity(d);
    a[(k, k)] = c64(attenuation, 0.0);
    let w = choi_depolarizing(d, t)?;
    let composed = choi_postcompose(&w, &a)?;

    let phi_value = w.expectation(&phi)?;
    let predicted_value = phi_value / psi_tilde_norm_sq;
    let quadratic_value = composed.expectation(&psi_t)?;
    let psi_t_report = is_admissible_vector(&psi_t, level, DEFAULT_TOL)?;

    if !psi_t_report.admissible {
        return Err(Error::Verification("ψ_t is not α-admissible".into()));
    }
    if quadratic_value >= 0.0 {
        return Err(Error::Verification(format!("quadratic value {quadratic_value} is not negative")));
    }
    if (quadratic_value - predicted_value).abs() > PREDICTION_TOL {
        return Err(Error::Verification(format!(
            "quadratic value {quadratic_value} differs from predicted {predicted_value}"
        )));
    }
    Ok(CpFailureCertificate {
        d,
        level: *level,
        t,
        attenuation,
        phi,
        phi_value,
        psi_tilde,
        psi_tilde_norm_sq,
        psi_t,
        psi_t_report,
        quadratic_value,
        predicted_value,
    })
}

fn diagonal(weights: &[f64], dims: BipartiteDims) -> Result<BipartiteVector> {
    let d = weights.len();
    let x = CMatrix::from_fn(d, d, |i, j| if i == j { c64(weights[i], 0.0) } else { c64(0.0, 0.0) });
    crate::linalg::vectorize(&x, dims)
}
