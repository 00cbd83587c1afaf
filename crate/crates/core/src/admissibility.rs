//! Fractional levels and the α-admissibility predicates.
//!
//! A level `α ∈ [1, d]` splits as `α = k + θ` with `k = ⌊α⌋`, `θ ∈ [0, 1)`
//! and rank ceiling `r = ⌈α⌉`. A unit vector is α-admissible when its
//! Schmidt rank is at most `r` and, for `θ > 0`, the extra coefficient obeys
//!
//! ```text
//! s_{k+1} ≤ (θ/k) · (s_1 + … + s_k).
//! ```
//!
//! The same predicate applied to singular values defines α-admissible
//! matrices (Kraus operators).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    schmidt_spectrum, singular_values, BipartiteDims, BipartiteVector, CMatrix, SchmidtSpectrum,
    RANK_CUTOFF,
};

/// Default feasibility slack: additive on the ratio inequality, relative
/// (times `s_1`) on rank cutoffs. Boundary points are admissible.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A validated level `α ∈ [1, d]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalLevel {
    alpha: f64,
    k: usize,
    theta: f64,
    r: usize,
    d: usize,
}

impl FractionalLevel {
    pub fn new(alpha: f64, d: usize) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidDimension("ambient bound d must be at least 1".into()));
        }
        if !alpha.is_finite() || alpha < 1.0 || alpha > d as f64 {
            return Err(Error::LevelOutOfRange { alpha, d });
        }
        let k = alpha.floor();
        let theta = alpha - k;
        let k = k as usize;
        let r = if theta == 0.0 { k } else { k + 1 };
        Ok(Self { alpha, k, theta, r, d })
    }

    /// The integer level `k`.
    pub fn integer(k: usize, d: usize) -> Result<Self> {
        Self::new(k as f64, d)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `⌊α⌋`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// `α − ⌊α⌋`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `⌈α⌉`, the Schmidt-rank ceiling.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_integer(&self) -> bool {
        self.theta == 0.0
    }

    /// Same α re-validated against another ambient bound.
    pub fn with_d(&self, d: usize) -> Result<Self> {
        Self::new(self.alpha, d)
    }

    fn check_d(&self, d: usize) -> Result<()> {
        if self.d != d {
            return Err(Error::DimensionMismatch(format!(
                "level was built for d = {} but the space has d = {d}",
                self.d
            )));
        }
        Ok(())
    }
}

/// Outcome of an admissibility test with the quantities that decided it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub rank_ok: bool,
    pub ratio_ok: bool,
    /// `k·s_{k+1} / Σ_{j≤k} s_j`, or 0 when the denominator vanishes.
    pub observed_ratio: f64,
    /// Spectrum the test was run on (normalized to unit ℓ2 norm unless zero).
    pub spectrum: SchmidtSpectrum,
    /// Norm of the input before normalization.
    pub norm: f64,
}

/// Applies the rank ceiling and ratio condition to a spectrum of unit ℓ2 norm.
fn assess(spectrum: SchmidtSpectrum, level: &FractionalLevel, tol: f64, norm: f64) -> AdmissibilityReport {
    let (k, r, theta) = (level.k(), level.r(), level.theta());
    let s1 = spectrum.largest();
    let rank_ok = spectrum.get(r) <= tol * s1;
    let head = spectrum.top_sum(k);
    let next = spectrum.get(k);
    let observed_ratio = if head > 0.0 { k as f64 * next / head } else { 0.0 };
    let ratio_ok = if theta == 0.0 {
        next <= tol * s1
    } else {
        next <= theta / k as f64 * head + tol
    };
    AdmissibilityReport {
        admissible: rank_ok && ratio_ok,
        rank_ok,
        ratio_ok,
        observed_ratio,
        spectrum,
        norm,
    }
}

/// Tests `ψ ∈ V_α`. Inputs within `tol` of unit norm are renormalized first.
pub fn is_admissible_vector(
    psi: &BipartiteVector,
    level: &FractionalLevel,
    tol: f64,
) -> Result<AdmissibilityReport> {
    level.check_d(psi.dims().d())?;
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    if (norm - 1.0).abs() > tol {
        return Err(Error::NotUnit { norm, tol });
    }
    let spectrum = schmidt_spectrum(psi)?.scaled(norm);
    Ok(assess(spectrum, level, tol, norm))
}

/// Tests `A ∈ 𝔄_α` on the singular values of `A`. Scale invariant; the
/// zero matrix is admissible.
pub fn is_admissible_matrix(a: &CMatrix, level: &FractionalLevel, tol: f64) -> Result<AdmissibilityReport> {
    level.check_d(a.nrows().min(a.ncols()))?;
    let spectrum = SchmidtSpectrum::new(singular_values(a))?;
    let norm = spectrum.l2();
    if norm == 0.0 {
        return Ok(AdmissibilityReport {
            admissible: true,
            rank_ok: true,
            ratio_ok: true,
            observed_ratio: 0.0,
            spectrum,
            norm,
        });
    }
    Ok(assess(spectrum.scaled(norm), level, tol, norm))
}

/// `‖A‖_1 / ‖A‖_(k)`.
pub fn ky_fan_ratio(a: &CMatrix, k: usize) -> Result<f64> {
    let s = singular_values(a);
    if k == 0 || k > s.len() {
        return Err(Error::Domain(format!("Ky-Fan index {k} outside 1..={}", s.len())));
    }
    let head: f64 = s.iter().take(k).sum();
    if head == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(s.iter().sum::<f64>() / head)
}

/// The nuclear/Ky–Fan form of the ratio condition,
/// `‖A‖_1/‖A‖_(k) ≤ 1 + θ/k`, valid for `A ≠ 0` of rank at most `k+1`.
pub fn ky_fan_ratio_check(a: &CMatrix, level: &FractionalLevel) -> Result<bool> {
    level.check_d(a.nrows().min(a.ncols()))?;
    let spectrum = SchmidtSpectrum::new(singular_values(a))?;
    if spectrum.largest() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let k = level.k();
    if spectrum.rank(RANK_CUTOFF) > k + 1 {
        return Err(Error::Domain(format!("rank exceeds k + 1 = {}", k + 1)));
    }
    let head = spectrum.top_sum(k);
    let ratio = spectrum.total() / head;
    // same additive slack as is_admissible_matrix, transported to the ratio
    let slack = DEFAULT_TOL * spectrum.l2() / head;
    Ok(ratio <= 1.0 + level.theta() / k as f64 + slack)
}

/// Unit vector with Schmidt coefficients `1/√(k+θ²)` (k times) and
/// `θ/√(k+θ²)` on the diagonal frame `e_j ⊗ f_j`. It lies on the ratio
/// boundary and maximizes the sum of Schmidt coefficients over `V_α`.
pub fn extremal_vector(level: &FractionalLevel, dims: BipartiteDims) -> Result<BipartiteVector> {
    level.check_d(dims.d())?;
    diagonal_vector(&extremal_weights(level.k(), level.theta()), dims)
}

/// `(1, …, 1, θ) / √(k+θ²)`, with the trailing entry dropped when `θ = 0`.
pub fn extremal_weights(k: usize, theta: f64) -> Vec<f64> {
    let a = 1.0 / (k as f64 + theta * theta).sqrt();
    let mut w = vec![a; k];
    if theta > 0.0 {
        w.push(theta * a);
    }
    w
}

/// `Σ_j w_j e_j ⊗ f_j`.
pub fn diagonal_vector(weights: &[f64], dims: BipartiteDims) -> Result<BipartiteVector> {
    if weights.len() > dims.d() {
        return Err(Error::DimensionMismatch(format!(
            "{} Schmidt weights exceed d = {}",
            weights.len(),
            dims.d()
        )));
    }
    let mut coeffs = vec![0.0; dims.total()];
    for (j, &w) in weights.iter().enumerate() {
        coeffs[dims.index(j, j)] = w;
    }
    BipartiteVector::from_real(dims, &coeffs)
}

/// The pair `(ψ_θ, ψ_θ′)` with `θ′ = (1+θ)/2` separating `V_k ⊊ V_α ⊊ V_{k+1}`.
pub fn strict_inclusion_pair(
    k: usize,
    theta: f64,
    dims: BipartiteDims,
) -> Result<(BipartiteVector, BipartiteVector)> {
    let d = dims.d();
    if k < 1 || k + 1 > d {
        return Err(Error::Domain(format!("need 1 ≤ k and k + 1 ≤ d = {d}, got k = {k}")));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta must lie in (0, 1), got {theta}")));
    }
    let theta_prime = (1.0 + theta) / 2.0;
    let psi = diagonal_vector(&extremal_weights(k, theta), dims)?;
    let psi_prime = diagonal_vector(&extremal_weights(k, theta_prime), dims)?;

    let lower = FractionalLevel::integer(k, d)?;
    let level = FractionalLevel::new(k as f64 + theta, d)?;
    let upper = FractionalLevel::integer(k + 1, d)?;
    let tol = DEFAULT_TOL;
    let checks = [
        (is_admissible_vector(&psi, &level, tol)?.admissible, true, "ψ_θ ∈ V_α"),
        (is_admissible_vector(&psi, &lower, tol)?.admissible, false, "ψ_θ ∉ V_k"),
        (is_admissible_vector(&psi_prime, &upper, tol)?.admissible, true, "ψ_θ′ ∈ V_{k+1}"),
        (is_admissible_vector(&psi_prime, &level, tol)?.admissible, false, "ψ_θ′ ∉ V_α"),
    ];
    for (got, want, what) in checks {
        if got != want {
            return Err(Error::Verification(format!("{what} does not hold")));
        }
    }
    Ok((psi, psi_prime))
}
