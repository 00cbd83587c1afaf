//! The isotropic slice `span{I, P_ω}` of `d ⊗ d`.

use serde::{Deserialize, Serialize};

use super::check_level;
use crate::admissibility::FractionalLevel;
use crate::choi::{omega, p_omega, HermitianOperator};
use crate::error::{Error, Result};
use crate::linalg::{identity, BipartiteDims};
use crate::thresholds::f_d;

/// Slack used by the exact membership tests, relative to `max(|a|, |b|)`.
const SLICE_TOL: f64 = 1e-12;

/// The operator `a·I + b·P_ω` on `d ⊗ d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsotropicCoefficients {
    pub a: f64,
    pub b: f64,
    pub d: usize,
}

impl IsotropicCoefficients {
    pub fn new(a: f64, b: f64, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(format!("need d ≥ 2, got {d}")));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        Ok(Self { a, b, d })
    }

    /// The isotropic state `ρ_F`: trace one, `Tr(P_ω ρ_F) = F`.
    pub fn from_fidelity(fidelity: f64, d: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&fidelity) {
            return Err(Error::Domain(format!("fidelity {fidelity} outside [0, 1]")));
        }
        let dd = (d * d) as f64;
        let a = (1.0 - fidelity) / (dd - 1.0);
        Self::new(a, fidelity - a, d)
    }

    pub fn trace(&self) -> f64 {
        self.a * (self.d * self.d) as f64 + self.b
    }

    /// `Tr(P_ω X) = a + b`.
    pub fn overlap(&self) -> f64 {
        self.a + self.b
    }

    /// `F = (a+b)/(a d² + b)`, undefined for traceless operators.
    pub fn fidelity(&self) -> Option<f64> {
        let tr = self.trace();
        (tr != 0.0).then(|| self.overlap() / tr)
    }

    fn slack(&self) -> f64 {
        SLICE_TOL * self.a.abs().max(self.b.abs())
    }

    pub fn is_psd(&self) -> bool {
        let s = self.slack();
        self.a >= -s && self.a + self.b >= -s
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }

    pub fn to_operator(&self) -> HermitianOperator {
        let dims = BipartiteDims::square(self.d).expect("d ≥ 2");
        let p = p_omega(self.d).expect("d ≥ 2");
        let id = HermitianOperator::identity(dims);
        id.combine(self.a, &p, self.b).expect("same space")
    }
}

/// Orthogonal projection onto `span{I, P_ω}` in the trace inner product.
/// This is the Haar average of `(U ⊗ Ū) X (U ⊗ Ū)*`.
pub fn twirl_isotropic(x: &HermitianOperator) -> Result<IsotropicCoefficients> {
    let dims = x.dims();
    if !dims.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "twirl needs a square bipartite shape, got {}x{}",
            dims.n(),
            dims.m()
        )));
    }
    let d = dims.n();
    let trace = x.trace();
    let overlap = x.expectation(&omega(d)?)?;
    let a = (trace - overlap) / ((d * d) as f64 - 1.0);
    IsotropicCoefficients::new(a, overlap - a, d)
}

/// `aI + bP_ω ∈ BP_α` iff `a ≥ 0` and `a + b f_d(α) ≥ 0`.
pub fn isotropic_bp_membership(c: &IsotropicCoefficients, level: &FractionalLevel) -> Result<bool> {
    check_level(c.d, level)?;
    let s = c.slack();
    Ok(c.a >= -s && c.a + c.b * f_d(c.d, level) >= -s)
}

/// `aI + bP_ω ∈ K_α` iff it is positive semidefinite with fidelity at most
/// `f_d(α)`. The zero operator is a member.
pub fn isotropic_k_membership(c: &IsotropicCoefficients, level: &FractionalLevel) -> Result<bool> {
    check_level(c.d, level)?;
    if c.is_zero() {
        return Ok(true);
    }
    if !c.is_psd() {
        return Ok(false);
    }
    match c.fidelity() {
        Some(f) => Ok(f <= f_d(c.d, level) + SLICE_TOL),
        None => Ok(true),
    }
}

/// Coefficients `(1, −1/f_d(α))` of the witness `W_α`.
pub fn witness_coefficients(d: usize, level: &FractionalLevel) -> Result<IsotropicCoefficients> {
    check_level(d, level)?;
    IsotropicCoefficients::new(1.0, -1.0 / f_d(d, level), d)
}

/// `W_α = I − P_ω / f_d(α)`: nonnegative on α-admissible vectors, with
/// `Tr(W_α ρ_F) = 1 − F/f_d(α)`.
pub fn witness_operator(d: usize, level: &FractionalLevel) -> Result<HermitianOperator> {
    let c = witness_coefficients(d, level)?;
    let p = p_omega(d)?;
    HermitianOperator::new(p.dims(), identity(d * d) - p.matrix().scale(-c.b))
}
