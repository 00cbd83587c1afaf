//! Choi–Jamiołkowski machinery.
//!
//! For `Φ: M_n → M_m` the Choi matrix is `C_Φ = Σ_ij E_ij ⊗ Φ(E_ij)`, an
//! `nm × nm` operator on `C^n ⊗ C^m` whose `(i, j)` block is `Φ(E_ij)`.
//! A Kraus operator `A` (an `m × n` matrix) contributes `vec(A) vec(A)*`
//! with `vec` the column stacking of [`crate::linalg::vec_columns`].

use log::warn;
use serde::Serialize;

use crate::admissibility::{is_admissible_matrix, AdmissibilityReport, FractionalLevel};
use crate::error::{Error, Result};
use crate::linalg::{
    c64, hermitian_defect, hermitian_eigen, hermitian_part, identity, kron, unvec_columns,
    vec_columns, vectorize, BipartiteDims, BipartiteVector, CMatrix,
};

/// Largest `|X − X*|` entry accepted (after which the operator is rejected
/// or, for assembled Choi matrices, symmetrized with a warning).
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Hermitian operator on `C^n ⊗ C^m` carrying its block structure.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dims: BipartiteDims,
    mat: CMatrix,
}

/// Choi matrices are Hermitian operators with `n` the input and `m` the
/// output dimension.
pub type ChoiMatrix = HermitianOperator;

impl HermitianOperator {
    /// Validates the shape and Hermiticity (relative to the largest entry)
    /// and stores the exact Hermitian part.
    pub fn new(dims: BipartiteDims, mat: CMatrix) -> Result<Self> {
        check_shape(dims, &mat)?;
        let scale = mat.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let defect = hermitian_defect(&mat);
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::Domain(format!("operator is not Hermitian (defect {defect:e})")));
        }
        Ok(Self { dims, mat: hermitian_part(&mat) })
    }

    /// Like [`HermitianOperator::new`] but only warns when the defect is
    /// large; used for Choi matrices assembled from caller-supplied maps.
    pub fn symmetrized(dims: BipartiteDims, mat: CMatrix) -> Result<Self> {
        check_shape(dims, &mat)?;
        let defect = hermitian_defect(&mat);
        if defect > HERMITIAN_TOL {
            warn!("assembled operator deviates from Hermitian by {defect:e}; symmetrizing");
        }
        Ok(Self { dims, mat: hermitian_part(&mat) })
    }

    pub fn identity(dims: BipartiteDims) -> Self {
        Self { dims, mat: identity(dims.total()) }
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// `Tr(self · other)` (real for Hermitian arguments).
    pub fn pair(&self, other: &CMatrix) -> f64 {
        (&self.mat * other).trace().re
    }

    /// `⟨ψ, W ψ⟩`.
    pub fn expectation(&self, psi: &BipartiteVector) -> Result<f64> {
        if psi.dims() != self.dims {
            return Err(Error::DimensionMismatch(format!(
                "vector on {:?} against operator on {:?}",
                psi.dims(),
                self.dims
            )));
        }
        Ok(psi.expectation(&self.mat))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.mat).0
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dims: self.dims, mat: self.mat.scale(c) }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if other.dims != self.dims {
            return Err(Error::DimensionMismatch("operators on different spaces".into()));
        }
        Ok(Self { dims: self.dims, mat: self.mat.scale(a) + other.mat.scale(b) })
    }
}

fn check_shape(dims: BipartiteDims, mat: &CMatrix) -> Result<()> {
    let total = dims.total();
    if mat.nrows() != total || mat.ncols() != total {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for a {}x{} bipartite space",
            mat.nrows(),
            mat.ncols(),
            dims.n(),
            dims.m()
        )));
    }
    Ok(())
}

/// A nonempty list of equally shaped `m × n` Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausList {
    ops: Vec<CMatrix>,
}

impl KrausList {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::Domain("empty Kraus list".into()))?;
        let shape = first.shape();
        if shape.0 == 0 || shape.1 == 0 {
            return Err(Error::InvalidDimension("Kraus operators must be nonempty".into()));
        }
        if let Some(bad) = ops.iter().find(|a| a.shape() != shape) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator of shape {:?} in a list of shape {shape:?}",
                bad.shape()
            )));
        }
        Ok(Self { ops })
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `(n, m)` = (input, output) dimensions.
    pub fn dims(&self) -> BipartiteDims {
        let a = &self.ops[0];
        BipartiteDims::new(a.ncols(), a.nrows()).expect("validated on construction")
    }

    /// `Φ(X) = Σ A X A*`.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let m = self.dims().m();
        self.ops
            .iter()
            .fold(CMatrix::zeros(m, m), |acc, a| acc + a * x * a.adjoint())
    }
}

/// Matrix unit `E_ij` of size `n × n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut e = CMatrix::zeros(n, n);
    e[(i, j)] = c64(1.0, 0.0);
    e
}

/// `C_Φ = Σ_i vec(A_i) vec(A_i)*`.
pub fn choi_from_kraus(ks: &KrausList) -> ChoiMatrix {
    let dims = ks.dims();
    let total = dims.total();
    let mut mat = CMatrix::zeros(total, total);
    for a in ks.ops() {
        let v = vec_columns(a);
        mat += v.projector();
    }
    HermitianOperator { dims, mat: hermitian_part(&mat) }
}

/// Assembles `Σ_ij E_ij ⊗ Φ(E_ij)` from the action of a linear map.
pub fn choi_from_action<F>(apply: F, n: usize, m: usize) -> Result<ChoiMatrix>
where
    F: Fn(&CMatrix) -> CMatrix,
{
    let dims = BipartiteDims::new(n, m)?;
    let mut mat = CMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            let out = apply(&matrix_unit(n, i, j));
            if out.shape() != (m, m) {
                return Err(Error::DimensionMismatch(format!(
                    "map returned a {}x{} matrix, expected {m}x{m}",
                    out.nrows(),
                    out.ncols()
                )));
            }
            mat.view_mut((i * m, j * m), (m, m)).copy_from(&out);
        }
    }
    HermitianOperator::symmetrized(dims, mat)
}

/// `ω = (1/√d) Σ e_i ⊗ e_i`.
pub fn omega(d: usize) -> Result<BipartiteVector> {
    let dims = BipartiteDims::square(d)?;
    let x = identity(d).unscale((d as f64).sqrt());
    vectorize(&x, dims)
}

/// `P_ω = ωω*`.
pub fn p_omega(d: usize) -> Result<HermitianOperator> {
    let w = omega(d)?;
    Ok(HermitianOperator { dims: w.dims(), mat: w.projector() })
}

/// Choi matrix of `Φ_t(X) = Tr(X) I − tX`, namely `I − t·d·P_ω`.
pub fn choi_depolarizing(d: usize, t: f64) -> Result<ChoiMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("depolarizing family needs d ≥ 2, got {d}")));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("t must be finite, got {t}")));
    }
    let p = p_omega(d)?;
    let mat = identity(d * d) - p.mat.scale(t * d as f64);
    Ok(HermitianOperator { dims: p.dims, mat })
}

/// `Φ_t(X) = Tr(X) I − tX` acting on a matrix.
pub fn depolarizing_action(t: f64, x: &CMatrix) -> CMatrix {
    identity(x.nrows()) * x.trace() - x.scale(t)
}

/// Choi matrix of `Ad_A ∘ Φ`: `(I ⊗ A) W (I ⊗ A*)`.
pub fn choi_postcompose(w: &ChoiMatrix, a: &CMatrix) -> Result<ChoiMatrix> {
    let dims = w.dims();
    if a.ncols() != dims.m() {
        return Err(Error::DimensionMismatch(format!(
            "post-composition by a {}x{} matrix after a map into M_{}",
            a.nrows(),
            a.ncols(),
            dims.m()
        )));
    }
    let out_dims = BipartiteDims::new(dims.n(), a.nrows())?;
    let lift = kron(&identity(dims.n()), a);
    let mat = &lift * &w.mat * lift.adjoint();
    Ok(HermitianOperator { dims: out_dims, mat: hermitian_part(&mat) })
}

/// Canonical (spectral) Kraus operators of a positive semidefinite Choi
/// matrix. Eigenvalues below `tol·λ_max` are discarded.
///
/// These need not be α-admissible even when `C ∈ K_α`.
pub fn choi_to_kraus(c: &ChoiMatrix, tol: f64) -> Result<KrausList> {
    let dims = c.dims();
    let (values, vectors) = hermitian_eigen(&c.mat);
    let lambda_max = values.last().copied().unwrap_or(0.0);
    let scale = lambda_max.abs().max(1.0);
    if let Some(&low) = values.first() {
        if low < -tol * scale {
            return Err(Error::NotPositive { eigenvalue: low, tol });
        }
    }
    let mut ops = Vec::new();
    for (j, &lambda) in values.iter().enumerate() {
        if lambda <= tol * lambda_max || lambda <= 0.0 {
            continue;
        }
        let v = vectors.column(j).scale(lambda.sqrt());
        let psi = BipartiteVector::new(dims, v)?;
        ops.push(unvec_columns(&psi));
    }
    if ops.is_empty() {
        ops.push(CMatrix::zeros(dims.m(), dims.n()));
    }
    KrausList::new(ops)
}

/// `Φ(E_ij)` for every matrix unit, in row-major order of `(i, j)`.
pub fn apply_kraus_units(ks: &KrausList) -> Vec<CMatrix> {
    let n = ks.dims().n();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| ks.apply(&matrix_unit(n, i, j)))
        .collect()
}

/// Certificate that a Kraus list consists of α-admissible operators, which
/// places its Choi matrix in `K_α`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KrausCertificate {
    pub passed: bool,
    pub level: FractionalLevel,
    pub reports: Vec<AdmissibilityReport>,
}

impl KrausCertificate {
    /// Indices of the operators that failed.
    pub fn failures(&self) -> Vec<usize> {
        self.reports
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.admissible)
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn verify_fractional_kraus(ks: &KrausList, level: &FractionalLevel, tol: f64) -> Result<KrausCertificate> {
    let reports = ks
        .ops()
        .iter()
        .map(|a| is_admissible_matrix(a, level, tol))
        .collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.admissible);
    Ok(KrausCertificate { passed, level: *level, reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::DEFAULT_TOL;
    use crate::linalg::CVector;
    use approx::assert_abs_diff_eq;

    fn diag(values: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(values.len(), values.iter().map(|&v| c64(v, 0.0))))
    }

    #[test]
    fn identity_kraus_gives_omega_projector() {
        let ks = KrausList::new(vec![identity(2)]).unwrap();
        let c = choi_from_kraus(&ks);
        let expected = p_omega(2).unwrap().matrix().scale(2.0);
        assert_abs_diff_eq!((c.matrix() - expected).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.trace(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn diagonal_units_kraus() {
        let ks = KrausList::new(vec![matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)]).unwrap();
        let c = choi_from_kraus(&ks);
        assert_abs_diff_eq!((c.matrix() - diag(&[1.0, 0.0, 0.0, 1.0])).norm(), 0.0);
    }

    /// Brute-force oracle: Choi matrix of the transpose map assembled from
    /// its action on matrix units is the swap.
    #[test]
    fn transpose_map_kraus_gives_swap() {
        let from_action = choi_from_action(|x| x.transpose(), 2, 2).unwrap();
        let mut swap = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                swap[(i * 2 + j, j * 2 + i)] = c64(1.0, 0.0);
            }
        }
        assert_abs_diff_eq!((from_action.matrix() - &swap).norm(), 0.0);

        // transpose = Σ_sym S X S* − Σ_antisym A X A* with the unit basis
        // (E_ij ± E_ji)/√2 and E_ii: compare the difference of the two
        // completely positive parts with the swap.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sym = KrausList::new(vec![
            matrix_unit(2, 0, 0),
            matrix_unit(2, 1, 1),
            (matrix_unit(2, 0, 1) + matrix_unit(2, 1, 0)).scale(h),
        ])
        .unwrap();
        let anti = KrausList::new(vec![(matrix_unit(2, 0, 1) - matrix_unit(2, 1, 0)).scale(h)]).unwrap();
        let diff = choi_from_kraus(&sym).matrix() - choi_from_kraus(&anti).matrix();
        assert_abs_diff_eq!((diff - swap).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn choi_from_action_examples() {
        let id = choi_from_action(|x| x.clone(), 2, 2).unwrap();
        let omega_omega = p_omega(2).unwrap().matrix().scale(2.0);
        assert_abs_diff_eq!((id.matrix() - omega_omega).norm(), 0.0, epsilon = 1e-15);

        let trace_map = choi_from_action(|x| identity(2) * x.trace(), 2, 2).unwrap();
        assert_abs_diff_eq!((trace_map.matrix() - identity(4)).norm(), 0.0);

        for t in [0.0, 0.3, 1.0] {
            let from_action = choi_from_action(|x| depolarizing_action(t, x), 3, 3).unwrap();
            let closed = choi_depolarizing(3, t).unwrap();
            assert_abs_diff_eq!((from_action.matrix() - closed.matrix()).norm(), 0.0, epsilon = 1e-14);
        }

        assert!(matches!(choi_from_action(|_| identity(3), 2, 2), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn depolarizing_spectrum() {
        let ev = choi_depolarizing(2, 1.0).unwrap().eigenvalues();
        assert_abs_diff_eq!(ev[0], -1.0, epsilon = 1e-14);
        for v in &ev[1..] {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-14);
        }
        let ev = choi_depolarizing(3, 1.0 / 3.0).unwrap().eigenvalues();
        assert!(ev[0] >= -1e-14);
        assert_abs_diff_eq!(ev[0], 0.0, epsilon = 1e-14);
        let c = choi_depolarizing(4, 0.0).unwrap();
        assert_eq!(c.matrix(), &identity(16));
        assert!(choi_depolarizing(1, 0.5).is_err());
    }

    #[test]
    fn postcompose_trivial_cases() {
        let w = choi_depolarizing(2, 0.55).unwrap();
        let same = choi_postcompose(&w, &identity(2)).unwrap();
        assert_abs_diff_eq!((same.matrix() - w.matrix()).norm(), 0.0);
        let zero = choi_postcompose(&w, &CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(zero.matrix().norm(), 0.0);
        assert!(choi_postcompose(&w, &CMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn postcompose_matches_action() {
        let a = diag(&[1.0, 2.0]);
        let w = choi_depolarizing(2, 0.55).unwrap();
        let direct = choi_postcompose(&w, &a).unwrap();
        let via_action = choi_from_action(|x| &a * depolarizing_action(0.55, x) * a.adjoint(), 2, 2).unwrap();
        assert_abs_diff_eq!((direct.matrix() - via_action.matrix()).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn kraus_roundtrip_examples() {
        let omega_omega = HermitianOperator::new(
            BipartiteDims::square(2).unwrap(),
            p_omega(2).unwrap().matrix().scale(2.0),
        )
        .unwrap();
        let ks = choi_to_kraus(&omega_omega, 1e-12).unwrap();
        assert_eq!(ks.len(), 1);
        // I up to a phase
        let a = &ks.ops()[0];
        let phase = a[(0, 0)];
        assert_abs_diff_eq!(phase.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!((a.unscale(1.0) - identity(2) * phase).norm(), 0.0, epsilon = 1e-12);

        let c = HermitianOperator::new(BipartiteDims::square(2).unwrap(), diag(&[1.0, 0.0, 0.0, 1.0])).unwrap();
        let ks = choi_to_kraus(&c, 1e-12).unwrap();
        assert_eq!(ks.len(), 2);
        for a in ks.ops() {
            assert_eq!(crate::linalg::singular_values(a).iter().filter(|&&s| s > 1e-12).count(), 1);
        }
        assert_abs_diff_eq!((choi_from_kraus(&ks).matrix() - c.matrix()).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn kraus_rejects_indefinite() {
        let c = choi_depolarizing(2, 1.0).unwrap();
        assert!(matches!(choi_to_kraus(&c, 1e-12), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn kraus_list_validation() {
        assert!(KrausList::new(vec![]).is_err());
        assert!(KrausList::new(vec![identity(2), identity(3)]).is_err());
        let ks = KrausList::new(vec![CMatrix::zeros(3, 2)]).unwrap();
        assert_eq!((ks.dims().n(), ks.dims().m()), (2, 3));
    }

    #[test]
    fn verify_examples() {
        let level = FractionalLevel::new(1.5, 2).unwrap();
        let cert = verify_fractional_kraus(&KrausList::new(vec![diag(&[1.0, 0.6])]).unwrap(), &level, DEFAULT_TOL)
            .unwrap();
        assert!(!cert.passed);
        assert_eq!(cert.failures(), vec![0]);
        assert!(!cert.reports[0].ratio_ok);

        let boundary = crate::linalg::matricize(&crate::admissibility::extremal_vector(
            &level,
            BipartiteDims::square(2).unwrap(),
        )
        .unwrap());
        let cert = verify_fractional_kraus(&KrausList::new(vec![boundary]).unwrap(), &level, DEFAULT_TOL).unwrap();
        assert!(cert.passed);

        let k2 = FractionalLevel::integer(2, 3).unwrap();
        let ops = vec![diag(&[1.0, 0.3, 0.0]), diag(&[0.0, 2.0, 1.0])];
        let cert = verify_fractional_kraus(&KrausList::new(ops).unwrap(), &k2, DEFAULT_TOL).unwrap();
        assert!(cert.passed);
    }

    #[test]
    fn hermitian_operator_validation() {
        let dims = BipartiteDims::square(2).unwrap();
        let mut m = identity(4);
        m[(0, 1)] = c64(1.0, 0.0);
        assert!(HermitianOperator::new(dims, m).is_err());
        assert!(HermitianOperator::new(dims, identity(3)).is_err());
    }
}
