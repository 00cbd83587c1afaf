//! Dense complex linear algebra on bipartite spaces `C^n ⊗ C^m`.
//!
//! Two index conventions are used and both are fixed here once:
//!
//! * **Matricization** (row-major): the coefficient of `e_i ⊗ f_j` sits at
//!   row `i`, column `j` of the `n × m` matrix, i.e. at position `i·m + j`
//!   of the coefficient vector. [`matricize`] and [`vectorize`] are inverse.
//! * **Column stacking**: [`vec_columns`] sends an `m × n` matrix `A` to
//!   `Σ_j e_j ⊗ A e_j ∈ C^n ⊗ C^m`. This is the convention under which
//!   `vec(AXB) = (Bᵀ ⊗ A) vec(X)` and under which a Kraus operator `A`
//!   contributes `vec(A) vec(A)*` to a Choi matrix. For square shapes the
//!   two are related by a transpose: `matricize(vec_columns(A)) = Aᵀ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Singular values below this fraction of the largest are reported as zero
/// when counting rank.
pub const RANK_CUTOFF: f64 = 1e-12;

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dimensions of `C^n ⊗ C^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDims")]
pub struct BipartiteDims {
    n: usize,
    m: usize,
}

#[derive(Deserialize)]
struct RawDims {
    n: usize,
    m: usize,
}

impl TryFrom<RawDims> for BipartiteDims {
    type Error = Error;

    fn try_from(raw: RawDims) -> Result<Self> {
        BipartiteDims::new(raw.n, raw.m)
    }
}

impl BipartiteDims {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidDimension(format!(
                "factor dimensions must be positive, got ({n}, {m})"
            )));
        }
        Ok(Self { n, m })
    }

    pub fn square(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `min(n, m)`, the maximal Schmidt rank.
    pub fn d(&self) -> usize {
        self.n.min(self.m)
    }

    /// Dimension of the tensor product.
    pub fn total(&self) -> usize {
        self.n * self.m
    }

    pub fn is_square(&self) -> bool {
        self.n == self.m
    }

    /// Flat index of `e_i ⊗ f_j`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.m + j
    }
}

/// A vector in `C^n ⊗ C^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteVector {
    dims: BipartiteDims,
    coeffs: CVector,
}

impl BipartiteVector {
    pub fn new(dims: BipartiteDims, coeffs: CVector) -> Result<Self> {
        if coeffs.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a {}x{} bipartite space",
                coeffs.len(),
                dims.n(),
                dims.m()
            )));
        }
        Ok(Self { dims, coeffs })
    }

    pub fn from_slice(dims: BipartiteDims, coeffs: &[Complex64]) -> Result<Self> {
        Self::new(dims, CVector::from_column_slice(coeffs))
    }

    pub fn from_real(dims: BipartiteDims, coeffs: &[f64]) -> Result<Self> {
        Self::new(dims, CVector::from_iterator(coeffs.len(), coeffs.iter().map(|&x| c64(x, 0.0))))
    }

    pub fn zeros(dims: BipartiteDims) -> Self {
        Self { dims, coeffs: CVector::zeros(dims.total()) }
    }

    /// The product vector `u ⊗ v`.
    pub fn product(u: &CVector, v: &CVector) -> Result<Self> {
        let dims = BipartiteDims::new(u.len(), v.len())?;
        let mut coeffs = CVector::zeros(dims.total());
        for i in 0..u.len() {
            for j in 0..v.len() {
                coeffs[dims.index(i, j)] = u[i] * v[j];
            }
        }
        Ok(Self { dims, coeffs })
    }

    /// `Σ_j weights[j] · u_j ⊗ v_j` for the columns of two frames.
    pub fn from_schmidt(weights: &[f64], u: &CMatrix, v: &CMatrix) -> Result<Self> {
        if u.ncols() < weights.len() || v.ncols() < weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights but frames with {} and {} columns",
                weights.len(),
                u.ncols(),
                v.ncols()
            )));
        }
        let dims = BipartiteDims::new(u.nrows(), v.nrows())?;
        let mut x = CMatrix::zeros(dims.n(), dims.m());
        for (j, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let uj = u.column(j);
            let vj = v.column(j);
            for a in 0..dims.n() {
                let ua = uj[a] * w;
                for b in 0..dims.m() {
                    x[(a, b)] += ua * vj[b];
                }
            }
        }
        vectorize(&x, dims)
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn coeffs(&self) -> &CVector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> CVector {
        self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self { dims: self.dims, coeffs: self.coeffs.unscale(norm) })
    }

    /// `⟨self, other⟩`, antilinear in the first slot.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coeffs.dotc(&other.coeffs)
    }

    /// `⟨ψ, W ψ⟩` (real part; exact for Hermitian `W`).
    pub fn expectation(&self, w: &CMatrix) -> f64 {
        self.coeffs.dotc(&(w * &self.coeffs)).re
    }

    /// The rank-one operator `ψψ*`.
    pub fn projector(&self) -> CMatrix {
        &self.coeffs * self.coeffs.adjoint()
    }

    /// `(U ⊗ V) ψ`.
    pub fn apply_local(&self, u: &CMatrix, v: &CMatrix) -> Result<Self> {
        if u.ncols() != self.dims.n() || v.ncols() != self.dims.m() {
            return Err(Error::DimensionMismatch(format!(
                "local operators {}x{} and {}x{} on a {}x{} space",
                u.nrows(),
                u.ncols(),
                v.nrows(),
                v.ncols(),
                self.dims.n(),
                self.dims.m()
            )));
        }
        let dims = BipartiteDims::new(u.nrows(), v.nrows())?;
        // mat((U ⊗ V)ψ) = U mat(ψ) Vᵀ
        let x = u * matricize(self) * v.transpose();
        vectorize(&x, dims)
    }
}

/// Ordered Schmidt coefficients (singular values of the matricization),
/// padded with zeros to length `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SchmidtSpectrum {
    values: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Sorts `values` nonincreasing; negative entries are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Domain("Schmidt coefficients must be finite and nonnegative".into()));
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `s_{j+1}` in 1-based notation; zero past the end.
    pub fn get(&self, j: usize) -> f64 {
        self.values.get(j).copied().unwrap_or(0.0)
    }

    pub fn largest(&self) -> f64 {
        self.get(0)
    }

    /// Sum of the `k` largest values.
    pub fn top_sum(&self, k: usize) -> f64 {
        self.values.iter().take(k).sum()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Euclidean norm of the spectrum (Frobenius norm of the matrix).
    pub fn l2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Number of values above `cutoff · s_1`.
    pub fn rank(&self, cutoff: f64) -> usize {
        let s1 = self.largest();
        if s1 == 0.0 {
            return 0;
        }
        self.values.iter().filter(|&&v| v > cutoff * s1).count()
    }

    /// Divides every value by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self { values: self.values.iter().map(|v| v / c).collect() }
    }
}

/// `mat(ψ)`: the `n × m` coefficient matrix.
pub fn matricize(psi: &BipartiteVector) -> CMatrix {
    let dims = psi.dims();
    CMatrix::from_fn(dims.n(), dims.m(), |i, j| psi.coeffs()[dims.index(i, j)])
}

/// Inverse of [`matricize`].
pub fn vectorize(x: &CMatrix, dims: BipartiteDims) -> Result<BipartiteVector> {
    if x.nrows() != dims.n() || x.ncols() != dims.m() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for a {}x{} bipartite space",
            x.nrows(),
            x.ncols(),
            dims.n(),
            dims.m()
        )));
    }
    let coeffs = CVector::from_fn(dims.total(), |idx, _| x[(idx / dims.m(), idx % dims.m())]);
    BipartiteVector::new(dims, coeffs)
}

/// Column-stacking `vec(A)` of an `m × n` matrix, as a vector of `C^n ⊗ C^m`.
pub fn vec_columns(a: &CMatrix) -> BipartiteVector {
    let dims = BipartiteDims { n: a.ncols(), m: a.nrows() };
    // column-major storage is exactly the column stack
    let coeffs = CVector::from_column_slice(a.as_slice());
    BipartiteVector { dims, coeffs }
}

/// Inverse of [`vec_columns`]: the `m × n` matrix.
pub fn unvec_columns(psi: &BipartiteVector) -> CMatrix {
    let dims = psi.dims();
    CMatrix::from_column_slice(dims.m(), dims.n(), psi.coeffs().as_slice())
}

/// Singular values, nonincreasing, length `min(rows, cols)`.
pub fn singular_values(x: &CMatrix) -> Vec<f64> {
    if x.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = x.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Schmidt coefficients of `ψ`.
pub fn schmidt_spectrum(psi: &BipartiteVector) -> Result<SchmidtSpectrum> {
    if psi.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    SchmidtSpectrum::new(singular_values(&matricize(psi)))
}

/// A full Schmidt decomposition `ψ = Σ_j s_j u_j ⊗ v_j`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub spectrum: SchmidtSpectrum,
    /// `n × d` with orthonormal columns.
    pub u: CMatrix,
    /// `m × d` with orthonormal columns.
    pub v: CMatrix,
}

pub fn schmidt_decomposition(psi: &BipartiteVector) -> Result<SchmidtDecomposition> {
    if psi.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let svd = matricize(psi).svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    // X = Σ s_j p_j q_j*  ⇒  ψ = Σ s_j p_j ⊗ conj(q_j), and conj(q_j)ᵀ is row j of Vᵗ
    let u_sorted = CMatrix::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]);
    let v_sorted = CMatrix::from_fn(vt.ncols(), order.len(), |i, j| vt[(order[j], i)]);
    let spectrum = SchmidtSpectrum::new(order.iter().map(|&j| svd.singular_values[j]).collect())?;
    Ok(SchmidtDecomposition { spectrum, u: u_sorted, v: v_sorted })
}

/// Ky–Fan `k`-norm: sum of the `k` largest singular values.
pub fn ky_fan_norm(x: &CMatrix, k: usize) -> Result<f64> {
    let d = x.nrows().min(x.ncols());
    if k == 0 || k > d {
        return Err(Error::Domain(format!("Ky-Fan index {k} outside 1..={d}")));
    }
    Ok(singular_values(x).iter().take(k).sum())
}

/// Trace (nuclear) norm.
pub fn trace_norm(x: &CMatrix) -> f64 {
    singular_values(x).iter().sum()
}

/// Largest absolute entry of `x - x*`.
pub fn hermitian_defect(x: &CMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..x.nrows() {
        for j in i..x.ncols() {
            worst = worst.max((x[(i, j)] - x[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(X + X*)/2`.
pub fn hermitian_part(x: &CMatrix) -> CMatrix {
    (x + x.adjoint()).scale(0.5)
}

/// Operator (spectral) norm.
pub fn operator_norm(x: &CMatrix) -> f64 {
    singular_values(x).first().copied().unwrap_or(0.0)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(x: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = x.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let values = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = CMatrix::from_fn(x.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
