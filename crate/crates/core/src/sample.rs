//! Seeded random instances: Haar unitaries, Stiefel frames, GUE-like
//! Hermitian operators, and random unit vectors.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, BipartiteDims, BipartiteVector, CMatrix, CVector};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im)
    })
}

/// `rows × cols` matrix with orthonormal columns, Haar distributed.
pub fn stiefel<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(cols <= rows, "a frame cannot have more columns than rows");
    orthonormalize(ginibre(rows, cols, rng))
}

/// Haar-random unitary.
pub fn unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    stiefel(dim, dim, rng)
}

/// Hermitian operator `(G + G*)/2` with Gaussian `G`.
pub fn hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(dim, dim, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Uniform random unit vector in `C^n ⊗ C^m`.
pub fn unit_vector<R: Rng + ?Sized>(dims: BipartiteDims, rng: &mut R) -> BipartiteVector {
    let g = ginibre(dims.total(), 1, rng);
    let v = CVector::from_column_slice(g.as_slice());
    let norm = v.norm();
    BipartiteVector::new(dims, v.unscale(norm)).expect("length matches dims")
}

/// Thin QR with the phases of `R`'s diagonal moved into `Q`, which makes
/// the map from Gaussian matrices to frames Haar distributed.
pub(crate) fn orthonormalize(a: CMatrix) -> CMatrix {
    let cols = a.ncols();
    let qr = a.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            let phase = d / n;
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}
