#![allow(dead_code)]

use fracpos::linalg::{BipartiteDims, CMatrix, CVector};
use num_complex::Complex64;
use fracpos::sample::stiefel;
use fracpos::{FractionalLevel, HermitianOperator};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random admissible weights: positive head, extra weight at a random
/// fraction of its cap. Not normalized.
pub fn admissible_weights(level: &FractionalLevel, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let k = level.k();
    let mut w: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    if level.theta() > 0.0 {
        let cap = level.theta() / k as f64 * w.iter().sum::<f64>();
        w.push(cap * rng.random_range(0.0..=1.0));
    }
    w
}

/// `U diag(w) V*` with Haar frames.
pub fn matrix_with_weights(rows: usize, cols: usize, w: &[f64], rng: &mut ChaCha8Rng) -> CMatrix {
    let u = stiefel(rows, w.len(), rng);
    let v = stiefel(cols, w.len(), rng);
    let s = CMatrix::from_diagonal(&CVector::from_iterator(w.len(), w.iter().map(|&x| Complex64::new(x, 0.0))));
    u * s * v.adjoint()
}

pub fn random_level(d: usize, rng: &mut ChaCha8Rng) -> FractionalLevel {
    FractionalLevel::new(rng.random_range(1.0..=d as f64), d).unwrap()
}

pub fn random_hermitian(dims: BipartiteDims, rng: &mut ChaCha8Rng) -> HermitianOperator {
    HermitianOperator::new(dims, fracpos::sample::hermitian(dims.total(), rng)).unwrap()
}

/// `9` evenly spaced levels per integer gap of `[1, d]`, endpoints included.
pub fn gap_grid(d: usize) -> Vec<f64> {
    (1..d).flat_map(|k| (0..=8).map(move |j| k as f64 + j as f64 / 8.0)).collect()
}

/// Weights that break admissibility at `level` whatever the frames: a flat
/// head with the next weight in `(θ, 1]`, so the sorted order is kept and
/// the ratio (or, for integer levels, the rank) is exceeded.
pub fn inadmissible_weights(level: &FractionalLevel, rng: &mut ChaCha8Rng) -> Vec<f64> {
    assert!(level.k() < level.d(), "no room past the rank ceiling");
    let theta = level.theta();
    let mut w = vec![1.0; level.k()];
    w.push(theta + (1.0 - theta) * rng.random_range(0.2..=1.0));
    w
}
