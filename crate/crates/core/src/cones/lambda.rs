//! Multistart estimator for `λ_α(W)`.
//!
//! Vectors are parametrized as `ψ = Σ_{j<r} s_j u_j ⊗ v_j` with frames
//! `U` (`n × r`) and `V` (`m × r`) having orthonormal columns and weights
//! `s ≥ 0`, `|s| = 1`, `s_r ≤ (θ/k) Σ_{j<k} s_j`. The last weight is the
//! designated extra one; the sorted spectrum of any such `ψ` is then
//! admissible, so no ordering constraint is needed.
//!
//! Each start alternates an exact solve for `s` with the frames fixed (a
//! quadratic on the sphere intersected with a polyhedral cone, done by
//! enumerating active sets) and a Riemannian gradient step on the frames
//! with QR retraction and Armijo backtracking.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissibility::{is_admissible_vector, FractionalLevel, DEFAULT_TOL};
use crate::choi::HermitianOperator;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, schmidt_decomposition, schmidt_spectrum, BipartiteDims, BipartiteVector, CMatrix, CVector};
use crate::sample::{orthonormalize, stiefel};

pub const DEFAULT_STARTS: usize = 64;
pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_MAX_ITERS: usize = 500;
pub const DEFAULT_TOL_DECREASE: f64 = 1e-13;

/// Starts whose final point is further than this from the feasible set
/// are discarded.
pub const MAX_RESIDUAL: f64 = 1e-7;

/// Values this close are ties, resolved to the lower start index.
const TIE: f64 = 1e-15;

/// Inner-solve slack on sign and ratio constraints before clamping.
const FEAS: f64 = 1e-12;

const ARMIJO: f64 = 1e-4;

/// Optimizer settings. JSON form: `{"starts", "max_iters", "seed", "tol"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LambdaConfig {
    pub starts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Stop a start once one sweep lowers the value by less than
    /// `tol·(1 + |value|)`.
    pub tol: f64,
}

impl Default for LambdaConfig {
    fn default() -> Self {
        Self { starts: DEFAULT_STARTS, max_iters: DEFAULT_MAX_ITERS, seed: DEFAULT_SEED, tol: DEFAULT_TOL_DECREASE }
    }
}

impl LambdaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidConfig("starts must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::InvalidConfig(format!("tol must be finite and nonnegative, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Best point found. `value` is an upper bound on `λ_α(W)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaEstimate {
    pub value: f64,
    pub argmin: BipartiteVector,
    pub level: FractionalLevel,
    pub feasibility_residual: f64,
    /// Starts that finished within [`MAX_RESIDUAL`] of the feasible set.
    pub starts_used: usize,
    /// Index of the start that produced `argmin`.
    pub best_start: usize,
}

/// Estimates `λ_α(W)` from the default seed set.
pub fn lambda_numeric(w: &HermitianOperator, level: &FractionalLevel, cfg: &LambdaConfig) -> Result<LambdaEstimate> {
    lambda_numeric_with_seeds(w, level, cfg, &[])
}

/// Like [`lambda_numeric`], with extra warm starts placed after the
/// eigenvector seeds. A feasible warm start can only be improved on.
pub fn lambda_numeric_with_seeds(
    w: &HermitianOperator,
    level: &FractionalLevel,
    cfg: &LambdaConfig,
    seeds: &[BipartiteVector],
) -> Result<LambdaEstimate> {
    cfg.validate()?;
    let dims = w.dims();
    if level.d() != dims.d() {
        return Err(Error::DimensionMismatch(format!(
            "level declared for d = {} on a {}x{} space",
            level.d(),
            dims.n(),
            dims.m()
        )));
    }
    if let Some(bad) = seeds.iter().find(|s| s.dims() != dims) {
        return Err(Error::DimensionMismatch(format!("warm start on {:?} for an operator on {dims:?}", bad.dims())));
    }
    let problem = Problem::new(w.matrix(), dims, level);

    let mut fixed = Vec::new();
    let (_, vectors) = hermitian_eigen(w.matrix());
    let bottom = BipartiteVector::new(dims, vectors.column(0).into_owned())?;
    let frames = schmidt_decomposition(&bottom)?;
    let (u0, v0) = (frames.u.columns(0, problem.r).into_owned(), frames.v.columns(0, problem.r).into_owned());
    // (a) best weights in the Schmidt frames of the bottom eigenvector
    fixed.push(Start::Frames { u: u0.clone(), v: v0.clone(), weights: None });
    // (b) the bottom eigenvector itself when it is already admissible
    if is_admissible_vector(&bottom, level, DEFAULT_TOL)?.admissible {
        let weights = frames.spectrum.values()[..problem.r].to_vec();
        fixed.push(Start::Frames { u: u0, v: v0, weights: Some(weights) });
    }
    for seed in seeds {
        let sd = schmidt_decomposition(seed)?;
        let weights = sd.spectrum.values()[..problem.r].to_vec();
        fixed.push(Start::Frames {
            u: sd.u.columns(0, problem.r).into_owned(),
            v: sd.v.columns(0, problem.r).into_owned(),
            weights: Some(weights),
        });
    }
    let total = cfg.starts.max(fixed.len());
    let n_fixed = fixed.len();
    let mut starts: Vec<Start> = fixed;
    starts.extend((n_fixed..total).map(|_| Start::Random));

    let outcomes: Vec<Option<Outcome>> = starts
        .into_par_iter()
        .enumerate()
        .map(|(index, start)| {
            let (u, v, weights) = match start {
                Start::Frames { u, v, weights } => (u, v, weights),
                Start::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(index as u64));
                    (stiefel(dims.n(), problem.r, &mut rng), stiefel(dims.m(), problem.r, &mut rng), None)
                }
            };
            problem.descend(u, v, weights, cfg).and_then(|o| (o.residual <= MAX_RESIDUAL).then_some(o))
        })
        .collect();

    let starts_used = outcomes.iter().flatten().count();
    let (best_start, best) = outcomes
        .into_iter()
        .enumerate()
        .filter_map(|(i, o)| o.map(|o| (i, o)))
        .reduce(|a, b| if b.1.value < a.1.value - TIE { b } else { a })
        .ok_or_else(|| Error::Verification("no start reached the feasible set".into()))?;
    let argmin = BipartiteVector::new(dims, best.psi)?;
    let value = argmin.expectation(w.matrix());
    Ok(LambdaEstimate {
        value,
        argmin,
        level: *level,
        feasibility_residual: best.residual,
        starts_used,
        best_start,
    })
}

enum Start {
    Frames { u: CMatrix, v: CMatrix, weights: Option<Vec<f64>> },
    Random,
}

struct Outcome {
    value: f64,
    psi: CVector,
    residual: f64,
}

struct Problem<'a> {
    w: &'a CMatrix,
    n: usize,
    m: usize,
    k: usize,
    theta: f64,
    r: usize,
    /// Linear constraints `g·s ≥ 0` on the weights.
    constraints: Vec<DVector<f64>>,
}

impl<'a> Problem<'a> {
    fn new(w: &'a CMatrix, dims: BipartiteDims, level: &FractionalLevel) -> Self {
        let (k, theta, r) = (level.k(), level.theta(), level.r());
        let mut constraints: Vec<DVector<f64>> = (0..r).map(|j| DVector::from_fn(r, |i, _| f64::from(i == j))).collect();
        if r > k {
            constraints.push(DVector::from_fn(r, |i, _| if i < k { theta / k as f64 } else { -1.0 }));
        }
        Self { w, n: dims.n(), m: dims.m(), k, theta, r, constraints }
    }

    fn psi(&self, u: &CMatrix, v: &CMatrix, s: &[f64]) -> CVector {
        let mut us = u.clone();
        for (j, &sj) in s.iter().enumerate() {
            us.column_mut(j).scale_mut(sj);
        }
        let x = us * v.transpose();
        // row-major coefficient vector of x
        CVector::from_column_slice(x.transpose().as_slice())
    }

    fn unmat(&self, y: &CVector) -> CMatrix {
        CMatrix::from_column_slice(self.m, self.n, y.as_slice()).transpose()
    }

    fn value(&self, psi: &CVector) -> f64 {
        psi.dotc(&(self.w * psi)).re
    }

    fn feasible(&self, s: &DVector<f64>) -> bool {
        self.constraints.iter().all(|g| g.dot(s) >= -FEAS)
    }

    /// Clamps round-off violations and renormalizes.
    fn polish(&self, mut s: DVector<f64>) -> DVector<f64> {
        s.iter_mut().for_each(|x| *x = x.max(0.0));
        if self.r > self.k {
            let cap = self.theta / self.k as f64 * s.rows(0, self.k).sum();
            s[self.k] = s[self.k].min(cap);
        }
        let norm = s.norm();
        s / norm
    }

    /// Minimizes `sᵀMs` over unit `s` satisfying all constraints.
    fn solve_weights(&self, mm: &DMatrix<f64>) -> (Vec<f64>, f64) {
        let r = self.r;
        let try_sign = |s: DVector<f64>| -> Option<DVector<f64>> {
            if self.feasible(&s) {
                Some(s)
            } else if self.feasible(&(-&s)) {
                Some(-s)
            } else {
                None
            }
        };
        let bottom = |a: &DMatrix<f64>| -> DVector<f64> {
            let eig = a.clone().symmetric_eigen();
            let j = eig.eigenvalues.imin();
            eig.eigenvectors.column(j).into_owned()
        };
        let finish = |s: DVector<f64>| {
            let s = self.polish(s);
            let value = s.dot(&(mm * &s));
            (s.as_slice().to_vec(), value)
        };

        if let Some(s) = try_sign(bottom(mm)) {
            return finish(s);
        }
        let nc = self.constraints.len();
        let mut best: Option<(Vec<f64>, f64)> = None;
        for mask in 1u32..(1 << nc) {
            if mask.count_ones() as usize >= r {
                continue;
            }
            let Some(basis) = self.face_basis(mask) else { continue };
            let reduced = basis.transpose() * mm * &basis;
            let y = bottom(&reduced);
            if let Some(s) = try_sign(&basis * y) {
                let cand = finish(s);
                if best.as_ref().is_none_or(|b| cand.1 < b.1) {
                    best = Some(cand);
                }
            }
        }
        best.expect("a coordinate vertex is always feasible")
    }

    /// Orthonormal basis of the subspace where the constraints in `mask`
    /// hold with equality.
    fn face_basis(&self, mask: u32) -> Option<DMatrix<f64>> {
        let r = self.r;
        let free: Vec<usize> = (0..r).filter(|&j| mask & (1 << j) == 0).collect();
        let ratio_active = self.constraints.len() > r && mask & (1 << r) != 0;
        if !ratio_active {
            return Some(DMatrix::from_fn(r, free.len(), |i, c| f64::from(i == free[c])));
        }
        let g = &self.constraints[r];
        let gf = DVector::from_iterator(free.len(), free.iter().map(|&j| g[j]));
        let norm = gf.norm();
        if norm == 0.0 || free.len() < 2 {
            return None;
        }
        let gf = gf / norm;
        let proj = DMatrix::identity(free.len(), free.len()) - &gf * gf.transpose();
        let eig = proj.symmetric_eigen();
        let cols: Vec<usize> = (0..free.len()).filter(|&c| eig.eigenvalues[c] > 0.5).collect();
        let mut basis = DMatrix::zeros(r, cols.len());
        for (c, &e) in cols.iter().enumerate() {
            for (i, &j) in free.iter().enumerate() {
                basis[(j, c)] = eig.eigenvectors[(i, e)];
            }
        }
        Some(basis)
    }

    fn gram(&self, u: &CMatrix, v: &CMatrix) -> DMatrix<f64> {
        let r = self.r;
        let b = CMatrix::from_fn(self.n * self.m, r, |idx, j| u[(idx / self.m, j)] * v[(idx % self.m, j)]);
        let wb = self.w * &b;
        let g = b.adjoint() * wb;
        DMatrix::from_fn(r, r, |i, j| 0.5 * (g[(i, j)].re + g[(j, i)].re))
    }

    fn inner(&self, u: &CMatrix, v: &CMatrix) -> (Vec<f64>, f64) {
        self.solve_weights(&self.gram(u, v))
    }

    fn descend(&self, mut u: CMatrix, mut v: CMatrix, weights: Option<Vec<f64>>, cfg: &LambdaConfig) -> Option<Outcome> {
        let (mut s, mut f) = match weights {
            Some(w) if self.feasible(&DVector::from_column_slice(&w)) && w.iter().any(|&x| x > 0.0) => {
                let s = self.polish(DVector::from_vec(w)).as_slice().to_vec();
                let f = self.value(&self.psi(&u, &v, &s));
                (s, f)
            }
            _ => self.inner(&u, &v),
        };
        let mut eta = 1.0 / self.w.norm().max(f64::MIN_POSITIVE);
        for _ in 0..cfg.max_iters {
            let psi = self.psi(&u, &v, &s);
            let y = self.unmat(&(self.w * &psi));
            let sd = DMatrix::from_diagonal(&DVector::from_iterator(self.r, s.iter().map(|&x| crate::linalg::c64(2.0 * x, 0.0))));
            let gu = &y * v.map(|z| z.conj()) * &sd;
            let gv = y.transpose() * u.map(|z| z.conj()) * &sd;
            let xu = riemannian(&u, gu);
            let xv = riemannian(&v, gv);
            let g2 = xu.norm_squared() + xv.norm_squared();
            if !g2.is_finite() || g2 < 1e-28 {
                break;
            }
            let mut accepted = None;
            while eta > 1e-16 {
                let u1 = orthonormalize(&u - xu.scale(eta));
                let v1 = orthonormalize(&v - xv.scale(eta));
                let f1 = self.value(&self.psi(&u1, &v1, &s));
                if f1 <= f - ARMIJO * eta * g2 {
                    accepted = Some((u1, v1, f1));
                    break;
                }
                eta *= 0.5;
            }
            let Some((u1, v1, f1)) = accepted else { break };
            let (s1, f2) = self.inner(&u1, &v1);
            let (s_new, f_new) = if f2 <= f1 { (s1, f2) } else { (s, f1) };
            let decrease = f - f_new;
            u = u1;
            v = v1;
            s = s_new;
            f = f_new;
            eta *= 2.0;
            if decrease <= cfg.tol * (1.0 + f.abs()) {
                break;
            }
        }
        let psi = self.psi(&u, &v, &s);
        let residual = self.residual(&psi)?;
        Some(Outcome { value: self.value(&psi), psi, residual })
    }

    /// `max(ratio violation, |‖ψ‖ − 1|, s_{r+1})` on the sorted spectrum.
    fn residual(&self, psi: &CVector) -> Option<f64> {
        let dims = BipartiteDims::new(self.n, self.m).ok()?;
        let spectrum = schmidt_spectrum(&BipartiteVector::new(dims, psi.clone()).ok()?).ok()?;
        let tail = spectrum.get(self.r);
        let ratio = if self.r > self.k {
            (spectrum.get(self.k) - self.theta / self.k as f64 * spectrum.top_sum(self.k)).max(0.0)
        } else {
            0.0
        };
        Some(tail.max(ratio).max((psi.norm() - 1.0).abs()))
    }
}

/// Projection of a Euclidean gradient onto the tangent space of the
/// Stiefel manifold at `q`.
fn riemannian(q: &CMatrix, g: CMatrix) -> CMatrix {
    let qg = q.adjoint() * &g;
    let sym = (&qg + qg.adjoint()).scale(0.5);
    g - q * sym
}
