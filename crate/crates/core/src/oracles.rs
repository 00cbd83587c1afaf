//! Brute-force oracles for small dimensions, independent of the optimizer.
//!
//! On `2 ⊗ 2` every vector with Schmidt weights `(cos φ, sin φ)` can be
//! written `cos φ u1⊗v1 + sin φ u2⊗v2` with
//!
//! ```text
//! u1 = (cos a, e^{ib} sin a)    u2 = e^{ic} (−e^{−ib} sin a, cos a)
//! v1 = (cos a′, e^{ib′} sin a′)  v2 = (−e^{−ib′} sin a′, cos a′)
//! ```
//!
//! after quotienting the phases that do not change `⟨ψ, Wψ⟩`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissibility::FractionalLevel;
use crate::choi::HermitianOperator;
use crate::error::{Error, Result};

/// Resolutions of a brute-force search.
///
/// Angles in `[0, π/2]` and Schmidt parameters get `resolution + 1` points
/// with both endpoints; periodic phases get `resolution` points. Doubling a
/// resolution therefore refines the grid without dropping points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub unitary_resolution: usize,
    pub schmidt_resolution: usize,
    /// Golden-section steps per coordinate during local refinement.
    pub refine_steps: usize,
}

impl GridSpec {
    pub fn new(unitary_resolution: usize, schmidt_resolution: usize, refine_steps: usize) -> Result<Self> {
        let g = Self { unitary_resolution, schmidt_resolution, refine_steps };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.unitary_resolution == 0 || self.schmidt_resolution == 0 || self.refine_steps == 0 {
            return Err(Error::InvalidConfig(format!("grid resolutions must be positive: {self:?}")));
        }
        Ok(())
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { unitary_resolution: 24, schmidt_resolution: 24, refine_steps: 40 }
    }
}

/// Candidates kept from the grid for refinement.
const REFINE_FROM: usize = 4;
/// Coordinate sweeps stop once a sweep gains less than this.
const SWEEP_GAIN: f64 = 1e-15;
const MAX_SWEEPS: usize = 400;

fn closed(max: f64, res: usize) -> Vec<f64> {
    (0..=res).map(|i| max * i as f64 / res as f64).collect()
}

fn periodic(res: usize) -> Vec<f64> {
    (0..res).map(|i| TAU * i as f64 / res as f64).collect()
}

fn frame(a: f64, b: f64) -> [[Complex64; 2]; 2] {
    let e = Complex64::from_polar(1.0, b);
    [
        [Complex64::new(a.cos(), 0.0), e * a.sin()],
        [-e.conj() * a.sin(), Complex64::new(a.cos(), 0.0)],
    ]
}

type Block = [[Complex64; 2]; 2];

/// `(x* ⊗ I) W (y ⊗ I)` as a 2×2 block on the second factor.
fn block(w: &[[Complex64; 4]; 4], x: &[Complex64; 2], y: &[Complex64; 2]) -> Block {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (p, row) in out.iter_mut().enumerate() {
        for (q, entry) in row.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc += x[a].conj() * w[a * 2 + p][b * 2 + q] * y[b];
                }
            }
            *entry = acc;
        }
    }
    out
}

fn form(m: &Block, x: &[Complex64; 2], y: &[Complex64; 2]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..2 {
        for q in 0..2 {
            acc += x[p].conj() * m[p][q] * y[q];
        }
    }
    acc
}

struct TwoQubit {
    w: [[Complex64; 4]; 4],
    phi_max: f64,
}

impl TwoQubit {
    /// Parameters `[a, b, c, a′, b′, φ]`.
    fn value(&self, p: &[f64; 6]) -> f64 {
        let [a, b, c, a2, b2, phi] = *p;
        let u = frame(a, b);
        let v = frame(a2, b2);
        let e = Complex64::from_polar(1.0, c);
        let w11 = block(&self.w, &u[0], &u[0]);
        let w22 = block(&self.w, &u[1], &u[1]);
        let w12 = block(&self.w, &u[0], &u[1]);
        let a11 = form(&w11, &v[0], &v[0]).re;
        let a22 = form(&w22, &v[1], &v[1]).re;
        let a12 = (e * form(&w12, &v[0], &v[1])).re;
        let (s, co) = phi.sin_cos();
        co * co * a11 + s * s * a22 + 2.0 * s * co * a12
    }

    fn bounds(&self, coord: usize) -> Option<(f64, f64)> {
        match coord {
            0 | 3 => Some((0.0, FRAC_PI_2)),
            5 => Some((0.0, self.phi_max)),
            _ => None,
        }
    }
}

/// Minimum of `⟨ψ, Wψ⟩` over α-admissible `ψ ∈ C² ⊗ C²` by exhaustive grid
/// search followed by coordinate-wise golden-section refinement.
pub fn lambda_bruteforce_2x2(w: &HermitianOperator, level: &FractionalLevel, grid: &GridSpec) -> Result<f64> {
    grid.validate()?;
    let dims = w.dims();
    if dims.n() != 2 || dims.m() != 2 {
        return Err(Error::DimensionMismatch(format!("oracle needs 2x2, got {}x{}", dims.n(), dims.m())));
    }
    if level.alpha() > 2.0 {
        return Err(Error::LevelOutOfRange { alpha: level.alpha(), d: 2 });
    }
    let phi_max = if level.alpha() >= 2.0 {
        FRAC_PI_4
    } else {
        level.theta().atan()
    };
    let mut wm = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in wm.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = w.matrix()[(i, j)];
        }
    }
    let problem = TwoQubit { w: wm, phi_max };

    let res = grid.unitary_resolution;
    let a_grid = closed(FRAC_PI_2, res);
    let b_grid = periodic(res);
    let c_phase: Vec<Complex64> = b_grid.iter().map(|&c| Complex64::from_polar(1.0, c)).collect();
    let phi_grid = if phi_max > 0.0 { closed(phi_max, grid.schmidt_resolution) } else { vec![0.0] };
    let trig: Vec<(f64, f64, f64)> = phi_grid
        .iter()
        .map(|&phi| {
            let (s, c) = phi.sin_cos();
            (c * c, s * s, 2.0 * s * c)
        })
        .collect();
    let v_frames: Vec<(usize, usize, [[Complex64; 2]; 2])> = a_grid
        .iter()
        .enumerate()
        .flat_map(|(ia, &a)| b_grid.iter().enumerate().map(move |(ib, &b)| (ia, ib, frame(a, b))))
        .collect();

    let u_points: Vec<(usize, usize)> =
        (0..a_grid.len()).flat_map(|ia| (0..b_grid.len()).map(move |ib| (ia, ib))).collect();
    let top = u_points
        .par_iter()
        .map(|&(ia, ib)| {
            let u = frame(a_grid[ia], b_grid[ib]);
            let w11 = block(&problem.w, &u[0], &u[0]);
            let w22 = block(&problem.w, &u[1], &u[1]);
            let w12 = block(&problem.w, &u[0], &u[1]);
            let mut best = Top::default();
            for &(ja, jb, ref v) in &v_frames {
                let a11 = form(&w11, &v[0], &v[0]).re;
                let a22 = form(&w22, &v[1], &v[1]).re;
                let a12 = form(&w12, &v[0], &v[1]);
                for (ic, e) in c_phase.iter().enumerate() {
                    let cross = (e * a12).re;
                    for (ip, &(cc, ss, sc)) in trig.iter().enumerate() {
                        let value = cc * a11 + ss * a22 + sc * cross;
                        best.offer(value, [ia, ib, ic, ja, jb, ip]);
                    }
                }
            }
            best
        })
        .reduce(Top::default, Top::merge);

    let steps = [a_grid[1] - a_grid[0], TAU / res as f64, TAU / res as f64, a_grid[1] - a_grid[0], TAU / res as f64];
    let phi_step = if phi_grid.len() > 1 { phi_grid[1] - phi_grid[0] } else { 0.0 };
    let mut best = f64::INFINITY;
    for &(value, idx) in &top.items {
        best = best.min(value);
        let start = [
            a_grid[idx[0]],
            b_grid[idx[1]],
            b_grid[idx[2]],
            a_grid[idx[3]],
            b_grid[idx[4]],
            phi_grid[idx[5]],
        ];
        let mut spacing = [0.0; 6];
        spacing[..5].copy_from_slice(&steps);
        spacing[5] = phi_step;
        best = best.min(refine(&problem, start, spacing, grid.refine_steps));
    }
    Ok(best)
}

/// Lowest grid values seen, with their grid indices; ties keep the earlier
/// entry so results do not depend on evaluation order.
#[derive(Default)]
struct Top {
    items: Vec<(f64, [usize; 6])>,
}

impl Top {
    fn offer(&mut self, value: f64, idx: [usize; 6]) {
        if self.items.len() == REFINE_FROM && value >= self.items[REFINE_FROM - 1].0 {
            return;
        }
        let pos = self.items.partition_point(|&(v, i)| (v, i) <= (value, idx));
        self.items.insert(pos, (value, idx));
        self.items.truncate(REFINE_FROM);
    }

    fn merge(mut self, other: Self) -> Self {
        for (v, i) in other.items {
            self.offer(v, i);
        }
        self
    }
}

fn refine(problem: &TwoQubit, start: [f64; 6], spacing: [f64; 6], steps: usize) -> f64 {
    let clamp = |mut y: [f64; 6]| {
        for (coord, v) in y.iter_mut().enumerate() {
            if let Some((min, max)) = problem.bounds(coord) {
                *v = v.clamp(min, max);
            }
        }
        y
    };
    let mut x = start;
    let mut fx = problem.value(&x);
    for _ in 0..MAX_SWEEPS {
        let (before, x_before) = (fx, x);
        for coord in 0..6 {
            if spacing[coord] == 0.0 {
                continue;
            }
            let (mut lo, mut hi) = (x[coord] - spacing[coord], x[coord] + spacing[coord]);
            if let Some((min, max)) = problem.bounds(coord) {
                lo = lo.max(min);
                hi = hi.min(max);
            }
            let (t, ft) = golden(
                |t| {
                    let mut y = x;
                    y[coord] = t;
                    problem.value(&y)
                },
                lo,
                hi,
                steps,
            );
            if ft < fx {
                x[coord] = t;
                fx = ft;
            }
        }
        // pattern move along the net displacement of the sweep
        let dir: [f64; 6] = std::array::from_fn(|i| x[i] - x_before[i]);
        let along = |t: f64| clamp(std::array::from_fn(|i| x[i] + t * dir[i]));
        let (t, ft) = golden(|t| problem.value(&along(t)), 0.0, 4.0, steps);
        if ft < fx {
            x = along(t);
            fx = ft;
        }
        if before - fx < SWEEP_GAIN {
            break;
        }
    }
    fx
}

/// Golden-section minimization on `[lo, hi]`, returning the best point
/// evaluated (endpoints included).
fn golden<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, steps: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = (lo, f(lo));
    let fh = f(hi);
    if fh < best.1 {
        best = (hi, fh);
    }
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..steps {
        if f1 < best.1 {
            best = (x1, f1);
        }
        if f2 < best.1 {
            best = (x2, f2);
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < best.1 {
        best = (x1, f1);
    }
    if f2 < best.1 {
        best = (x2, f2);
    }
    best
}

/// Maximum of `|⟨ω, ψ⟩|²` over α-admissible Schmidt-diagonal `ψ` on
/// `d ⊗ d`, `d ∈ {2, 3}`.
///
/// The top `k` weights are a point of the positive unit sphere in spherical
/// angles; the extra weight is `(ρ/k)·Σ head` with `ρ ∈ [0, θ]`.
pub fn max_overlap_bruteforce(d: usize, level: &FractionalLevel, grid: &GridSpec) -> Result<f64> {
    grid.validate()?;
    if !(2..=3).contains(&d) {
        return Err(Error::InvalidDimension(format!("overlap oracle supports d ∈ {{2, 3}}, got {d}")));
    }
    if level.alpha() > d as f64 {
        return Err(Error::LevelOutOfRange { alpha: level.alpha(), d });
    }
    let (k, theta) = (level.k(), level.theta());
    let n_angles = k - 1;
    let dims = n_angles + usize::from(theta > 0.0);
    let overlap = |p: &[f64]| -> f64 {
        let mut head = vec![1.0; k];
        for (i, &angle) in p[..n_angles].iter().enumerate() {
            let (s, c) = angle.sin_cos();
            head[i] *= c;
            for h in head.iter_mut().skip(i + 1) {
                *h *= s;
            }
        }
        let sum: f64 = head.iter().sum();
        let extra = if theta > 0.0 { p[n_angles] / k as f64 * sum } else { 0.0 };
        (sum + extra).powi(2) / (d as f64 * (1.0 + extra * extra))
    };
    let bounds: Vec<(f64, f64)> =
        (0..dims).map(|i| if i < n_angles { (0.0, FRAC_PI_2) } else { (0.0, theta) }).collect();
    if dims == 0 {
        return Ok(overlap(&[]));
    }
    let res = grid.schmidt_resolution;
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| (0..=res).map(|i| lo + (hi - lo) * i as f64 / res as f64).collect())
        .collect();
    let mut best_point = vec![0.0; dims];
    let mut best = f64::NEG_INFINITY;
    let mut idx = vec![0usize; dims];
    loop {
        let p: Vec<f64> = idx.iter().zip(&axes).map(|(&i, ax)| ax[i]).collect();
        let v = overlap(&p);
        if v > best {
            best = v;
            best_point = p;
        }
        let mut carry = 0;
        while carry < dims {
            idx[carry] += 1;
            if idx[carry] <= res {
                break;
            }
            idx[carry] = 0;
            carry += 1;
        }
        if carry == dims {
            break;
        }
    }
    let spacing: Vec<f64> = bounds.iter().map(|&(lo, hi)| (hi - lo) / res as f64).collect();
    let mut x = best_point;
    for _ in 0..MAX_SWEEPS {
        let before = best;
        for coord in 0..dims {
            let lo = (x[coord] - spacing[coord]).max(bounds[coord].0);
            let hi = (x[coord] + spacing[coord]).min(bounds[coord].1);
            let (t, ft) = golden(|t| {
                let mut y = x.clone();
                y[coord] = t;
                -overlap(&y)
            }, lo, hi, grid.refine_steps);
            if -ft > best {
                best = -ft;
                x[coord] = t;
            }
        }
        if best - before < SWEEP_GAIN {
            break;
        }
    }
    Ok(best)
}
