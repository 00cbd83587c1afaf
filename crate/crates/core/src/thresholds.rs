//! Closed-form thresholds on the depolarizing ray and the isotropic slice,
//! and their inversions.
//!
//! With `α = k + θ`:
//!
//! ```text
//! t*_α   = (k + θ²) / (k + θ)²          Φ_t is α-positive iff t ≤ t*_α
//! f_d(α) = (k + θ)² / (d (k + θ²))      ρ_F ∈ K_α iff F ≤ f_d(α)
//! ```
//!
//! so that `f_d(α) · d · t*_α = 1`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::admissibility::FractionalLevel;
use crate::error::{Error, Result};

/// `t*_α = (k+θ²)/(k+θ)²`: the largest `t` with `Φ_t` α-positive.
pub fn t_star(level: &FractionalLevel) -> f64 {
    let (k, theta) = (level.k() as f64, level.theta());
    (k + theta * theta) / ((k + theta) * (k + theta))
}

/// `f_d(α) = (k+θ)²/(d(k+θ²))`, the fidelity threshold of `K_α` on the
/// isotropic slice of `d ⊗ d`.
pub fn f_d(d: usize, level: &FractionalLevel) -> f64 {
    let (k, theta, d) = (level.k() as f64, level.theta(), d as f64);
    (k + theta) * (k + theta) / (d * (k + theta * theta))
}

/// Negative discriminants this close to zero are rounding noise.
const DISCRIMINANT_FLOOR: f64 = -1e-14;

fn clamped_sqrt(disc: f64) -> Result<f64> {
    if disc < DISCRIMINANT_FLOOR {
        return Err(Error::Verification(format!("negative discriminant {disc:e}")));
    }
    Ok(disc.max(0.0).sqrt())
}

/// Fractional Schmidt index of the isotropic state `ρ_F` in `d ⊗ d`.
///
/// Returns 1 for `F ≤ 1/d`; otherwise the unique `α` with `f_d(α) = F`,
/// found on the interval `F ∈ [k/d, (k+1)/d]` from the smaller root of
/// `(Fd−1)θ² − 2kθ + k(Fd−k) = 0`.
pub fn fsn_isotropic(fidelity: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("need d ≥ 2, got {d}")));
    }
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::Domain(format!("fidelity {fidelity} outside [0, 1]")));
    }
    let df = d as f64;
    let fd = fidelity * df;
    if fd <= 1.0 {
        return Ok(1.0);
    }
    let nearest = fd.round();
    if (fd - nearest).abs() <= 1e-12 * df {
        return Ok(nearest);
    }
    let k = (fd.floor() as usize).clamp(1, d - 1) as f64;
    // minus-branch root (k − √D)/(Fd − 1), rationalized to c/(k + √D)
    let a = fd - 1.0;
    let c = k * (fd - k);
    let root = clamped_sqrt(k * k - a * c)?;
    let theta = c / (k + root);
    Ok(k + theta)
}

/// Stability index `τ(Φ_t)` of the depolarizing ray on `M_d`.
///
/// `d` for `t ≤ 1/d` (completely positive regime, including `t ≤ 0`),
/// otherwise the unique `α` with `t*_α = t`, from the root of
/// `(t−1)θ² + 2tkθ + (tk² − k) = 0` on `t ∈ (1/(k+1), 1/k]`.
pub fn tau_depolarizing(t: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("need d ≥ 2, got {d}")));
    }
    if !t.is_finite() || t > 1.0 {
        return Err(Error::Domain(format!("t = {t} outside the depolarizing range t ≤ 1")));
    }
    let df = d as f64;
    if t * df <= 1.0 {
        return Ok(df);
    }
    let inv = 1.0 / t;
    let nearest = inv.round();
    if (inv - nearest).abs() <= 1e-12 * inv {
        return Ok(nearest);
    }
    let k = (inv.floor() as usize).clamp(1, d - 1) as f64;
    // (tk − √(k(t(k+1)−1)))/(1−t), rationalized to k(1−tk)/(tk + √·)
    let root = clamped_sqrt(k * (t * (k + 1.0) - 1.0))?;
    let theta = k * (1.0 - t * k) / (t * k + root);
    Ok(k + theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub alpha: f64,
    pub t_star: f64,
    pub f_d: f64,
}

/// Tabulated `(α, t*_α, f_d(α))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdProfile {
    pub d: usize,
    pub samples: Vec<ProfileSample>,
}

impl ThresholdProfile {
    /// Checks strict monotonicity across distinct α and the reciprocity
    /// `f_d · d · t* = 1` within `1e-12`.
    pub fn validate(&self) -> Result<()> {
        let d = self.d as f64;
        for s in &self.samples {
            let product = s.f_d * d * s.t_star;
            if (product - 1.0).abs() > 1e-12 {
                return Err(Error::Verification(format!(
                    "reciprocity fails at alpha = {}: f_d·d·t* = {product}",
                    s.alpha
                )));
            }
        }
        for pair in self.samples.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b.alpha > a.alpha && !(b.t_star < a.t_star && b.f_d > a.f_d) {
                return Err(Error::Verification(format!(
                    "profile not strictly monotone between alpha = {} and {}",
                    a.alpha, b.alpha
                )));
            }
        }
        Ok(())
    }

    /// CSV with header `alpha,t_star,f_d`, shortest round-trip formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,t_star,f_d\n");
        for s in &self.samples {
            writeln!(out, "{},{},{}", s.alpha, s.t_star, s.f_d).unwrap();
        }
        out
    }
}

pub fn profile_sweep(d: usize, grid: &[f64]) -> Result<ThresholdProfile> {
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("grid must be sorted".into()));
    }
    let samples = grid
        .iter()
        .map(|&alpha| {
            let level = FractionalLevel::new(alpha, d)?;
            Ok(ProfileSample { alpha, t_star: t_star(&level), f_d: f_d(d, &level) })
        })
        .collect::<Result<Vec<_>>>()?;
    let profile = ThresholdProfile { d, samples };
    profile.validate()?;
    Ok(profile)
}

/// Evenly spaced grid `start, …, stop` with `count` points.
pub fn linear_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}
