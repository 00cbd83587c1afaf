//! Exit criteria. Each test is one criterion; libtest prints its verdict.

mod common;

use std::time::Instant;

use common::*;
use fracpos::choi::{choi_from_kraus, KrausList};
use fracpos::cones::{twirl_isotropic, IsotropicCoefficients};
use fracpos::linalg::{
    matricize, operator_norm, schmidt_decomposition, schmidt_spectrum, singular_values, vec_columns, BipartiteDims,
    BipartiteVector,
};
use fracpos::sample::{unit_vector, unitary};
use fracpos::*;
use rand::Rng;

fn report(id: u32, name: &str, failures: &[String], started: Instant) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {verdict} {name} ({:.2?})", started.elapsed());
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {id} failed with {} violations", failures.len());
}

#[test]
fn criterion_01_threshold_closed_forms() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for d in 2..=8 {
        let one = t_star(&FractionalLevel::new(1.0, d).unwrap());
        let full = t_star(&FractionalLevel::integer(d, d).unwrap());
        if one != 1.0 {
            failures.push(format!("d={d}: t*(1) = {one}"));
        }
        if full != 1.0 / d as f64 {
            failures.push(format!("d={d}: t*(d) = {full}"));
        }
        let mid = t_star(&FractionalLevel::new(1.5, d).unwrap());
        if (mid - 5.0 / 9.0).abs() > 1e-15 {
            failures.push(format!("d={d}: t*(1.5) = {mid}"));
        }
    }
    report(1, "threshold closed forms", &failures, started);
}

#[test]
fn criterion_02_reciprocity() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for d in 2..=6 {
        for i in 0..=100 {
            let alpha = 1.0 + (d as f64 - 1.0) * i as f64 / 100.0;
            let level = FractionalLevel::new(alpha, d).unwrap();
            let product = f_d(d, &level) * d as f64 * t_star(&level);
            if (product - 1.0).abs() > 1e-12 {
                failures.push(format!("d={d} alpha={alpha}: {product}"));
            }
        }
    }
    report(2, "reciprocity f_d·d·t* = 1", &failures, started);
}

#[test]
fn criterion_03_optimizer_matches_closed_form() {
    let started = Instant::now();
    let cfg = LambdaConfig::default();
    let mut failures = Vec::new();
    for d in 2..=4 {
        for t in [0.3, 0.6, 0.9, 1.0] {
            let w = choi_depolarizing(d, t).unwrap();
            for alpha in gap_grid(d) {
                let level = FractionalLevel::new(alpha, d).unwrap();
                let est = lambda_numeric(&w, &level, &cfg).unwrap();
                let exact = lambda_depolarizing_closed_form(d, t, &level).unwrap();
                if (est.value - exact).abs() > 1e-6 {
                    failures.push(format!("d={d} t={t} alpha={alpha}: {} vs {exact}", est.value));
                }
            }
        }
    }
    report(3, "lambda_numeric vs closed form", &failures, started);
}

#[test]
fn criterion_04_oracle_equivalence() {
    let started = Instant::now();
    let dims = BipartiteDims::square(2).unwrap();
    let grid = GridSpec::new(24, 24, 40).unwrap();
    let cfg = LambdaConfig::default();
    let mut failures = Vec::new();
    for seed in 0..20 {
        let w = random_hermitian(dims, &mut rng(4000 + seed));
        for alpha in [1.25, 1.5, 1.75, 2.0] {
            let level = FractionalLevel::new(alpha, 2).unwrap();
            let brute = lambda_bruteforce_2x2(&w, &level, &grid).unwrap();
            let numeric = lambda_numeric(&w, &level, &cfg).unwrap().value;
            if (brute - numeric).abs() > 1e-3 {
                failures.push(format!("seed={seed} alpha={alpha}: brute {brute} numeric {numeric}"));
            }
        }
    }
    report(4, "2x2 brute force vs lambda_numeric", &failures, started);
}

#[test]
fn criterion_05_inversion_roundtrips() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for d in 2..=6 {
        let df = d as f64;
        for i in 1..=200 {
            let f = 1.0 - (1.0 - 1.0 / df) * (200 - i) as f64 / 200.0;
            let alpha = fsn_isotropic(f, d).unwrap();
            let back = f_d(d, &FractionalLevel::new(alpha, d).unwrap());
            if (back - f).abs() > 1e-10 {
                failures.push(format!("fsn d={d} F={f}: f_d = {back}"));
            }
        }
        for i in 1..=200 {
            // open interval (1/d, 1)
            let t = 1.0 / df + (1.0 - 1.0 / df) * i as f64 / 201.0;
            let alpha = tau_depolarizing(t, d).unwrap();
            let back = t_star(&FractionalLevel::new(alpha, d).unwrap());
            if (back - t).abs() > 1e-10 {
                failures.push(format!("tau d={d} t={t}: t* = {back}"));
            }
        }
    }
    let fsn = fsn_isotropic(0.5, 3).unwrap();
    if (fsn - (3.0 - 3f64.sqrt())).abs() > 1e-12 {
        failures.push(format!("fsn(0.5, 3) = {fsn}"));
    }
    let tau = tau_depolarizing(0.6, 3).unwrap();
    if (tau - (5.0 - 5f64.sqrt()) / 2.0).abs() > 1e-12 {
        failures.push(format!("tau(0.6, 3) = {tau}"));
    }
    report(5, "fsn / tau inversion roundtrips", &failures, started);
}

#[test]
fn criterion_06_integer_recovery() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for d in 2..=6 {
        let df = d as f64;
        let mut grid = vec![0.0, 1.0];
        for k in 1..=d {
            let b = k as f64 / df;
            grid.extend([b - 1e-9, b, b + 1e-9, b - 1e-4, b + 1e-4]);
        }
        for f in grid.into_iter().filter(|f| (0.0..=1.0).contains(f)) {
            let alpha = fsn_isotropic(f, d).unwrap();
            let classical = (1..=d).find(|&k| f <= k as f64 / df).unwrap();
            if alpha.ceil() as usize != classical {
                failures.push(format!("d={d} F={f}: ceil({alpha}) vs {classical}"));
            }
        }
    }
    report(6, "integer recovery", &failures, started);
}

#[test]
fn criterion_07_strict_inclusion() {
    let started = Instant::now();
    let dims = BipartiteDims::square(4).unwrap();
    let mut failures = Vec::new();
    for k in [1, 2] {
        for theta in [0.25, 0.5, 0.75] {
            match demo_strict_inclusion(k, theta, dims) {
                Ok(r) => {
                    let ok = r.psi_at_alpha.admissible
                        && !r.psi_at_k.admissible
                        && r.psi_prime_at_k_plus_1.admissible
                        && !r.psi_prime_at_alpha.admissible
                        && r.witness_pairing < 0.0;
                    if !ok {
                        failures.push(format!("k={k} theta={theta}: {r:?}"));
                    }
                }
                Err(e) => failures.push(format!("k={k} theta={theta}: {e}")),
            }
        }
    }
    report(7, "strict inclusion demo", &failures, started);
}

#[test]
fn criterion_08_cp_failure_certificate() {
    let started = Instant::now();
    let mut failures = Vec::new();
    match demo_cp_failure(2, &FractionalLevel::new(1.5, 2).unwrap(), 0.55) {
        Ok(c) => {
            if (c.quadratic_value + 0.16).abs() > 1e-10 {
                failures.push(format!("(2, 1.5, 0.55): value {}", c.quadratic_value));
            }
            if !c.psi_t_report.admissible || (c.psi_t_report.observed_ratio - 0.5).abs() > 1e-10 {
                failures.push(format!("(2, 1.5, 0.55): psi_t report {:?}", c.psi_t_report));
            }
        }
        Err(e) => failures.push(format!("(2, 1.5, 0.55): {e}")),
    }
    for (d, alpha, t) in [(3, 1.5, 0.55), (3, 2.5, 0.38)] {
        match demo_cp_failure(d, &FractionalLevel::new(alpha, d).unwrap(), t) {
            Ok(c) if c.quadratic_value < 0.0 && c.psi_t_report.admissible => {}
            Ok(c) => failures.push(format!("({d}, {alpha}, {t}): value {}", c.quadratic_value)),
            Err(e) => failures.push(format!("({d}, {alpha}, {t}): {e}")),
        }
    }
    report(8, "CP-failure certificates", &failures, started);
}

#[test]
fn criterion_09_fractional_kraus_consistency() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut r = rng(9);
    for case in 0..100 {
        let d = 2 + case % 3;
        let level = random_level(d, &mut r);
        let count = 1 + case % 4;
        let ops: Vec<_> = (0..count)
            .map(|_| {
                let w = admissible_weights(&level, &mut r);
                matrix_with_weights(d, d, &w, &mut r)
            })
            .collect();
        let ks = KrausList::new(ops).unwrap();
        let cert = verify_fractional_kraus(&ks, &level, 1e-9).unwrap();
        if !cert.passed {
            failures.push(format!("admissible case {case}: failures {:?}", cert.failures()));
        }
        let c = choi_from_kraus(&ks);
        let pairing = witness_operator(d, &level).unwrap().pair(c.matrix());
        if pairing < -1e-9 {
            failures.push(format!("admissible case {case}: Tr(C W) = {pairing}"));
        }
    }
    for case in 0..100 {
        let d = 2 + case % 3;
        let level = FractionalLevel::new(r.random_range(1.0..(d as f64 - 0.05)), d).unwrap();
        let count = 1 + case % 4;
        let bad_index = case % count;
        let ops: Vec<_> = (0..count)
            .map(|i| {
                let w = if i == bad_index {
                    inadmissible_weights(&level, &mut r)
                } else {
                    admissible_weights(&level, &mut r)
                };
                matrix_with_weights(d, d, &w, &mut r)
            })
            .collect();
        let ks = KrausList::new(ops).unwrap();
        let cert = verify_fractional_kraus(&ks, &level, 1e-9).unwrap();
        if cert.passed || cert.failures() != vec![bad_index] {
            failures.push(format!("inadmissible case {case}: failures {:?}, expected [{bad_index}]", cert.failures()));
        }
    }
    report(9, "fractional Kraus consistency", &failures, started);
}

#[test]
fn criterion_10_property_suites() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut r = rng(10);

    // isometry of both vectorizations and of local unitaries
    for case in 0..100 {
        let dims = BipartiteDims::new(1 + case % 4, 1 + (case / 4) % 4).unwrap();
        let psi = unit_vector(dims, &mut r);
        let x = matricize(&psi);
        let moved = psi.apply_local(&unitary(dims.n(), &mut r), &unitary(dims.m(), &mut r)).unwrap();
        let stacked = vec_columns(&x);
        for (what, norm) in [("mat", x.norm()), ("local", moved.norm()), ("vec", stacked.norm())] {
            if (norm - 1.0).abs() > 1e-12 {
                failures.push(format!("isometry {what} case {case}: {norm}"));
            }
        }
    }

    // Schmidt coefficients are the singular values of the matricization
    for case in 0..100 {
        let dims = BipartiteDims::new(1 + case % 5, 1 + (case / 5) % 5).unwrap();
        let psi = unit_vector(dims, &mut r);
        let spectrum = schmidt_spectrum(&psi).unwrap();
        let sv = singular_values(&matricize(&psi));
        let gap = spectrum.values().iter().zip(&sv).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let sd = schmidt_decomposition(&psi).unwrap();
        let rebuilt = BipartiteVector::from_schmidt(sd.spectrum.values(), &sd.u, &sd.v).unwrap();
        let err = (rebuilt.coeffs() - psi.coeffs()).norm();
        if gap > 1e-12 || err > 1e-12 || (spectrum.l2() - 1.0).abs() > 1e-12 {
            failures.push(format!("schmidt case {case}: gap {gap} rebuild {err}"));
        }
    }

    // admissibility verdicts are invariant under local unitaries
    for case in 0..100 {
        let d = 2 + case % 3;
        let dims = BipartiteDims::square(d).unwrap();
        let level = random_level(d, &mut r);
        let w = if case % 2 == 1 && level.k() < d {
            inadmissible_weights(&level, &mut r)
        } else {
            admissible_weights(&level, &mut r)
        };
        let x = matrix_with_weights(d, d, &w, &mut r);
        let psi = fracpos::linalg::vectorize(&x, dims).unwrap().normalized().unwrap();
        let moved = psi.apply_local(&unitary(d, &mut r), &unitary(d, &mut r)).unwrap();
        let a = is_admissible_vector(&psi, &level, 1e-9).unwrap().admissible;
        let b = is_admissible_vector(&moved, &level, 1e-9).unwrap().admissible;
        if a != b || a != (case % 2 == 0 || level.k() == d) {
            failures.push(format!("local invariance case {case}: {a} vs {b}"));
        }
    }

    // Lipschitz and concavity probes on 2 ⊗ 2
    let dims = BipartiteDims::square(2).unwrap();
    let cfg = LambdaConfig::default();
    for case in 0..100 {
        let level = random_level(2, &mut r);
        let w1 = random_hermitian(dims, &mut r);
        let w2 = random_hermitian(dims, &mut r);
        let l1 = lambda_numeric(&w1, &level, &cfg).unwrap().value;
        let l2 = lambda_numeric(&w2, &level, &cfg).unwrap().value;
        let dist = operator_norm(&(w1.matrix() - w2.matrix()));
        if (l1 - l2).abs() > dist + 2e-6 {
            failures.push(format!("lipschitz case {case}: |{l1} - {l2}| > {dist}"));
        }
        for tau in [0.25, 0.5, 0.75] {
            let mix = w1.combine(tau, &w2, 1.0 - tau).unwrap();
            let lm = lambda_numeric(&mix, &level, &cfg).unwrap().value;
            let chord = tau * l1 + (1.0 - tau) * l2;
            if lm < chord - 2e-6 {
                failures.push(format!("concavity case {case} tau={tau}: {lm} < {chord}"));
            }
        }
    }

    // twirl idempotence on the isotropic slice
    for case in 0..100 {
        let d = 2 + case % 4;
        let a = r.random_range(-2.0..2.0);
        let b = r.random_range(-2.0..2.0);
        let c = IsotropicCoefficients::new(a, b, d).unwrap();
        let back = twirl_isotropic(&c.to_operator()).unwrap();
        let scale = a.abs().max(b.abs()).max(1.0);
        if (back.a - a).abs() > 1e-12 * scale || (back.b - b).abs() > 1e-12 * scale || back.d != d {
            failures.push(format!("twirl case {case}: ({a}, {b}) -> ({}, {})", back.a, back.b));
        }
    }
    report(10, "property suites", &failures, started);
}
