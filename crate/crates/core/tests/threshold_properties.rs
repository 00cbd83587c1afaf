use fracpos::{f_d, fsn_isotropic, t_star, tau_depolarizing, FractionalLevel};
use proptest::prelude::*;

proptest! {
    #[test]
    fn fsn_inverts_f_d(d in 2usize..=8, u in 0.0..=1.0f64) {
        let df = d as f64;
        let f = 1.0 / df + (1.0 - 1.0 / df) * u;
        prop_assume!(f > 1.0 / df && f <= 1.0);
        let alpha = fsn_isotropic(f, d).unwrap();
        let back = f_d(d, &FractionalLevel::new(alpha, d).unwrap());
        prop_assert!((back - f).abs() <= 1e-10);
    }

    #[test]
    fn tau_inverts_t_star(d in 2usize..=8, u in 0.0..1.0f64) {
        let df = d as f64;
        let t = 1.0 / df + (1.0 - 1.0 / df) * u;
        prop_assume!(t > 1.0 / df && t < 1.0);
        let alpha = tau_depolarizing(t, d).unwrap();
        let back = t_star(&FractionalLevel::new(alpha, d).unwrap());
        prop_assert!((back - t).abs() <= 1e-10);
    }

    #[test]
    fn fsn_ceiling_is_the_integer_index(d in 2usize..=8, f in 0.0..=1.0f64) {
        let alpha = fsn_isotropic(f, d).unwrap();
        let classical = (1..=d).find(|&k| f <= k as f64 / d as f64).unwrap();
        prop_assert_eq!(alpha.ceil() as usize, classical);
    }

    #[test]
    fn thresholds_are_strictly_monotone(d in 2usize..=8, mut grid in prop::collection::vec(0.0..=1.0f64, 2..20)) {
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let levels: Vec<FractionalLevel> =
            grid.iter().map(|u| FractionalLevel::new(1.0 + u * (d as f64 - 1.0), d).unwrap()).collect();
        for w in levels.windows(2) {
            if w[1].alpha() > w[0].alpha() {
                prop_assert!(t_star(&w[1]) < t_star(&w[0]));
                prop_assert!(f_d(d, &w[1]) > f_d(d, &w[0]));
            }
        }
    }
}

/// One-sided limit of `g` at `x0`, extrapolated from samples at `ε`, `ε/4`,
/// `ε/16` under the expansion `L + a√ε + bε`. Approaching an integer level
/// from below both inverses behave like `√ε` because `f_d` and `t*` have a
/// vanishing one-sided derivative there; elsewhere `a = 0`.
fn one_sided_limit(g: impl Fn(f64) -> f64, x0: f64, side: f64) -> f64 {
    let eps = 1e-10;
    let at = |scale: f64| g(x0 + side * eps * scale);
    let h1 = 2.0 * at(0.25) - at(1.0);
    let h2 = 2.0 * at(0.0625) - at(0.25);
    (4.0 * h2 - h1) / 3.0
}

#[test]
fn continuous_at_breakpoints() {
    for d in 2..=8 {
        let df = d as f64;
        let fsn = |f: f64| fsn_isotropic(f, d).unwrap();
        let tau = |t: f64| tau_depolarizing(t, d).unwrap();
        for k in 1..=d {
            let f = k as f64 / df;
            let at = fsn(f);
            assert!((one_sided_limit(fsn, f, -1.0) - at).abs() <= 1e-9, "fsn left of {f}, d={d}");
            if k < d {
                assert!((one_sided_limit(fsn, f, 1.0) - at).abs() <= 1e-9, "fsn right of {f}, d={d}");
            }
        }
        for k in 1..=d {
            let t = 1.0 / k as f64;
            let at = tau(t);
            if k > 1 {
                assert!((one_sided_limit(tau, t, 1.0) - at).abs() <= 1e-9, "tau right of {t}, d={d}");
            }
            if k < d {
                assert!((one_sided_limit(tau, t, -1.0) - at).abs() <= 1e-9, "tau left of {t}, d={d}");
            }
        }
    }
}
