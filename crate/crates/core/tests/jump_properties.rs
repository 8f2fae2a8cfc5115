//! Properties of the jump map `F_m(theta) = f^-1(min(1, f(theta) + m eps))`.

use proptest::prelude::*;
use pulsecouple_core::CurveSpec;

const EPS: f64 = 0.001;

fn curve() -> CurveSpec {
    CurveSpec::exponential(1.05).unwrap()
}

fn jump(theta: f64, m: u32) -> f64 {
    curve().jump(EPS, theta, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn round_trip(x in 0.0f64..=1.0) {
        let c = curve();
        prop_assert!((c.eval(c.inverse(x).unwrap()).unwrap() - x).abs() < 1e-10);
    }

    #[test]
    fn range(theta in 0.0f64..=1.0, m in 0u32..2000) {
        let v = jump(theta, m);
        prop_assert!((0.0..=1.0).contains(&v));
        let c = curve();
        let reaches = c.eval(theta).unwrap() + f64::from(m) * EPS >= 1.0;
        prop_assert_eq!(reaches, v == 1.0);
    }

    #[test]
    fn monotone_in_theta(a in 0.0f64..1.0, b in 0.0f64..1.0, m in 0u32..300) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(lo < hi);
        prop_assert!(jump(lo, m) <= jump(hi, m));
        if jump(lo, m) < 1.0 {
            prop_assert!(jump(lo, m) < jump(hi, m));
        }
    }

    #[test]
    fn monotone_in_count(theta in 0.0f64..1.0, m1 in 0u32..300, extra in 1u32..300) {
        let m2 = m1 + extra;
        prop_assert!(jump(theta, m1) <= jump(theta, m2));
        if jump(theta, m1) < 1.0 {
            prop_assert!(jump(theta, m1) < jump(theta, m2));
        }
    }

    #[test]
    fn expansive(theta in 1e-3f64..0.999, m in 1u32..300) {
        let h = 1e-6;
        let (lo, hi) = (jump(theta - h, m), jump(theta + h, m));
        prop_assume!(lo > 0.0 && hi < 1.0);
        prop_assert!((hi - lo) / (2.0 * h) > 1.0 + 1e-9);
    }

    #[test]
    fn superadditive(theta in 0.0f64..0.9, frac in 1e-4f64..1.0, m in 0u32..100) {
        let delta = frac * (1.0 - theta) * 0.5;
        let rhs = jump(theta + delta, m);
        prop_assume!(rhs < 1.0);
        let lhs = jump(theta, m) + delta;
        if m == 0 {
            prop_assert!((lhs - rhs).abs() < 1e-15);
        } else {
            prop_assert!(lhs < rhs);
        }
    }

    #[test]
    fn composes(theta in 0.0f64..=1.0, m in 0u32..500, n in 0u32..500) {
        prop_assert!((jump(jump(theta, m), n) - jump(theta, m + n)).abs() < 1e-10);
    }

    #[test]
    fn chained_bound(
        theta in 0.0f64..0.5,
        links in proptest::collection::vec((0u32..60, 0.0f64..0.1), 1..6),
    ) {
        let mut lhs = theta;
        let mut total_m = 0;
        let mut total_d = 0.0;
        for &(m, d) in &links {
            lhs = jump(lhs.min(1.0), m) + d;
            total_m += m;
            total_d += d;
        }
        prop_assume!(theta + total_d <= 1.0);
        let rhs = jump(theta + total_d, total_m);
        prop_assume!(rhs < 1.0);
        prop_assert!(lhs <= rhs + 1e-12);
    }
}
