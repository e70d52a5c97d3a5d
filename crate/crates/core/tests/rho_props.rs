use proptest::prelude::*;
use tiltperc::lambda::check_lambda_path;
use tiltperc::rho::{decompose, max_closed_dp, max_closed_table, rho_bridge};
use tiltperc::{ConfigField, SiteConfig};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn superadditive_along_argmax(seed in any::<u64>(), q in 0.05f64..0.95, n in 0usize..15, extra in 0usize..15) {
        let f = ConfigField::new(q, seed);
        let dec = decompose(&f, 2, n, n + extra);
        prop_assert!(dec.y0m >= dec.y0n + dec.ynm);
    }

    #[test]
    fn one_more_level_adds_at_most_one(seed in any::<u64>(), q in 0.05f64..0.95, n in 0usize..30, d in 1usize..=3) {
        let f = ConfigField::new(q, seed);
        let a = max_closed_dp(&f, d, n);
        let b = max_closed_dp(&f, d, n + 1);
        prop_assert!(a <= b && b <= a + 1);
        prop_assert!(a as usize <= n);
    }

    #[test]
    fn table_obeys_bellman(seed in any::<u64>(), q in 0.1f64..0.9, n in 1usize..12) {
        let f = ConfigField::new(q, seed);
        let prev = max_closed_table(&f, &[0, 0], n - 1);
        let cur = max_closed_table(&f, &[0, 0], n);
        for (x, &v) in cur.points.iter().zip(&cur.values) {
            let best = (0..2)
                .filter(|&j| x[j] > 0)
                .map(|j| { let mut p = x.clone(); p[j] -= 1; prev.value_at(&p).unwrap() })
                .max()
                .unwrap();
            prop_assert_eq!(v, best + f.is_closed(x) as u32);
        }
    }

    #[test]
    fn bridge_replays_as_lambda_path(seed in any::<u64>(), q in 0.05f64..0.95, n in 1usize..40, d in 1usize..=3) {
        let f = ConfigField::new(q, seed);
        let b = rho_bridge(&f, d, n);
        prop_assert!(check_lambda_path(&f, &b.forward_path()).is_ok());
        prop_assert!(b.terminal_height <= n as i64 - b.closed as i64 + 1);
    }
}
