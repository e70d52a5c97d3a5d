use proptest::prelude::*;
use tiltperc::lattice::{plane_floor, pyramid_floor, CoarseBox};
use tiltperc::{Alpha, ConfigField, SiteConfig, TiltSpec};

fn alpha_strategy() -> impl Strategy<Value = Alpha> {
    (0i64..9, 1i64..10)
        .prop_filter("alpha < 1", |(n, d)| n < d)
        .prop_map(|(n, d)| Alpha::new(n, d).unwrap())
}

fn floor_by_enumeration(bar: &[i64], alpha: Alpha, k: usize) -> i64 {
    let d = bar.len();
    let mut best = i64::MIN;
    for code in 0..3usize.pow(d as u32) {
        let mut c = code;
        let eta: Vec<i64> = (0..d)
            .map(|_| {
                let e = (c % 3) as i64 - 1;
                c /= 3;
                e
            })
            .collect();
        if eta.iter().map(|e| e.abs()).sum::<i64>() != k as i64 {
            continue;
        }
        let s: i64 = eta.iter().zip(bar).map(|(e, x)| e * x).sum();
        best = best.max(alpha.floor_mul(s));
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pyramid_matches_enumeration(a in alpha_strategy(), bar in prop::collection::vec(-50i64..50, 1..=3), kk in 0usize..4) {
        let k = kk.min(bar.len());
        let tilt = TiltSpec::canonical(a, bar.len(), k).unwrap();
        prop_assert_eq!(pyramid_floor(&bar, &tilt), floor_by_enumeration(&bar, a, k));
    }

    #[test]
    fn plane_below_pyramid(a in alpha_strategy(), bar in prop::collection::vec(-50i64..50, 1..=4), kk in 0usize..5) {
        let k = kk.min(bar.len());
        let tilt = TiltSpec::canonical(a, bar.len(), k).unwrap();
        prop_assert!(plane_floor(&bar, &tilt) <= pyramid_floor(&bar, &tilt));
        // equal on the nonnegative orthant of the tilted coordinates
        let sat: Vec<i64> = bar.iter().enumerate().map(|(i, &x)| if i < k { x.abs() } else { 0 }).collect();
        prop_assert_eq!(plane_floor(&sat, &tilt), pyramid_floor(&sat, &tilt));
    }

    #[test]
    fn pyramid_is_plane_on_sorted_magnitudes(a in alpha_strategy(), bar in prop::collection::vec(-50i64..50, 1..=4), kk in 0usize..5) {
        let k = kk.min(bar.len());
        let tilt = TiltSpec::canonical(a, bar.len(), k).unwrap();
        let mut mags: Vec<i64> = bar.iter().map(|x| x.abs()).collect();
        mags.sort_unstable_by(|x, y| y.cmp(x));
        prop_assert_eq!(plane_floor(&mags, &tilt), pyramid_floor(&bar, &tilt));
    }

    #[test]
    fn boxes_partition_the_lattice(a in alpha_strategy(), y in prop::collection::vec(-1000i64..1000, 2..=4)) {
        let d = y.len() - 1;
        let tilt = TiltSpec::canonical(a, d, d).unwrap();
        let home = CoarseBox::containing(&y, &tilt);
        prop_assert!(home.contains(&y, &tilt));
        let mut owners = 0;
        for code in 0..3usize.pow(d as u32 + 1) {
            let mut c = code;
            let a2 = home.a.iter().map(|v| { let o = (c % 3) as i64 - 1; c /= 3; v + o }).collect();
            owners += CoarseBox { a: a2 }.contains(&y, &tilt) as usize;
        }
        prop_assert_eq!(owners, 1);
    }

    #[test]
    fn threshold_coupling_is_monotone(seed in any::<u64>(), q1 in 0.0f64..1.0, q2 in 0.0f64..1.0, site in prop::collection::vec(-100i64..100, 1..=4)) {
        let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
        let f = ConfigField::new(lo, seed);
        if f.is_closed(&site) {
            prop_assert!(f.at_q(hi).is_closed(&site));
        }
    }
}

#[test]
fn closed_density_matches_q() {
    for q in [0.1, 0.35, 0.8] {
        let f = ConfigField::new(q, 77);
        let n = 200 * 200;
        let closed = (0..200i64)
            .flat_map(|x| (0..200i64).map(move |h| [x, h]))
            .filter(|s| f.is_closed(s))
            .count();
        let p = closed as f64 / n as f64;
        assert!((p - q).abs() < 4.0 * (q * (1.0 - q) / n as f64).sqrt(), "q={q}: {p}");
    }
}
