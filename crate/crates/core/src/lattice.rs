//! Tilted planes, inverted pyramids and the coarse-grained box partition of
//! `Z^(d+1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Alpha;

/// Problem parameters: tilt `alpha`, base dimension `d`, and the tilt
/// directions `eta` with `k = |eta|_1` nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TiltSpec {
    alpha: Alpha,
    eta: Vec<i8>,
    k: usize,
    /// Test hook, see [`TiltSpec::with_floor_fault`].
    #[serde(skip)]
    fault: bool,
}

impl TiltSpec {
    pub fn new(alpha: Alpha, eta: Vec<i8>) -> Result<Self> {
        if eta.is_empty() {
            return Err(Error::InvalidTilt("dimension d must be >= 1".into()));
        }
        if let Some(bad) = eta.iter().find(|e| !(-1..=1).contains(*e)) {
            return Err(Error::InvalidTilt(format!(
                "eta entries must be in {{-1, 0, 1}}, got {bad}"
            )));
        }
        let k = eta.iter().filter(|&&e| e != 0).count();
        Ok(TiltSpec {
            alpha,
            eta,
            k,
            fault: false,
        })
    }

    /// `eta = (1, ..., 1, 0, ..., 0)` with `k` ones.
    pub fn canonical(alpha: Alpha, d: usize, k: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidTilt("dimension d must be >= 1".into()));
        }
        if k > d {
            return Err(Error::InvalidTilt(format!("k = {k} exceeds d = {d}")));
        }
        let eta = (0..d).map(|i| (i < k) as i8).collect();
        TiltSpec::new(alpha, eta)
    }

    pub fn canonicalize(&self) -> TiltSpec {
        let mut t = TiltSpec::canonical(self.alpha, self.d(), self.k).expect("valid tilt stays valid");
        t.fault = self.fault;
        t
    }

    /// Fault injection for self-checks: every floor computed from this tilt
    /// is raised by one on columns with an odd coordinate sum.
    #[doc(hidden)]
    pub fn with_floor_fault(mut self) -> Self {
        self.fault = true;
        self
    }

    #[inline]
    fn fault_shift(&self, bar: &[i64]) -> i64 {
        if self.fault {
            bar.iter().sum::<i64>().rem_euclid(2)
        } else {
            0
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.eta.iter().enumerate().all(|(i, &e)| e == (i < self.k) as i8)
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn d(&self) -> usize {
        self.eta.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eta(&self) -> &[i8] {
        &self.eta
    }

    #[inline]
    pub fn eta_dot(&self, bar: &[i64]) -> i64 {
        self.eta.iter().zip(bar).map(|(&e, &x)| e as i64 * x).sum()
    }
}

/// A site of `Z^(d+1)`: `bar` is the first `d` coordinates, `height` the last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub coords: Vec<i64>,
}

impl Site {
    pub fn new(bar: &[i64], height: i64) -> Self {
        let mut coords = bar.to_vec();
        coords.push(height);
        Site { coords }
    }

    pub fn origin(d: usize) -> Self {
        Site { coords: vec![0; d + 1] }
    }

    pub fn bar(&self) -> &[i64] {
        &self.coords[..self.coords.len() - 1]
    }

    pub fn height(&self) -> i64 {
        *self.coords.last().expect("sites have at least one coordinate")
    }

    pub fn d(&self) -> usize {
        self.coords.len() - 1
    }
}

impl From<Vec<i64>> for Site {
    fn from(coords: Vec<i64>) -> Self {
        Site { coords }
    }
}

/// `floor(alpha * sum_i eta_i x_i)`.
#[inline]
pub fn plane_floor(bar: &[i64], tilt: &TiltSpec) -> i64 {
    tilt.alpha.floor_mul(tilt.eta_dot(bar)) + tilt.fault_shift(bar)
}

/// Maximum of the plane floor over every `eta'` with `|eta'|_1 = k`; the
/// maximizer puts signed ones on the `k` largest `|x_i|`.
pub fn pyramid_floor(bar: &[i64], tilt: &TiltSpec) -> i64 {
    let mut mags: Vec<i64> = bar.iter().map(|x| x.abs()).collect();
    mags.sort_unstable_by(|a, b| b.cmp(a));
    let s: i64 = mags.iter().take(tilt.k).sum();
    tilt.alpha.floor_mul(s) + tilt.fault_shift(bar)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FloorKind {
    Plane,
    Pyramid,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FloorSpec {
    pub kind: FloorKind,
    pub tilt: TiltSpec,
}

impl FloorSpec {
    pub fn plane(tilt: TiltSpec) -> Self {
        FloorSpec {
            kind: FloorKind::Plane,
            tilt,
        }
    }

    pub fn pyramid(tilt: TiltSpec) -> Self {
        FloorSpec {
            kind: FloorKind::Pyramid,
            tilt,
        }
    }

    pub fn d(&self) -> usize {
        self.tilt.d()
    }

    #[inline]
    pub fn floor(&self, bar: &[i64]) -> i64 {
        match self.kind {
            FloorKind::Plane => plane_floor(bar, &self.tilt),
            FloorKind::Pyramid => pyramid_floor(bar, &self.tilt),
        }
    }
}

/// Coarse-grained coordinates `a(y)` of the box containing `y`.
pub fn box_coords(y: &[i64], tilt: &TiltSpec) -> Vec<i64> {
    let d = tilt.d();
    assert_eq!(y.len(), d + 1, "site dimension must be d + 1");
    let alpha = tilt.alpha;
    let comp = alpha.den() - alpha.num();
    let mut a: Vec<i64> = (0..d)
        .map(|i| {
            if tilt.eta[i] == 0 {
                y[i]
            } else {
                (comp as i128 * y[i] as i128).div_euclid(alpha.den() as i128) as i64
            }
        })
        .collect();
    a.push(y[d] - plane_floor(&y[..d], tilt));
    a
}

/// A cell `B_a = B_0 + v(a)` of the coarse-grained partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoarseBox {
    pub a: Vec<i64>,
}

impl CoarseBox {
    pub fn containing(y: &[i64], tilt: &TiltSpec) -> Self {
        CoarseBox { a: box_coords(y, tilt) }
    }

    /// Anchor `v(a)` as floats.
    pub fn anchor(&self, tilt: &TiltSpec) -> Vec<f64> {
        let d = tilt.d();
        let alpha = tilt.alpha.to_f64();
        let inv = 1.0 / tilt.alpha.complement();
        let mut v = vec![0.0; d + 1];
        for i in 0..d {
            if tilt.eta[i] == 0 {
                v[i] = self.a[i] as f64;
            } else {
                v[i] = self.a[i] as f64 * inv;
                v[d] += self.a[i] as f64 * inv * alpha * tilt.eta[i] as f64;
            }
        }
        v[d] += self.a[d] as f64;
        v
    }

    /// Exact membership test `y - v(a) in B_0`, evaluated in integers scaled
    /// by `den * (den - num)`.
    pub fn contains(&self, y: &[i64], tilt: &TiltSpec) -> bool {
        let d = tilt.d();
        let num = tilt.alpha.num() as i128;
        let den = tilt.alpha.den() as i128;
        let comp = den - num;
        let scale = den * comp;
        // r_i * scale for the horizontal coordinates, and alpha * sum eta_i r_i * scale.
        let mut tilt_sum = 0i128;
        let mut v_top = self.a[d] as i128 * scale;
        for i in 0..d {
            let yi = y[i] as i128;
            let ai = self.a[i] as i128;
            if tilt.eta[i] == 0 {
                if yi - ai != 0 {
                    return false;
                }
            } else {
                let r = yi * scale - ai * den * den;
                if r < 0 || r >= den * den {
                    return false;
                }
                let eta = tilt.eta[i] as i128;
                tilt_sum += num * eta * (r / den);
                v_top += ai * num * eta * den;
            }
        }
        let r_top = y[d] as i128 * scale - v_top;
        tilt_sum - scale < r_top && r_top <= tilt_sum
    }
}

/// Allowed coarse-grained step differences `a' - a`.
pub fn cg_step_set(tilt: &TiltSpec) -> Vec<Vec<i64>> {
    let d = tilt.d();
    let unit = |i: usize, v: i64| {
        let mut e = vec![0i64; d + 1];
        e[i] = v;
        e
    };
    let mut steps = vec![unit(d, 1)];
    for i in 0..d {
        if tilt.eta[i] != 0 {
            steps.push(unit(i, -(tilt.eta[i] as i64)));
        }
    }
    steps.push(unit(d, -1));
    for i in 0..d {
        for s in [1, -1] {
            let mut e = unit(i, s);
            e[d] = -1;
            steps.push(e);
        }
    }
    for i in 0..d {
        if tilt.eta[i] != 0 {
            let mut e = unit(i, tilt.eta[i] as i64);
            e[d] = -2;
            steps.push(e);
        }
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn alpha(n: i64, d: i64) -> Alpha {
        Alpha::new(n, d).unwrap()
    }

    fn pyramid_brute(bar: &[i64], tilt: &TiltSpec) -> i64 {
        let d = bar.len();
        let mut best = i64::MIN;
        for code in 0..3usize.pow(d as u32) {
            let mut c = code;
            let mut eta = Vec::with_capacity(d);
            for _ in 0..d {
                eta.push((c % 3) as i8 - 1);
                c /= 3;
            }
            if eta.iter().filter(|&&e| e != 0).count() != tilt.k() {
                continue;
            }
            let t = TiltSpec::new(tilt.alpha(), eta).unwrap();
            best = best.max(plane_floor(bar, &t));
        }
        best
    }

    #[test]
    fn plane_floor_examples() {
        let t = TiltSpec::new(alpha(7, 10), vec![1, 1]).unwrap();
        assert_eq!(plane_floor(&[0, 0], &t), 0);
        let t = TiltSpec::new(alpha(1, 2), vec![1]).unwrap();
        assert_eq!(plane_floor(&[3], &t), 1);
        assert_eq!(plane_floor(&[-3], &t), -2);
    }

    #[test]
    fn pyramid_floor_examples() {
        let t = TiltSpec::canonical(alpha(1, 2), 1, 1).unwrap();
        assert_eq!(pyramid_floor(&[0], &t), 0);
        assert_eq!(pyramid_floor(&[3], &t), 1);
        let t = TiltSpec::canonical(alpha(1, 2), 2, 1).unwrap();
        assert_eq!(pyramid_floor(&[2, -3], &t), 1);
        assert_eq!(pyramid_brute(&[2, -3], &t), 1);
    }

    #[test]
    fn canonicalization_keeps_k() {
        let t = TiltSpec::new(alpha(1, 3), vec![0, -1, 1, 0]).unwrap();
        assert_eq!(t.k(), 2);
        let c = t.canonicalize();
        assert_eq!(c.eta(), &[1, 1, 0, 0]);
        assert!(c.is_canonical());
        assert!(!t.is_canonical());
        assert!(TiltSpec::canonical(alpha(1, 3), 2, 3).is_err());
        assert!(TiltSpec::new(alpha(1, 3), vec![2]).is_err());
    }

    #[test]
    fn pyramid_fast_path_matches_enumeration_exhaustively() {
        for d in 1..=3usize {
            for k in 0..=d {
                for (n, m) in [(0, 1), (1, 4), (1, 2), (3, 4), (2, 3)] {
                    let t = TiltSpec::canonical(alpha(n, m), d, k).unwrap();
                    let span = -4i64..=4;
                    let mut bar = vec![0i64; d];
                    let total = 9usize.pow(d as u32);
                    for code in 0..total {
                        let mut c = code;
                        for x in bar.iter_mut() {
                            *x = (c % 9) as i64 + span.start();
                            c /= 9;
                        }
                        assert_eq!(pyramid_floor(&bar, &t), pyramid_brute(&bar, &t), "{bar:?} {t:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn box_examples() {
        let t = TiltSpec::canonical(alpha(1, 2), 1, 1).unwrap();
        assert_eq!(box_coords(&[0, 0], &t), vec![0, 0]);
        assert_eq!(box_coords(&[3, 2], &t), vec![1, 1]);
        assert!(CoarseBox { a: vec![1, 1] }.contains(&[3, 2], &t));
        assert!(!CoarseBox { a: vec![1, 0] }.contains(&[3, 2], &t));
    }

    #[test]
    fn anchor_of_origin_box_is_zero() {
        let t = TiltSpec::canonical(alpha(1, 3), 2, 1).unwrap();
        assert_eq!(CoarseBox { a: vec![0, 0, 0] }.anchor(&t), vec![0.0; 3]);
        let v = CoarseBox { a: vec![2, 0, 1] }.anchor(&t);
        assert!((v[0] - 3.0).abs() < 1e-12 && (v[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cg_steps_d1() {
        let t = TiltSpec::canonical(alpha(1, 2), 1, 1).unwrap();
        let mut s = cg_step_set(&t);
        s.sort();
        let mut want = vec![
            vec![0, 1],
            vec![-1, 0],
            vec![0, -1],
            vec![1, -1],
            vec![-1, -1],
            vec![1, -2],
        ];
        want.sort();
        assert_eq!(s, want);
    }

    #[test]
    fn cg_steps_cardinality_and_heights() {
        for d in 1..=4 {
            for k in 0..=d {
                let t = TiltSpec::canonical(alpha(1, 3), d, k).unwrap();
                let s = cg_step_set(&t);
                assert_eq!(s.len(), 1 + k + 1 + 2 * d + k);
                let mut u = s.clone();
                u.sort();
                u.dedup();
                assert_eq!(u.len(), s.len());
                for step in &s {
                    assert!([1, 0, -1, -2].contains(&step[d]));
                }
                if k == 0 {
                    assert!(s.iter().all(|st| st[d] != 0));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn plane_below_pyramid(x in proptest::collection::vec(-50i64..50, 1..4), n in 0i64..4, k_frac in 0usize..4) {
            let d = x.len();
            let k = k_frac.min(d);
            let t = TiltSpec::canonical(alpha(n, 4), d, k).unwrap();
            prop_assert!(plane_floor(&x, &t) <= pyramid_floor(&x, &t));
            let abs: Vec<i64> = x.iter().map(|v| v.abs()).collect();
            let mut sorted = abs.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            // canonical plane on sorted magnitudes attains the pyramid value
            prop_assert_eq!(plane_floor(&sorted, &t), pyramid_floor(&x, &t));
            let tilted: Vec<i64> = (0..d).map(|i| if i < k { abs[i] } else { 0 }).collect();
            prop_assert_eq!(plane_floor(&tilted, &t), pyramid_floor(&tilted, &t));
        }

        #[test]
        fn sign_patterns_share_pyramid(x in proptest::collection::vec(-30i64..30, 2..4), flips in proptest::collection::vec(any::<bool>(), 4)) {
            let d = x.len();
            let eta: Vec<i8> = (0..d).map(|i| if i == 0 { if flips[0] { -1 } else { 1 } } else if flips[i] { 0 } else { -1 }).collect();
            let t = TiltSpec::new(alpha(2, 5), eta).unwrap();
            prop_assert_eq!(pyramid_floor(&x, &t), pyramid_floor(&x, &t.canonicalize()));
        }
    }
}
