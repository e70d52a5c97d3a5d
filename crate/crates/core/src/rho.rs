//! Oriented rho-percolation in `Z^d`.
//!
//! `Y_{0,n}` is the largest number of closed sites collected by an oriented
//! path of `n` steps from the origin (the origin itself is not counted). It is
//! computed level by level over the simplex slices `{z in N_0^d : |z|_1 = m}`.
//!
//! The projection of a `(d+1)`-dimensional field to `Z^d` through the height
//! map `H` links these paths to reversed admissible lambda-paths.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ConfigField, SiteConfig};
use crate::lambda::shell_points;
use crate::lattice::Site;
use crate::stats::{map_replicas, mean_se, ReplicaPlan};

/// Number of points of `N_0^d` with `|z|_1 = m`.
fn slice_len(d: usize, m: usize) -> usize {
    // binom(m + d - 1, d - 1)
    let mut b: u128 = 1;
    for i in 1..d as u128 {
        b = b * (m as u128 + i) / i;
    }
    b as usize
}

/// Position of `z` in the lexicographic order of its slice.
fn slice_rank(z: &[i64]) -> usize {
    let d = z.len();
    let mut left: i64 = z.iter().sum();
    let mut rank = 0;
    for (i, &zi) in z.iter().enumerate().take(d - 1) {
        for v in 0..zi {
            rank += slice_len(d - i - 1, (left - v) as usize);
        }
        left -= zi;
    }
    rank
}

/// One level of the oriented dynamic program.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedDPTable {
    pub level: usize,
    /// Slice points in lexicographic order, relative to the start.
    pub points: Vec<Vec<i64>>,
    pub values: Vec<u32>,
}

impl DirectedDPTable {
    pub fn max(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Lexicographically lowest point attaining the maximum.
    pub fn argmax(&self) -> &[i64] {
        let m = self.max();
        let i = self.values.iter().position(|&v| v == m).unwrap_or(0);
        &self.points[i]
    }

    pub fn value_at(&self, z: &[i64]) -> Option<u32> {
        if z.iter().any(|&c| c < 0) || z.iter().sum::<i64>() != self.level as i64 {
            return None;
        }
        Some(self.values[slice_rank(z)])
    }
}

fn advance<F: SiteConfig>(
    field: &F,
    start: &[i64],
    prev: &[u32],
    level: usize,
    buf: &mut [i64],
) -> (Vec<Vec<i64>>, Vec<u32>) {
    let d = start.len();
    let points = shell_points(d, level);
    let mut values = Vec::with_capacity(points.len());
    let mut pz = vec![0i64; d];
    for z in &points {
        let mut best = 0u32;
        for j in 0..d {
            if z[j] > 0 {
                pz.copy_from_slice(z);
                pz[j] -= 1;
                best = best.max(prev[slice_rank(&pz)]);
            }
        }
        for i in 0..d {
            buf[i] = start[i] + z[i];
        }
        values.push(best + field.is_closed(buf) as u32);
    }
    (points, values)
}

/// Level-`n` table of best closed counts over oriented paths from `start`,
/// keeping only one level in memory.
pub fn max_closed_table<F: SiteConfig>(field: &F, start: &[i64], n: usize) -> DirectedDPTable {
    let d = start.len();
    assert!(d >= 1, "d must be >= 1");
    let mut buf = vec![0i64; d];
    let mut points = vec![vec![0i64; d]];
    let mut values = vec![0u32];
    for level in 1..=n {
        (points, values) = advance(field, start, &values, level, &mut buf);
    }
    DirectedDPTable {
        level: n,
        points,
        values,
    }
}

/// `Y_{0,n}` on a field over `Z^d`.
pub fn max_closed_dp<F: SiteConfig>(field: &F, d: usize, n: usize) -> u32 {
    max_closed_table(field, &vec![0; d], n).max()
}

/// `Y_{0,n}`, the recorded endpoint `X̂_n`, and `Y_{n,m}` from that endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub y0n: u32,
    pub endpoint: Vec<i64>,
    pub ynm: u32,
    pub y0m: u32,
}

pub fn decompose<F: SiteConfig>(field: &F, d: usize, n: usize, m: usize) -> Decomposition {
    assert!(m >= n);
    let origin = vec![0; d];
    let t = max_closed_table(field, &origin, n);
    let endpoint = t.argmax().to_vec();
    Decomposition {
        y0n: t.max(),
        ynm: max_closed_table(field, &endpoint, m - n).max(),
        y0m: max_closed_dp(field, d, m),
        endpoint,
    }
}

/// Mean of `Y_{0,n}/n` over replicas. Since `E[Y_{0,n}]` is superadditive,
/// the finite-`n` mean sits below the limit `γ(q)` in expectation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaEstimate {
    pub q: f64,
    pub d: usize,
    pub n: usize,
    pub replicas: usize,
    pub gamma_hat: f64,
    pub stderr: f64,
}

pub fn gamma_estimate(q: f64, d: usize, n: usize, replicas: usize, seed: u64) -> Result<GammaEstimate> {
    if n == 0 || replicas == 0 || d == 0 {
        return Err(Error::domain(
            "gamma estimate",
            format!("need n, replicas, d >= 1 (got n={n}, replicas={replicas}, d={d})"),
        ));
    }
    let plan = ReplicaPlan::new(replicas, seed);
    let xs = map_replicas(replicas, |i| {
        let f = ConfigField::new(q, plan.seed(i));
        max_closed_dp(&f, d, n) as f64 / n as f64
    });
    let (m, se) = mean_se(&xs);
    Ok(GammaEstimate {
        q,
        d,
        n,
        replicas,
        gamma_hat: m,
        stderr: se,
    })
}

/// Estimates at `n` and `2n` and the first-order extrapolation
/// `2 γ̂(2n) - γ̂(n)` (assumes a `1/n` bias).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaRichardson {
    pub at_n: GammaEstimate,
    pub at_2n: GammaEstimate,
    pub extrapolated: f64,
}

pub fn gamma_richardson(q: f64, d: usize, n: usize, replicas: usize, seed: u64) -> Result<GammaRichardson> {
    let at_n = gamma_estimate(q, d, n, replicas, seed)?;
    let at_2n = gamma_estimate(q, d, 2 * n, replicas, seed)?;
    Ok(GammaRichardson {
        at_n,
        at_2n,
        extrapolated: 2.0 * at_2n.gamma_hat - at_n.gamma_hat,
    })
}

fn check_orthant(bar: &[i64]) -> Result<()> {
    if bar.iter().any(|&c| c < 0) {
        return Err(Error::domain("height map point", format!("{bar:?} is not in N_0^d")));
    }
    Ok(())
}

/// `H_ω` on every slice up to `levels`, with the minimizing predecessor.
#[derive(Clone, Debug)]
pub struct HeightTable {
    d: usize,
    /// `heights[m][rank]`.
    heights: Vec<Vec<i64>>,
    /// Axis of the predecessor used, `usize::MAX` at the origin.
    via: Vec<Vec<usize>>,
}

impl HeightTable {
    /// Builds the table for a field over `Z^{d+1}`.
    pub fn new<F: SiteConfig>(field: &F, d: usize, levels: usize) -> Self {
        let mut heights = vec![vec![0i64]];
        let mut via = vec![vec![usize::MAX]];
        let mut buf = vec![0i64; d + 1];
        let mut pz = vec![0i64; d];
        for m in 1..=levels {
            let pts = shell_points(d, m);
            let mut hs = Vec::with_capacity(pts.len());
            let mut vs = Vec::with_capacity(pts.len());
            for z in &pts {
                let mut best = (i64::MAX, usize::MAX);
                for j in 0..d {
                    if z[j] == 0 {
                        continue;
                    }
                    pz.copy_from_slice(z);
                    pz[j] -= 1;
                    let h = heights[m - 1][slice_rank(&pz)];
                    buf[..d].copy_from_slice(&pz);
                    buf[d] = h;
                    // the rule is nondecreasing in h, so the smallest
                    // predecessor height gives the smallest successor
                    let next = h + !field.is_closed(&buf) as i64;
                    if next < best.0 {
                        best = (next, j);
                    }
                }
                hs.push(best.0);
                vs.push(best.1);
            }
            heights.push(hs);
            via.push(vs);
        }
        HeightTable { d, heights, via }
    }

    pub fn levels(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn get(&self, bar: &[i64]) -> Option<i64> {
        if bar.iter().any(|&c| c < 0) {
            return None;
        }
        let m = bar.iter().sum::<i64>() as usize;
        self.heights.get(m).map(|l| l[slice_rank(bar)])
    }

    /// Oriented path `0 = x̄_0, ..., x̄_m = bar` realizing `H(bar)`.
    pub fn path_to(&self, bar: &[i64]) -> Option<Vec<Vec<i64>>> {
        self.get(bar)?;
        let mut out = vec![bar.to_vec()];
        let mut cur = bar.to_vec();
        let mut m = cur.iter().sum::<i64>() as usize;
        while m > 0 {
            let j = self.via[m][slice_rank(&cur)];
            cur[j] -= 1;
            m -= 1;
            out.push(cur.clone());
        }
        out.reverse();
        debug_assert_eq!(out[0], vec![0; self.d]);
        Some(out)
    }
}

/// `H_ω(x̄)` for a field over `Z^{d+1}`.
pub fn height_map<F: SiteConfig>(field: &F, bar: &[i64]) -> Result<i64> {
    check_orthant(bar)?;
    let m = bar.iter().sum::<i64>() as usize;
    Ok(HeightTable::new(field, bar.len(), m).get(bar).expect("inside table"))
}

/// The projected configuration `T(ω)` over `Z^d`: the state at
/// `(x̄, H(x̄))` on `N_0^d`, the level-0 state elsewhere. Heights are
/// precomputed up to `levels` and filled in lazily beyond.
pub struct ProjectedField<F> {
    field: F,
    d: usize,
    table: HeightTable,
    extra: Mutex<HashMap<Vec<i64>, i64>>,
}

impl<F: SiteConfig> ProjectedField<F> {
    pub fn height(&self, bar: &[i64]) -> i64 {
        if let Some(h) = self.table.get(bar) {
            return h;
        }
        let mut cache = self.extra.lock().expect("cache lock");
        if let Some(&h) = cache.get(bar) {
            return h;
        }
        let h = height_map(&self.field, bar).expect("orthant point");
        cache.insert(bar.to_vec(), h);
        h
    }

    pub fn table(&self) -> &HeightTable {
        &self.table
    }

    pub fn inner(&self) -> &F {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

impl<F: SiteConfig> SiteConfig for ProjectedField<F> {
    fn is_closed(&self, bar: &[i64]) -> bool {
        let mut c = bar.to_vec();
        if bar.iter().all(|&x| x >= 0) {
            c.push(self.height(bar));
        } else {
            c.push(0);
        }
        self.field.is_closed(&c)
    }
}

pub fn project_config<F: SiteConfig>(field: F, d: usize, levels: usize) -> ProjectedField<F> {
    let table = HeightTable::new(&field, d, levels);
    ProjectedField {
        field,
        d,
        table,
        extra: Mutex::new(HashMap::new()),
    }
}

/// A reversed admissible lambda-path built from the best oriented path of
/// the projected field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoBridge {
    pub n: usize,
    /// `Y_{0,n}` of the projected field.
    pub closed: u32,
    pub endpoint: Vec<i64>,
    /// `H(endpoint)`.
    pub terminal_height: i64,
    /// Sites of the reversed path, starting at the origin.
    pub reversed_path: Vec<Site>,
}

impl RhoBridge {
    pub fn rho_hat(&self) -> f64 {
        self.closed as f64 / self.n as f64
    }

    /// The forward lambda-path, ending at the origin.
    pub fn forward_path(&self) -> Vec<Site> {
        self.reversed_path.iter().rev().cloned().collect()
    }
}

/// Walks the `H`-minimizing oriented path to the best rho-path endpoint of
/// `T(ω)`. A closed site lets the reversed path step down and then
/// up-diagonally (same height); an open one forces an up-diagonal step.
/// Along the rho-path `H` grows by at most one per open projected site, so
/// the terminal height is at most `n - Y_{0,n} + 1`.
pub fn rho_bridge<F: SiteConfig>(field: &F, d: usize, n: usize) -> RhoBridge {
    let proj = project_config(field, d, n);
    let t = max_closed_table(&proj, &vec![0; d], n);
    let endpoint = t.argmax().to_vec();
    let table = proj.table();
    let chain = table.path_to(&endpoint).expect("endpoint inside table");
    let mut path = vec![Site::origin(d)];
    let mut buf = vec![0i64; d + 1];
    for w in chain.windows(2) {
        let h = table.get(&w[0]).expect("inside");
        buf[..d].copy_from_slice(&w[0]);
        buf[d] = h;
        if field.is_closed(&buf) {
            path.push(Site::new(&w[0], h - 1));
            path.push(Site::new(&w[1], h));
        } else {
            path.push(Site::new(&w[1], h + 1));
        }
    }
    let terminal_height = table.get(&endpoint).expect("inside");
    debug_assert_eq!(path.last().map(|s| s.height()), Some(terminal_height));
    RhoBridge {
        n,
        closed: t.max(),
        endpoint,
        terminal_height,
        reversed_path: path,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SiteState;
    use crate::lambda::check_lambda_path;

    /// All oriented paths of `n` steps from `start`.
    fn oriented_paths(start: &[i64], n: usize) -> Vec<Vec<Vec<i64>>> {
        let d = start.len();
        let mut out = vec![vec![start.to_vec()]];
        for _ in 0..n {
            let mut next = Vec::new();
            for p in out {
                for j in 0..d {
                    let mut q = p.clone();
                    let mut s = p.last().unwrap().clone();
                    s[j] += 1;
                    q.push(s);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    fn brute_max_closed<F: SiteConfig>(f: &F, start: &[i64], n: usize) -> u32 {
        oriented_paths(start, n)
            .iter()
            .map(|p| p[1..].iter().filter(|x| f.is_closed(x)).count() as u32)
            .max()
            .unwrap()
    }

    fn brute_height<F: SiteConfig>(f: &F, bar: &[i64]) -> i64 {
        let m = bar.iter().sum::<i64>() as usize;
        oriented_paths(&vec![0; bar.len()], m)
            .into_iter()
            .filter(|p| p.last().unwrap() == bar)
            .map(|p| {
                let mut h = 0;
                for x in &p[..p.len() - 1] {
                    let mut c = x.clone();
                    c.push(h);
                    if !f.is_closed(&c) {
                        h += 1;
                    }
                }
                h
            })
            .min()
            .unwrap()
    }

    #[test]
    fn slice_ranks_match_enumeration() {
        for d in 1..=4 {
            for m in 0..7 {
                let pts = shell_points(d, m);
                assert_eq!(pts.len(), slice_len(d, m));
                for (i, p) in pts.iter().enumerate() {
                    assert_eq!(slice_rank(p), i);
                }
            }
        }
    }

    #[test]
    fn dp_extremes() {
        for d in 1..=3 {
            assert_eq!(max_closed_dp(&ConfigField::new(1.0, 0), d, 17), 17);
            assert_eq!(max_closed_dp(&ConfigField::new(0.0, 0), d, 17), 0);
        }
    }

    #[test]
    fn dp_override_pattern() {
        let closed = [
            vec![1, 0],
            vec![0, 2],
            vec![1, 1],
            vec![3, 0],
            vec![2, 1],
            vec![0, 3],
            vec![1, 2],
            vec![0, 1],
            vec![2, 0],
            vec![1, 3],
        ];
        let f = ConfigField::new(0.0, 0).with_overrides(closed.iter().map(|c| (c.clone(), SiteState::Closed)));
        let v = max_closed_dp(&f, 2, 3);
        assert_eq!(v, brute_max_closed(&f, &[0, 0], 3));
        assert_eq!(v, 3);
    }

    #[test]
    fn dp_matches_brute_force_on_random_fields() {
        for seed in 0..60 {
            let f = ConfigField::new(0.35, seed);
            for (d, n) in [(1, 6), (2, 6), (3, 4)] {
                let start = vec![(seed % 3) as i64; d];
                assert_eq!(max_closed_table(&f, &start, n).max(), brute_max_closed(&f, &start, n));
            }
        }
    }

    #[test]
    fn argmax_is_lowest_lexicographic() {
        let f =
            ConfigField::new(0.0, 0).with_overrides([(vec![2, 0], SiteState::Closed), (vec![0, 2], SiteState::Closed)]);
        let t = max_closed_table(&f, &[0, 0], 2);
        assert_eq!(t.max(), 1);
        assert_eq!(t.argmax(), &[0, 2]);
        assert_eq!(t.value_at(&[1, 1]), Some(0));
        assert_eq!(t.value_at(&[1, 2]), None);
    }

    #[test]
    fn superadditive_decomposition() {
        for seed in 0..30 {
            let f = ConfigField::new(0.3, 1000 + seed);
            for (n, m) in [(0, 10), (5, 10), (10, 30), (17, 30), (30, 30)] {
                let dec = decompose(&f, 2, n, m);
                assert!(dec.y0m >= dec.y0n + dec.ynm, "{dec:?}");
            }
        }
    }

    #[test]
    fn increments_are_zero_or_one() {
        let f = ConfigField::new(0.4, 5);
        let mut last = 0;
        for n in 1..40 {
            let y = max_closed_dp(&f, 2, n);
            assert!(y >= last && y - last <= 1);
            last = y;
        }
    }

    #[test]
    fn gamma_edges() {
        assert_eq!(gamma_estimate(0.0, 2, 10, 5, 1).unwrap().gamma_hat, 0.0);
        assert_eq!(gamma_estimate(1.0, 2, 10, 5, 1).unwrap().gamma_hat, 1.0);
        assert!(gamma_estimate(0.5, 2, 0, 5, 1).is_err());
        let r = gamma_richardson(0.3, 2, 10, 20, 3).unwrap();
        assert!(r.at_2n.n == 20);
        assert!((r.extrapolated - (2.0 * r.at_2n.gamma_hat - r.at_n.gamma_hat)).abs() < 1e-15);
    }

    #[test]
    fn height_map_extremes_and_oracle() {
        let open = ConfigField::new(0.0, 0);
        let closed = ConfigField::new(1.0, 0);
        for bar in [vec![0, 0], vec![3, 2], vec![1, 4]] {
            assert_eq!(height_map(&open, &bar).unwrap(), bar.iter().sum::<i64>());
            assert_eq!(height_map(&closed, &bar).unwrap(), 0);
        }
        assert!(height_map(&open, &[-1, 0]).is_err());
        for seed in 0..60 {
            let f = ConfigField::new(0.45, seed);
            for bar in [vec![2, 2], vec![3, 1], vec![0, 3], vec![1, 1, 2]] {
                assert_eq!(height_map(&f, &bar).unwrap(), brute_height(&f, &bar));
            }
        }
    }

    #[test]
    fn projection_views() {
        let f = ConfigField::new(0.4, 77);
        let p = project_config(f.clone(), 2, 10);
        for bar in [[-1i64, 3], [2, -5], [-3, -3]] {
            assert_eq!(p.is_closed(&bar), f.is_closed(&[bar[0], bar[1], 0]));
        }
        for bar in [[0i64, 0], [3, 4], [12, 1]] {
            let h = height_map(&f, &bar).unwrap();
            assert_eq!(p.height(&bar), h);
            assert_eq!(p.is_closed(&bar), f.is_closed(&[bar[0], bar[1], h]));
        }
        // hand check: closed origin keeps the height at 0 for both neighbours
        let g = ConfigField::new(0.0, 0).with_overrides([(vec![0, 0, 0], SiteState::Closed)]);
        assert_eq!(height_map(&g, &[1, 0]).unwrap(), 0);
        assert_eq!(height_map(&g, &[1, 1]).unwrap(), 1);
    }

    #[test]
    fn bridge_replays_as_lambda_path() {
        for seed in 0..25 {
            let f = ConfigField::new(0.3, 500 + seed);
            let b = rho_bridge(&f, 2, 20);
            let fwd = b.forward_path();
            assert_eq!(fwd.last(), Some(&Site::origin(2)));
            assert_eq!(check_lambda_path(&f, &fwd), Ok(()));
            assert!(b.terminal_height <= 20 - b.closed as i64 + 1);
        }
    }
}
