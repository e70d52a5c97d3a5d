//! Admissible lambda-path reachability.
//!
//! A lambda-path moves by `+e_{d+1}` (up) or `-e_{d+1} +/- e_j` (down
//! diagonal). It is admissible when every up-step lands on a closed site.
//! Everything here works on a finite [`Window`]: horizontal L-infinity radius
//! `R` around the anchor and heights within `H` of the floor.
//!
//! Surface heights are computed from column maxima rather than a site-level
//! search: the highest reachable site of a column is obtained by climbing the
//! closed run above `max(own start, neighbour maximum - 1)`, and the least
//! fixed point of that rule over all columns is exactly the set of column
//! maxima of the reachable region.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SiteConfig;
use crate::lattice::{FloorSpec, Site, TiltSpec};

/// `{e_{d+1}} ∪ {-e_{d+1} ± e_j}`; the up-step comes first.
pub fn lambda_step_set(d: usize) -> Vec<Vec<i64>> {
    assert!(d >= 1, "d must be >= 1");
    let mut steps = Vec::with_capacity(2 * d + 1);
    let mut up = vec![0; d + 1];
    up[d] = 1;
    steps.push(up);
    for j in 0..d {
        for s in [1, -1] {
            let mut v = vec![0; d + 1];
            v[j] = s;
            v[d] = -1;
            steps.push(v);
        }
    }
    steps
}

/// Finite search region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub radius: i64,
    pub height_cap: i64,
    /// Start of single-source searches and centre of the window; the origin
    /// when absent.
    #[serde(default)]
    pub anchor: Option<Site>,
}

impl Window {
    pub fn new(radius: i64, height_cap: i64) -> Result<Self> {
        let w = Window {
            radius,
            height_cap,
            anchor: None,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn with_anchor(mut self, anchor: Site) -> Self {
        self.anchor = Some(anchor);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.radius < 1 || self.height_cap < 1 {
            return Err(Error::InvalidWindow {
                radius: self.radius,
                height_cap: self.height_cap,
            });
        }
        Ok(())
    }

    fn anchor_site(&self, d: usize) -> Site {
        self.anchor.clone().unwrap_or_else(|| Site::origin(d))
    }
}

/// Dense indexing of the columns `centre + [-R, R]^d`.
#[derive(Clone, Debug)]
pub(crate) struct ColumnGrid {
    d: usize,
    radius: i64,
    side: i64,
    centre: Vec<i64>,
    bars: Vec<i64>,
}

impl ColumnGrid {
    pub(crate) fn new(centre: &[i64], radius: i64) -> Self {
        let d = centre.len();
        let side = 2 * radius + 1;
        let n = (side as usize).pow(d as u32);
        let mut bars = Vec::with_capacity(n * d);
        for idx in 0..n {
            let mut c = idx as i64;
            for i in 0..d {
                bars.push(centre[i] + c % side - radius);
                c /= side;
            }
        }
        ColumnGrid {
            d,
            radius,
            side,
            centre: centre.to_vec(),
            bars,
        }
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.bars.len() / self.d
    }

    #[inline]
    pub(crate) fn bar(&self, idx: usize) -> &[i64] {
        &self.bars[idx * self.d..(idx + 1) * self.d]
    }

    pub(crate) fn index(&self, bar: &[i64]) -> Option<usize> {
        let mut idx = 0i64;
        let mut mul = 1i64;
        for i in 0..self.d {
            let off = bar[i] - self.centre[i] + self.radius;
            if off < 0 || off >= self.side {
                return None;
            }
            idx += off * mul;
            mul *= self.side;
        }
        Some(idx as usize)
    }

    /// Neighbour of `idx` along axis `j` in direction `s`, if inside.
    #[inline]
    pub(crate) fn neighbour(&self, idx: usize, j: usize, s: i64) -> Option<usize> {
        let off = self.bar(idx)[j] - self.centre[j] + self.radius + s;
        if off < 0 || off >= self.side {
            return None;
        }
        let stride = self.side.pow(j as u32);
        Some((idx as i64 + s * stride) as usize)
    }
}

/// Sites of `L(h)` reachable from the anchor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachSet {
    pub h: i64,
    pub members: Vec<Site>,
    /// An admissible step from a site at or above the floor left the window.
    /// Exits far below the floor are not flagged: returning from there needs
    /// a long run of closed up-steps.
    pub truncated: bool,
}

impl ReachSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Every site reachable from the window anchor, stored densely.
#[derive(Clone, Debug)]
pub struct ReachRegion {
    grid: ColumnGrid,
    floors: Vec<i64>,
    levels: i64,
    height_cap: i64,
    visited: Vec<bool>,
    pub truncated: bool,
}

impl ReachRegion {
    fn slot(&self, col: usize, rel: i64) -> usize {
        col * self.levels as usize + (rel + self.height_cap) as usize
    }

    pub fn contains(&self, site: &Site) -> bool {
        let Some(col) = self.grid.index(site.bar()) else {
            return false;
        };
        let rel = site.height() - self.floors[col];
        if rel.abs() > self.height_cap {
            return false;
        }
        self.visited[self.slot(col, rel)]
    }

    /// All reachable sites, ordered by column index then height.
    pub fn sites(&self) -> Vec<Site> {
        let mut out = Vec::new();
        for col in 0..self.grid.len() {
            for rel in -self.height_cap..=self.height_cap {
                if self.visited[self.slot(col, rel)] {
                    out.push(Site::new(self.grid.bar(col), self.floors[col] + rel));
                }
            }
        }
        out
    }

    /// Reachable sites at height `floor + h`.
    pub fn level(&self, h: i64) -> Vec<Site> {
        if h.abs() > self.height_cap {
            return Vec::new();
        }
        (0..self.grid.len())
            .filter(|&col| self.visited[self.slot(col, h)])
            .map(|col| Site::new(self.grid.bar(col), self.floors[col] + h))
            .collect()
    }
}

/// Breadth-first closure of the anchor under admissible steps, inside the
/// window (heights within `height_cap` of the floor, above and below).
pub fn reachable_region<F: SiteConfig>(field: &F, floor: &FloorSpec, window: &Window) -> Result<ReachRegion> {
    window.validate()?;
    let d = floor.d();
    let anchor = window.anchor_site(d);
    let grid = ColumnGrid::new(anchor.bar(), window.radius);
    let floors: Vec<i64> = (0..grid.len()).map(|c| floor.floor(grid.bar(c))).collect();
    let cap = window.height_cap;
    let levels = 2 * cap + 1;
    let mut region = ReachRegion {
        visited: vec![false; grid.len() * levels as usize],
        grid,
        floors,
        levels,
        height_cap: cap,
        truncated: false,
    };
    let start_col = region.grid.index(anchor.bar()).expect("anchor is the centre");
    let start_rel = anchor.height() - region.floors[start_col];
    if start_rel.abs() > cap {
        return Err(Error::domain(
            "window anchor",
            format!("anchor height {start_rel} above floor exceeds the height cap {cap}"),
        ));
    }
    let mut queue = VecDeque::new();
    let s = region.slot(start_col, start_rel);
    region.visited[s] = true;
    queue.push_back((start_col, start_rel));
    let mut buf = vec![0i64; d + 1];
    while let Some((col, rel)) = queue.pop_front() {
        let height = region.floors[col] + rel;
        // up-step onto a closed site
        buf[..d].copy_from_slice(region.grid.bar(col));
        buf[d] = height + 1;
        if field.is_closed(&buf) {
            if rel + 1 > cap {
                region.truncated = true;
            } else {
                let s = region.slot(col, rel + 1);
                if !region.visited[s] {
                    region.visited[s] = true;
                    queue.push_back((col, rel + 1));
                }
            }
        }
        // unconditional down-diagonal steps
        for j in 0..d {
            for dir in [1i64, -1] {
                match region.grid.neighbour(col, j, dir) {
                    None => region.truncated |= rel >= 0,
                    Some(nb) => {
                        let nrel = height - 1 - region.floors[nb];
                        if nrel.abs() > cap {
                            region.truncated |= rel >= 0;
                            continue;
                        }
                        let s = region.slot(nb, nrel);
                        if !region.visited[s] {
                            region.visited[s] = true;
                            queue.push_back((nb, nrel));
                        }
                    }
                }
            }
        }
    }
    Ok(region)
}

/// `𝓛(h)`: sites of the level-`h` copy of the floor reachable from the anchor.
pub fn reachable_set<F: SiteConfig>(field: &F, floor: &FloorSpec, h: i64, window: &Window) -> Result<ReachSet> {
    if h < 0 {
        return Err(Error::domain("level h", format!("{h} < 0")));
    }
    let region = reachable_region(field, floor, window)?;
    Ok(ReachSet {
        h,
        members: region.level(h),
        truncated: region.truncated,
    })
}

pub fn reach_size<F: SiteConfig>(field: &F, floor: &FloorSpec, h: i64, window: &Window) -> Result<usize> {
    Ok(reachable_set(field, floor, h, window)?.len())
}

/// `|L(h)|` together with the truncation flag.
pub fn reach_size_flagged<F: SiteConfig>(
    field: &F,
    floor: &FloorSpec,
    h: i64,
    window: &Window,
) -> Result<(usize, bool)> {
    let s = reachable_set(field, floor, h, window)?;
    Ok((s.len(), s.truncated))
}

/// Column-maximum solver shared by the surface and Monte Carlo code.
///
/// `tops[c]` is the highest site of column `c` reachable from the floor; it
/// never decreases when the field gains closed sites, so a solved state can
/// be advanced to a larger `q` without restarting.
#[derive(Clone, Debug)]
pub(crate) struct TopSolver {
    grid: ColumnGrid,
    floors: Vec<i64>,
    caps: Vec<i64>,
    tops: Vec<i64>,
}

impl TopSolver {
    pub(crate) fn new(floor: &FloorSpec, window: &Window) -> Result<Self> {
        window.validate()?;
        let d = floor.d();
        let anchor = window.anchor_site(d);
        let grid = ColumnGrid::new(anchor.bar(), window.radius);
        let floors: Vec<i64> = (0..grid.len()).map(|c| floor.floor(grid.bar(c))).collect();
        let caps = floors.iter().map(|f| f + window.height_cap).collect();
        Ok(TopSolver {
            tops: floors.clone(),
            grid,
            floors,
            caps,
        })
    }

    pub(crate) fn centre_index(&self) -> usize {
        self.grid.index(&self.grid.centre.clone()).expect("centre")
    }

    /// Runs the fixed point on `field`. With `stop`, returns as soon as
    /// column `stop.0` reaches height `stop.1` (the state is then partial).
    pub(crate) fn solve<F: SiteConfig>(&mut self, field: &F, stop: Option<(usize, i64)>) -> bool {
        let n = self.grid.len();
        let d = self.grid.d;
        let mut queue: VecDeque<usize> = (0..n).collect();
        let mut queued = vec![true; n];
        let mut buf = vec![0i64; d + 1];
        while let Some(c) = queue.pop_front() {
            queued[c] = false;
            let mut t = self.tops[c];
            buf[..d].copy_from_slice(self.grid.bar(c));
            while t < self.caps[c] {
                buf[d] = t + 1;
                if !field.is_closed(&buf) {
                    break;
                }
                t += 1;
            }
            self.tops[c] = t;
            if let Some((sc, target)) = stop {
                if sc == c && t >= target {
                    return true;
                }
            }
            for j in 0..d {
                for dir in [1i64, -1] {
                    if let Some(nb) = self.grid.neighbour(c, j, dir) {
                        let cand = (t - 1).min(self.caps[nb]);
                        if cand > self.tops[nb] {
                            self.tops[nb] = cand;
                            if !queued[nb] {
                                queued[nb] = true;
                                queue.push_back(nb);
                            }
                        }
                    }
                }
            }
        }
        match stop {
            Some((sc, target)) => self.tops[sc] >= target,
            None => false,
        }
    }

    pub(crate) fn floor_at(&self, idx: usize) -> i64 {
        self.floors[idx]
    }

    pub(crate) fn cap_at(&self, idx: usize) -> i64 {
        self.caps[idx]
    }
}

/// Finite-window minimal open surface `F_R`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceField {
    pub d: usize,
    pub radius: i64,
    pub height_cap: i64,
    pub centre: Vec<i64>,
    /// Column bars, flattened (`d` entries per column).
    pub bars: Vec<i64>,
    pub heights: Vec<i64>,
    pub floors: Vec<i64>,
    pub capped: Vec<bool>,
    pub diverged: bool,
}

impl SurfaceField {
    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn bar(&self, idx: usize) -> &[i64] {
        &self.bars[idx * self.d..(idx + 1) * self.d]
    }

    fn index(&self, bar: &[i64]) -> Option<usize> {
        ColumnGrid::new(&self.centre, self.radius).index(bar)
    }

    pub fn height(&self, bar: &[i64]) -> Option<i64> {
        self.index(bar).map(|i| self.heights[i])
    }

    pub fn is_capped(&self, bar: &[i64]) -> Option<bool> {
        self.index(bar).map(|i| self.capped[i])
    }
}

/// `F_R` on every column of the window: one plus the highest site reachable
/// from a floor site inside the window.
pub fn surface_field<F: SiteConfig>(field: &F, floor: &FloorSpec, window: &Window) -> Result<SurfaceField> {
    let mut solver = TopSolver::new(floor, window)?;
    solver.solve(field, None);
    let n = solver.grid.len();
    let capped: Vec<bool> = (0..n).map(|c| solver.tops[c] >= solver.caps[c]).collect();
    Ok(SurfaceField {
        d: floor.d(),
        radius: window.radius,
        height_cap: window.height_cap,
        centre: solver.grid.centre.clone(),
        bars: solver.grid.bars.clone(),
        heights: solver.tops.iter().map(|t| t + 1).collect(),
        floors: solver.floors.clone(),
        diverged: capped.iter().any(|&c| c),
        capped,
    })
}

/// `F_R(bar)` and whether that column hit the height cap.
pub fn surface_height<F: SiteConfig>(
    field: &F,
    floor: &FloorSpec,
    bar: &[i64],
    window: &Window,
) -> Result<(i64, bool)> {
    let mut solver = TopSolver::new(floor, window)?;
    let idx = solver
        .grid
        .index(bar)
        .ok_or_else(|| Error::domain("surface column", format!("{bar:?} lies outside the window")))?;
    solver.solve(field, None);
    Ok((solver.tops[idx] + 1, solver.tops[idx] >= solver.caps[idx]))
}

/// Why a site sequence is not an admissible lambda-path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathFault {
    BadStep { index: usize },
    OpenUpStep { index: usize },
}

/// Checks step shapes and admissibility of `path` (a walk; sites may repeat).
pub fn check_lambda_path<F: SiteConfig>(field: &F, path: &[Site]) -> std::result::Result<(), PathFault> {
    for (i, w) in path.windows(2).enumerate() {
        let (a, b) = (&w[0].coords, &w[1].coords);
        let d = a.len() - 1;
        let dh = b[d] - a[d];
        let moved: Vec<i64> = (0..d).map(|j| b[j] - a[j]).collect();
        let horizontal: i64 = moved.iter().map(|m| m.abs()).sum();
        let index = i + 1;
        match (dh, horizontal) {
            (1, 0) => {
                if !field.is_closed(b) {
                    return Err(PathFault::OpenUpStep { index });
                }
            }
            (-1, 1) => {}
            _ => return Err(PathFault::BadStep { index }),
        }
    }
    Ok(())
}

/// Removes cycles from a walk, keeping the first and last site. Each kept
/// step is a step of the original walk, so admissibility is preserved.
pub fn loop_erase(path: &[Site]) -> Vec<Site> {
    let mut out: Vec<Site> = Vec::with_capacity(path.len());
    let mut pos = std::collections::HashMap::new();
    for s in path {
        if let Some(&i) = pos.get(s) {
            for removed in out.drain(i + 1..) {
                pos.remove(&removed);
            }
        } else {
            pos.insert(s.clone(), out.len());
            out.push(s.clone());
        }
    }
    out
}

/// Points of the shell `{z in N_0^d : |z|_1 = m}` in lexicographic order.
pub fn shell_points(d: usize, m: usize) -> Vec<Vec<i64>> {
    fn rec(d: usize, left: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() + 1 == d {
            prefix.push(left as i64);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=left {
            prefix.push(v as i64);
            rec(d, left - v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, m, &mut Vec::with_capacity(d), &mut out);
    out
}

/// First closed diagonal shell: `Some(m)` when `(z, m)` is closed for some
/// `z` with `|z|_1 = m`, searching `m = 0..=budget`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellHitTime {
    pub value: Option<usize>,
    pub shell_budget: usize,
}

impl ShellHitTime {
    pub fn is_censored(&self) -> bool {
        self.value.is_none()
    }
}

pub(crate) struct ShellHit {
    pub(crate) shell: usize,
    point: Vec<i64>,
    iota: usize,
}

pub(crate) fn first_closed_shell<F: SiteConfig>(field: &F, base: &[i64], shells: &[Vec<Vec<i64>>]) -> Option<ShellHit> {
    let d = base.len() - 1;
    let mut buf = vec![0i64; d + 1];
    let mut iota = 0usize;
    for (m, shell) in shells.iter().enumerate() {
        for z in shell {
            for i in 0..d {
                buf[i] = base[i] + z[i];
            }
            buf[d] = base[d] + m as i64;
            if field.is_closed(&buf) {
                return Some(ShellHit {
                    shell: m,
                    point: z.clone(),
                    iota,
                });
            }
            iota += 1;
        }
    }
    None
}

pub(crate) fn shells_up_to(d: usize, budget: usize) -> Vec<Vec<Vec<i64>>> {
    (0..=budget).map(|m| shell_points(d, m)).collect()
}

pub fn sample_shell_time<F: SiteConfig>(field: &F, d: usize, shell_budget: usize) -> ShellHitTime {
    let shells = shells_up_to(d, shell_budget);
    ShellHitTime {
        value: first_closed_shell(field, &vec![0; d + 1], &shells).map(|h| h.shell),
        shell_budget,
    }
}

/// One round of the reversed walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStep {
    /// `Y_n`.
    pub position: Site,
    /// `X_n = (z, |z|_1)`; zero for the initial entry.
    pub displacement: Site,
    /// `H(n)`: depth of `Y_n` below the tilted plane.
    pub depth: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReversedWalk {
    /// `steps[0]` is `Y_0 = 0`.
    pub steps: Vec<WalkStep>,
    /// Hit index `iota_n` of each round in the shell ordering.
    pub iota: Vec<usize>,
}

impl ReversedWalk {
    /// Number of completed rounds.
    pub fn len(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn depths(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.depth).collect()
    }

    /// The forward lambda-path from the last `Y_n` back to the origin: each
    /// round is an up-step onto the closed site `Y_{n-1} + X_n` followed by
    /// `|z|_1` down-diagonal steps, coordinate by coordinate.
    pub fn forward_path(&self) -> Vec<Site> {
        let mut path = Vec::new();
        let Some(last) = self.steps.last() else {
            return path;
        };
        path.push(last.position.clone());
        for n in (1..self.steps.len()).rev() {
            let prev = &self.steps[n - 1].position;
            let x = &self.steps[n].displacement;
            let d = prev.d();
            let mut cur: Vec<i64> = prev.coords.iter().zip(&x.coords).map(|(a, b)| a + b).collect();
            path.push(Site { coords: cur.clone() });
            for j in 0..d {
                for _ in 0..x.coords[j] {
                    cur[j] -= 1;
                    cur[d] -= 1;
                    path.push(Site { coords: cur.clone() });
                }
            }
        }
        path
    }
}

/// Greedy reversed walk: each round jumps to the first closed site of the
/// diagonal shells above the current position and then drops one level.
/// Requires `k = d`.
pub fn reversed_walk<F: SiteConfig>(
    field: &F,
    tilt: &TiltSpec,
    n_steps: usize,
    shell_budget: usize,
) -> Result<ReversedWalk> {
    let d = tilt.d();
    if tilt.k() != d {
        return Err(Error::InvalidTilt(format!(
            "reversed walk needs every axis tilted (k = d), got k = {} and d = {d}",
            tilt.k()
        )));
    }
    let shells = shells_up_to(d, shell_budget);
    let alpha = tilt.alpha();
    let mut walk = ReversedWalk {
        steps: vec![WalkStep {
            position: Site::origin(d),
            displacement: Site::origin(d),
            depth: 0,
        }],
        iota: Vec::new(),
    };
    let mut y = vec![0i64; d + 1];
    let mut travelled = 0i64;
    for n in 1..=n_steps {
        let Some(hit) = first_closed_shell(field, &y, &shells) else {
            return Err(Error::CensoredWalk {
                partial: Box::new(walk),
                budget: shell_budget,
            });
        };
        let mut x = hit.point.clone();
        x.push(hit.shell as i64);
        for i in 0..=d {
            y[i] += x[i];
        }
        y[d] -= 1;
        travelled += hit.shell as i64;
        walk.iota.push(hit.iota);
        walk.steps.push(WalkStep {
            position: Site { coords: y.clone() },
            displacement: Site { coords: x },
            depth: alpha.floor_mul(travelled) - travelled + n as i64,
        });
    }
    Ok(walk)
}

/// `Y_n`: highest site of column `-n` reachable from the origin by an
/// admissible lambda-path confined to columns `-n..=n`, heights capped at
/// `height_cap`. Two-dimensional lattice (`d = 1`).
pub fn d1_column_height<F: SiteConfig>(field: &F, n: usize, height_cap: i64) -> Result<i64> {
    if height_cap < 0 {
        return Err(Error::domain("height cap", format!("{height_cap} < 0")));
    }
    let n = n as i64;
    let width = (2 * n + 1) as usize;
    const UNREACHED: i64 = i64::MIN;
    let mut tops = vec![UNREACHED; width];
    tops[n as usize] = 0;
    let mut queue = VecDeque::from([n as usize]);
    let mut queued = vec![false; width];
    queued[n as usize] = true;
    while let Some(c) = queue.pop_front() {
        queued[c] = false;
        let x = c as i64 - n;
        let mut t = tops[c];
        while t < height_cap && field.is_closed(&[x, t + 1]) {
            t += 1;
        }
        tops[c] = t;
        for nb in [c.wrapping_sub(1), c + 1] {
            if nb < width && t - 1 > tops[nb] {
                tops[nb] = t - 1;
                if !queued[nb] {
                    queued[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
    }
    Ok(tops[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ConfigField, SiteState};
    use crate::rational::Alpha;

    fn half() -> Alpha {
        Alpha::new(1, 2).unwrap()
    }

    fn plane(alpha: Alpha, d: usize, k: usize) -> FloorSpec {
        FloorSpec::plane(TiltSpec::canonical(alpha, d, k).unwrap())
    }

    #[test]
    fn step_sets() {
        assert_eq!(lambda_step_set(1), vec![vec![0, 1], vec![1, -1], vec![-1, -1]]);
        let s = lambda_step_set(2);
        assert_eq!(s.len(), 5);
        assert!(s.iter().all(|v| v[2] == 1 || v[2] == -1));
    }

    #[test]
    fn window_validation() {
        assert!(Window::new(0, 3).is_err());
        assert!(Window::new(3, 0).is_err());
        let field = ConfigField::new(0.1, 1);
        let bad = Window {
            radius: 0,
            height_cap: 2,
            anchor: None,
        };
        assert!(matches!(
            reachable_set(&field, &plane(half(), 1, 1), 1, &bad),
            Err(Error::InvalidWindow { .. })
        ));
        assert!(surface_height(&field, &plane(half(), 1, 1), &[0], &bad).is_err());
    }

    #[test]
    fn reach_without_closed_sites() {
        let field = ConfigField::new(0.0, 3);
        let floor = plane(half(), 1, 1);
        let w = Window::new(5, 5).unwrap();
        assert!(reachable_set(&field, &floor, 1, &w).unwrap().is_empty());
        let l0 = reachable_set(&field, &floor, 0, &w).unwrap();
        assert_eq!(l0.members, vec![Site::new(&[-1], -1), Site::new(&[0], 0)]);
        assert_eq!(reach_size(&field, &floor, 1, &w).unwrap(), 0);
    }

    #[test]
    fn reach_all_closed_climbs() {
        let field = ConfigField::new(1.0, 3);
        let floor = plane(half(), 1, 1);
        let w = Window::new(1, 4).unwrap();
        let l3 = reachable_set(&field, &floor, 3, &w).unwrap();
        assert!(l3.members.contains(&Site::new(&[0], 3)));
        assert!(l3.truncated);
        assert!(reach_size(&field, &floor, 0, &w).unwrap() >= 1);
    }

    #[test]
    fn surface_without_closed_sites_sits_on_floor() {
        let field = ConfigField::new(0.0, 3);
        for (floor, r) in [
            (plane(half(), 1, 1), 6),
            (plane(Alpha::new(1, 3).unwrap(), 2, 1), 3),
            (FloorSpec::pyramid(TiltSpec::canonical(half(), 2, 2).unwrap()), 3),
        ] {
            let s = surface_field(&field, &floor, &Window::new(r, 4).unwrap()).unwrap();
            assert!(!s.diverged);
            for i in 0..s.len() {
                assert_eq!(s.heights[i], floor.floor(s.bar(i)) + 1);
            }
        }
    }

    #[test]
    fn surface_all_closed_diverges() {
        let field = ConfigField::new(1.0, 3);
        let (h, capped) = surface_height(&field, &plane(half(), 1, 1), &[0], &Window::new(3, 7).unwrap()).unwrap();
        assert!(capped);
        assert_eq!(h, 8);
    }

    #[test]
    fn single_closed_override() {
        let field = ConfigField::new(0.0, 0).with_overrides([(vec![0, 1], SiteState::Closed)]);
        let floor = plane(Alpha::ZERO, 1, 1);
        let s = surface_field(&field, &floor, &Window::new(3, 5).unwrap()).unwrap();
        assert_eq!(s.height(&[0]), Some(2));
        assert_eq!(s.height(&[1]), Some(1));
        assert_eq!(s.height(&[-1]), Some(1));
        assert!(!s.diverged);
    }

    #[test]
    fn surface_column_outside_window_is_error() {
        let field = ConfigField::new(0.2, 1);
        assert!(surface_height(&field, &plane(half(), 1, 1), &[9], &Window::new(3, 5).unwrap()).is_err());
    }

    #[test]
    fn shell_points_order() {
        assert_eq!(shell_points(1, 3), vec![vec![3]]);
        assert_eq!(shell_points(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(shell_points(3, 2).len(), 6);
        assert_eq!(shell_points(3, 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn shell_time_edges() {
        let closed = ConfigField::new(1.0, 1);
        assert_eq!(sample_shell_time(&closed, 2, 5).value, Some(0));
        let open = ConfigField::new(0.0, 1);
        let t = sample_shell_time(&open, 2, 5);
        assert!(t.is_censored());
        let one = ConfigField::new(0.0, 1).with_overrides([(vec![1, 1, 2], SiteState::Closed)]);
        assert_eq!(sample_shell_time(&one, 2, 5).value, Some(2));
    }

    #[test]
    fn reversed_walk_all_closed() {
        let field = ConfigField::new(1.0, 2);
        let tilt = TiltSpec::canonical(half(), 2, 2).unwrap();
        let w = reversed_walk(&field, &tilt, 6, 4).unwrap();
        assert_eq!(w.len(), 6);
        for (n, s) in w.steps.iter().enumerate() {
            assert_eq!(s.depth, n as i64);
            if n > 0 {
                assert_eq!(s.displacement, Site::origin(2));
            }
        }
        assert!(w.iota.iter().all(|&i| i == 0));
        assert_eq!(check_lambda_path(&field, &w.forward_path()), Ok(()));
    }

    /// Closed sites exactly on shell 2 above every walk position.
    struct ShellTwo;

    impl SiteConfig for ShellTwo {
        fn is_closed(&self, c: &[i64]) -> bool {
            // walk positions are (2j, j) after j rounds; shell-2 target is (2j + 2, j + 2)
            let (x, h) = (c[0], c[1]);
            x % 2 == 0 && x >= 2 && h == x / 2 + 1
        }
    }

    #[test]
    fn reversed_walk_shell_two_has_zero_depth() {
        let tilt = TiltSpec::canonical(half(), 1, 1).unwrap();
        let w = reversed_walk(&ShellTwo, &tilt, 8, 5).unwrap();
        assert!(w.depths().iter().all(|&h| h == 0), "{:?}", w.depths());
        assert!(w.iota.iter().all(|&i| i == 2));
        assert_eq!(check_lambda_path(&ShellTwo, &w.forward_path()), Ok(()));
    }

    #[test]
    fn reversed_walk_censoring_and_k() {
        let open = ConfigField::new(0.0, 1);
        let tilt = TiltSpec::canonical(half(), 2, 2).unwrap();
        match reversed_walk(&open, &tilt, 3, 2) {
            Err(Error::CensoredWalk { partial, budget }) => {
                assert_eq!(budget, 2);
                assert!(partial.is_empty());
            }
            other => panic!("expected censoring, got {other:?}"),
        }
        let tilt = TiltSpec::canonical(half(), 2, 1).unwrap();
        assert!(reversed_walk(&open, &tilt, 3, 2).is_err());
    }

    #[test]
    fn random_walks_replay_as_admissible_paths() {
        let tilt = TiltSpec::canonical(Alpha::new(1, 3).unwrap(), 2, 2).unwrap();
        for seed in 0..20 {
            let field = ConfigField::new(0.3, seed);
            let w = reversed_walk(&field, &tilt, 25, 40).unwrap();
            let path = w.forward_path();
            assert_eq!(path.first(), Some(&w.steps.last().unwrap().position));
            assert_eq!(path.last(), Some(&Site::origin(2)));
            assert_eq!(check_lambda_path(&field, &path), Ok(()));
            let erased = loop_erase(&path);
            assert_eq!(check_lambda_path(&field, &erased), Ok(()));
            let mut uniq = erased.clone();
            uniq.sort();
            uniq.dedup();
            assert_eq!(uniq.len(), erased.len());
        }
    }

    #[test]
    fn path_checker_rejects_faults() {
        let field = ConfigField::new(0.0, 1);
        let up = vec![Site::new(&[0], 0), Site::new(&[0], 1)];
        assert_eq!(check_lambda_path(&field, &up), Err(PathFault::OpenUpStep { index: 1 }));
        let jump = vec![Site::new(&[0], 0), Site::new(&[2], -1)];
        assert_eq!(check_lambda_path(&field, &jump), Err(PathFault::BadStep { index: 1 }));
    }

    #[test]
    fn column_height_extremes() {
        let open = ConfigField::new(0.0, 4);
        for n in 0..6 {
            assert_eq!(d1_column_height(&open, n, 10).unwrap(), -(n as i64));
        }
        let closed = ConfigField::new(1.0, 4);
        assert_eq!(d1_column_height(&closed, 5, 12).unwrap(), 12);
        assert!(d1_column_height(&closed, 5, -1).is_err());
    }
}
