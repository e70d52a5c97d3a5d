//! Self-check suite tying the engines to exact values, brute-force oracles
//! and the proven bounds.
//!
//! `Level::Full` runs every check at the tolerances and sample sizes listed
//! in the project README; `Level::Quick` keeps the exact checks and shrinks
//! the Monte Carlo ones.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    bounds_report, cg_beta, cg_exponent, cg_gamma, cg_threshold, expected_t_exact, lb_general, theta_constant,
    ub_expected_t, ub_factorial,
};
use crate::error::Result;
use crate::field::{mix64, ConfigField, SiteConfig};
use crate::lambda::{check_lambda_path, d1_column_height, reachable_set, surface_height, Window};
use crate::lattice::{CoarseBox, FloorSpec, Site, TiltSpec};
use crate::mc::{estimate_pc, estimate_reach_size, estimate_shell_mean, estimate_tail, PcEstimate, PcOptions};
use crate::rational::Alpha;
use crate::rho::{gamma_estimate, height_map, max_closed_dp, rho_bridge};
use crate::stats::{map_replicas, ReplicaPlan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub level: Level,
    /// Run every check against floors shifted by the fault hook.
    pub floor_fault: bool,
    pub seed: u64,
}

impl CheckOptions {
    pub fn new(level: Level) -> Self {
        CheckOptions {
            level,
            floor_fault: false,
            seed: 0x5eed_2024,
        }
    }

    fn full(&self) -> bool {
        self.level == Level::Full
    }

    fn reps(&self, full: usize, quick: usize) -> usize {
        if self.full() {
            full
        } else {
            quick
        }
    }

    fn tilt(&self, alpha: Alpha, d: usize, k: usize) -> TiltSpec {
        let t = TiltSpec::canonical(alpha, d, k).expect("valid tilt");
        if self.floor_fault {
            t.with_floor_fault()
        } else {
            t
        }
    }

    fn plane(&self, alpha: Alpha, d: usize, k: usize) -> FloorSpec {
        FloorSpec::plane(self.tilt(alpha, d, k))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub level: Level,
    pub outcomes: Vec<CheckOutcome>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

pub const CHECK_NAMES: [&str; 10] = [
    "exact-formula golden values",
    "expected shell time",
    "shell-time sharpening",
    "bounds sandwich and placement",
    "monotonicity",
    "tail inequality",
    "oracle equivalence",
    "d=1 trend as alpha -> 1",
    "coarse-box geometry",
    "rho-percolation",
];

fn a(num: i64, den: i64) -> Alpha {
    Alpha::new(num, den).expect("literal alpha")
}

type Verdict = (bool, String);

fn collect(fails: Vec<String>, ok: impl Into<String>) -> Verdict {
    if fails.is_empty() {
        (true, ok.into())
    } else {
        (false, fails.join("; "))
    }
}

fn check_exact() -> Result<Verdict> {
    let mut fails = Vec::new();
    let lb = lb_general(0.0, 1)?;
    if lb != 0.125 {
        fails.push(format!("lb_general(0,1) = {lb}"));
    }
    let c0 = theta_constant(1.0)?;
    if c0.r != 1.0 || c0.residual >= 1e-12 {
        fails.push(format!("C(0) = {} (residual {})", c0.r, c0.residual));
    }
    for rho in [0.25, 0.5, 0.9] {
        let t = theta_constant(rho)?;
        if !(t.residual < 1e-12) {
            fails.push(format!("theta residual at rho={rho}: {}", t.residual));
        }
    }
    Ok(collect(fails, "lb_general(0,1)=0.125, C(0)=R(1)=1, residuals < 1e-12"))
}

fn check_shell(o: &CheckOptions) -> Result<Verdict> {
    let mut fails = Vec::new();
    let e = expected_t_exact(0.5, 1, 1e-15)?;
    if (e - 1.0).abs() > 1e-15 {
        fails.push(format!("E[T](d=1,q=0.5) = {e}"));
    }
    let plan = ReplicaPlan::new(o.reps(10_000, 2_000), o.seed ^ 2);
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        for q in [0.1, 0.3, 0.6] {
            let exact = expected_t_exact(q, d, 1e-12)?;
            let est = estimate_shell_mean(q, d, 200, &plan)?;
            let z = (est.point - exact).abs() / est.stderr().max(1e-300);
            worst = worst.max(z);
            if z > 3.0 || est.censored_count > 0 {
                fails.push(format!("d={d} q={q}: {:.4} vs {exact:.4} ({z:.2} SE)", est.point));
            }
        }
    }
    Ok(collect(fails, format!("E[T]=1 exactly; worst deviation {worst:.2} SE")))
}

fn check_sharpening() -> Result<Verdict> {
    let mut fails = Vec::new();
    for alpha in [0.0, 0.25, 0.5, 0.75] {
        for d in 1..=4 {
            let f = ub_factorial(alpha, d)?.value;
            let e = ub_expected_t(alpha, d)?;
            if e > f + 1e-12 {
                fails.push(format!("alpha={alpha} d={d}: {e} > {f}"));
            }
            if d == 1 {
                let exact = (1.0 - alpha) / (2.0 - alpha);
                if (e - exact).abs() > 1e-12 || (f - exact).abs() > 1e-12 {
                    fails.push(format!("alpha={alpha} d=1: {e} / {f} vs {exact}"));
                }
            }
        }
    }
    Ok(collect(fails, "ub_expected_T <= ub_factorial; equal at d=1"))
}

fn pc(o: &CheckOptions, floor: &FloorSpec, r: i64, h: i64, reps: usize) -> Result<PcEstimate> {
    let opts = PcOptions {
        resolution: 1.0 / 4096.0,
        ..PcOptions::default()
    };
    estimate_pc(floor, &Window::new(r, h)?, &ReplicaPlan::new(reps, o.seed ^ 4), &opts)
}

fn check_sandwich(o: &CheckOptions) -> Result<Verdict> {
    let reps = o.reps(2000, 400);
    let mut fails = Vec::new();
    let mut seen = Vec::new();
    for alpha in [a(0, 1), a(1, 2)] {
        for d in [1usize, 2] {
            let report = bounds_report(alpha, d, d)?;
            let (lo_b, hi_b) = (report.max_exact_lower(), report.min_exact_upper());
            let radii: [i64; 2] = if d == 1 { [40, 80] } else { [20, 40] };
            for r in radii {
                let est = pc(o, &o.plane(alpha, d, d), r, 2 * r, reps)?;
                let c = est.ci;
                let line = format!(
                    "alpha={alpha} d={d} R={r}: {:.4} [{:.4}, {:.4}] in [{lo_b:.4}, {hi_b:.4}]",
                    c.point, c.lo, c.hi
                );
                if c.hi < lo_b || c.lo > hi_b {
                    fails.push(line);
                } else {
                    seen.push(line);
                }
            }
        }
    }
    Ok(collect(fails, seen.join("; ")))
}

fn check_monotone(o: &CheckOptions) -> Result<Verdict> {
    let reps = o.reps(2000, 400);
    let mut fails = Vec::new();
    let mut notes = Vec::new();
    let mut cmp = |label: String, smaller: &PcEstimate, larger: &PcEstimate| {
        // larger parameter should give the smaller q
        let slack = smaller.ci.half_width() + larger.ci.half_width();
        let line = format!("{label}: {:.4} -> {:.4}", smaller.ci.point, larger.ci.point);
        if larger.ci.point > smaller.ci.point + slack {
            fails.push(line);
        } else {
            notes.push(line);
        }
    };
    for (d, r) in [(1usize, 40i64), (2, 20)] {
        let e0 = pc(o, &o.plane(a(0, 1), d, d), r, 2 * r, reps)?;
        let e1 = pc(o, &o.plane(a(1, 2), d, d), r, 2 * r, reps)?;
        cmp(format!("alpha 0->1/2 d={d}"), &e0, &e1);
    }
    let d1 = pc(o, &o.plane(a(1, 2), 1, 1), 20, 40, reps)?;
    let d2 = pc(o, &o.plane(a(1, 2), 2, 1), 20, 40, reps)?;
    cmp("d 1->2 k=1".into(), &d1, &d2);
    let k2 = pc(o, &o.plane(a(1, 2), 2, 2), 20, 40, reps)?;
    cmp("k 1->2 d=2".into(), &d2, &k2);
    Ok(collect(fails, notes.join("; ")))
}

fn check_tail(o: &CheckOptions) -> Result<Verdict> {
    let reps = o.reps(2000, 500);
    let plan = ReplicaPlan::new(reps, o.seed ^ 6);
    let mut fails = Vec::new();
    let mut tightest = f64::INFINITY;
    for (d, r, cap) in [(1usize, 60i64, 30i64), (2, 15, 15)] {
        let floor = o.plane(a(1, 2), d, d);
        let w = Window::new(r, cap)?;
        for h in [3i64, 5] {
            for q in [0.1, 0.2] {
                let tail = estimate_tail(q, &floor, h, &w, &plan)?;
                let reach = estimate_reach_size(q, &floor, h - 2, &w, &plan)?;
                let bound = reach.point + 3.0 * reach.stderr();
                tightest = tightest.min(bound - tail.point);
                if tail.point > bound {
                    fails.push(format!("d={d} h={h} q={q}: {} > {bound}", tail.point));
                }
            }
        }
    }
    Ok(collect(fails, format!("smallest margin {tightest:.4}")))
}

/// Independent brute-force references used by the oracle check.
mod oracle {
    use super::*;

    pub fn floor(alpha: Alpha, bar: &[i64], k: usize) -> i64 {
        let s: i64 = bar.iter().take(k).sum();
        (alpha.num() as i128 * s as i128).div_euclid(alpha.den() as i128) as i64
    }

    fn in_window(bar: &[i64], r: i64) -> bool {
        bar.iter().all(|x| x.abs() <= r)
    }

    fn moves(d: usize) -> Vec<Vec<i64>> {
        let mut m = Vec::new();
        let mut up = vec![0; d + 1];
        up[d] = 1;
        m.push(up);
        for j in 0..d {
            for s in [1, -1] {
                let mut v = vec![0; d + 1];
                v[j] = s;
                v[d] = -1;
                m.push(v);
            }
        }
        m
    }

    /// Sites visited by loop-free admissible paths from the origin.
    pub fn reach_by_paths<F: SiteConfig>(f: &F, alpha: Alpha, d: usize, r: i64, cap: i64) -> BTreeSet<Vec<i64>> {
        let ms = moves(d);
        let mut seen = BTreeSet::new();
        let mut on_path = HashSet::new();
        fn dfs<F: SiteConfig>(
            f: &F,
            x: Vec<i64>,
            ms: &[Vec<i64>],
            alpha: Alpha,
            r: i64,
            cap: i64,
            seen: &mut BTreeSet<Vec<i64>>,
            on_path: &mut HashSet<Vec<i64>>,
        ) {
            seen.insert(x.clone());
            on_path.insert(x.clone());
            let d = x.len() - 1;
            for m in ms {
                let y: Vec<i64> = x.iter().zip(m).map(|(a, b)| a + b).collect();
                if !in_window(&y[..d], r) || (y[d] - floor(alpha, &y[..d], d)).abs() > cap || on_path.contains(&y) {
                    continue;
                }
                if m[d] == 1 && !f.is_closed(&y) {
                    continue;
                }
                dfs(f, y, ms, alpha, r, cap, seen, on_path);
            }
            on_path.remove(&x);
        }
        dfs(f, vec![0; d + 1], &ms, alpha, r, cap, &mut seen, &mut on_path);
        seen
    }

    /// `F_R` at the centre by exhaustive closure over every window site.
    pub fn surface_centre<F: SiteConfig>(f: &F, alpha: Alpha, d: usize, r: i64, cap: i64) -> i64 {
        let side = (2 * r + 1) as usize;
        let ncols = side.pow(d as u32);
        let bar_of = |mut c: usize| -> Vec<i64> {
            let mut b = vec![0; d];
            for v in b.iter_mut() {
                *v = (c % side) as i64 - r;
                c /= side;
            }
            b
        };
        let mut reached: HashSet<Vec<i64>> = HashSet::new();
        for c in 0..ncols {
            let b = bar_of(c);
            let mut s = b.clone();
            s.push(floor(alpha, &b, d));
            reached.insert(s);
        }
        let ms = moves(d);
        loop {
            let mut added = Vec::new();
            for x in &reached {
                for m in &ms {
                    let y: Vec<i64> = x.iter().zip(m).map(|(a, b)| a + b).collect();
                    let fl = if in_window(&y[..d], r) {
                        floor(alpha, &y[..d], d)
                    } else {
                        continue;
                    };
                    if y[d] - fl > cap || y[d] < fl - cap || reached.contains(&y) {
                        continue;
                    }
                    if m[d] == 1 && !f.is_closed(&y) {
                        continue;
                    }
                    added.push(y);
                }
            }
            if added.is_empty() {
                break;
            }
            reached.extend(added);
        }
        let top = reached
            .iter()
            .filter(|s| s[..d].iter().all(|&v| v == 0))
            .map(|s| s[d])
            .max()
            .expect("floor seed");
        top + 1
    }

    pub fn max_closed<F: SiteConfig>(f: &F, d: usize, n: usize) -> u32 {
        let mut best = 0;
        let mut stack = vec![(vec![0i64; d], 0usize, 0u32)];
        while let Some((x, len, c)) = stack.pop() {
            if len == n {
                best = best.max(c);
                continue;
            }
            for j in 0..d {
                let mut y = x.clone();
                y[j] += 1;
                let c2 = c + f.is_closed(&y) as u32;
                stack.push((y, len + 1, c2));
            }
        }
        best
    }

    pub fn height<F: SiteConfig>(f: &F, bar: &[i64]) -> i64 {
        let d = bar.len();
        let mut best = i64::MAX;
        let mut stack = vec![(vec![0i64; d], 0i64)];
        while let Some((x, h)) = stack.pop() {
            if x == bar {
                best = best.min(h);
                continue;
            }
            let mut s = x.clone();
            s.push(h);
            let nh = h + !f.is_closed(&s) as i64;
            for j in 0..d {
                if x[j] < bar[j] {
                    let mut y = x.clone();
                    y[j] += 1;
                    stack.push((y, nh));
                }
            }
        }
        best
    }

    /// Highest site of column `-n` reachable inside columns `-n..=n`, by
    /// closure over heights `[-(n + cap + 10), cap]`.
    pub fn column_height<F: SiteConfig>(f: &F, n: i64, cap: i64) -> i64 {
        let low = -(n + cap + 10);
        let mut reached: HashSet<(i64, i64)> = HashSet::from([(0, 0)]);
        let mut frontier = vec![(0i64, 0i64)];
        while let Some((x, h)) = frontier.pop() {
            let mut next = vec![(x - 1, h - 1), (x + 1, h - 1)];
            if h < cap && f.is_closed(&[x, h + 1]) {
                next.push((x, h + 1));
            }
            for (nx, nh) in next {
                if nx.abs() <= n && nh >= low && reached.insert((nx, nh)) {
                    frontier.push((nx, nh));
                }
            }
        }
        reached
            .iter()
            .filter(|s| s.0 == -n)
            .map(|s| s.1)
            .max()
            .expect("column reached")
    }
}

fn check_oracles(o: &CheckOptions) -> Result<Verdict> {
    let instances = 60u64;
    let mut mismatches = Vec::new();
    let alphas = [a(0, 1), a(1, 2), a(2, 3)];
    for i in 0..instances {
        let seed = mix64(o.seed ^ (i + 1));
        let alpha = alphas[i as usize % 3];
        let q = [0.15, 0.25, 0.35][(i / 3) as usize % 3];
        let f = ConfigField::new(q, seed);
        let (d, r, cap) = if i % 2 == 0 { (1usize, 3i64, 3i64) } else { (2, 1, 2) };
        let floor = o.plane(alpha, d, d);
        let w = Window::new(r, cap)?;
        // reachable set, level 0 and 1
        let region = oracle::reach_by_paths(&f, alpha, d, r, cap);
        for lvl in [0i64, 1] {
            let got: BTreeSet<Vec<i64>> = reachable_set(&f, &floor, lvl, &w)?
                .members
                .into_iter()
                .map(|s| s.coords)
                .collect();
            let want: BTreeSet<Vec<i64>> = region
                .iter()
                .filter(|s| s[d] - oracle::floor(alpha, &s[..d], d) == lvl)
                .cloned()
                .collect();
            if got != want {
                mismatches.push(format!("reachable_set #{i} level {lvl}"));
            }
        }
        let (fr, _) = surface_height(&f, &floor, &vec![0; d], &w)?;
        if fr != oracle::surface_centre(&f, alpha, d, r, cap) {
            mismatches.push(format!("surface_height #{i}"));
        }
        let g = ConfigField::new(q, seed ^ 0xabc);
        let (dd, n) = if i % 2 == 0 { (2usize, 9usize) } else { (3, 6) };
        if max_closed_dp(&g, dd, n) != oracle::max_closed(&g, dd, n) {
            mismatches.push(format!("max_closed_dp #{i}"));
        }
        let bar: Vec<i64> = (0..2).map(|j| ((seed >> (8 * j)) % 4) as i64).collect();
        if height_map(&g, &bar)? != oracle::height(&g, &bar) {
            mismatches.push(format!("height_map #{i}"));
        }
        let n1 = 1 + (i % 3) as usize;
        if d1_column_height(&g, n1, 4)? != oracle::column_height(&g, n1 as i64, 4) {
            mismatches.push(format!("d1_column_height #{i}"));
        }
    }
    Ok(collect(
        mismatches,
        format!("{instances} instances per engine, zero mismatches"),
    ))
}

fn check_trend(o: &CheckOptions) -> Result<Verdict> {
    let reps = o.reps(2000, 400);
    let mut fails = Vec::new();
    let mut notes = Vec::new();
    for alpha in [a(3, 5), a(7, 10), a(4, 5)] {
        let est = pc(o, &o.plane(alpha, 1, 1), 400, 200, reps)?;
        let c = est.ci;
        let comp = alpha.complement();
        let ratio = c.point / comp;
        let ub = comp / (1.0 + comp);
        let line = format!(
            "alpha={alpha}: q={:.4} [{:.4}, {:.4}], q/(1-alpha)={ratio:.3}, bound {ub:.4}",
            c.point, c.lo, c.hi
        );
        if !(0.2..=1.2).contains(&ratio) || c.lo > ub {
            fails.push(line);
        } else {
            notes.push(line);
        }
    }
    Ok(collect(fails, notes.join("; ")))
}

fn check_geometry(o: &CheckOptions) -> Result<Verdict> {
    let n = o.reps(100_000, 20_000);
    let mut fails = Vec::new();
    for d in 1..=3usize {
        for alpha in [a(1, 4), a(1, 2), a(3, 4)] {
            let tilt = o.tilt(alpha, d, d);
            let base = o.seed ^ ((d as u64) << 32) ^ alpha.den() as u64;
            let bad: usize = map_replicas(n, |i| {
                let mut h = mix64(base ^ mix64(i as u64));
                let y: Vec<i64> = (0..=d)
                    .map(|_| {
                        h = mix64(h);
                        (h % 201) as i64 - 100
                    })
                    .collect();
                let own = CoarseBox::containing(&y, &tilt);
                let home = own.contains(&y, &tilt);
                let mut hits = home as usize;
                // every other box near a(y)
                let mut off = vec![-1i64; d + 1];
                loop {
                    if off.iter().any(|&v| v != 0) {
                        let b = CoarseBox {
                            a: own.a.iter().zip(&off).map(|(x, o)| x + o).collect(),
                        };
                        hits += b.contains(&y, &tilt) as usize;
                    }
                    let mut j = 0;
                    while j <= d && off[j] == 1 {
                        off[j] = -1;
                        j += 1;
                    }
                    if j > d {
                        break;
                    }
                    off[j] += 1;
                }
                (hits != 1 || !home) as usize
            })
            .into_iter()
            .sum();
            if bad > 0 {
                fails.push(format!(
                    "d={d} alpha={alpha}: {bad} sites outside their box a(y) or not in exactly one box"
                ));
            }
            let k = d;
            let eps = 0.5;
            let g = cg_gamma(k);
            let q = cg_threshold(alpha.to_f64(), d, k, eps, g);
            let e = cg_exponent(alpha.to_f64(), d, k, q, cg_beta(d, eps, g), g)?;
            if e.abs() > 1e-12 {
                fails.push(format!("exponent at threshold d={d} alpha={alpha}: {e:e}"));
            }
        }
    }
    Ok(collect(fails, format!("{n} sites per (d, alpha), zero violations")))
}

fn check_rho(o: &CheckOptions) -> Result<Verdict> {
    let reps = o.reps(500, 100);
    let (d, n) = (2usize, 60usize);
    let mut fails = Vec::new();
    let mut prev = -1.0;
    let qs = [0.1, 0.3, 0.5, 0.7];
    for &q in &qs {
        let g = gamma_estimate(q, d, n, reps, o.seed ^ 10)?;
        if g.gamma_hat < q - 3.0 * g.stderr {
            fails.push(format!("gamma({q}) = {} below q - 3 SE", g.gamma_hat));
        }
        if g.gamma_hat < prev {
            fails.push(format!("gamma not monotone at q={q}"));
        }
        prev = g.gamma_hat;
    }
    let plan = ReplicaPlan::new(reps, o.seed ^ 11);
    let bad: usize = map_replicas(reps, |i| {
        let f = ConfigField::new(qs[i % qs.len()], plan.seed(i));
        let b = rho_bridge(&f, d, n);
        let fwd: Vec<Site> = b.forward_path();
        let ok = check_lambda_path(&f, &fwd).is_ok()
            && fwd.last() == Some(&Site::origin(d))
            && b.terminal_height <= n as i64 - b.closed as i64 + 1;
        (!ok) as usize
    })
    .into_iter()
    .sum();
    if bad > 0 {
        fails.push(format!("{bad} bridge replays failed"));
    }
    Ok(collect(
        fails,
        format!("gamma >= q - 3 SE and monotone; {reps} bridges replayed"),
    ))
}

/// Runs check `id` (1-based).
pub fn run_check(id: usize, opts: &CheckOptions) -> CheckOutcome {
    let start = Instant::now();
    let res = match id {
        1 => check_exact(),
        2 => check_shell(opts),
        3 => check_sharpening(),
        4 => check_sandwich(opts),
        5 => check_monotone(opts),
        6 => check_tail(opts),
        7 => check_oracles(opts),
        8 => check_trend(opts),
        9 => check_geometry(opts),
        10 => check_rho(opts),
        _ => Ok((false, format!("no check {id}"))),
    };
    let (passed, detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckOutcome {
        id,
        name: CHECK_NAMES.get(id.wrapping_sub(1)).unwrap_or(&"unknown").to_string(),
        passed,
        detail,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn selfcheck(opts: &CheckOptions) -> CheckSummary {
    selfcheck_with(opts, |_| {})
}

/// Like [`selfcheck`], reporting each outcome as it finishes.
pub fn selfcheck_with<F: FnMut(&CheckOutcome)>(opts: &CheckOptions, mut each: F) -> CheckSummary {
    let outcomes = (1..=CHECK_NAMES.len())
        .map(|id| {
            let o = run_check(id, opts);
            each(&o);
            o
        })
        .collect();
    CheckSummary {
        level: opts.level,
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_checks_pass() {
        let o = CheckOptions::new(Level::Quick);
        for id in [1, 3, 7] {
            let r = run_check(id, &o);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn floor_fault_is_caught() {
        let mut o = CheckOptions::new(Level::Quick);
        o.floor_fault = true;
        for id in [7, 9] {
            let r = run_check(id, &o);
            assert!(!r.passed, "{r:?}");
        }
    }
}
