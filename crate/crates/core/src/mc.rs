//! Monte Carlo estimators over replica plans.
//!
//! Every replica draws its own [`ConfigField`] from [`ReplicaPlan::seed`], so
//! estimates at different `q` (or different geometries) share the same site
//! uniforms and are coupled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ConfigField;
use crate::lambda::{first_closed_shell, reach_size_flagged, shells_up_to, TopSolver, Window};
use crate::lattice::FloorSpec;
use crate::stats::{map_replicas, mean_ci, wilson, EstimateCI, ReplicaPlan, Z95};

/// Outcome of one tail query at the window centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct TailHit {
    exceeds: bool,
    capped: bool,
}

/// Advances `solver` on `field` until the centre column shows
/// `F_R - floor >= h` or the fixed point is reached.
fn tail_event(solver: &mut TopSolver, field: &ConfigField, h: i64) -> TailHit {
    let c = solver.centre_index();
    let cap = solver.cap_at(c);
    // F_R = top + 1
    let target = (solver.floor_at(c) + h - 1).min(cap);
    let exceeds = solver.solve(field, Some((c, target)));
    // censored only when the cap, not the level itself, decided the event
    TailHit {
        exceeds,
        capped: exceeds && target == cap && solver.floor_at(c) + h - 1 > cap,
    }
}

/// `P(F_R(0) - floor(0) >= h)`. Replicas whose centre column hits the height
/// cap count as exceeding and are reported as censored.
pub fn estimate_tail(q: f64, floor: &FloorSpec, h: i64, window: &Window, plan: &ReplicaPlan) -> Result<EstimateCI> {
    if h < 1 {
        return Err(Error::domain("tail level h", format!("{h} < 1")));
    }
    let proto = TopSolver::new(floor, window)?;
    let hits = map_replicas(plan.replicas, |i| {
        let field = ConfigField::new(q, plan.seed(i));
        tail_event(&mut proto.clone(), &field, h)
    });
    let exceed = hits.iter().filter(|t| t.exceeds).count();
    let capped = hits.iter().filter(|t| t.capped).count();
    Ok(wilson(exceed, hits.len(), capped))
}

/// Mean of `|L(h)|` from the window anchor; truncated searches are counted
/// in `censored_count`.
pub fn estimate_reach_size(
    q: f64,
    floor: &FloorSpec,
    h: i64,
    window: &Window,
    plan: &ReplicaPlan,
) -> Result<EstimateCI> {
    window.validate()?;
    if h < 0 {
        return Err(Error::domain("level h", format!("{h} < 0")));
    }
    let runs = map_replicas(plan.replicas, |i| {
        let field = ConfigField::new(q, plan.seed(i));
        reach_size_flagged(&field, floor, h, window)
    });
    let mut xs = Vec::with_capacity(runs.len());
    let mut truncated = 0;
    for r in runs {
        let (n, t) = r?;
        xs.push(n as f64);
        truncated += t as usize;
    }
    Ok(mean_ci(&xs, truncated))
}

/// Mean first closed shell time. A censored replica contributes
/// `budget + 1`, a lower bound on its time.
pub fn estimate_shell_mean(q: f64, d: usize, budget: usize, plan: &ReplicaPlan) -> Result<EstimateCI> {
    if budget < 1 || d < 1 {
        return Err(Error::domain(
            "shell sampling",
            format!("need budget >= 1 and d >= 1 (got budget={budget}, d={d})"),
        ));
    }
    let shells = shells_up_to(d, budget);
    let origin = vec![0i64; d + 1];
    let times = map_replicas(plan.replicas, |i| {
        let field = ConfigField::new(q, plan.seed(i));
        first_closed_shell(&field, &origin, &shells).map(|h| h.shell)
    });
    let censored = times.iter().filter(|t| t.is_none()).count();
    let xs: Vec<f64> = times.iter().map(|t| t.unwrap_or(budget + 1) as f64).collect();
    Ok(mean_ci(&xs, censored))
}

/// Settings for [`estimate_pc`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcOptions {
    pub q_lo: f64,
    pub q_hi: f64,
    /// Proxy threshold; `height_cap / 2` when absent.
    pub h_star: Option<i64>,
    pub target: f64,
    /// Bisection stops once a bracket is this narrow.
    pub resolution: f64,
}

impl Default for PcOptions {
    fn default() -> Self {
        PcOptions {
            q_lo: 0.0,
            q_hi: 1.0,
            h_star: None,
            target: 0.5,
            resolution: 1.0 / 1024.0,
        }
    }
}

impl PcOptions {
    pub fn with_bracket(mut self, q_lo: f64, q_hi: f64) -> Self {
        self.q_lo = q_lo;
        self.q_hi = q_hi;
        self
    }

    pub fn with_h_star(mut self, h: i64) -> Self {
        self.h_star = Some(h);
        self
    }
}

/// Critical-probability estimate from the surface-existence proxy
/// `psi(q) = P(F_R(0) - floor(0) >= h*)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcEstimate {
    /// `q̂_L` with an interval covering the bisection resolution and the
    /// sampling error of the crossing.
    pub ci: EstimateCI,
    pub h_star: i64,
    pub target: f64,
    pub psi_lo: f64,
    pub psi_hi: f64,
    /// Per-replica bracket `[a, b]` of the crossing; `b` is infinite when the
    /// event never happens below `q_hi`.
    pub brackets: Vec<(f64, f64)>,
}

/// Replica crossing bracket: the event is absent at `a` and present at `b`.
fn replica_bracket(proto: &TopSolver, seed: u64, h: i64, opts: &PcOptions) -> ((f64, f64), bool) {
    let mut lo_state = proto.clone();
    let lo_field = ConfigField::new(opts.q_lo, seed);
    let at_lo = tail_event(&mut lo_state, &lo_field, h);
    if at_lo.exceeds {
        return ((opts.q_lo, opts.q_lo), at_lo.capped);
    }
    // states computed below the crossing stay valid lower approximations at
    // every larger q, so each attempt restarts from the last lower state
    let mut probe = lo_state.clone();
    let at_hi = tail_event(&mut probe, &lo_field.at_q(opts.q_hi), h);
    if !at_hi.exceeds {
        return ((opts.q_hi, f64::INFINITY), false);
    }
    let (mut a, mut b, mut capped) = (opts.q_lo, opts.q_hi, at_hi.capped);
    while b - a > opts.resolution {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let mut probe = lo_state.clone();
        let hit = tail_event(&mut probe, &lo_field.at_q(mid), h);
        if hit.exceeds {
            b = mid;
            capped = hit.capped;
        } else {
            a = mid;
            lo_state = probe;
        }
    }
    ((a, b), capped)
}

/// Locates `psi(q) = target` by bisection in `q`.
///
/// Under the threshold coupling each replica's event is monotone in `q`, so
/// the bisection runs replica by replica and `psi` is the empirical
/// distribution of the crossing points. `q̂` is its `target` quantile; the
/// interval takes order statistics at `target ± z sqrt(target(1-target)/n)`,
/// using the lower bracket ends below and the upper ends above.
pub fn estimate_pc(floor: &FloorSpec, window: &Window, plan: &ReplicaPlan, opts: &PcOptions) -> Result<PcEstimate> {
    let proto = TopSolver::new(floor, window)?;
    let h = opts.h_star.unwrap_or(window.height_cap / 2).max(1);
    if !(opts.target > 0.0 && opts.target < 1.0) {
        return Err(Error::domain("proxy target", format!("{} outside (0, 1)", opts.target)));
    }
    if !(opts.resolution > 0.0) || plan.replicas == 0 {
        return Err(Error::domain(
            "estimate_pc",
            format!(
                "need resolution > 0 and replicas >= 1 (got {}, {})",
                opts.resolution, plan.replicas
            ),
        ));
    }
    let bracket_err = |psi_lo: f64, psi_hi: f64| Error::Bracket {
        q_lo: opts.q_lo,
        q_hi: opts.q_hi,
        psi_lo,
        psi_hi,
        target: opts.target,
    };
    if !(opts.q_lo >= 0.0 && opts.q_hi <= 1.0 && opts.q_lo < opts.q_hi) {
        return Err(bracket_err(f64::NAN, f64::NAN));
    }
    let runs = map_replicas(plan.replicas, |i| replica_bracket(&proto, plan.seed(i), h, opts));
    let n = runs.len();
    let psi_lo = runs.iter().filter(|((a, b), _)| a == b).count() as f64 / n as f64;
    let psi_hi = runs.iter().filter(|((_, b), _)| b.is_finite()).count() as f64 / n as f64;
    if psi_lo >= opts.target || psi_hi < opts.target {
        return Err(bracket_err(psi_lo, psi_hi));
    }
    let censored = runs.iter().filter(|(_, c)| *c).count();
    let brackets: Vec<(f64, f64)> = runs.into_iter().map(|(b, _)| b).collect();
    let mut lows: Vec<f64> = brackets.iter().map(|b| b.0).collect();
    let mut highs: Vec<f64> = brackets.iter().map(|b| b.1).collect();
    lows.sort_by(f64::total_cmp);
    highs.sort_by(f64::total_cmp);
    let nf = n as f64;
    let spread = Z95 * (opts.target * (1.0 - opts.target) / nf).sqrt();
    // k-th order statistic (1-based) for a cumulative fraction
    let rank = |p: f64| ((p * nf).ceil() as usize).clamp(1, n) - 1;
    let point = highs[rank(opts.target)];
    let lo = lows[rank(opts.target - spread)].min(point);
    let hi = highs[rank(opts.target + spread)].min(opts.q_hi).max(point);
    Ok(PcEstimate {
        ci: EstimateCI {
            point: point.min(opts.q_hi),
            lo,
            hi,
            replicas: n,
            censored_count: censored,
        },
        h_star: h,
        target: opts.target,
        psi_lo,
        psi_hi,
        brackets,
    })
}
