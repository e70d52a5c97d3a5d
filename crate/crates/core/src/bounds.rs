//! Analytic bounds on the critical closed-site probability `q_L(alpha, d, k)`.
//!
//! Lower bounds come from path counting (simplex weights, coarse-grained
//! boxes); upper bounds from the shell hitting time of the diagonal walk.
//! Every entry of a [`BoundsReport`] carries a validity tag so that exact
//! bounds are never mixed with asymptotic ones.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Alpha;
use crate::roots::{bisect, lambert_w0_neg, newton_bracketed};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::domain("alpha", format!("{alpha} outside [0, 1)")));
    }
    Ok(())
}

fn check_d(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("d", "must be >= 1"));
    }
    Ok(())
}

fn check_dk(d: usize, k: usize) -> Result<()> {
    check_d(d)?;
    if k > d {
        return Err(Error::domain("k", format!("{k} > d = {d}")));
    }
    Ok(())
}

/// `1 / 0 = inf` convention used by the simplex bound.
fn over(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Interior point of the probability simplex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexWeights {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl SimplexWeights {
    pub fn new(p1: f64, p2: f64, p3: f64, p4: f64) -> Result<Self> {
        let w = SimplexWeights { p1, p2, p3, p4 };
        w.validate()?;
        Ok(w)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }

    fn from_array(a: [f64; 4]) -> Self {
        SimplexWeights {
            p1: a[0],
            p2: a[1],
            p3: a[2],
            p4: a[3],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.as_array();
        let bad = |reason: &str| Error::InvalidWeights {
            weights: a,
            reason: reason.into(),
        };
        if a.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
            return Err(bad("every weight must lie strictly inside (0, 1)"));
        }
        if (a.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(bad("weights must sum to 1"));
        }
        Ok(())
    }
}

/// `½ (4d)^{-1/(1-α)}`, valid for `q_L(α, d, k)` with any `k <= d`.
pub fn lb_general(alpha: f64, d: usize) -> Result<f64> {
    check_alpha(alpha)?;
    check_d(d)?;
    Ok(0.5 * (4.0 * d as f64).powf(-1.0 / (1.0 - alpha)))
}

/// The three terms of the simplex bound, with `1/0 = inf`.
pub fn lb_simplex_terms(alpha: f64, d: usize, k: usize, w: &SimplexWeights) -> Result<[f64; 3]> {
    check_alpha(alpha)?;
    check_dk(d, k)?;
    w.validate()?;
    let kf = k as f64;
    Ok([
        over(w.p1 * (w.p2 * w.p3).sqrt(), kf),
        w.p1 * over(w.p3, kf).powf(1.0 / (1.0 - alpha)),
        over(w.p1 * w.p4, 2.0 * (d - k) as f64),
    ])
}

pub fn lb_simplex(alpha: f64, d: usize, k: usize, w: &SimplexWeights) -> Result<f64> {
    let t = lb_simplex_terms(alpha, d, k, w)?;
    Ok(t[0].min(t[1]).min(t[2]))
}

/// Weight choices used in the hand-made proofs, with `eps = 1e-12` standing
/// in for the limits taken there.
pub fn exhibited_weights(alpha: f64) -> Vec<SimplexWeights> {
    let eps = 1e-12;
    let c = (1.0 - alpha) / (2.0 - alpha);
    let mut out = vec![
        SimplexWeights::from_array([0.5, 0.25 - eps, 0.25 - eps, 2.0 * eps]),
        SimplexWeights::from_array([0.5, eps / 2.0, eps / 2.0, 0.5 - eps]),
        SimplexWeights::from_array([0.5, 0.25, 0.125, 0.125]),
    ];
    if c - 2.0 * eps > 0.0 {
        out.push(SimplexWeights::from_array([
            c - 2.0 * eps,
            eps,
            1.0 / (2.0 - alpha),
            eps,
        ]));
    }
    out
}

const MIN_WEIGHT: f64 = 1e-15;

fn pattern_directions() -> Vec<[f64; 4]> {
    let mut dirs = Vec::new();
    for a in -2i32..=2 {
        for b in -2i32..=2 {
            for c in -2i32..=2 {
                let e = -(a + b + c);
                if e.abs() <= 2 && (a, b, c, e) != (0, 0, 0, 0) {
                    dirs.push([a as f64, b as f64, c as f64, e as f64]);
                }
            }
        }
    }
    dirs
}

fn simplex_value(alpha: f64, d: usize, k: usize, w: [f64; 4]) -> f64 {
    if w.iter().any(|&p| p < MIN_WEIGHT || p >= 1.0) {
        return f64::NEG_INFINITY;
    }
    let kf = k as f64;
    let t1 = over(w[0] * (w[1] * w[2]).sqrt(), kf);
    let t2 = w[0] * over(w[2], kf).powf(1.0 / (1.0 - alpha));
    let t3 = over(w[0] * w[3], 2.0 * (d - k) as f64);
    t1.min(t2).min(t3)
}

fn pattern_search(alpha: f64, d: usize, k: usize, start: [f64; 4], dirs: &[[f64; 4]]) -> ([f64; 4], f64) {
    let mut w = start;
    let mut best = simplex_value(alpha, d, k, w);
    let mut step = 1.0 / 32.0;
    while step > 1e-17 {
        for _ in 0..10_000 {
            let mut cand_best = best;
            let mut cand_w = w;
            for v in dirs {
                let mut c = w;
                for i in 0..4 {
                    c[i] += step * v[i];
                }
                // absorb rounding so the weights keep summing to one
                let s: f64 = c.iter().sum();
                c[0] += 1.0 - s;
                let val = simplex_value(alpha, d, k, c);
                if val > cand_best {
                    cand_best = val;
                    cand_w = c;
                }
            }
            if cand_best > best {
                best = cand_best;
                w = cand_w;
            } else {
                break;
            }
        }
        step *= 0.5;
    }
    (w, best)
}

/// Maximizes the simplex bound: a deterministic grid seeds a pattern search
/// over zero-sum directions. The proof's own weight choices are always among
/// the seeds, so the result dominates each of them.
pub fn lb_simplex_opt(alpha: f64, d: usize, k: usize) -> Result<(f64, SimplexWeights)> {
    check_alpha(alpha)?;
    check_dk(d, k)?;
    let n = 20;
    let mut seeds: Vec<([f64; 4], f64)> = Vec::new();
    for a in 1..n {
        for b in 1..n - a {
            for c in 1..n - a - b {
                let w = [a as f64 / n as f64, b as f64 / n as f64, c as f64 / n as f64, 0.0];
                let w = [w[0], w[1], w[2], 1.0 - w[0] - w[1] - w[2]];
                seeds.push((w, simplex_value(alpha, d, k, w)));
            }
        }
    }
    seeds.sort_by(|x, y| y.1.total_cmp(&x.1));
    seeds.truncate(4);
    for w in exhibited_weights(alpha) {
        let a = w.as_array();
        seeds.push((a, simplex_value(alpha, d, k, a)));
    }
    let dirs = pattern_directions();
    let mut best = (seeds[0].0, f64::NEG_INFINITY);
    for (s, _) in seeds {
        let r = pattern_search(alpha, d, k, s, &dirs);
        if r.1 > best.1 {
            best = r;
        }
    }
    Ok((best.1, SimplexWeights::from_array(best.0)))
}

/// Growth regimes of the number of tilted axes `k = φ(d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `φ(d) = o(d^{1-α})`: prefactor of `d^{-1}`.
    A,
    /// `φ(d) ~ c d^{1-α}`: prefactor `C(c, α)` of `d^{-1}`.
    B,
    /// `φ(d) ~ c d`: prefactor of `d^{-1/(1-α)}`.
    C,
}

/// Asymptotic lower-bound constants. Regime B needs weights; without them
/// the supremum over the simplex is returned (`1/8` at `c = 0` or `α = 0`,
/// approached but not attained at the boundary).
pub fn lb_regime(alpha: f64, c: f64, regime: Regime, weights: Option<&SimplexWeights>) -> Result<f64> {
    check_alpha(alpha)?;
    match regime {
        Regime::A => {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::domain("c", format!("{c} outside [0, 1]")));
            }
            Ok(0.125)
        }
        Regime::C => {
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::domain("c", format!("{c} outside (0, 1]")));
            }
            Ok(0.25 * (1.0 - alpha) * c.powf(-1.0 / (1.0 - alpha)))
        }
        Regime::B => {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::domain("c", format!("{c} outside [0, 1]")));
            }
            match weights {
                Some(w) => {
                    w.validate()?;
                    Ok(regime_b(alpha, c, w.as_array()))
                }
                // values stated for the flat and the sparse limit
                None if c == 0.0 || alpha == 0.0 => Ok(0.125),
                None => Ok(regime_b_sup(alpha, c)),
            }
        }
    }
}

/// Numerical supremum of the regime-B constant over interior weights.
pub fn regime_b_sup(alpha: f64, c: f64) -> f64 {
    let dirs = pattern_directions();
    let f = |w: [f64; 4]| {
        if w.iter().any(|&p| p < MIN_WEIGHT) {
            f64::NEG_INFINITY
        } else {
            regime_b(alpha, c, w)
        }
    };
    let mut w = [0.25; 4];
    let mut best = f(w);
    let mut step = 1.0 / 32.0;
    while step > 1e-17 {
        loop {
            let mut improved = false;
            for v in &dirs {
                let mut cand = w;
                for i in 0..4 {
                    cand[i] += step * v[i];
                }
                let val = f(cand);
                if val > best {
                    best = val;
                    w = cand;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    best
}

fn regime_b(alpha: f64, c: f64, w: [f64; 4]) -> f64 {
    let [p1, p2, p3, p4] = w;
    let t3 = 0.5 * over(p1 * p4, 1.0 - c);
    if alpha == 0.0 {
        over(p1 * (p2 * p3).sqrt(), c).min(over(p1 * p3, c)).min(t3)
    } else {
        (p1 * over(p3, c).powf(1.0 / (1.0 - alpha))).min(t3)
    }
}

/// `ε log(4d+2) / (exp((1+ε) 4(k+1) log(4d+2)) - 1) · 2^{-k}`.
pub fn lb_alpha_const(k: usize, d: usize, eps: f64) -> Result<f64> {
    check_d(d)?;
    if k == 0 || k > d {
        return Err(Error::domain("k", format!("{k} outside 1..={d}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain("epsilon", format!("{eps} must be positive")));
    }
    let l = (4.0 * d as f64 + 2.0).ln();
    let a = 4.0 * (k as f64 + 1.0) * l;
    Ok(eps * l / ((1.0 + eps) * a).exp_m1() * 0.5f64.powi(k as i32))
}

/// Solution of the optimality condition for `lb_alpha_const`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonOpt {
    pub epsilon: f64,
    /// Principal-branch root of `h e^h = -e^{-1-A}`.
    pub h: f64,
    pub residual: f64,
}

pub fn epsilon_opt(k: usize, d: usize) -> Result<EpsilonOpt> {
    check_d(d)?;
    if k == 0 || k > d {
        return Err(Error::domain("k", format!("{k} outside 1..={d}")));
    }
    let a = 4.0 * (k as f64 + 1.0) * (4.0 * d as f64 + 2.0).ln();
    let root = lambert_w0_neg(-(-1.0 - a).exp())?;
    Ok(EpsilonOpt {
        epsilon: (1.0 + root.x) / a,
        h: root.x,
        residual: root.residual,
    })
}

/// `C(k, d, ε*) (1-α)^k` at the optimal `ε*`.
pub fn lb_alpha(alpha: f64, d: usize, k: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let e = epsilon_opt(k, d)?;
    Ok(lb_alpha_const(k, d, e.epsilon)? * (1.0 - alpha).powi(k as i32))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorialBound {
    /// `d!(1-α)^d / (1 + d!(1-α)^d)`.
    pub value: f64,
    /// `d!(1-α)^d`.
    pub weak: f64,
}

pub fn ub_factorial(alpha: f64, d: usize) -> Result<FactorialBound> {
    check_alpha(alpha)?;
    check_d(d)?;
    let mut x = 1.0;
    for i in 1..=d {
        x *= i as f64 * (1.0 - alpha);
    }
    Ok(FactorialBound {
        value: x / (1.0 + x),
        weak: x,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaConstant {
    pub theta: f64,
    /// `θ^{1/ρ} / (e^θ - 1)`.
    pub r: f64,
    pub residual: f64,
}

/// Solves `θ e^θ / (e^θ - 1) = 1/ρ`.
pub fn theta_constant(rho: f64) -> Result<ThetaConstant> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::domain("rho", format!("{rho} outside (0, 1]")));
    }
    if rho == 1.0 {
        return Ok(ThetaConstant {
            theta: 0.0,
            r: 1.0,
            residual: 0.0,
        });
    }
    let target = 1.0 / rho;
    // θ e^θ/(e^θ - 1) = θ / (1 - e^{-θ}), increasing from 1 at θ = 0
    let g = |t: f64| t / -(-t).exp_m1() - target;
    let dg = |t: f64| {
        let s = -(-t).exp_m1();
        (s - t * (-t).exp()) / (s * s)
    };
    let root = newton_bracketed(g, dg, 1e-300, target + 1.0, 1e-15)?;
    let theta = root.x;
    Ok(ThetaConstant {
        theta,
        r: theta.powf(target) / theta.exp_m1(),
        residual: root.residual,
    })
}

/// `C(α) = R(1 - α)`.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(theta_constant(1.0 - alpha)?.r)
}

/// Sizes of the diagonal balls `B(j) = {z in N_0^d : |z|_1 <= j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellGeometry {
    pub d: usize,
}

impl ShellGeometry {
    pub fn new(d: usize) -> Result<Self> {
        check_d(d)?;
        Ok(ShellGeometry { d })
    }

    /// `binom(j + d, d)`; `None` on overflow.
    pub fn ball_size(&self, j: u64) -> Option<u128> {
        let mut b: u128 = 1;
        for i in 1..=self.d as u128 {
            b = b.checked_mul(j as u128 + i)? / i;
        }
        Some(b)
    }

    /// Shell of the `i`-th point of the ordering: the smallest `j` with
    /// `ball_size(j) - 1 >= i`.
    pub fn radius_of(&self, i: u128) -> u64 {
        let mut j = 0;
        while self.ball_size(j).map_or(false, |b| b - 1 < i) {
            j += 1;
        }
        j
    }
}

/// `E[T] = sum_{m >= 0} p^{binom(m+d, d)}` together with an upper bound on
/// the truncated tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedT {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Summation stops once the geometric tail certificate `t_m p / q` (later
/// exponents grow by at least one per shell) drops below
/// `tol * 1e-3 * partial sum`, and never above rounding level.
pub fn expected_t_series(q: f64, d: usize, tol: f64) -> Result<ExpectedT> {
    check_d(d)?;
    if q == 0.0 {
        return Err(Error::Divergent);
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain("q", format!("{q} outside (0, 1]")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tol", format!("{tol} must be positive")));
    }
    let p = 1.0 - q;
    let mut terms = Vec::new();
    let mut sum = 0.0;
    let mut binom = 1.0f64;
    let mut m = 0usize;
    loop {
        // binom(m + d, d)
        if m == 0 {
            binom = 1.0;
            for i in 1..=d {
                binom *= (m + i) as f64 / i as f64;
            }
        } else {
            binom *= (m + d) as f64 / m as f64;
        }
        let term = p.powf(binom);
        terms.push(term);
        sum += term;
        m += 1;
        let tail = term * p / q;
        if term == 0.0 || tail <= (tol * 1e-3).min(f64::EPSILON / 8.0) * sum {
            // smallest first keeps dyadic cases such as p = 1/2 exact
            return Ok(ExpectedT {
                value: terms.iter().rev().sum(),
                tail_bound: tail,
                terms: m,
            });
        }
    }
}

pub fn expected_t_exact(q: f64, d: usize, tol: f64) -> Result<f64> {
    Ok(expected_t_series(q, d, tol)?.value)
}

/// Infimum of the `q` for which `E[T] < 1/(1-α)`.
pub fn ub_expected_t(alpha: f64, d: usize) -> Result<f64> {
    check_alpha(alpha)?;
    check_d(d)?;
    let target = 1.0 / (1.0 - alpha);
    let f = |q: f64| {
        expected_t_exact(q, d, 1e-15)
            .map(|e| e - target)
            .unwrap_or(f64::INFINITY)
    };
    let hi = 1.0;
    let mut lo = ub_factorial(alpha, d)?.value.min(0.5);
    while f(lo) <= 0.0 {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::domain("alpha", "no bracket for the shell-time criterion"));
        }
    }
    Ok(bisect(f, lo, hi)?.x)
}

/// Lemma-style series bound parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesBoundParams {
    pub delta: f64,
    pub c: f64,
    pub convergent: bool,
}

pub fn series_bound_params(alpha: f64, d: usize, k: usize, q: f64, w: &SimplexWeights) -> Result<SeriesBoundParams> {
    check_alpha(alpha)?;
    check_dk(d, k)?;
    w.validate()?;
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("q", format!("{q} outside [0, 1]")));
    }
    let (p1, p2, p3, p4) = (w.p1, w.p2, w.p3, w.p4);
    let kf = k as f64;
    let r1 = q * q * kf * kf / (p1 * p1 * p2 * p3);
    let r2 = q.powf(1.0 - alpha) * kf / (p1.powf(1.0 - alpha) * p3);
    let r3 = 2.0 * (d - k) as f64 * q / (p1 * p4);
    let delta = q / p1;
    let convergent = delta < 1.0 && r1 < 1.0 && r2 < 1.0 && r3 < 1.0;
    let c = if convergent {
        2f64.powi(d as i32) / ((1.0 - r1) * (1.0 - r2) * (1.0 - r3))
    } else {
        f64::INFINITY
    };
    Ok(SeriesBoundParams { delta, c, convergent })
}

/// `C δ^{h-1}`; `None` when the defining series diverges.
pub fn series_bound(alpha: f64, d: usize, k: usize, q: f64, w: &SimplexWeights, h: i64) -> Result<Option<f64>> {
    if h < 1 {
        return Err(Error::domain("h", format!("{h} < 1")));
    }
    let s = series_bound_params(alpha, d, k, q, w)?;
    Ok(s.convergent.then(|| s.c * s.delta.powi((h - 1) as i32)))
}

/// Per-step Chernoff exponent for coarse-grained paths:
/// `log(4d+2) - βγ + q(e^β - 1)((2-α)/(1-α))^k`.
pub fn cg_exponent(alpha: f64, d: usize, k: usize, q: f64, beta: f64, gamma: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_dk(d, k)?;
    if !(beta > 0.0) {
        return Err(Error::domain("beta", format!("{beta} must be positive")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain("gamma", format!("{gamma} outside (0, 1)")));
    }
    let l = (4.0 * d as f64 + 2.0).ln();
    Ok(l - beta * gamma + q * beta.exp_m1() * ((2.0 - alpha) / (1.0 - alpha)).powi(k as i32))
}

/// `β = (1+ε) γ^{-1} log(4d+2)`.
pub fn cg_beta(d: usize, eps: f64, gamma: f64) -> f64 {
    (1.0 + eps) / gamma * (4.0 * d as f64 + 2.0).ln()
}

/// The `q` at which the exponent with `β = cg_beta` vanishes.
pub fn cg_threshold(alpha: f64, d: usize, k: usize, eps: f64, gamma: f64) -> f64 {
    let l = (4.0 * d as f64 + 2.0).ln();
    eps * l / ((1.0 + eps) / gamma * l).exp_m1() * ((1.0 - alpha) / (2.0 - alpha)).powi(k as i32)
}

/// `γ = 1/(4(k+1))`.
pub fn cg_gamma(k: usize) -> f64 {
    1.0 / (4.0 * (k as f64 + 1.0))
}

/// Least number of up-steps of a coarse-grained path of length `m` ending
/// at or above the plane: `(m - k) / (2(k+1))`.
pub fn cg_min_up_steps(m: usize, k: usize) -> f64 {
    (m as f64 - k as f64) / (2.0 * (k as f64 + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Validity {
    Exact,
    AsymptoticInD,
    AsymptoticInAlpha,
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Validity::Exact => "exact",
            Validity::AsymptoticInD => "asymptotic-in-d",
            Validity::AsymptoticInAlpha => "asymptotic-in-alpha",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub kind: BoundKind,
    pub value: f64,
    pub validity: Validity,
    /// Parameters actually plugged in, e.g. when a bound for `(α, k, k)` is
    /// transferred to `(α, d, k)` by monotonicity.
    pub params: String,
}

/// `(8d)^{-1}` (exact lower) and `(2d)^{-1}` (asymptotic upper) for the flat case.
pub fn gh12_reference(d: usize) -> Result<(BoundEntry, BoundEntry)> {
    check_d(d)?;
    let df = d as f64;
    Ok((
        BoundEntry {
            name: "gh12_lower".into(),
            kind: BoundKind::Lower,
            value: 1.0 / (8.0 * df),
            validity: Validity::Exact,
            params: format!("alpha=0 d={d} k=0"),
        },
        BoundEntry {
            name: "gh12_upper".into(),
            kind: BoundKind::Upper,
            value: 1.0 / (2.0 * df),
            validity: Validity::AsymptoticInD,
            params: format!("alpha=0 d={d} k=0"),
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub alpha: Alpha,
    pub d: usize,
    pub k: usize,
    pub entries: Vec<BoundEntry>,
}

impl BoundsReport {
    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).map(|e| e.value)
    }

    fn exact(&self, kind: BoundKind) -> impl Iterator<Item = f64> + '_ {
        self.entries
            .iter()
            .filter(move |e| e.kind == kind && e.validity == Validity::Exact)
            .map(|e| e.value)
    }

    pub fn max_exact_lower(&self) -> f64 {
        self.exact(BoundKind::Lower).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_exact_upper(&self) -> f64 {
        self.exact(BoundKind::Upper).fold(f64::INFINITY, f64::min)
    }

    pub fn sandwich_holds(&self) -> bool {
        self.max_exact_lower() <= self.min_exact_upper()
    }
}

/// Every applicable bound for `q_L(α, d, k)`.
///
/// Bounds proved for `k = d` are transferred using that `q_L` is
/// nonincreasing in `k` and in `d`: lower bounds for `(α, d, d)` hold for
/// all `k <= d`, upper bounds for `(α, k, k)` hold for all `d >= k`. With
/// `k = 0` (or `α = 0`) the plane is flat and the `α = 0, d = 1` upper
/// bounds apply.
pub fn bounds_report(alpha: Alpha, d: usize, k: usize) -> Result<BoundsReport> {
    check_dk(d, k)?;
    let a = alpha.to_f64();
    let mut entries = Vec::new();
    let mut push = |name: &str, kind, value: f64, validity, params: String| {
        entries.push(BoundEntry {
            name: name.into(),
            kind,
            value,
            validity,
            params,
        })
    };
    push(
        "lb_general",
        BoundKind::Lower,
        lb_general(a, d)?,
        Validity::Exact,
        format!("alpha={alpha} d={d}"),
    );
    let (opt, w) = lb_simplex_opt(a, d, k)?;
    push(
        "lb_simplex_opt",
        BoundKind::Lower,
        opt,
        Validity::Exact,
        format!("p=({:.6e},{:.6e},{:.6e},{:.6e})", w.p1, w.p2, w.p3, w.p4),
    );
    if k >= 1 {
        let e = epsilon_opt(k, d)?;
        push(
            "lb_alpha",
            BoundKind::Lower,
            lb_alpha(a, d, k)?,
            Validity::Exact,
            format!("epsilon={:.6e}", e.epsilon),
        );
    }
    let flat = k == 0 || alpha.is_zero();
    if flat {
        let (lo, hi) = gh12_reference(d)?;
        entries.push(lo);
        entries.push(hi);
    }
    let (ua, ud) = if k == 0 { (0.0, 1) } else { (a, k) };
    let up_params = format!(
        "alpha={} d={ud}",
        if k == 0 { "0".to_string() } else { alpha.to_string() }
    );
    let mut push = |name: &str, kind, value: f64, validity, params: String| {
        entries.push(BoundEntry {
            name: name.into(),
            kind,
            value,
            validity,
            params,
        })
    };
    push(
        "ub_factorial",
        BoundKind::Upper,
        ub_factorial(ua, ud)?.value,
        Validity::Exact,
        up_params.clone(),
    );
    push(
        "ub_expected_T",
        BoundKind::Upper,
        ub_expected_t(ua, ud)?,
        Validity::Exact,
        up_params,
    );
    let ca = c_alpha(a)?;
    if k == d {
        push(
            "ub_asymptotic_d",
            BoundKind::Upper,
            ca * (d as f64).powf(-1.0 / (1.0 - a)),
            Validity::AsymptoticInD,
            format!("C_alpha={ca:.12}"),
        );
    }
    if d == 1 && k == 1 {
        push(
            "lb_asymptotic_alpha",
            BoundKind::Lower,
            1.0 - a,
            Validity::AsymptoticInAlpha,
            format!("alpha={alpha}"),
        );
    }
    let report = BoundsReport { alpha, d, k, entries };
    if !report.sandwich_holds() {
        return Err(Error::domain(
            "bounds sandwich",
            format!(
                "exact lower {} exceeds exact upper {} at alpha={alpha} d={d} k={k}",
                report.max_exact_lower(),
                report.min_exact_upper()
            ),
        ));
    }
    Ok(report)
}
