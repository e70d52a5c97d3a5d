//! Scalar root finding on verified brackets.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub x: f64,
    /// `|f(x)|` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

fn check_bracket(flo: f64, fhi: f64, lo: f64, hi: f64) -> Result<()> {
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() && flo != 0.0 && fhi != 0.0 {
        return Err(Error::domain(
            "root bracket",
            format!("f({lo}) = {flo} and f({hi}) = {fhi} do not change sign"),
        ));
    }
    Ok(())
}

/// Bisection until the bracket stops shrinking in floating point.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<Root> {
    let mut flo = f(lo);
    let fhi = f(hi);
    check_bracket(flo, fhi, lo, hi)?;
    if flo == 0.0 {
        return Ok(Root {
            x: lo,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fhi == 0.0 {
        return Ok(Root {
            x: hi,
            residual: 0.0,
            iterations: 0,
        });
    }
    let mut it = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || it >= 2000 {
            break;
        }
        it += 1;
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(Root {
                x: mid,
                residual: 0.0,
                iterations: it,
            });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let (flo, fhi) = (f(lo), f(hi));
    let (x, r) = if flo.abs() <= fhi.abs() { (lo, flo) } else { (hi, fhi) };
    Ok(Root {
        x,
        residual: r.abs(),
        iterations: it,
    })
}

/// Newton's method kept inside a sign-change bracket; falls back to
/// bisection whenever a Newton step would leave it.
pub fn newton_bracketed<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, tol: f64) -> Result<Root>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    check_bracket(flo, fhi, lo, hi)?;
    let lo_sign = flo.signum();
    let mut x = 0.5 * (lo + hi);
    let mut best = Root {
        x,
        residual: f64::INFINITY,
        iterations: 0,
    };
    for it in 1..=200 {
        let fx = f(x);
        if fx.abs() < best.residual {
            best = Root {
                x,
                residual: fx.abs(),
                iterations: it,
            };
        }
        if fx == 0.0 {
            break;
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let step = fx / df(x);
        let mut next = x - step;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        let moved = (next - x).abs();
        x = next;
        if moved <= tol * x.abs().max(f64::MIN_POSITIVE) || hi - lo <= tol * x.abs() {
            let fx = f(x);
            if fx.abs() <= best.residual {
                best = Root {
                    x,
                    residual: fx.abs(),
                    iterations: it,
                };
            }
            break;
        }
    }
    Ok(best)
}

/// Principal branch `W_0(x)` for `x` in `[-1/e, 0)`: the solution of
/// `w e^w = x` with `w` in `[-1, 0)`.
pub fn lambert_w0_neg(x: f64) -> Result<Root> {
    let branch = -(-1f64).exp();
    if !(x >= branch && x < 0.0) {
        return Err(Error::domain("Lambert argument", format!("{x} outside [-1/e, 0)")));
    }
    if x == branch {
        return Ok(Root {
            x: -1.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    // w e^w - x changes sign on [-1, 0]; near 0, w ~ x gives a sharp start
    newton_bracketed(|w| w * w.exp() - x, |w| (1.0 + w) * w.exp(), -1.0, 0.0, 1e-15)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-15);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn newton_cubic() {
        let r = newton_bracketed(|x| x * x * x - x - 2.0, |x| 3.0 * x * x - 1.0, 1.0, 2.0, 1e-15).unwrap();
        assert!(r.residual < 1e-13);
        assert!((r.x - 1.521_379_706_804_567_5).abs() < 1e-13);
    }

    #[test]
    fn lambert_values() {
        // W0(-1/(2e)) solved independently: w e^w = -0.18393972058572117
        let x = -0.5 * (-1f64).exp();
        let w = lambert_w0_neg(x).unwrap();
        assert!((w.x * w.x.exp() - x).abs() < 1e-15);
        assert!(w.x > -1.0 && w.x < 0.0);
        let w = lambert_w0_neg(-1e-7).unwrap();
        assert!((w.x - (-1.000_000_100_000_015e-7)).abs() < 1e-20);
        assert_eq!(lambert_w0_neg(-(-1f64).exp()).unwrap().x, -1.0);
        assert!(lambert_w0_neg(0.1).is_err());
        assert!(lambert_w0_neg(-1.0).is_err());
    }
}
