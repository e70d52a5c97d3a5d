//! Exact rational tilt parameter.
//!
//! Floors of `alpha * s` are taken in integer arithmetic so that sites lying
//! exactly on a tilted plane are never misclassified by rounding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tilt parameter `num / den` in `[0, 1)`, stored in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Alpha {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Alpha {
    pub const ZERO: Alpha = Alpha { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        let input = format!("{num}/{den}");
        if den == 0 {
            return Err(Error::InvalidRational {
                input,
                reason: "zero denominator".into(),
            });
        }
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num, den).max(1);
        num /= g;
        den /= g;
        if num < 0 || num >= den {
            return Err(Error::InvalidRational {
                input,
                reason: "alpha must lie in [0, 1)".into(),
            });
        }
        Ok(Alpha { num, den })
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `1 - alpha` as a float.
    pub fn complement(self) -> f64 {
        (self.den - self.num) as f64 / self.den as f64
    }

    /// `floor(alpha * s)`, rounding toward negative infinity.
    #[inline]
    pub fn floor_mul(self, s: i64) -> i64 {
        let p = self.num as i128 * s as i128;
        p.div_euclid(self.den as i128) as i64
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl From<Alpha> for String {
    fn from(a: Alpha) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for Alpha {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for Alpha {
    type Err = Error;

    /// Accepts `n/d`, an integer, or a finite decimal such as `0.375`
    /// (converted exactly).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = |reason: &str| Error::InvalidRational {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad("bad numerator"))?;
            let d: i64 = d.trim().parse().map_err(|_| bad("bad denominator"))?;
            return Alpha::new(n, d);
        }
        if let Some((int, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
                return Err(bad("bad decimal fraction"));
            }
            let int: i64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad("bad integer part"))?
            };
            let den = 10i64.pow(frac.len() as u32);
            let f: i64 = frac.parse().map_err(|_| bad("bad decimal fraction"))?;
            let num = int
                .checked_mul(den)
                .and_then(|v| v.checked_add(f))
                .ok_or_else(|| bad("overflow"))?;
            return Alpha::new(num, den);
        }
        let n: i64 = t.parse().map_err(|_| bad("not a rational"))?;
        Alpha::new(n, 1)
    }
}
