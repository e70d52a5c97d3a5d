//! Deterministic Bernoulli site fields over `Z^n`.
//!
//! A site's uniform variate is a stateless hash of `(seed, coords)`, so the
//! infinite lattice needs no storage and every query is reproducible. A site
//! is closed iff its variate is below `q`; sharing the seed across different
//! `q` gives the standard monotone threshold coupling.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteState {
    Open,
    Closed,
}

/// Anything that can answer "is this site closed?".
pub trait SiteConfig {
    fn is_closed(&self, coords: &[i64]) -> bool;

    fn state(&self, coords: &[i64]) -> SiteState {
        if self.is_closed(coords) {
            SiteState::Closed
        } else {
            SiteState::Open
        }
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform variate in `[0, 1)` for a site.
#[inline]
pub fn site_uniform(seed: u64, coords: &[i64]) -> f64 {
    let mut h = mix64(seed ^ (coords.len() as u64).wrapping_mul(GOLDEN));
    for (i, &c) in coords.iter().enumerate() {
        let lane = (c as u64).wrapping_add((i as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03));
        h = mix64(h.wrapping_add(GOLDEN) ^ lane);
    }
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seeded Bernoulli(q) closed-site field with optional explicit overrides.
#[derive(Clone, Debug)]
pub struct ConfigField {
    q: f64,
    seed: u64,
    overrides: Option<Arc<HashMap<Vec<i64>, SiteState>>>,
}

impl ConfigField {
    /// `q` is clamped into `[0, 1]`.
    pub fn new(q: f64, seed: u64) -> Self {
        ConfigField {
            q: q.clamp(0.0, 1.0),
            seed,
            overrides: None,
        }
    }

    pub fn with_overrides<I>(mut self, sites: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, SiteState)>,
    {
        let mut map = self.overrides.take().map(|m| (*m).clone()).unwrap_or_default();
        map.extend(sites);
        self.overrides = Some(Arc::new(map));
        self
    }

    /// Same seed and overrides at a different closed probability.
    pub fn at_q(&self, q: f64) -> Self {
        ConfigField {
            q: q.clamp(0.0, 1.0),
            seed: self.seed,
            overrides: self.overrides.clone(),
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The site's coupling variate (ignores overrides).
    pub fn uniform(&self, coords: &[i64]) -> f64 {
        site_uniform(self.seed, coords)
    }

    pub fn site_state(&self, coords: &[i64]) -> SiteState {
        self.state(coords)
    }
}

impl SiteConfig for ConfigField {
    #[inline]
    fn is_closed(&self, coords: &[i64]) -> bool {
        if let Some(map) = &self.overrides {
            if let Some(s) = map.get(coords) {
                return *s == SiteState::Closed;
            }
        }
        site_uniform(self.seed, coords) < self.q
    }
}

impl<T: SiteConfig + ?Sized> SiteConfig for &T {
    fn is_closed(&self, coords: &[i64]) -> bool {
        (**self).is_closed(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn extreme_q() {
        let open = ConfigField::new(0.0, 7);
        let closed = ConfigField::new(1.0, 7);
        for x in -20..20 {
            for y in -5..5 {
                assert_eq!(open.site_state(&[x, y]), SiteState::Open);
                assert_eq!(closed.site_state(&[x, y]), SiteState::Closed);
            }
        }
    }

    #[test]
    fn overrides_take_precedence() {
        let f = ConfigField::new(0.0, 1).with_overrides([(vec![0, 1], SiteState::Closed)]);
        assert!(f.is_closed(&[0, 1]));
        assert!(!f.is_closed(&[0, 2]));
        let g = f.at_q(1.0);
        assert!(g.is_closed(&[0, 2]));
    }

    #[test]
    fn empirical_density_matches_q() {
        let f = ConfigField::new(0.3, 99);
        let mut n = 0usize;
        let mut closed = 0usize;
        for x in -100..100 {
            for y in -50..50 {
                n += 1;
                closed += f.is_closed(&[x, y]) as usize;
            }
        }
        let p = closed as f64 / n as f64;
        let se = (0.3 * 0.7 / n as f64).sqrt();
        assert!((p - 0.3).abs() < 4.0 * se, "density {p}");
    }

    #[test]
    fn dimension_is_part_of_the_hash() {
        let a = site_uniform(5, &[1, 2]);
        let b = site_uniform(5, &[1, 2, 0]);
        assert_ne!(a, b);
    }

    proptest! {
        #[test]
        fn state_is_pure_and_coupled(seed in any::<u64>(), x in -1000i64..1000, y in -1000i64..1000,
                                     q in 0.0f64..1.0, dq in 0.0f64..1.0) {
            let f = ConfigField::new(q, seed);
            prop_assert_eq!(f.site_state(&[x, y]), f.site_state(&[x, y]));
            let g = f.at_q((q + dq).min(1.0));
            if f.is_closed(&[x, y]) {
                prop_assert!(g.is_closed(&[x, y]));
            }
        }
    }
}
