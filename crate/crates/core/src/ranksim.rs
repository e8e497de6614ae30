//! Rank-based similarity between a target sample and a context sample.
//!
//! All four variants take the pair of mutual positions `(l_ab, l_ba)`:
//! `l_ab` is the position of `a` in `b`'s ranking list and `l_ba` the
//! reverse. Positions are 1-based; `(0, 0)` marks a sample paired with
//! itself.
//!
//! | Kind | `r` |
//! |------|-----|
//! | nonreciprocal | `1 / l_ab` |
//! | reciprocal-max | `1 / max(l_ab, l_ba)` |
//! | reciprocal-sum | `1 / (l_ab + l_ba)` |
//! | combined | `1 / (l_ab + l_ba + max(l_ab, l_ba))` |
//!
//! The max form cannot tell `(1, 3)` from `(2, 3)`, and the sum form cannot
//! tell `(1, 7)` from `(4, 4)`; the combined form separates both.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Value of `r` for a sample paired with itself, above every non-self value
/// of the combined measure (at most 1/3).
pub const SELF_SIMILARITY: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RankPair {
    pub l_ab: u32,
    pub l_ba: u32,
}

impl RankPair {
    pub const SELF: RankPair = RankPair { l_ab: 0, l_ba: 0 };

    pub const fn new(l_ab: u32, l_ba: u32) -> Self {
        Self { l_ab, l_ba }
    }

    pub fn is_self(self) -> bool {
        self.l_ab == 0 && self.l_ba == 0
    }

    fn check_non_self(self) -> Result<()> {
        if self.l_ab == 0 || self.l_ba == 0 {
            Err(Error::InvalidRankPair {
                l_ab: self.l_ab,
                l_ba: self.l_ba,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MeasureKind {
    Nonreciprocal,
    ReciprocalMax,
    ReciprocalSum,
    #[default]
    Combined,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [
        MeasureKind::Nonreciprocal,
        MeasureKind::ReciprocalMax,
        MeasureKind::ReciprocalSum,
        MeasureKind::Combined,
    ];

    /// Evaluates the measure, applying the self-pair rule: `(0, 0)` gives
    /// [`SELF_SIMILARITY`] for every kind. Any other pair with a zero is an
    /// error.
    pub fn eval(self, p: RankPair) -> Result<f64> {
        if p.is_self() {
            return Ok(SELF_SIMILARITY);
        }
        match self {
            MeasureKind::Nonreciprocal => {
                p.check_non_self()?;
                r_nonreciprocal(p.l_ab)
            }
            MeasureKind::ReciprocalMax => r_reciprocal_max(p),
            MeasureKind::ReciprocalSum => r_reciprocal_sum(p),
            MeasureKind::Combined => r_combined(p),
        }
    }

    /// Hot-path evaluation for pairs read from a position table, which are
    /// either the self pair or fully positive.
    #[inline]
    pub(crate) fn eval_table(self, l_ab: u32, l_ba: u32) -> f64 {
        if l_ab == 0 && l_ba == 0 {
            return SELF_SIMILARITY;
        }
        debug_assert!(l_ab > 0 && l_ba > 0);
        let (a, b) = (l_ab as u64, l_ba as u64);
        let denom = match self {
            MeasureKind::Nonreciprocal => a,
            MeasureKind::ReciprocalMax => a.max(b),
            MeasureKind::ReciprocalSum => a + b,
            MeasureKind::Combined => a + b + a.max(b),
        };
        1.0 / denom as f64
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::Nonreciprocal => "nonreciprocal",
            MeasureKind::ReciprocalMax => "max",
            MeasureKind::ReciprocalSum => "sum",
            MeasureKind::Combined => "combined",
        })
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonreciprocal" => Ok(MeasureKind::Nonreciprocal),
            "max" => Ok(MeasureKind::ReciprocalMax),
            "sum" => Ok(MeasureKind::ReciprocalSum),
            "combined" => Ok(MeasureKind::Combined),
            other => Err(Error::InvalidParam(format!(
                "unknown measure `{other}` (expected nonreciprocal|max|sum|combined)"
            ))),
        }
    }
}

/// `1 / l_ab`.
pub fn r_nonreciprocal(l_ab: u32) -> Result<f64> {
    if l_ab == 0 {
        return Err(Error::InvalidRankPair { l_ab, l_ba: 0 });
    }
    Ok(1.0 / l_ab as f64)
}

/// `1 / max(l_ab, l_ba)`.
pub fn r_reciprocal_max(p: RankPair) -> Result<f64> {
    p.check_non_self()?;
    Ok(1.0 / p.l_ab.max(p.l_ba) as f64)
}

/// `1 / (l_ab + l_ba)`.
pub fn r_reciprocal_sum(p: RankPair) -> Result<f64> {
    p.check_non_self()?;
    Ok(1.0 / (p.l_ab as u64 + p.l_ba as u64) as f64)
}

/// `1 / (l_ab + l_ba + max(l_ab, l_ba))`; the self pair gives
/// [`SELF_SIMILARITY`].
pub fn r_combined(p: RankPair) -> Result<f64> {
    if p.is_self() {
        return Ok(SELF_SIMILARITY);
    }
    p.check_non_self()?;
    let (a, b) = (p.l_ab as u64, p.l_ba as u64);
    Ok(1.0 / (a + b + a.max(b)) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EPS: f64 = 1e-15;

    fn pair(a: u32, b: u32) -> RankPair {
        RankPair::new(a, b)
    }

    #[test]
    fn nonreciprocal_values() {
        assert_eq!(r_nonreciprocal(1).unwrap(), 1.0);
        assert_eq!(r_nonreciprocal(4).unwrap(), 0.25);
        assert!((r_nonreciprocal(200).unwrap() - 0.005).abs() < EPS);
        assert!(r_nonreciprocal(0).is_err());
    }

    #[test]
    fn max_conflates_one_three_with_two_three() {
        let a = r_reciprocal_max(pair(1, 3)).unwrap();
        let b = r_reciprocal_max(pair(2, 3)).unwrap();
        assert!((a - 1.0 / 3.0).abs() < EPS);
        assert_eq!(a, b);
        assert_eq!(r_reciprocal_max(pair(1, 1)).unwrap(), 1.0);
        assert_eq!(r_reciprocal_max(pair(4, 4)).unwrap(), 0.25);
    }

    #[test]
    fn sum_conflates_one_seven_with_four_four() {
        let a = r_reciprocal_sum(pair(1, 7)).unwrap();
        let b = r_reciprocal_sum(pair(4, 4)).unwrap();
        assert!((a - 0.125).abs() < EPS);
        assert_eq!(a, b);
        assert_eq!(r_reciprocal_sum(pair(1, 1)).unwrap(), 0.5);
        assert!((r_reciprocal_sum(pair(2, 3)).unwrap() - 0.2).abs() < EPS);
    }

    #[test]
    fn combined_separates_both_families() {
        assert!((r_combined(pair(1, 3)).unwrap() - 1.0 / 7.0).abs() < EPS);
        assert!((r_combined(pair(2, 3)).unwrap() - 1.0 / 8.0).abs() < EPS);
        assert!((r_combined(pair(1, 7)).unwrap() - 1.0 / 15.0).abs() < EPS);
        assert!((r_combined(pair(4, 4)).unwrap() - 1.0 / 12.0).abs() < EPS);
        // the unstable (1,7) pair scores lower than the balanced (4,4)
        assert!(r_combined(pair(1, 7)).unwrap() < r_combined(pair(4, 4)).unwrap());
    }

    #[test]
    fn self_pair_rules() {
        assert_eq!(r_combined(RankPair::SELF).unwrap(), SELF_SIMILARITY);
        assert!(r_combined(pair(0, 3)).is_err());
        assert!(r_reciprocal_max(RankPair::SELF).is_err());
        assert!(r_reciprocal_sum(pair(2, 0)).is_err());
        for m in MeasureKind::ALL {
            assert_eq!(m.eval(RankPair::SELF).unwrap(), SELF_SIMILARITY);
            assert!(m.eval(pair(0, 5)).is_err());
        }
    }

    #[test]
    fn symmetry_exhaustive_to_100() {
        for a in 1..=100 {
            for b in 1..=100 {
                for m in [
                    MeasureKind::ReciprocalMax,
                    MeasureKind::ReciprocalSum,
                    MeasureKind::Combined,
                ] {
                    assert_eq!(m.eval(pair(a, b)).unwrap(), m.eval(pair(b, a)).unwrap());
                }
            }
        }
    }

    #[test]
    fn table_path_agrees_with_checked_path() {
        for a in 0..30 {
            for b in 0..30 {
                let p = pair(a, b);
                for m in MeasureKind::ALL {
                    if let Ok(v) = m.eval(p) {
                        assert_eq!(v, m.eval_table(a, b), "{m} {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        for m in MeasureKind::ALL {
            assert_eq!(m.to_string().parse::<MeasureKind>().unwrap(), m);
        }
        assert!("ratio".parse::<MeasureKind>().is_err());
    }

    proptest! {
        #[test]
        fn combined_bounds(a in 1u32..100_000, b in 1u32..100_000) {
            let r = r_combined(pair(a, b)).unwrap();
            prop_assert!(r > 0.0 && r <= 1.0 / 3.0);
            if (a, b) != (1, 1) {
                prop_assert!(r < 1.0 / 3.0);
            }
        }

        #[test]
        fn strictly_decreasing_in_each_component(a in 1u32..10_000, b in 1u32..10_000) {
            for m in [MeasureKind::ReciprocalSum, MeasureKind::Combined] {
                let base = m.eval(pair(a, b)).unwrap();
                prop_assert!(m.eval(pair(a + 1, b)).unwrap() < base);
                prop_assert!(m.eval(pair(a, b + 1)).unwrap() < base);
            }
            prop_assert!(r_nonreciprocal(a + 1).unwrap() < r_nonreciprocal(a).unwrap());
        }

        #[test]
        fn max_decreases_in_the_larger_component(a in 1u32..10_000, b in 1u32..10_000) {
            let base = r_reciprocal_max(pair(a, b)).unwrap();
            let bigger = a.max(b) + 1;
            prop_assert!(r_reciprocal_max(pair(bigger, b)).unwrap() < base);
            prop_assert!(r_reciprocal_max(pair(a, bigger)).unwrap() < base);
        }
    }
}
