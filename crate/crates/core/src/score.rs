//! Exact rational scores.
//!
//! Preference values are accumulated in tenths (1.0 per definite instance,
//! 0.1 per ambiguous one) and candidate totals may be discounted by an
//! arbitrary rational, so everything is kept as a reduced fraction. Nothing
//! here ever touches floating point, which keeps reports bit-stable.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A non-negative exact rational.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score(Ratio<i64>);

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("invalid rational `{0}`")]
pub struct ParseScoreError(pub String);

impl Score {
    pub const ZERO: Score = Score(Ratio::new_raw(0, 1));
    pub const ONE: Score = Score(Ratio::new_raw(1, 1));

    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        let r = Ratio::new(numer, denom);
        assert!(!r.is_negative(), "scores are non-negative");
        Score(r)
    }

    pub fn integer(n: u64) -> Self {
        Score(Ratio::from_integer(n as i64))
    }

    pub fn from_tenths(tenths: u64) -> Self {
        Score::new(tenths as i64, 10)
    }

    /// Preference value of `definite` definite and `ambiguous` ambiguous instances.
    pub fn preference(definite: usize, ambiguous: usize) -> Self {
        Score::from_tenths(10 * definite as u64 + ambiguous as u64)
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    /// Percentage of `part` in `whole`, rounded half-up to one decimal.
    ///
    /// Returns tenths of a percent, e.g. `563` for 56.3%. An empty whole
    /// yields zero.
    pub fn percent_tenths(part: u64, whole: u64) -> u64 {
        if whole == 0 {
            return 0;
        }
        // round(1000 * part / whole), half-up
        (2000 * part + whole) / (2 * whole)
    }

    /// Like [`Score::percent_tenths`] for an arbitrary rational in [0, 1].
    pub fn percent_tenths_of(&self) -> u64 {
        let scaled = self.0 * Ratio::from_integer(1000);
        let twice = scaled * Ratio::from_integer(2) + Ratio::from_integer(1);
        (twice / Ratio::from_integer(2)).floor().to_integer() as u64
    }
}

impl Add for Score {
    type Output = Score;

    fn add(self, rhs: Score) -> Score {
        Score(self.0 + rhs.0)
    }
}

impl AddAssign for Score {
    fn add_assign(&mut self, rhs: Score) {
        self.0 += rhs.0;
    }
}

impl Mul for Score {
    type Output = Score;

    fn mul(self, rhs: Score) -> Score {
        Score(self.0 * rhs.0)
    }
}

impl Sum for Score {
    fn sum<I: Iterator<Item = Score>>(iter: I) -> Score {
        iter.fold(Score::ZERO, Add::add)
    }
}

/// Number of decimal digits needed to write `denom` exactly, if finite.
fn decimal_places(mut denom: i64) -> Option<u32> {
    let (mut twos, mut fives) = (0u32, 0u32);
    while denom % 2 == 0 {
        denom /= 2;
        twos += 1;
    }
    while denom % 5 == 0 {
        denom /= 5;
        fives += 1;
    }
    (denom == 1).then(|| twos.max(fives))
}

/// Terminating fractions are written as decimals ("3", "0.1", "2.25"),
/// everything else as `n/d`.
impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        match decimal_places(d) {
            Some(0) => write!(f, "{}", n),
            Some(places) => {
                let scale = 10i64.pow(places);
                let scaled = n * (scale / d);
                write!(
                    f,
                    "{}.{:0width$}",
                    scaled / scale,
                    scaled % scale,
                    width = places as usize
                )
            }
            None => write!(f, "{}/{}", n, d),
        }
    }
}

impl FromStr for Score {
    type Err = ParseScoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScoreError(s.to_owned());
        let s = s.trim();
        let ratio = if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            Ratio::new(n, d)
        } else if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let int: i64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| err())?
            };
            let scale = 10i64.pow(frac.len() as u32);
            let frac: i64 = frac.parse().map_err(|_| err())?;
            Ratio::new(int * scale + frac, scale)
        } else {
            Ratio::from_integer(s.parse().map_err(|_| err())?)
        };
        if ratio.is_negative() {
            return Err(err());
        }
        Ok(Score(ratio))
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Score {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
