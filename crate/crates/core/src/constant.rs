//! Exact rational constants for quasi-isometry inequalities.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative rational such as `1`, `3/2` or `0.25`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constant(Ratio<i64>);

impl Constant {
    pub const ZERO: Constant = Constant(Ratio::new_raw(0, 1));
    pub const ONE: Constant = Constant(Ratio::new_raw(1, 1));

    pub fn int(n: i64) -> Self {
        Constant(Ratio::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Constant(Ratio::new(num, den))
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        Ratio::approximate_float(x)
            .map(Constant)
            .ok_or_else(|| Error::Precondition(format!("{x} is not representable as a constant")))
    }

    pub fn value(&self) -> Ratio<i64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    /// `L·d + A` rounded down: the largest admissible integer distance on the upper side.
    pub fn upper_bound(l: Constant, a: Constant, d: u32) -> i64 {
        (l.0 * Ratio::from_integer(d as i64) + a.0)
            .floor()
            .to_integer()
    }

    /// `d/L - A` rounded up: the smallest admissible integer distance on the lower side.
    pub fn lower_bound(l: Constant, a: Constant, d: u32) -> i64 {
        (Ratio::from_integer(d as i64) / l.0 - a.0)
            .ceil()
            .to_integer()
    }
}

impl std::ops::Add for Constant {
    type Output = Constant;
    fn add(self, rhs: Constant) -> Constant {
        Constant(self.0 + rhs.0)
    }
}

impl std::ops::Mul for Constant {
    type Output = Constant;
    fn mul(self, rhs: Constant) -> Constant {
        Constant(self.0 * rhs.0)
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Constant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::parse("constant", s, reason);
        let s = s.trim();
        let value = if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad("numerator"))?;
            let d: i64 = d.trim().parse().map_err(|_| bad("denominator"))?;
            if d == 0 {
                return Err(bad("zero denominator"));
            }
            Ratio::new(n, d)
        } else if let Some((whole, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("decimal fraction"));
            }
            let negative = whole.starts_with('-');
            let w: i64 = if whole.is_empty() || whole == "-" {
                0
            } else {
                whole.parse().map_err(|_| bad("integer part"))?
            };
            let den = 10i64.pow(frac.len() as u32);
            let f: i64 = frac.parse().map_err(|_| bad("decimal fraction"))?;
            let mag = Ratio::from_integer(w.abs()) + Ratio::new(f, den);
            if negative {
                -mag
            } else {
                mag
            }
        } else {
            Ratio::from_integer(s.parse::<i64>().map_err(|_| bad("not a number"))?)
        };
        if value < Ratio::zero() {
            return Err(bad("constants are nonnegative"));
        }
        Ok(Constant(value))
    }
}

impl Serialize for Constant {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!("1".parse::<Constant>().unwrap(), Constant::ONE);
        assert_eq!("3/2".parse::<Constant>().unwrap(), Constant::ratio(3, 2));
        assert_eq!("0.25".parse::<Constant>().unwrap(), Constant::ratio(1, 4));
        assert_eq!("1.5".parse::<Constant>().unwrap(), Constant::ratio(3, 2));
        assert!("-1".parse::<Constant>().is_err());
        assert!("1/0".parse::<Constant>().is_err());
        assert!("abc".parse::<Constant>().is_err());
        assert_eq!(Constant::ratio(3, 2).to_string(), "3/2");
    }

    #[test]
    fn integer_bounds() {
        let (l, a) = (Constant::int(2), Constant::int(1));
        assert_eq!(Constant::upper_bound(l, a, 3), 7);
        assert_eq!(Constant::lower_bound(l, a, 3), 1); // 3/2 - 1 = 0.5 -> 1
        let l = Constant::ratio(3, 2);
        assert_eq!(Constant::upper_bound(l, Constant::ZERO, 3), 4); // 4.5
        assert_eq!(Constant::lower_bound(l, Constant::ZERO, 3), 2);
    }
}
