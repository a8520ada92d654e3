//! Exact dyadic rationals `numerator / 2^exponent`.
//!
//! Every clause weight `c_i = 2^-k` and every coefficient derived from it is
//! dyadic, so the pseudo-Boolean machinery never needs floating point.
//! Arithmetic is checked and panics on `i128` overflow, far outside the
//! range reachable from desk-scale formulas.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A dyadic rational in canonical form: the numerator is odd, or it is zero
/// and the exponent is zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: i128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    pub fn new(num: i128, exp: u32) -> Self {
        Self::canonical(num, exp)
    }

    pub fn from_int(v: i128) -> Self {
        Dyadic { num: v, exp: 0 }
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        Dyadic { num: 1, exp: k }
    }

    pub fn numerator(self) -> i128 {
        self.num
    }

    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_integer(self) -> bool {
        self.exp == 0
    }

    pub fn is_positive(self) -> bool {
        self.num > 0
    }

    pub fn abs(self) -> Self {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    /// The integer value, if this is an integer.
    pub fn to_integer(self) -> Option<i128> {
        self.is_integer().then_some(self.num)
    }

    /// Smallest integer not below this value.
    pub fn ceil(self) -> i128 {
        if self.exp == 0 {
            return self.num;
        }
        let d = 1i128 << self.exp;
        self.num.div_euclid(d) + 1
    }

    /// The numerator after rescaling to denominator `2^exp`.
    ///
    /// Panics if `exp` is smaller than this value's own exponent.
    pub fn scaled_numerator(self, exp: u32) -> i128 {
        assert!(exp >= self.exp, "cannot rescale 2^{} to 2^{}", self.exp, exp);
        shl(self.num, exp - self.exp)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / 2f64.powi(self.exp as i32)
    }

    fn canonical(mut num: i128, mut exp: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let tz = num.trailing_zeros().min(exp);
        num >>= tz;
        exp -= tz;
        Dyadic { num, exp }
    }

    fn aligned(self, other: Self) -> (i128, i128, u32) {
        let exp = self.exp.max(other.exp);
        (shl(self.num, exp - self.exp), shl(other.num, exp - other.exp), exp)
    }
}

fn shl(v: i128, by: u32) -> i128 {
    if v == 0 {
        return 0;
    }
    let out = v.checked_mul(1i128.checked_shl(by).filter(|p| *p > 0).expect("dyadic exponent overflow"));
    out.expect("dyadic numerator overflow")
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, exp) = self.aligned(rhs);
        Dyadic::canonical(a.checked_add(b).expect("dyadic overflow"), exp)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -self.num, exp: self.exp }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        let num = self.num.checked_mul(rhs.num).expect("dyadic overflow");
        let exp = self.exp.checked_add(rhs.exp).expect("dyadic exponent overflow");
        Dyadic::canonical(num, exp)
    }
}

impl Mul<i128> for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: i128) -> Dyadic {
        self * Dyadic::from_int(rhs)
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = *self + rhs;
    }
}

impl SubAssign for Dyadic {
    fn sub_assign(&mut self, rhs: Dyadic) {
        *self = *self - rhs;
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::ZERO, |a, b| a + b)
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v as i128)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(*other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u128 << self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a dyadic rational: {0:?}")]
pub struct ParseDyadicError(String);

impl FromStr for Dyadic {
    type Err = ParseDyadicError;

    /// Accepts `a` or `a/b` with `b` a power of two.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDyadicError(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i128>().map(Dyadic::from_int).map_err(|_| err()),
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| err())?;
                let d: u128 = d.trim().parse().map_err(|_| err())?;
                if d == 0 || !d.is_power_of_two() {
                    return Err(err());
                }
                Ok(Dyadic::new(n, d.trailing_zeros()))
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        assert_eq!(Dyadic::new(4, 3), Dyadic::new(1, 1));
        assert_eq!(Dyadic::new(0, 7), Dyadic::ZERO);
        assert_eq!(Dyadic::new(0, 7).exponent(), 0);
        assert_eq!(Dyadic::new(6, 0).exponent(), 0);
        assert_eq!(Dyadic::new(12, 3).to_string(), "3/2");
    }

    #[test]
    fn clause_weights_sum() {
        // 1/8 + 1/8 + 1/4 + 1/2 + 1/2
        let c: Dyadic = [3, 3, 2, 1, 1].iter().map(|&k| Dyadic::pow2_neg(k)).sum();
        assert_eq!(c, Dyadic::new(3, 1));
        assert_eq!(c.scaled_numerator(3), 12);
    }

    #[test]
    fn ceil_and_parse() {
        assert_eq!(Dyadic::new(3, 1).ceil(), 2);
        assert_eq!(Dyadic::new(-3, 1).ceil(), -1);
        assert_eq!(Dyadic::new(2, 1).ceil(), 1);
        assert_eq!(Dyadic::new(1, 3), "1/8".parse().unwrap());
        assert_eq!(Dyadic::from_int(-5), "-5".parse().unwrap());
        assert!("1/3".parse::<Dyadic>().is_err());
    }

    fn small() -> impl Strategy<Value = Dyadic> {
        (-1000i128..1000, 0u32..12).prop_map(|(n, e)| Dyadic::new(n, e))
    }

    proptest! {
        #[test]
        fn field_laws(a in small(), b in small(), c in small()) {
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - a, Dyadic::ZERO);
            prop_assert_eq!(a < b, a.to_f64() < b.to_f64());
        }
    }
}
