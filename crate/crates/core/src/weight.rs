//! Exact rational time values.
//!
//! Every execution time, bound and schedule instant is a [`Weight`]: a
//! reduced fraction of two `i64`s. Arithmetic is checked; an overflow panics
//! with a message instead of wrapping, so a result is either exact or absent.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A non-negative (by convention) exact rational number of time units.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Weight(Ratio<i64>);

impl Weight {
    pub const ZERO: Weight = Weight(Ratio::new_raw(0, 1));
    pub const ONE: Weight = Weight(Ratio::new_raw(1, 1));

    /// Builds `numer / denom` in lowest terms. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        Weight(Ratio::new(numer, denom))
    }

    pub fn from_integer(value: i64) -> Self {
        Weight(Ratio::from_integer(value))
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.numer() < 0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn checked_add(&self, rhs: &Weight) -> Option<Weight> {
        self.0.checked_add(&rhs.0).map(Weight)
    }

    pub fn checked_sub(&self, rhs: &Weight) -> Option<Weight> {
        self.0.checked_sub(&rhs.0).map(Weight)
    }

    pub fn checked_mul(&self, rhs: &Weight) -> Option<Weight> {
        self.0.checked_mul(&rhs.0).map(Weight)
    }

    pub fn checked_div(&self, rhs: &Weight) -> Option<Weight> {
        if rhs.is_zero() {
            return None;
        }
        self.0.checked_div(&rhs.0).map(Weight)
    }

    /// Divides by a positive core count.
    pub fn div_count(&self, count: u32) -> Weight {
        assert!(count > 0, "division by zero core count");
        *self / Weight::from_integer(i64::from(count))
    }

    /// Snaps a float onto the grid `1/denom` (round to nearest).
    pub fn from_f64_grid(value: f64, denom: i64) -> Self {
        let scaled = (value * denom as f64).round();
        assert!(
            scaled.is_finite() && scaled.abs() < i64::MAX as f64,
            "value {value} out of range"
        );
        Weight::new(scaled as i64, denom)
    }

    /// Exact `"p/q"` form, also for integers (`"30/1"`).
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    /// Decimal rendering with `places` digits, for human-readable output.
    pub fn to_decimal_string(&self, places: usize) -> String {
        format!("{:.*}", places, self.to_f64())
    }

    pub fn max(self, other: Weight) -> Weight {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Weight) -> Weight {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    // Ratio's ordering never forms cross products, so it cannot overflow.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl From<i64> for Weight {
    fn from(value: i64) -> Self {
        Weight::from_integer(value)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        self.checked_add(&rhs)
            .unwrap_or_else(|| panic!("rational overflow computing {self} + {rhs}"))
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        *self = *self + rhs;
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        self.checked_sub(&rhs)
            .unwrap_or_else(|| panic!("rational overflow computing {self} - {rhs}"))
    }
}

impl Mul for Weight {
    type Output = Weight;
    fn mul(self, rhs: Weight) -> Weight {
        self.checked_mul(&rhs)
            .unwrap_or_else(|| panic!("rational overflow computing {self} * {rhs}"))
    }
}

impl Div for Weight {
    type Output = Weight;
    fn div(self, rhs: Weight) -> Weight {
        self.checked_div(&rhs)
            .unwrap_or_else(|| panic!("rational overflow or division by zero computing {self} / {rhs}"))
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, |acc, w| acc + w)
    }
}

impl<'a> Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, |acc, w| acc + *w)
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Accepts `"p/q"`, `"p"` and plain decimals such as `"2.75"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational value {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            return Ok(Weight::new(p, q));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int: i64 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let denom = 10i64.pow(frac.len() as u32);
            let frac: i64 = frac.parse().map_err(|_| bad())?;
            let whole = Weight::from_integer(int.abs());
            let value = whole + Weight::new(frac, denom);
            return Ok(if negative { Weight::ZERO - value } else { value });
        }
        s.parse::<i64>().map(Weight::from_integer).map_err(|_| bad())
    }
}

/// Integers serialize as JSON numbers, everything else as `"p/q"`.
impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_integer() {
            serializer.serialize_i64(self.numer())
        } else {
            serializer.serialize_str(&self.to_fraction_string())
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct WeightVisitor;

        impl Visitor<'_> for WeightVisitor {
            type Value = Weight;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a rational string \"p/q\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Weight, E> {
                Ok(Weight::from_integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Weight, E> {
                i64::try_from(v)
                    .map(Weight::from_integer)
                    .map_err(|_| E::custom("integer out of range"))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Weight, E> {
                // serde_json prints the shortest round-tripping decimal.
                format!("{v}").parse().map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Weight, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(WeightVisitor)
    }
}

/// `#[serde(with = "fraction")]`: always the exact `"p/q"` string.
pub mod fraction {
    use super::Weight;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(w: &Weight, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&w.to_fraction_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Weight, D::Error> {
        Weight::deserialize(d)
    }

    pub mod option {
        use super::Weight;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(w: &Option<Weight>, s: S) -> Result<S::Ok, S::Error> {
            match w {
                Some(w) => s.serialize_str(&w.to_fraction_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Weight>, D::Error> {
            Option::<Weight>::deserialize(d)
        }
    }
}
