//! Exact dyadic rationals `m / 2^k`.
//!
//! Every finite `f64` is dyadic, and the fitness functions here only add,
//! subtract and halve, so comparisons between scores never suffer rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// `numerator / 2^exponent`, kept normalised (odd numerator or zero exponent).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_int(v: i64) -> Self {
        Self {
            numerator: BigInt::from(v),
            exponent: 0,
        }
    }

    /// `2^-k`.
    pub fn inverse_power_of_two(k: u32) -> Self {
        Self::new(BigInt::from(1), k)
    }

    pub fn new(numerator: BigInt, exponent: u32) -> Self {
        let mut d = Self { numerator, exponent };
        d.normalise();
        d
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let m = BigInt::from(mantissa) * sign;
        Some(if exp >= 0 {
            Self::new(m << exp as usize, 0)
        } else {
            Self::new(m, (-exp) as u32)
        })
    }

    fn normalise(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0).min(self.exponent as u64) as u32;
        if tz > 0 {
            self.numerator >>= tz as usize;
            self.exponent -= tz;
        }
    }

    fn aligned(&self, exponent: u32) -> BigInt {
        &self.numerator << (exponent - self.exponent) as usize
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.is_negative()
    }

    /// Nearest `f64` (may overflow to infinity for astronomically large values).
    pub fn to_f64(&self) -> f64 {
        let scale = self.exponent;
        match self.numerator.to_f64() {
            Some(m) if m.is_finite() && scale < 1000 => m / 2f64.powi(scale as i32),
            _ => {
                let bits = self.numerator.bits() as i64;
                let shift = (bits - 60).max(0);
                let top = (&self.numerator >> shift as usize).to_f64().unwrap_or(0.0);
                top * 2f64.powf((shift - scale as i64) as f64)
            }
        }
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.aligned(e).cmp(&other.aligned(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.aligned(e) + rhs.aligned(e), e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.aligned(e) - rhs.aligned(e), e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            numerator: -self.numerator,
            exponent: self.exponent,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn halves_and_sums() {
        let half = Dyadic::inverse_power_of_two(1);
        assert_eq!(&half + &half, Dyadic::from_int(1));
        assert_eq!(half.to_f64(), 0.5);
        assert!(Dyadic::from_int(3) > Dyadic::from_f64(2.75).unwrap());
        assert_eq!(Dyadic::from_f64(-0.375).unwrap().to_string(), "-3/2^3");
    }

    #[test]
    fn tiny_differences_are_kept() {
        let a = Dyadic::from_int(2) - Dyadic::inverse_power_of_two(200);
        let b = Dyadic::from_int(2) - Dyadic::inverse_power_of_two(201);
        assert!(a < b);
        assert_eq!(a.to_f64(), 2.0);
    }

    proptest! {
        #[test]
        fn f64_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let d = Dyadic::from_f64(x).unwrap();
            prop_assert_eq!(d.to_f64(), x);
        }

        #[test]
        fn order_matches_f64(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let da = Dyadic::from_f64(a).unwrap();
            let db = Dyadic::from_f64(b).unwrap();
            prop_assert_eq!(da.cmp(&db), a.partial_cmp(&b).unwrap());
        }

        #[test]
        fn addition_is_exact(a in -1000i64..1000, b in -1000i64..1000, k in 0u32..40) {
            let x = Dyadic::new(BigInt::from(a), k);
            let y = Dyadic::new(BigInt::from(b), k);
            prop_assert_eq!(&(&x + &y) - &y, x);
        }
    }
}
