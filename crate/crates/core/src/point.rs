//! Exact points of the unit interval and their base-`q` expansions.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A rational `x = num/den` with `0 ≤ x ≤ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitPoint {
    num: BigUint,
    den: BigUint,
}

impl UnitPoint {
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() || num > den {
            return Err(Error::InvalidParameter(format!(
                "{num}/{den} is not a point of [0, 1]"
            )));
        }
        Ok(UnitPoint { num, den })
    }

    /// The exact value of `x`; every finite `f64` is a dyadic rational.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidParameter(format!("x = {x} is not in [0, 1]")));
        }
        let exact = BigRational::from_float(x).expect("finite");
        let num = exact.numer().to_biguint().expect("nonnegative");
        let den = exact.denom().to_biguint().expect("positive");
        Ok(UnitPoint { num, den })
    }

    /// `j / q^k`.
    pub fn q_adic(j: u64, k: u32, q: u32) -> Result<Self> {
        UnitPoint::new(BigUint::from(j), BigUint::from(q).pow(k))
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        Ratio::new(
            BigInt::from(self.num.clone()),
            BigInt::from(self.den.clone()),
        )
        .to_f64()
        .unwrap_or(f64::NAN)
    }

    /// Digits after the radix point in base `q`. For `x = 1` this yields
    /// `q-1` forever (`0.(q-1)(q-1)… = 1`).
    pub fn expansion(&self, q: u32) -> Expansion {
        if self.is_one() {
            return Expansion {
                q: BigUint::from(q),
                rem: BigUint::one(),
                den: BigUint::one(),
                repeat_top: Some(q - 1),
            };
        }
        Expansion {
            q: BigUint::from(q),
            rem: self.num.clone(),
            den: self.den.clone(),
            repeat_top: None,
        }
    }
}

/// Streaming base-`q` expansion of a [`UnitPoint`].
#[derive(Debug, Clone)]
pub struct Expansion {
    q: BigUint,
    rem: BigUint,
    den: BigUint,
    repeat_top: Option<u32>,
}

impl Expansion {
    /// The part of `x·q^i` after the digits produced so far, in `[0, 1)`.
    pub fn remainder(&self) -> f64 {
        if self.repeat_top.is_some() {
            return 1.0;
        }
        Ratio::new(
            BigInt::from(self.rem.clone()),
            BigInt::from(self.den.clone()),
        )
        .to_f64()
        .unwrap_or(0.0)
    }
}

impl Iterator for Expansion {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if let Some(top) = self.repeat_top {
            return Some(top);
        }
        let scaled = &self.rem * &self.q;
        let digit = &scaled / &self.den;
        self.rem = scaled % &self.den;
        Some(digit.to_u32().expect("digit < q"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ternary_digits() {
        let half = UnitPoint::from_f64(0.5).unwrap();
        assert!(half.expansion(3).take(10).all(|d| d == 1));
        let third = UnitPoint::new(1u32, 3u32).unwrap();
        let digits: Vec<u32> = third.expansion(3).take(4).collect();
        assert_eq!(digits, vec![1, 0, 0, 0]);
        let p = UnitPoint::q_adic(7, 2, 3).unwrap();
        let digits: Vec<u32> = p.expansion(3).take(3).collect();
        assert_eq!(digits, vec![2, 1, 0]);
    }

    #[test]
    fn remainder_tracks_fraction() {
        let x = UnitPoint::new(5u32, 8u32).unwrap();
        let mut e = x.expansion(2);
        assert_eq!(e.next(), Some(1));
        assert_eq!(e.remainder(), 0.25);
    }

    #[test]
    fn float_conversion_is_exact() {
        let x = UnitPoint::from_f64(0.1).unwrap();
        assert_eq!(x.to_f64(), 0.1);
        assert!(UnitPoint::from_f64(1.5).is_err());
        assert!(UnitPoint::from_f64(f64::NAN).is_err());
        assert!(UnitPoint::from_f64(1.0).unwrap().is_one());
        assert!(UnitPoint::new(3u32, 2u32).is_err());
    }
}
