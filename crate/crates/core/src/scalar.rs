//! The scalar abstraction every algebraic routine is generic over.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// A field usable as a coefficient domain.
///
/// Exact fields answer `is_zero` exactly. Approximate fields (f64, the
/// radical-certificate scalar) answer it up to their working precision, which
/// is how cancellations get recognised.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Image of a rational number. Panics if the denominator is not invertible.
    fn from_rational(q: &Rational) -> Self;

    fn try_from_rational(q: &Rational) -> Option<Self> {
        Some(Self::from_rational(q))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// Pivot weight for elimination. Zero exactly when `is_zero`.
    fn magnitude(&self) -> f64;

    /// Display hint for `a - b` style printing.
    fn is_negative(&self) -> bool {
        false
    }

    /// 0 for characteristic zero.
    fn characteristic() -> u64;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Field for BigRational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn characteristic() -> u64 {
        0
    }
}

impl Field for f64 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn characteristic() -> u64 {
        0
    }
}

/// `n!` in the field.
pub fn factorial<K: Field>(n: u32) -> K {
    (1..=n as i64).fold(K::one(), |acc, k| acc * K::from_i64(k))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_and_factorials() {
        assert_eq!(rat(2, 3).pow(3), rat(8, 27));
        assert_eq!(Field::pow(&rat(5, 1), 0), rat(1, 1));
        assert_eq!(factorial::<Rational>(4), rat(24, 1));
        assert_eq!(factorial::<f64>(3), 6.0);
        assert_eq!(rat(3, 4).inv(), rat(4, 3));
    }
}
