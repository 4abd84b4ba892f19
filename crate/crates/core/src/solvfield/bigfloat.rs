//! Binary floating point with a big-integer mantissa.
//!
//! A value is `mant * 2^exp`, rounded to `prec` significant bits. `prec == 0`
//! marks an exact small constant; results of operations take the larger
//! precision of their operands, and exact/exact division falls back to
//! [`DEFAULT_PREC`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::scalar::Rational;

pub const DEFAULT_PREC: u32 = 256;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.normalize()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        BigFloat {
            mant: BigInt::from(n),
            exp: 0,
            prec,
        }
        .normalize()
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let prec = prec.max(1);
        let num = q.numer();
        let den = q.denom();
        if den.is_one() {
            return BigFloat {
                mant: num.clone(),
                exp: 0,
                prec,
            }
            .normalize();
        }
        let shift = prec as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let shift = shift.max(0);
        let mant = (num << shift as usize) / den;
        BigFloat {
            mant,
            exp: -shift,
            prec,
        }
        .normalize()
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 || !x.is_finite() {
            return BigFloat {
                mant: BigInt::zero(),
                exp: 0,
                prec,
            };
        }
        let bits = x.abs().to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let mant = if x < 0.0 { -BigInt::from(m) } else { BigInt::from(m) };
        BigFloat { mant, exp: e, prec }.normalize()
    }

    fn normalize(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        if self.prec > 0 {
            let bits = self.mant.bits();
            if bits > self.prec as u64 {
                let shift = bits - self.prec as u64;
                // round half away from zero
                let neg = self.mant.is_negative();
                let mut m = self.mant.abs();
                m += BigInt::one() << (shift - 1) as usize;
                m >>= shift as usize;
                self.mant = if neg { -m } else { m };
                self.exp += shift as i64;
            }
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp += tz as i64;
        }
        self
    }

    fn joint_prec(&self, o: &Self) -> u32 {
        self.prec.max(o.prec)
    }

    /// `floor(log2 |x|)`, `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.mant.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.mant.is_negative(), "square root of a negative number");
        if self.mant.is_zero() {
            return self.clone();
        }
        let prec = if self.prec == 0 { DEFAULT_PREC } else { self.prec };
        let mut shift = (2 * prec as i64 + 4 - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = (&self.mant << shift as usize).sqrt();
        BigFloat {
            mant: m,
            exp: (self.exp - shift) / 2,
            prec,
        }
        .normalize()
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 60).max(0);
        let top = (&self.mant >> drop as usize).to_f64().unwrap_or(0.0);
        let e = self.exp + drop;
        if e > 2000 {
            return if top > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -2200 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.mant.is_zero() {
            return "0".into();
        }
        let digits = digits.max(1);
        let l2 = self.log2_floor().expect("nonzero");
        let e10 = ((l2 as f64) * std::f64::consts::LOG10_2).floor() as i64;
        // value * 10^(digits - 1 - e10), as an integer
        let scale = digits as i64 - 1 - e10;
        let mut n = self.mant.abs();
        let mut d = BigInt::one();
        if scale >= 0 {
            n *= BigInt::from(10u32).pow(scale as u32);
        } else {
            d *= BigInt::from(10u32).pow((-scale) as u32);
        }
        if self.exp >= 0 {
            n <<= self.exp as usize;
        } else {
            d <<= (-self.exp) as usize;
        }
        let mut q = (&n + (&d >> 1usize)) / &d;
        let mut e10 = e10;
        let mut s = q.to_string();
        if s.len() > digits {
            q = (q + BigInt::from(5)) / BigInt::from(10);
            s = q.to_string();
            e10 += 1;
            s.truncate(digits);
        }
        while s.len() < digits {
            s.push('0');
        }
        let sign = if self.mant.is_negative() { "-" } else { "" };
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, o: &Self) -> bool {
        self.mant == o.mant && (self.mant.is_zero() || self.exp == o.exp)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        let d = self.clone() - o.clone();
        Some(match d.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        })
    }
}

impl Add for BigFloat {
    type Output = BigFloat;
    fn add(self, o: BigFloat) -> BigFloat {
        let prec = self.joint_prec(&o);
        if self.mant.is_zero() {
            return o.with_prec(prec);
        }
        if o.mant.is_zero() {
            return self.with_prec(prec);
        }
        if prec > 0 {
            // an operand below the other's last kept bit only affects rounding
            let hi_a = self.log2_floor().expect("nonzero");
            let hi_b = o.log2_floor().expect("nonzero");
            let gap = prec as i64 + 4;
            if hi_a - hi_b > gap {
                return self.with_prec(prec);
            }
            if hi_b - hi_a > gap {
                return o.with_prec(prec);
            }
        }
        let e = self.exp.min(o.exp);
        let a = self.mant << (self.exp - e) as usize;
        let b = o.mant << (o.exp - e) as usize;
        BigFloat {
            mant: a + b,
            exp: e,
            prec,
        }
        .normalize()
    }
}

impl Sub for BigFloat {
    type Output = BigFloat;
    fn sub(self, o: BigFloat) -> BigFloat {
        self + (-o)
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Mul for BigFloat {
    type Output = BigFloat;
    fn mul(self, o: BigFloat) -> BigFloat {
        let prec = self.joint_prec(&o);
        BigFloat {
            mant: self.mant * o.mant,
            exp: self.exp + o.exp,
            prec,
        }
        .normalize()
    }
}

impl Div for BigFloat {
    type Output = BigFloat;
    fn div(self, o: BigFloat) -> BigFloat {
        assert!(!o.mant.is_zero(), "BigFloat division by zero");
        let mut prec = self.joint_prec(&o);
        if prec == 0 {
            prec = DEFAULT_PREC;
        }
        let shift = (prec as i64 + 4 + o.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let mant = (self.mant << shift as usize) / o.mant;
        BigFloat {
            mant,
            exp: self.exp - o.exp - shift,
            prec,
        }
        .normalize()
    }
}

impl Rem for BigFloat {
    type Output = BigFloat;
    fn rem(self, _o: BigFloat) -> BigFloat {
        BigFloat::zero()
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat {
            mant: BigInt::one(),
            exp: 0,
            prec: 0,
        }
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        let n = BigInt::from_str_radix(s, radix).map_err(|e| e.to_string())?;
        Ok(BigFloat {
            mant: n,
            exp: 0,
            prec: 0,
        }
        .normalize())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_sci_string(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn sqrt2_digits() {
        let two = BigFloat::from_int(2, 400);
        let r = two.sqrt();
        let s = r.to_sci_string(50);
        assert!(s.starts_with("1.4142135623730950488016887242096980785696718753769"), "{s}");
        let back = r.clone() * r;
        let err = (back - BigFloat::from_int(2, 400)).abs();
        assert!(err.log2_floor().map_or(true, |l| l < -390));
    }

    #[test]
    fn rational_conversion() {
        let x = BigFloat::from_rational(&rat(1, 3), 200);
        let y = x.clone() * BigFloat::from_int(3, 200);
        let err = (y - BigFloat::one()).abs();
        assert!(err.is_zero() || err.log2_floor().unwrap() < -195);
        assert!((BigFloat::from_rational(&rat(-7, 4), 64).to_f64() + 1.75).abs() < 1e-15);
        assert_eq!(BigFloat::from_f64(0.375, 64).to_f64(), 0.375);
    }

    #[test]
    fn ordering_and_format() {
        let a = BigFloat::from_int(3, 64);
        let b = BigFloat::from_rational(&rat(5, 2), 64);
        assert!(a > b);
        assert_eq!(BigFloat::from_int(1234, 64).to_sci_string(3), "1.23e3");
        assert_eq!(BigFloat::from_rational(&rat(-1, 8), 64).to_sci_string(5), "-1.25e-1");
        assert_eq!(BigFloat::from_int(999, 64).to_sci_string(2), "1e3");
    }

    #[test]
    fn absorbs_negligible_addend() {
        let big = BigFloat::from_int(1, 64).mul_pow2(1000);
        let tiny = BigFloat::from_int(1, 64);
        assert_eq!(big.clone() + tiny, big);
    }
}
