//! Scalar fields for the truncated-operator layer.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub trait Real: Clone + fmt::Debug + Send + Sync + 'static {
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_rational(x: &BigRational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;

    fn abs(&self) -> Self {
        if self.to_f64() < 0.0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one().div(self) } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Real for f64 {
    const NAME: &'static str = "double";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_rational(x: &BigRational) -> Self {
        crate::ncpoly::rational_to_f64(x)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// Binary floating point with a `PREC`-bit mantissa: `mant * 2^exp`.
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat<const PREC: u32> {
    mant: BigInt,
    exp: i64,
}

impl<const PREC: u32> BigFloat<PREC> {
    fn normalized(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return BigFloat { mant, exp: 0 };
        }
        let bits = mant.bits() as i64;
        let excess = bits - PREC as i64;
        if excess > 0 {
            BigFloat { mant: mant >> excess as usize, exp: exp + excess }
        } else {
            BigFloat { mant, exp }
        }
    }

    pub fn significant_digits() -> u32 {
        (PREC as f64 * std::f64::consts::LOG10_2).floor() as u32
    }

    fn magnitude_exp(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }
}

impl<const PREC: u32> fmt::Debug for BigFloat<PREC> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl<const PREC: u32> PartialOrd for BigFloat<PREC> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let d = self.sub(other);
        Some(d.mant.sign().cmp(&Sign::NoSign))
    }
}

impl<const PREC: u32> Real for BigFloat<PREC> {
    const NAME: &'static str = "extended";

    fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0 }
    }

    fn one() -> Self {
        BigFloat { mant: BigInt::from(1), exp: 0 }
    }

    fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1 << 52), raw_exp - 1075) };
        Self::normalized(BigInt::from(sign * m), e)
    }

    fn from_rational(x: &BigRational) -> Self {
        let shift = PREC as usize + x.denom().bits() as usize;
        let mant = (x.numer() << shift) / x.denom();
        Self::normalized(mant, -(shift as i64))
    }

    fn add(&self, other: &Self) -> Self {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        let gap = self.magnitude_exp() - other.magnitude_exp();
        if gap > PREC as i64 + 2 {
            return self.clone();
        }
        if -gap > PREC as i64 + 2 {
            return other.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Self::normalized(a + b, e)
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        Self::normalized(&self.mant * &other.mant, self.exp + other.exp)
    }

    fn div(&self, other: &Self) -> Self {
        assert!(!other.mant.is_zero(), "division by zero");
        let shift = PREC as usize + other.mant.bits() as usize;
        let q = (&self.mant << shift) / &other.mant;
        Self::normalized(q, self.exp - other.exp - shift as i64)
    }

    fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp }
    }

    fn sqrt(&self) -> Self {
        assert!(!self.mant.is_negative(), "square root of a negative value");
        if self.mant.is_zero() {
            return Self::zero();
        }
        let mut shift = 2 * PREC as i64 + 2;
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = (&self.mant << shift as usize).sqrt();
        Self::normalized(m, (self.exp - shift) / 2)
    }

    fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&self.mant >> drop as usize).to_f64().unwrap_or(0.0);
        let mut e = self.exp + drop;
        let mut x = top;
        while e > 960 && x.is_finite() {
            x *= 2f64.powi(960);
            e -= 960;
        }
        while e < -960 && x != 0.0 {
            x *= 2f64.powi(-960);
            e += 960;
        }
        x * 2f64.powi(e as i32)
    }

    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp }
    }
}

/// Roughly 150 significant digits.
pub type Extended = BigFloat<512>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    Extended { digits: u32 },
}

impl Precision {
    /// Parses `double`, `extended` or a number of significant digits.
    pub fn parse(s: &str) -> Option<Precision> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" | "double" | "f64" => Some(Precision::Double),
            "extended" => Some(Precision::Extended { digits: Extended::significant_digits() }),
            other => {
                let digits: u32 = other.parse().ok()?;
                if digits <= 15 {
                    Some(Precision::Double)
                } else {
                    Some(Precision::Extended { digits })
                }
            }
        }
    }

    pub fn from_env() -> Option<Precision> {
        std::env::var("QCOCYCLE_PRECISION").ok().and_then(|s| Precision::parse(&s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type X = BigFloat<256>;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn f64_round_trip() {
        for x in [1.0, -0.375, 3.0e-300, 1.0e300, 5e-324, 123456.789] {
            assert_eq!(X::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn arithmetic_matches_rationals() {
        let a = X::from_rational(&rat(1, 3));
        let b = X::from_rational(&rat(2, 7));
        let s = a.add(&b).to_f64();
        assert!((s - 13.0 / 21.0).abs() < 1e-16);
        let p = a.mul(&b).div(&X::from_rational(&rat(2, 21)));
        assert!((p.to_f64() - 1.0).abs() < 1e-16);
        let third = X::one().div(&X::from_f64(3.0));
        let err = third.sub(&a).abs();
        assert!(err.to_f64() < 1e-70);
    }

    #[test]
    fn square_roots_are_accurate() {
        let two = X::from_f64(2.0);
        let r = two.sqrt();
        let err = r.mul(&r).sub(&two).abs().to_f64();
        assert!(err < 1e-70, "{err}");
        let small = X::from_f64(0.75).sqrt();
        assert!((small.to_f64() - 0.75f64.sqrt()).abs() < 1e-16);
        assert!(X::from_f64(1e-200).sqrt().to_f64() > 0.0);
    }

    #[test]
    fn widely_separated_sums() {
        let big = X::from_f64(1e200);
        let tiny = X::from_f64(1e-200);
        assert_eq!(big.add(&tiny).to_f64(), 1e200);
        assert_eq!(big.sub(&big).to_f64(), 0.0);
        assert_eq!(X::from_f64(0.5).powi(-3).to_f64(), 8.0);
    }

    #[test]
    fn precision_parsing() {
        assert_eq!(Precision::parse("double"), Some(Precision::Double));
        assert!(matches!(Precision::parse("extended"), Some(Precision::Extended { digits }) if digits >= 50));
        assert_eq!(Precision::parse("60"), Some(Precision::Extended { digits: 60 }));
        assert_eq!(Precision::parse("12"), Some(Precision::Double));
        assert_eq!(Precision::parse("lots"), None);
    }
}
