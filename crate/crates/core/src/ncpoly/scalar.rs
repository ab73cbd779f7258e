//! Rational functions in the formal half-power `s = q^{1/2}`.
//!
//! A [`QScalar`] is stored as `N(s) / D(s)` where `N` is a Laurent polynomial and
//! `D` is a monic polynomial with nonzero constant term, coprime to `N`.  This
//! makes the representation canonical, so equality and hashing are structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::coeff::{rational_sqrt, rational_to_f64};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("denominator vanishes at q = {0}")]
    Pole(String),
    #[error("value at q = {0} involves q^(1/2), which is irrational there")]
    Irrational(String),
    #[error("q must be positive, got {0}")]
    NonPositive(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Laurent polynomial `sum_i coeffs[i] * s^(low + i)` with trimmed ends.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Laurent {
    low: i32,
    coeffs: Vec<BigRational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn monomial(c: BigRational, exp: i32) -> Self {
        Laurent { low: exp, coeffs: vec![c] }.trimmed()
    }

    pub fn from_coeffs(low: i32, coeffs: Vec<BigRational>) -> Self {
        Laurent { low, coeffs }.trimmed()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn low(&self) -> i32 {
        self.low
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.low + i as i32, c))
    }

    fn lead(&self) -> &BigRational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let first = self.coeffs.iter().position(|c| !c.is_zero());
        match first {
            None => Laurent::zero(),
            Some(k) => {
                if k > 0 {
                    self.coeffs.drain(..k);
                    self.low += k as i32;
                }
                self
            }
        }
    }

    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Laurent { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> Self {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let mut coeffs = vec![BigRational::zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.low - low) as usize + i] += c;
        }
        Laurent { low, coeffs }.trimmed()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Laurent { low: self.low + other.low, coeffs }.trimmed()
    }

    /// Polynomial division; both operands must have `low >= 0`.
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        debug_assert!(self.low >= 0 && d.low >= 0 && !d.is_zero());
        let mut rem = self.dense();
        let dd = d.dense();
        let dl = dd.len() - 1;
        let lead = dd[dl].clone();
        if rem.len() <= dl {
            return (Laurent::zero(), self.clone());
        }
        let mut quo = vec![BigRational::zero(); rem.len() - dl];
        for k in (0..quo.len()).rev() {
            let c = &rem[k + dl] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in dd.iter().enumerate() {
                if !dj.is_zero() {
                    rem[k + j] -= &c * dj;
                }
            }
            quo[k] = c;
        }
        (Laurent::from_coeffs(0, quo), Laurent::from_coeffs(0, rem))
    }

    fn dense(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.low as usize];
        v.extend(self.coeffs.iter().cloned());
        v
    }

    fn monic(&self) -> Self {
        let l = self.lead().clone();
        self.scale(&l.recip())
    }

    /// Monic gcd of two polynomials with `low >= 0`.
    fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = if r.is_zero() { r } else { r.monic() };
        }
        if x.is_zero() {
            x
        } else {
            x.monic()
        }
    }

    fn all_exponents_even(&self) -> bool {
        self.terms().all(|(e, _)| e % 2 == 0)
    }

    /// Evaluates at `s = s0`.
    pub fn eval(&self, s0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            acc += c * pow_rational(s0, e);
        }
        acc
    }

    /// Evaluates at `s^2 = q0`; requires even exponents only.
    fn eval_even(&self, q0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            acc += c * pow_rational(q0, e / 2);
        }
        acc
    }

    pub fn eval_f64(&self, s0: f64) -> f64 {
        self.terms().map(|(e, c)| rational_to_f64(c) * s0.powi(e)).sum()
    }
}

fn pow_rational(x: &BigRational, e: i32) -> BigRational {
    let mut p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p = p.recip();
    }
    p
}

/// Element of the field `Q(s)`, `s = q^{1/2}`, in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QScalar {
    num: Laurent,
    den: Laurent,
}

impl Default for QScalar {
    fn default() -> Self {
        QScalar::zero()
    }
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar { num: Laurent::zero(), den: Laurent::one() }
    }

    pub fn one() -> Self {
        QScalar { num: Laurent::one(), den: Laurent::one() }
    }

    pub fn from_rational(c: BigRational) -> Self {
        QScalar { num: Laurent::monomial(c, 0), den: Laurent::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `c * s^exp`, i.e. `c * q^(exp/2)`.
    pub fn s_pow(c: BigRational, exp: i32) -> Self {
        QScalar { num: Laurent::monomial(c, exp), den: Laurent::one() }
    }

    /// `q^n`.
    pub fn q_pow(n: i32) -> Self {
        Self::s_pow(BigRational::one(), 2 * n)
    }

    /// `q^(twice / 2)`.
    pub fn q_half_pow(twice: i32) -> Self {
        Self::s_pow(BigRational::one(), twice)
    }

    pub fn from_laurent(num: Laurent) -> Self {
        QScalar { num, den: Laurent::one() }
    }

    pub fn new(num: Laurent, den: Laurent) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn numerator(&self) -> &Laurent {
        &self.num
    }

    pub fn denominator(&self) -> &Laurent {
        &self.den
    }

    pub fn is_laurent(&self) -> bool {
        self.den == Laurent::one()
    }

    fn normalize(num: Laurent, den: Laurent) -> Self {
        if num.is_zero() {
            return QScalar::zero();
        }
        let num = num.shift(-den.low());
        let den = den.shift(-den.low());
        if den.coeffs.len() == 1 {
            let c = den.coeffs[0].recip();
            return QScalar { num: num.scale(&c), den: Laurent::one() };
        }
        let nlow = num.low();
        let np = num.shift(-nlow);
        let g = Laurent::gcd(&np, &den);
        let (np, den) = if g.coeffs.len() > 1 { (np.div_rem(&g).0, den.div_rem(&g).0) } else { (np, den) };
        let lead = den.lead().recip();
        let num = np.shift(nlow).scale(&lead);
        let den = den.scale(&lead);
        if den.coeffs.len() == 1 {
            return QScalar { num, den: Laurent::one() };
        }
        QScalar { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.is_laurent() {
                return QScalar { num: self.num.add(&other.num), den: Laurent::one() };
            }
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        Self::normalize(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QScalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QScalar::zero();
        }
        if self.is_laurent() && other.is_laurent() {
            return QScalar { num: self.num.mul(&other.num), den: Laurent::one() };
        }
        Self::normalize(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Exact value at a rational `q0 > 0`.
    ///
    /// Odd powers of `q^{1/2}` are only allowed when `q0` is a rational square.
    pub fn evaluate_q(&self, q0: &BigRational) -> Result<BigRational, ScalarError> {
        if !q0.is_positive() {
            return Err(ScalarError::NonPositive(q0.to_string()));
        }
        let (n, d) = if self.num.all_exponents_even() && self.den.all_exponents_even() {
            (self.num.eval_even(q0), self.den.eval_even(q0))
        } else {
            let s0 = rational_sqrt(q0).ok_or_else(|| ScalarError::Irrational(q0.to_string()))?;
            (self.num.eval(&s0), self.den.eval(&s0))
        };
        if d.is_zero() {
            return Err(ScalarError::Pole(q0.to_string()));
        }
        Ok(n / d)
    }

    /// Floating-point value at `q0 > 0`, using `s0 = sqrt(q0)`.
    pub fn evaluate_f64(&self, q0: f64) -> Result<f64, ScalarError> {
        if q0 <= 0.0 {
            return Err(ScalarError::NonPositive(q0.to_string()));
        }
        let s0 = q0.sqrt();
        let d = self.den.eval_f64(s0);
        if d == 0.0 {
            return Err(ScalarError::Pole(q0.to_string()));
        }
        Ok(self.num.eval_f64(s0) / d)
    }

    /// Substitutes `q -> q^{-1}`.
    pub fn invert_q(&self) -> Self {
        let flip = |l: &Laurent| {
            let mut c = l.coeffs.clone();
            c.reverse();
            Laurent::from_coeffs(-l.high(), c)
        };
        Self::normalize(flip(&self.num), flip(&self.den))
    }
}

/// Symmetric q-number `[n]_q = (q^n - q^{-n}) / (q - q^{-1})` for integer `n`.
pub fn q_int(n: i64) -> QScalar {
    q_int_half(2 * n)
}

/// Symmetric q-number `[m/2]_q`, allowing half-integer arguments.
pub fn q_int_half(twice: i64) -> QScalar {
    let m = twice as i32;
    let one = BigRational::one();
    let num = Laurent::monomial(one.clone(), m).sub(&Laurent::monomial(one.clone(), -m));
    let den = Laurent::monomial(one.clone(), 2).sub(&Laurent::monomial(one, -2));
    QScalar::normalize(num, den)
}

impl super::coeff::Coeff for QScalar {
    fn zero() -> Self {
        QScalar::zero()
    }
    fn one() -> Self {
        QScalar::one()
    }
    fn from_int(n: i64) -> Self {
        QScalar::from_int(n)
    }
    fn is_zero(&self) -> bool {
        QScalar::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        QScalar::add(self, rhs)
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        QScalar::sub(self, rhs)
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        QScalar::mul(self, rhs)
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar::neg(self)
    }
}

fn write_laurent(f: &mut fmt::Formatter<'_>, l: &Laurent) -> fmt::Result {
    if l.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (e, c) in l.terms().collect::<Vec<_>>().into_iter().rev() {
        let negative = c.is_negative();
        let mag = c.abs();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if negative { " - " } else { " + " })?;
        }
        first = false;
        let power = match (e % 2 == 0, e.cmp(&0)) {
            (_, Ordering::Equal) => String::new(),
            (true, _) if e == 2 => "q".to_string(),
            (true, _) => format!("q^{}", e / 2),
            (false, _) => format!("q^({}/2)", e),
        };
        if power.is_empty() {
            write!(f, "{}", mag)?;
        } else if mag.is_one() {
            write!(f, "{}", power)?;
        } else {
            write!(f, "{}*{}", mag, power)?;
        }
    }
    Ok(())
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            return write_laurent(f, &self.num);
        }
        write!(f, "(")?;
        write_laurent(f, &self.num)?;
        write!(f, ")/(")?;
        write_laurent(f, &self.den)?;
        write!(f, ")")
    }
}
