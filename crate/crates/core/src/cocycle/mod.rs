//! Twisted Hochschild coboundary `b_σ` and twisted cyclic operator `λ_σ` for
//! multilinear functionals on an arbitrary algebra.
//!
//! For `φ` of arity `k`:
//!
//! ```text
//! (b_σ φ)(x0, ..., xk) = Σ_{j<k} (-1)^j φ(x0, ..., xj x_{j+1}, ..., xk)
//!                        + (-1)^k φ(σ(xk) x0, x1, ..., x_{k-1})
//! (λ_σ φ)(x0, ..., x_{k-1}) = (-1)^{k-1} φ(σ(x_{k-1}), x0, ..., x_{k-2})
//! ```
//!
//! A twisted cyclic cocycle satisfies `b_σ φ = 0` and `λ_σ φ = φ`.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ncpoly::{rational_to_f64, QScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("functional has arity {expected}, got {got} arguments")]
    Arity { expected: usize, got: usize },
}

/// An associative algebra whose elements can be multiplied and described.
pub trait Algebra: Sync {
    type Elem: Clone + Send + Sync;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn describe(&self, x: &Self::Elem) -> String;
}

/// Values of a cochain: exact field elements or floating-point values that
/// carry a rounding scale.
pub trait CochainValue: Clone + Send + Sync {
    fn zero() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn magnitude(&self) -> f64;
    /// Size of the terms that produced this value; zero for exact values.
    fn scale(&self) -> f64;
    fn is_exact_zero(&self) -> bool;
    fn render(&self) -> String;

    /// Exact values must vanish; approximate ones must satisfy `|v| <= tol * scale`.
    fn negligible(&self, tolerance: f64) -> bool {
        if self.is_exact_zero() || self.magnitude() == 0.0 {
            return true;
        }
        let s = self.scale();
        s > 0.0 && self.magnitude() <= tolerance * s
    }
}

impl CochainValue for QScalar {
    fn zero() -> Self {
        QScalar::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            f64::INFINITY
        }
    }
    fn scale(&self) -> f64 {
        0.0
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl CochainValue for BigRational {
    fn zero() -> Self {
        <BigRational as num_traits::Zero>::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }
    fn scale(&self) -> f64 {
        0.0
    }
    fn is_exact_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// A floating-point value together with the sum of absolute values of the
/// terms it was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaled {
    pub value: f64,
    pub scale: f64,
}

impl Scaled {
    pub fn new(value: f64, scale: f64) -> Self {
        Scaled { value, scale }
    }
}

impl CochainValue for Scaled {
    fn zero() -> Self {
        Scaled::new(0.0, 0.0)
    }
    fn plus(&self, other: &Self) -> Self {
        Scaled::new(self.value + other.value, self.scale + other.scale)
    }
    fn minus(&self, other: &Self) -> Self {
        Scaled::new(self.value - other.value, self.scale + other.scale)
    }
    fn magnitude(&self) -> f64 {
        self.value.abs()
    }
    fn scale(&self) -> f64 {
        self.scale
    }
    fn is_exact_zero(&self) -> bool {
        false
    }
    fn render(&self) -> String {
        format!("{:e}", self.value)
    }
}

type CochainFn<'a, E, V> = Box<dyn Fn(&[E]) -> V + Send + Sync + 'a>;

/// A multilinear functional of fixed arity.
pub struct Cochain<'a, E, V> {
    arity: usize,
    eval: CochainFn<'a, E, V>,
}

impl<'a, E, V> Cochain<'a, E, V> {
    pub fn new<F: Fn(&[E]) -> V + Send + Sync + 'a>(arity: usize, eval: F) -> Self {
        Cochain { arity, eval: Box::new(eval) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, xs: &[E]) -> Result<V, CocycleError> {
        if xs.len() != self.arity {
            return Err(CocycleError::Arity { expected: self.arity, got: xs.len() });
        }
        Ok((self.eval)(xs))
    }
}

/// An algebra automorphism.
pub struct Automorphism<'a, E> {
    map: Box<dyn Fn(&E) -> E + Send + Sync + 'a>,
}

impl<'a, E> Automorphism<'a, E> {
    pub fn new<F: Fn(&E) -> E + Send + Sync + 'a>(map: F) -> Self {
        Automorphism { map: Box::new(map) }
    }

    pub fn apply(&self, x: &E) -> E {
        (self.map)(x)
    }
}

pub fn b_sigma_eval<A: Algebra, V: CochainValue>(
    alg: &A,
    phi: &Cochain<'_, A::Elem, V>,
    sigma: &Automorphism<'_, A::Elem>,
    xs: &[A::Elem],
) -> Result<V, CocycleError> {
    let k = phi.arity();
    if xs.len() != k + 1 {
        return Err(CocycleError::Arity { expected: k + 1, got: xs.len() });
    }
    let mut acc = V::zero();
    for j in 0..k {
        let mut args: Vec<A::Elem> = Vec::with_capacity(k);
        args.extend_from_slice(&xs[..j]);
        args.push(alg.mul(&xs[j], &xs[j + 1]));
        args.extend_from_slice(&xs[j + 2..]);
        let v = phi.eval(&args)?;
        acc = if j % 2 == 0 { acc.plus(&v) } else { acc.minus(&v) };
    }
    let mut args: Vec<A::Elem> = Vec::with_capacity(k);
    args.push(alg.mul(&sigma.apply(&xs[k]), &xs[0]));
    args.extend_from_slice(&xs[1..k]);
    let v = phi.eval(&args)?;
    Ok(if k % 2 == 0 { acc.plus(&v) } else { acc.minus(&v) })
}

pub fn lambda_sigma_eval<A: Algebra, V: CochainValue>(
    phi: &Cochain<'_, A::Elem, V>,
    sigma: &Automorphism<'_, A::Elem>,
    xs: &[A::Elem],
) -> Result<V, CocycleError> {
    let k = phi.arity();
    if xs.len() != k {
        return Err(CocycleError::Arity { expected: k, got: xs.len() });
    }
    let mut args = Vec::with_capacity(k);
    args.push(sigma.apply(&xs[k - 1]));
    args.extend_from_slice(&xs[..k - 1]);
    let v = phi.eval(&args)?;
    Ok(if (k - 1) % 2 == 0 { v } else { V::zero().minus(&v) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CocycleCheck {
    Coboundary,
    Cyclicity,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub check: CocycleCheck,
    pub index: usize,
    pub inputs: Vec<String>,
    pub value: String,
    pub magnitude: f64,
    pub scale: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub samples: Vec<SampleOutcome>,
    pub max_coboundary: f64,
    pub max_cyclicity: f64,
    pub pass: bool,
}

/// Evaluates `b_σ φ` on every coboundary sample and `λ_σ φ - φ` on every
/// cyclicity sample.
pub fn cocycle_suite<A: Algebra, V: CochainValue>(
    alg: &A,
    phi: &Cochain<'_, A::Elem, V>,
    sigma: &Automorphism<'_, A::Elem>,
    coboundary_samples: &[Vec<A::Elem>],
    cyclicity_samples: &[Vec<A::Elem>],
    tolerance: f64,
) -> Result<SuiteOutcome, CocycleError> {
    let describe = |xs: &[A::Elem]| xs.iter().map(|x| alg.describe(x)).collect::<Vec<_>>();
    let outcome = |check, index, xs: &[A::Elem], v: V| SampleOutcome {
        check,
        index,
        inputs: describe(xs),
        value: v.render(),
        magnitude: v.magnitude(),
        scale: v.scale(),
        pass: v.negligible(tolerance),
    };
    let mut samples: Vec<SampleOutcome> = coboundary_samples
        .par_iter()
        .enumerate()
        .map(|(i, xs)| b_sigma_eval(alg, phi, sigma, xs).map(|v| outcome(CocycleCheck::Coboundary, i, xs, v)))
        .collect::<Result<_, _>>()?;
    let cyc: Vec<SampleOutcome> = cyclicity_samples
        .par_iter()
        .enumerate()
        .map(|(i, xs)| {
            let l = lambda_sigma_eval::<A, V>(phi, sigma, xs)?;
            let p = phi.eval(xs)?;
            Ok(outcome(CocycleCheck::Cyclicity, i, xs, l.minus(&p)))
        })
        .collect::<Result<_, CocycleError>>()?;
    samples.extend(cyc);
    let max_of = |c: CocycleCheck| {
        samples.iter().filter(|s| s.check == c).map(|s| if s.scale > 0.0 { s.magnitude / s.scale } else { s.magnitude }).fold(0.0, f64::max)
    };
    let max_coboundary = max_of(CocycleCheck::Coboundary);
    let max_cyclicity = max_of(CocycleCheck::Cyclicity);
    let pass = samples.iter().all(|s| s.pass);
    Ok(SuiteOutcome { samples, max_coboundary, max_cyclicity, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};


    /// Polynomials in one commuting variable, as coefficient vectors.
    struct Poly1;

    impl Algebra for Poly1 {
        type Elem = Vec<i64>;
        fn mul(&self, x: &Vec<i64>, y: &Vec<i64>) -> Vec<i64> {
            let mut out = vec![0; x.len() + y.len() - 1];
            for (i, a) in x.iter().enumerate() {
                for (j, b) in y.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            out
        }
        fn describe(&self, x: &Vec<i64>) -> String {
            format!("{:?}", x)
        }
    }

    fn eps(x: &[i64]) -> BigRational {
        BigRational::from_integer(x[0].into())
    }

    #[test]
    fn coboundary_of_counit_pair() {
        // φ(x, y) = ε(x) ε(y), σ = id, inputs (t, t, t) with ε(t) = 1 after shifting
        let alg = Poly1;
        let phi = Cochain::new(2, |xs: &[Vec<i64>]| eps(&xs[0]) * eps(&xs[1]));
        let id = Automorphism::new(|x: &Vec<i64>| x.clone());
        let one_plus_t = vec![1, 1];
        let xs = vec![one_plus_t.clone(), one_plus_t.clone(), one_plus_t];
        // 1 - 1 + 1
        assert_eq!(b_sigma_eval(&alg, &phi, &id, &xs).unwrap(), BigRational::one());
    }

    #[test]
    fn arity_is_checked() {
        let alg = Poly1;
        let phi = Cochain::new(2, |xs: &[Vec<i64>]| eps(&xs[0]));
        let id = Automorphism::new(|x: &Vec<i64>| x.clone());
        assert!(matches!(b_sigma_eval(&alg, &phi, &id, &[vec![1]]), Err(CocycleError::Arity { .. })));
        assert!(lambda_sigma_eval::<Poly1, BigRational>(&phi, &id, &[vec![1]]).is_err());
    }

    #[test]
    fn trace_cocycle_on_commutative_algebra() {
        // φ(x0, x1) = ε(x0 · dx1/dt) is a cyclic cocycle for σ = id
        let alg = Poly1;
        let deriv = |x: &Vec<i64>| if x.len() > 1 { x[1..].iter().enumerate().map(|(i, c)| c * (i as i64 + 1)).collect() } else { vec![0] };
        let phi = Cochain::new(2, move |xs: &[Vec<i64>]| eps(&Poly1.mul(&xs[0], &deriv(&xs[1]))));
        let id = Automorphism::new(|x: &Vec<i64>| x.clone());
        let samples = vec![vec![vec![1, 2], vec![0, 1, 3], vec![2, 0, 1]], vec![vec![3], vec![1, 1], vec![0, 0, 1]]];
        let cyc = vec![vec![vec![1, 2], vec![0, 1, 3]]];
        let out = cocycle_suite(&alg, &phi, &id, &samples, &cyc, 0.0).unwrap();
        assert_eq!(out.samples.len(), 3);
        assert!(out.samples[0].pass && out.samples[1].pass);
        // ε(x0 x1') + ε(x1 x0') = ε((x0 x1)') = 2 + 1
        assert!(!out.samples[2].pass);
    }

    #[test]
    fn scaled_values_use_relative_tolerance() {
        let v = Scaled::new(1e-12, 1.0);
        assert!(v.negligible(1e-9));
        assert!(!Scaled::new(1e-3, 1.0).negligible(1e-9));
        assert!(!Scaled::new(1e-30, 0.0).negligible(1e-9));
        assert!(Scaled::new(0.0, 0.0).negligible(0.0));
        assert!(!Scaled::new(f64::NAN, 1.0).negligible(1.0));
        assert!(<BigRational as Zero>::zero().negligible(0.0));
    }
}
