//! The matrices `γ_q, η_0, η_1, η_2` on `ℂ⁴` with `Tr γ_q η_i η_j η_k = π(ω_i ω_j ω_k)`.
//!
//! `η_1 = diag(α_1, α_2, α_3, α_4)` with `α_3 = 1`, `α_4 = 0` and `α_1, α_2` the
//! roots of `t² + q⁴ t + q²(q⁶ - 1)/3`, so that `α_1 + α_2 = -q⁴` and
//! `α_1³ + α_2³ + q⁶(α_3³ + α_4³) = 0`.  Entries live in `ℚ(√Δ)` with
//! `Δ = q⁸ + 4q²(1 - q⁶)/3`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::GnsError;
use crate::ncpoly::rational_to_f64;
use crate::su2_calculus::volume_coefficient;

/// `a + b√Δ` for the discriminant fixed by the enclosing [`QuadField`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QuadNum {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadNum {
    pub fn rational(a: BigRational) -> Self {
        QuadNum { a, b: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadNum { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadNum { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn neg(&self) -> Self {
        QuadNum { a: -&self.a, b: -&self.b }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QuadNum { a: &self.a * c, b: &self.b * c }
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt(D)", self.a, self.b)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadField {
    disc: BigRational,
}

impl QuadField {
    pub fn new(disc: BigRational) -> Self {
        QuadField { disc }
    }

    pub fn disc(&self) -> &BigRational {
        &self.disc
    }

    pub fn mul(&self, x: &QuadNum, y: &QuadNum) -> QuadNum {
        QuadNum { a: &x.a * &y.a + &x.b * &y.b * &self.disc, b: &x.a * &y.b + &x.b * &y.a }
    }

    pub fn to_f64(&self, x: &QuadNum) -> f64 {
        rational_to_f64(&x.a) + rational_to_f64(&x.b) * rational_to_f64(&self.disc).sqrt()
    }
}

pub type Mat4 = [[QuadNum; 4]; 4];

pub fn mat4_zero() -> Mat4 {
    std::array::from_fn(|_| std::array::from_fn(|_| QuadNum::zero()))
}

pub fn mat4_identity() -> Mat4 {
    let mut m = mat4_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = QuadNum::one();
    }
    m
}

pub fn mat4_unit(i: usize, j: usize) -> Mat4 {
    let mut m = mat4_zero();
    m[i][j] = QuadNum::one();
    m
}

pub fn mat4_add(x: &Mat4, y: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| x[i][j].add(&y[i][j])))
}

pub fn mat4_mul(field: &QuadField, x: &Mat4, y: &Mat4) -> Mat4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(QuadNum::zero(), |acc, k| acc.add(&field.mul(&x[i][k], &y[k][j]))))
    })
}

pub fn mat4_transpose(x: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| x[j][i].clone()))
}

pub fn mat4_trace(x: &Mat4) -> QuadNum {
    (0..4).fold(QuadNum::zero(), |acc, i| acc.add(&x[i][i]))
}

#[derive(Clone, Debug)]
pub struct EtaSet {
    pub q: BigRational,
    pub field: QuadField,
    pub alpha: [QuadNum; 4],
    pub gamma: Mat4,
    pub eta: [Mat4; 3],
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `Δ = q⁸ + 4q²(1 - q⁶)/3`, positive for `0 < q < 1`.
pub fn discriminant(q: &BigRational) -> BigRational {
    let q2 = q * q;
    let q6 = &q2 * &q2 * &q2;
    let q8 = &q6 * &q2;
    q8 + rat(4, 3) * q2 * (BigRational::one() - q6)
}

impl EtaSet {
    pub fn build(q: &BigRational) -> Result<Self, GnsError> {
        if !q.is_positive() || *q >= BigRational::one() {
            return Err(GnsError::InvalidQ(q.to_string()));
        }
        let disc = discriminant(q);
        if !disc.is_positive() {
            return Err(GnsError::Eta(format!("discriminant {disc} is not positive")));
        }
        let field = QuadField::new(disc);
        let q2 = q * q;
        let q4 = &q2 * &q2;
        let q6 = &q4 * &q2;
        let half = rat(1, 2);
        let a1 = QuadNum { a: -&q4 * &half, b: half.clone() };
        let a2 = QuadNum { a: -&q4 * &half, b: -half };
        let alpha = [a1, a2, QuadNum::one(), QuadNum::zero()];
        let mut gamma = mat4_identity();
        gamma[2][2] = QuadNum::rational(q6.clone());
        gamma[3][3] = QuadNum::rational(q6);
        let eta0 = mat4_add(&mat4_unit(0, 3), &mat4_unit(1, 2));
        let mut eta1 = mat4_zero();
        for (i, a) in alpha.iter().enumerate() {
            eta1[i][i] = a.clone();
        }
        let eta2 = mat4_transpose(&eta0);
        Ok(EtaSet { q: q.clone(), field, alpha, gamma, eta: [eta0, eta1, eta2] })
    }

    /// `Tr γ_q η_{w_1} ⋯ η_{w_m}`.
    pub fn trace_word(&self, word: &[usize]) -> QuadNum {
        let mut m = self.gamma.clone();
        for &i in word {
            m = mat4_mul(&self.field, &m, &self.eta[i]);
        }
        mat4_trace(&m)
    }

    /// `π(ω_i ω_j ω_k)` evaluated at `q`.
    pub fn pi_value(&self, i: usize, j: usize, k: usize) -> BigRational {
        volume_coefficient(i as u8, j as u8, k as u8).evaluate_q(&self.q).expect("integral powers of q")
    }

    /// Triples `(i, j, k)` where the trace differs from `π`; empty when the
    /// matrices are correct.
    pub fn trace_mismatches(&self) -> Vec<((usize, usize, usize), QuadNum, BigRational)> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let t = self.trace_word(&[i, j, k]);
                    let p = self.pi_value(i, j, k);
                    if t != QuadNum::rational(p.clone()) {
                        out.push(((i, j, k), t, p));
                    }
                }
            }
        }
        out
    }

    /// `η_0* = η_2` and `η_1* = η_1`; all entries are real.
    pub fn adjoint_relations_hold(&self) -> bool {
        mat4_transpose(&self.eta[0]) == self.eta[2] && mat4_transpose(&self.eta[1]) == self.eta[1]
    }

    /// Residuals of `α_3 + α_4 = 1`, `α_1 + α_2 = -q⁴` and
    /// `α_1³ + α_2³ + q⁶(α_3³ + α_4³) = 0`.
    pub fn constraint_residuals(&self) -> [QuadNum; 3] {
        let f = &self.field;
        let cube = |x: &QuadNum| f.mul(&f.mul(x, x), x);
        let q2 = &self.q * &self.q;
        let q4 = &q2 * &q2;
        let q6 = &q4 * &q2;
        let a = &self.alpha;
        [
            a[2].add(&a[3]).sub(&QuadNum::one()),
            a[0].add(&a[1]).add(&QuadNum::rational(q4)),
            cube(&a[0]).add(&cube(&a[1])).add(&cube(&a[2]).add(&cube(&a[3])).scale(&q6)),
        ]
    }

    pub fn alpha_f64(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.field.to_f64(&self.alpha[i]))
    }
}
