//! Operators on `P_D ⊗ ℂ⁴` kept as sums of Kronecker products `A ⊗ η`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::eta::{mat4_identity, mat4_mul, EtaSet, Mat4, QuadField, QuadNum};
use super::{ActOp, GnsError, GnsSpace, Poly};
use crate::hopf::IntegralOp;
use crate::su2_calculus::{Calculus3D, F_POWER};

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RatMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct BigOperator {
    rows: usize,
    cols: usize,
    terms: Vec<(RatMat, Mat4)>,
}

impl BigOperator {
    pub fn new(rows: usize, cols: usize) -> Self {
        BigOperator { rows, cols, terms: Vec::new() }
    }

    pub fn push(&mut self, a: RatMat, eta: Mat4) {
        assert_eq!((a.rows(), a.cols()), (self.rows, self.cols), "dimension mismatch");
        self.terms.push((a, eta));
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &Self, field: &QuadField) -> Self {
        let mut out = BigOperator::new(self.rows, other.cols);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.push(a.mul(b), mat4_mul(field, x, y));
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        let minus = BigRational::from_integer((-1).into());
        for (b, y) in &other.terms {
            out.push(b.scale(&minus), y.clone());
        }
        out
    }

    /// `(G ⊗ 1) · self`.
    pub fn left_mul_h(&self, g: &RatMat) -> Self {
        let mut out = BigOperator::new(g.rows(), self.cols);
        for (a, x) in &self.terms {
            out.push(g.mul(a), x.clone());
        }
        out
    }

    /// Dense `(4 rows) × (4 cols)` matrix, with index `4 h + c`.
    pub fn materialize(&self, field: &QuadField) -> Vec<Vec<QuadNum>> {
        let mut out = vec![vec![QuadNum::zero(); 4 * self.cols]; 4 * self.rows];
        for (a, x) in &self.terms {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let v = a.get(i, j);
                    if v.is_zero() {
                        continue;
                    }
                    for (r, row) in x.iter().enumerate() {
                        for (c, e) in row.iter().enumerate() {
                            if !e.is_zero() {
                                let cell = &mut out[4 * i + r][4 * j + c];
                                *cell = cell.add(&field.mul(&QuadNum::rational(v.clone()), e));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `F = Σ_k X_k ⊗ η_k` on `P_d ⊗ ℂ⁴`.
    pub fn dirac(space: &GnsSpace, eta: &EtaSet, d: usize) -> Result<Self, GnsError> {
        let n = super::dim_upto(d);
        let mut out = BigOperator::new(n, n);
        for k in 0..3 {
            out.push(space.act_matrix(ActOp::Integral(Calculus3D::x_op(k)), d)?, eta.eta[k].clone());
        }
        Ok(out)
    }

    /// `ρ(x) ⊗ 1 : P_d ⊗ ℂ⁴ → P_{target} ⊗ ℂ⁴`.
    pub fn rho(space: &GnsSpace, x: &Poly, d: usize, target: usize) -> Result<Self, GnsError> {
        let a = space.left_mult_into(x, d, target)?;
        let mut out = BigOperator::new(a.rows(), a.cols());
        out.push(a, mat4_identity());
        Ok(out)
    }

    /// `[F, ρ(x)]` on `P_d`, computed as `F ρ(x) - ρ(x) F`.
    pub fn commutator_direct(space: &GnsSpace, eta: &EtaSet, x: &Poly, d: usize) -> Result<Self, GnsError> {
        let target = d + x.degree().unwrap_or(0);
        let f_hi = Self::dirac(space, eta, target)?;
        let f_lo = Self::dirac(space, eta, d)?;
        let r = Self::rho(space, x, d, target)?;
        Ok(f_hi.mul(&r, &eta.field).sub(&r.mul(&f_lo, &eta.field)))
    }

    /// `[F, ρ(x)] = Σ_k ρ(X_k ▷ x) f^k_k ⊗ η_k`.
    pub fn commutator_expanded(space: &GnsSpace, eta: &EtaSet, x: &Poly, d: usize) -> Result<Self, GnsError> {
        let target = d + x.degree().unwrap_or(0);
        let mut out = BigOperator::new(super::dim_upto(target), super::dim_upto(d));
        for k in 0..3 {
            let xk = space.apply(ActOp::Integral(Calculus3D::x_op(k)), x);
            let l = space.left_mult_into(&xk, d, target)?;
            let f = space.act_matrix(ActOp::Integral(IntegralOp::K2(F_POWER[k] / 2)), d)?;
            out.push(l.mul(&f), eta.eta[k].clone());
        }
        Ok(out)
    }

    /// `(G ⊗ 1) F` is symmetric: `F` is self-adjoint for the Gram form on `P_d ⊗ ℂ⁴`.
    pub fn dirac_is_self_adjoint(space: &GnsSpace, eta: &EtaSet, d: usize) -> Result<bool, GnsError> {
        let g = space.gram_matrix(d)?;
        let m = Self::dirac(space, eta, d)?.left_mul_h(&g).materialize(&eta.field);
        let n = m.len();
        Ok((0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i])))
    }
}
