//! The GNS representation of `O(SU_q(2))` for the Haar state at a rational
//! `0 < q < 1`, truncated to polynomials of degree at most `D`.
//!
//! `P_D` carries the PBW basis and the Gram form `(x, y) = h(y* x)`.  The
//! form is block diagonal by weight, and an exact LDL factorisation of each
//! block yields an orthogonal basis adapted to the degree filtration, i.e. to
//! the spectral subspaces `V_n = P_{n-1} ⊖ P_{n-2}` of the Casimir.

mod big;
mod eta;

use std::collections::{BTreeMap, HashMap};

use dashmap::DashMap;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

pub use big::{BigOperator, RatMat};
pub use eta::{discriminant, mat4_identity, mat4_mul, mat4_trace, mat4_transpose, Mat4, EtaSet, QuadField, QuadNum};

use crate::hopf::{weights, HopfError, IntegralOp, SuQ2};
use crate::ncpoly::{rational_to_f64, NCPoly, QScalar, ScalarError, Word};
use crate::su2_calculus::{Calculus3D, F_POWER};

pub type Poly = NCPoly<BigRational>;

#[derive(Debug, Error)]
pub enum GnsError {
    #[error("q must satisfy 0 < q < 1, got {0}")]
    InvalidQ(String),
    #[error("the zeta series diverges at z = {0}; z must exceed 1")]
    InvalidZ(f64),
    #[error("degree {needed} exceeds the cutoff {cutoff}")]
    CutoffOverflow { needed: usize, cutoff: usize },
    #[error("Gram block of weight {weight:?} is not positive definite at pivot {index}")]
    NotPositiveDefinite { weight: (i32, i32), index: usize },
    #[error("convention check failed: {0}")]
    Convention(String),
    #[error("eta matrices: {0}")]
    Eta(String),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Operators acting on `P_D` from the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActOp {
    Integral(IntegralOp),
    Casimir,
}

/// Which operator carries the Haar state in the trace formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaarVariant {
    /// `C^{-z} K² x`
    KSquared,
    /// `C^{-z} K^{-6} x K^8`
    Conjugated,
}

/// One spectral block of weight class: the members in degree order with the
/// unit lower-triangular `T = L^{-1}` and pivots `d_i = (u_i, u_i)`.
#[derive(Clone, Debug)]
pub struct WeightClass {
    pub weight: (i32, i32),
    pub members: Vec<usize>,
    pub degrees: Vec<usize>,
    pub pivots: Vec<BigRational>,
    transform: Vec<Vec<BigRational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CasimirLevel {
    pub degree: usize,
    pub eigenvalue: BigRational,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct TraceEval {
    /// `ζ(z)^{-1} Σ_{n ≤ D+1} λ_n^{-z} t_n`
    pub value: f64,
    pub truncated: f64,
    pub zeta: f64,
    /// `Σ_{n > D+1} n [n]_q λ_n^{-z}`
    pub tail: f64,
    /// Per-degree traces `t_n` of the compressed operator, exact.
    pub blocks: Vec<BigRational>,
}

pub struct GnsSpace {
    alg: SuQ2<BigRational>,
    q: BigRational,
    cutoff: usize,
    basis: Vec<Word>,
    position: HashMap<Word, usize>,
    classes: Vec<WeightClass>,
    gram: DashMap<(Word, Word), BigRational>,
    stars: DashMap<Word, Poly>,
}

impl std::fmt::Debug for GnsSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GnsSpace").field("q", &self.q).field("cutoff", &self.cutoff).finish()
    }
}

pub fn check_q(q: &BigRational) -> Result<(), GnsError> {
    if q.is_positive() && *q < BigRational::one() {
        Ok(())
    } else {
        Err(GnsError::InvalidQ(q.to_string()))
    }
}

/// `dim P_D = (D+1)(D+2)(2D+3)/6`.
pub fn dim_upto(d: usize) -> usize {
    (d + 1) * (d + 2) * (2 * d + 3) / 6
}

/// Evaluates a symbolic polynomial at `q`.
pub fn specialize(p: &NCPoly<QScalar>, q: &BigRational) -> Result<Poly, GnsError> {
    Ok(p.try_map_coeffs(|c| c.evaluate_q(q))?)
}

fn qpow(q: &BigRational, n: i64) -> BigRational {
    if n >= 0 {
        num_traits::pow(q.clone(), n as usize)
    } else {
        num_traits::pow(q.recip(), (-n) as usize)
    }
}

/// `[n]_q = (q^n - q^{-n}) / (q - q^{-1})`.
pub fn q_number(q: &BigRational, n: i64) -> BigRational {
    (qpow(q, n) - qpow(q, -n)) / (q - q.recip())
}

/// `λ_n = [n/2]_q² = (q^n - 2 + q^{-n}) / (q - q^{-1})²`, the Casimir eigenvalue on `V_n`.
pub fn casimir_eigenvalue(q: &BigRational, n: i64) -> BigRational {
    let s = q - q.recip();
    (qpow(q, n) - BigRational::from_integer(2.into()) + qpow(q, -n)) / (&s * &s)
}

/// `ln(n [n]_q λ_n^{-z})`, stable for large `n`.
fn log_zeta_term(q: f64, z: f64, n: f64) -> f64 {
    let lq = q.ln();
    let log_qint = -(n - 1.0) * lq + ((1.0 - q.powf(2.0 * n)) / (1.0 - q * q)).ln();
    let log_lambda = -n * lq + 2.0 * (1.0 - q.powf(n)).ln() - 2.0 * (1.0 / q - q).ln();
    n.ln() + log_qint - z * log_lambda
}

fn zeta_sum(q: f64, z: f64, from: usize, tol: f64) -> Result<(f64, usize), GnsError> {
    if z.is_nan() || z <= 1.0 {
        return Err(GnsError::InvalidZ(z));
    }
    let mut sum = 0.0;
    let mut n = from.max(1);
    let mut terms = 0;
    loop {
        let t = log_zeta_term(q, z, n as f64).exp();
        sum += t;
        terms += 1;
        // terms decay geometrically with ratio q^{z-1} once n is moderate
        let ratio = q.powf(z - 1.0);
        if n > from + 4 && t * ratio / (1.0 - ratio) <= tol * sum.max(f64::MIN_POSITIVE) {
            break;
        }
        if terms > 1_000_000 {
            break;
        }
        n += 1;
    }
    Ok((sum, terms))
}

/// `ζ(z) = Σ_n n [n]_q λ_n^{-z}` to relative accuracy `tol`, with the number of terms used.
pub fn zeta(q: &BigRational, z: f64, tol: f64) -> Result<(f64, usize), GnsError> {
    check_q(q)?;
    zeta_sum(rational_to_f64(q), z, 1, tol)
}

/// `Σ_{n ≥ D+2} n [n]_q λ_n^{-z}`: the spectral mass discarded by the cutoff.
pub fn tail_bound(q: &BigRational, z: f64, cutoff: usize) -> Result<f64, GnsError> {
    check_q(q)?;
    Ok(zeta_sum(rational_to_f64(q), z, cutoff + 2, 1e-12)?.0)
}

/// A bound on `|t_n| / (n [n]_q)` for the trace operators built from `x`:
/// `Σ |c_w|` for `K² x`, and `Σ |c_w| q^{-4 l(w)}` for `K^{-6} x K^8 = K² (K^{-8} ▷ x)`.
pub fn trace_norm(q: &BigRational, x: &Poly, variant: HaarVariant) -> f64 {
    x.terms()
        .map(|(w, c)| {
            let c = rational_to_f64(c).abs();
            match variant {
                HaarVariant::KSquared => c,
                HaarVariant::Conjugated => c * rational_to_f64(q).powi(-4 * weights(w).0),
            }
        })
        .sum()
}

impl GnsSpace {
    pub fn new(q: &BigRational, cutoff: usize) -> Result<Self, GnsError> {
        check_q(q)?;
        let alg = SuQ2::new(q.clone())?;
        let basis = alg.pbw_basis(cutoff);
        let position = basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut space = GnsSpace {
            alg,
            q: q.clone(),
            cutoff,
            basis,
            position,
            classes: Vec::new(),
            gram: DashMap::new(),
            stars: DashMap::new(),
        };
        let mut groups: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
        for (i, w) in space.basis.iter().enumerate() {
            groups.entry(weights(w)).or_default().push(i);
        }
        let groups: Vec<_> = groups.into_iter().collect();
        let classes: Result<Vec<_>, _> = groups.into_par_iter().map(|(weight, members)| space.factor_class(weight, members)).collect();
        space.classes = classes?;
        Ok(space)
    }

    fn factor_class(&self, weight: (i32, i32), members: Vec<usize>) -> Result<WeightClass, GnsError> {
        let s = members.len();
        let g: Vec<Vec<BigRational>> =
            (0..s).map(|i| (0..s).map(|j| self.pair_word(&self.basis[members[j]], &self.basis[members[i]])).collect()).collect();
        let mut l = vec![vec![BigRational::zero(); s]; s];
        let mut d: Vec<BigRational> = Vec::with_capacity(s);
        for i in 0..s {
            for j in 0..i {
                let mut v = g[i][j].clone();
                for k in 0..j {
                    v -= &l[i][k] * &l[j][k] * &d[k];
                }
                l[i][j] = v / &d[j];
            }
            let mut v = g[i][i].clone();
            for k in 0..i {
                v -= &l[i][k] * &l[i][k] * &d[k];
            }
            if !v.is_positive() {
                return Err(GnsError::NotPositiveDefinite { weight, index: i });
            }
            l[i][i] = BigRational::one();
            d.push(v);
        }
        let mut t = vec![vec![BigRational::zero(); s]; s];
        for i in 0..s {
            t[i][i] = BigRational::one();
            for j in 0..i {
                let mut v = BigRational::zero();
                for k in j..i {
                    v -= &l[i][k] * &t[k][j];
                }
                t[i][j] = v;
            }
        }
        let degrees = members.iter().map(|&m| self.basis[m].len()).collect();
        Ok(WeightClass { weight, members, degrees, pivots: d, transform: t })
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn classes(&self) -> &[WeightClass] {
        &self.classes
    }

    pub fn algebra(&self) -> &SuQ2<BigRational> {
        &self.alg
    }

    fn star_word(&self, w: &Word) -> Poly {
        if let Some(s) = self.stars.get(w) {
            return s.clone();
        }
        let s = self.alg.star(&Poly::word(w.clone()));
        self.stars.insert(w.clone(), s.clone());
        s
    }

    /// `(w, v) = h(v* w)` for normal words.
    pub fn pair_word(&self, w: &Word, v: &Word) -> BigRational {
        if weights(w) != weights(v) {
            return BigRational::zero();
        }
        let key = (w.clone(), v.clone());
        if let Some(x) = self.gram.get(&key) {
            return x.clone();
        }
        let x = self.alg.haar(&self.alg.mul(&self.star_word(v), &Poly::word(w.clone())));
        self.gram.insert(key, x.clone());
        x
    }

    /// `(x, y) = h(y* x)`.
    pub fn inner(&self, x: &Poly, y: &Poly) -> BigRational {
        let mut acc = BigRational::zero();
        for (v, cy) in y.terms() {
            for (w, cx) in x.terms() {
                let p = self.pair_word(w, v);
                if !p.is_zero() {
                    acc += p * cx * cy;
                }
            }
        }
        acc
    }

    /// The dense Gram matrix `G_{ij} = (m_j, m_i)` of `P_d`.
    pub fn gram_matrix(&self, d: usize) -> Result<RatMat, GnsError> {
        let n = self.prefix(d)?;
        let mut g = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, self.pair_word(&self.basis[j], &self.basis[i]));
            }
        }
        Ok(g)
    }

    fn prefix(&self, d: usize) -> Result<usize, GnsError> {
        if d > self.cutoff {
            return Err(GnsError::CutoffOverflow { needed: d, cutoff: self.cutoff });
        }
        Ok(dim_upto(d))
    }

    /// PBW coordinates of `x` in `P_d`.
    pub fn coordinates(&self, x: &Poly, d: usize) -> Result<Vec<BigRational>, GnsError> {
        let n = self.prefix(d)?;
        let mut out = vec![BigRational::zero(); n];
        for (w, c) in x.terms() {
            match self.position.get(w) {
                Some(&i) if i < n => out[i] = c.clone(),
                _ => return Err(GnsError::CutoffOverflow { needed: w.len(), cutoff: d }),
            }
        }
        Ok(out)
    }

    fn matrix_of(&self, cols: usize, rows_degree: usize, f: impl Fn(&Poly) -> Poly + Sync) -> Result<RatMat, GnsError> {
        let rows = self.prefix(rows_degree)?;
        let columns: Result<Vec<Vec<BigRational>>, GnsError> =
            (0..cols).into_par_iter().map(|j| self.coordinates(&f(&Poly::word(self.basis[j].clone())), rows_degree)).collect();
        let columns = columns?;
        let mut m = RatMat::zeros(rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// `L_x : P_d → P_{target}`.
    pub fn left_mult_into(&self, x: &Poly, d: usize, target: usize) -> Result<RatMat, GnsError> {
        let cols = self.prefix(d)?;
        self.matrix_of(cols, target, |y| self.alg.mul(x, y))
    }

    /// `L_x : P_d → P_{d + deg x}`.
    pub fn left_mult_matrix(&self, x: &Poly, d: usize) -> Result<RatMat, GnsError> {
        self.left_mult_into(x, d, d + x.degree().unwrap_or(0))
    }

    pub fn apply(&self, op: ActOp, x: &Poly) -> Poly {
        match op {
            ActOp::Integral(op) => self.alg.apply(op, x),
            ActOp::Casimir => self.casimir(x),
        }
    }

    /// `f ▷ : P_d → P_d`.
    pub fn act_matrix(&self, op: ActOp, d: usize) -> Result<RatMat, GnsError> {
        let cols = self.prefix(d)?;
        self.matrix_of(cols, d, |y| self.apply(op, y))
    }

    /// `C ▷ x = q^{-1} X_0 X_2 K^{-2} ▷ x + (q - q^{-1})^{-2} (q K² + q^{-1} K^{-2} - 2) ▷ x`.
    pub fn casimir(&self, x: &Poly) -> Poly {
        let qinv = self.q.recip();
        let s = &self.q - &qinv;
        let c = (&s * &s).recip();
        let km = self.alg.apply(IntegralOp::K2(-1), x);
        let kp = self.alg.apply(IntegralOp::K2(1), x);
        let ladder = self.alg.apply(IntegralOp::Lower, &self.alg.apply(IntegralOp::Raise, &km));
        let mut out = ladder.scale(&qinv);
        let mut diag = kp.scale(&self.q);
        diag.add_scaled(&km, &qinv);
        diag.add_scaled(x, &BigRational::from_integer((-2).into()));
        out.add_scaled(&diag, &c);
        out
    }

    /// The orthogonal vector `u_i = Σ_j T_{ij} m_j` of a weight class.
    pub fn orthogonal_vector(&self, class: &WeightClass, i: usize) -> Poly {
        let mut u = Poly::zero();
        for j in 0..=i {
            u.add_term(self.basis[class.members[j]].clone(), class.transform[i][j].clone());
        }
        u
    }

    /// Checks `C ▷ u = λ_{deg u + 1} u` on every orthogonal vector and
    /// returns the spectrum with multiplicities.
    pub fn casimir_decomp(&self) -> Result<Vec<CasimirLevel>, GnsError> {
        let failures: Vec<String> = self
            .classes
            .par_iter()
            .flat_map_iter(|class| {
                (0..class.members.len()).filter_map(move |i| {
                    let u = self.orthogonal_vector(class, i);
                    let lambda = casimir_eigenvalue(&self.q, class.degrees[i] as i64 + 1);
                    let r = self.casimir(&u).sub(&u.scale(&lambda));
                    (!r.is_zero()).then(|| format!("weight {:?}, degree {}", class.weight, class.degrees[i]))
                })
            })
            .collect();
        if let Some(f) = failures.first() {
            return Err(GnsError::Convention(format!("Casimir is not scalar on the orthogonal vector at {f}")));
        }
        let mut counts = vec![0usize; self.cutoff + 1];
        for class in &self.classes {
            for &k in &class.degrees {
                counts[k] += 1;
            }
        }
        Ok(counts
            .into_iter()
            .enumerate()
            .map(|(k, m)| CasimirLevel { degree: k, eigenvalue: casimir_eigenvalue(&self.q, k as i64 + 1), multiplicity: m })
            .collect())
    }

    /// Exact traces `t_k = Tr(Π_{V_{k+1}} B Π_{V_{k+1}})` for `k = 0..=D`.
    pub fn block_traces(&self, op: &(dyn Fn(&Poly) -> Poly + Sync)) -> Vec<BigRational> {
        let partial: Vec<Vec<(usize, BigRational)>> = self
            .classes
            .par_iter()
            .map(|class| {
                let s = class.members.len();
                let images: Vec<Poly> = class.members.iter().map(|&m| op(&Poly::word(self.basis[m].clone()))).collect();
                // m[l][j] = (B m_j, m_l)
                let m: Vec<Vec<BigRational>> = (0..s)
                    .map(|l| {
                        let v = &self.basis[class.members[l]];
                        images.iter().map(|img| img.terms().fold(BigRational::zero(), |acc, (w, c)| acc + self.pair_word(w, v) * c)).collect()
                    })
                    .collect();
                (0..s)
                    .map(|i| {
                        let t = &class.transform[i];
                        let mut acc = BigRational::zero();
                        for l in 0..=i {
                            if t[l].is_zero() {
                                continue;
                            }
                            for j in 0..=i {
                                if !t[j].is_zero() && !m[l][j].is_zero() {
                                    acc += &t[l] * &t[j] * &m[l][j];
                                }
                            }
                        }
                        (class.degrees[i], acc / &class.pivots[i])
                    })
                    .collect()
            })
            .collect();
        let mut out = vec![BigRational::zero(); self.cutoff + 1];
        for (k, v) in partial.into_iter().flatten() {
            out[k] += v;
        }
        out
    }

    /// `ζ(z)^{-1} Σ_k λ_{k+1}^{-z} t_k` with the tail of the series.
    pub fn spectral_trace(&self, blocks: Vec<BigRational>, z: f64) -> Result<TraceEval, GnsError> {
        let (zeta, _) = zeta(&self.q, z, 1e-15)?;
        let tail = tail_bound(&self.q, z, self.cutoff)?;
        let truncated: f64 = blocks
            .iter()
            .enumerate()
            .map(|(k, t)| rational_to_f64(t) * (-z * rational_to_f64(&casimir_eigenvalue(&self.q, k as i64 + 1)).ln()).exp())
            .sum();
        Ok(TraceEval { value: truncated / zeta, truncated, zeta, tail, blocks })
    }

    pub fn haar_blocks(&self, x: &Poly, variant: HaarVariant) -> Vec<BigRational> {
        match variant {
            HaarVariant::KSquared => self.block_traces(&|y| self.alg.apply(IntegralOp::K2(1), &self.alg.mul(x, y))),
            HaarVariant::Conjugated => self.block_traces(&|y| {
                let shifted = self.alg.apply(IntegralOp::K2(4), y);
                self.alg.apply(IntegralOp::K2(-3), &self.alg.mul(x, &shifted))
            }),
        }
    }

    /// The spectral trace that recovers `h(x)`.
    pub fn haar_trace(&self, x: &Poly, z: f64, variant: HaarVariant) -> Result<TraceEval, GnsError> {
        self.spectral_trace(self.haar_blocks(x, variant), z)
    }

    /// `[X_k, x] y = X_k ▷ (x y) - x (X_k ▷ y)`.
    pub fn commutator(&self, k: usize, x: &Poly, y: &Poly) -> Poly {
        let op = Calculus3D::x_op(k);
        self.alg.apply(op, &self.alg.mul(x, y)).sub(&self.alg.mul(x, &self.alg.apply(op, y)))
    }

    /// `y ↦ (X_k ▷ x)(K^{2 f_k} ▷ y)`, the right-hand side of the commutator expansion.
    pub fn commutator_expanded(&self, k: usize, x: &Poly, y: &Poly) -> Poly {
        let xk = self.alg.apply(Calculus3D::x_op(k), x);
        self.alg.mul(&xk, &self.alg.apply(IntegralOp::K2(F_POWER[k] / 2), y))
    }

    /// Words `(i, j, k)` with their nonzero scalars `Tr γ_q η_i η_j η_k`.
    pub fn eta_weights(eta: &EtaSet) -> Result<Vec<([usize; 3], BigRational)>, GnsError> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let t = eta.trace_word(&[i, j, k]);
                    let r = t.as_rational().ok_or_else(|| GnsError::Eta(format!("Tr γη_{i}η_{j}η_{k} = {t} is irrational")))?;
                    if !r.is_zero() {
                        out.push(([i, j, k], r.clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Per-degree traces of `Σ_w Tr(γ_q η_w) K^{-6} x_0 [X_i, x_1][X_j, x_2][X_k, x_3]`,
    /// the factorised trace of `K^{-6} ρ(x_0)[F, ρ(x_1)][F, ρ(x_2)][F, ρ(x_3)] ⊗ γ_q`.
    pub fn tau_blocks(&self, xs: [&Poly; 4], eta: &EtaSet) -> Result<Vec<BigRational>, GnsError> {
        if eta.q != self.q {
            return Err(GnsError::Eta(format!("matrices built for q = {}, space has q = {}", eta.q, self.q)));
        }
        let words = Self::eta_weights(eta)?;
        Ok(self.block_traces(&|y| {
            let mut inner: HashMap<usize, Poly> = HashMap::new();
            let mut middle: HashMap<(usize, usize), Poly> = HashMap::new();
            let mut acc = Poly::zero();
            for ([i, j, k], c) in &words {
                let yk = inner.entry(*k).or_insert_with(|| self.commutator(*k, xs[3], y)).clone();
                let yjk = middle.entry((*j, *k)).or_insert_with(|| self.commutator(*j, xs[2], &yk)).clone();
                acc.add_scaled(&self.commutator(*i, xs[1], &yjk), c);
            }
            self.alg.apply(IntegralOp::K2(-3), &self.alg.mul(xs[0], &acc))
        }))
    }

    pub fn tau_trace(&self, xs: [&Poly; 4], z: f64, eta: &EtaSet) -> Result<TraceEval, GnsError> {
        self.spectral_trace(self.tau_blocks(xs, eta)?, z)
    }
}
