//! The left-covariant 3D calculus on SU_q(2), its volume form and the
//! twisted cyclic 3-cocycle `τ(x0, x1, x2, x3) = h(π(x0 dx1 ∧ dx2 ∧ dx3))`.
//!
//! Forms are written with coefficients on the left, `Σ x_I ω_I`, where `ω_I`
//! runs over increasing index words in `ω_0, ω_1, ω_2`.  Moving a form past a
//! function uses `ω_k y = (f^k_k ▷ y) ω_k`; the `f^k_j` are diagonal:
//! `f^0_0 = f^2_2 = K^2` and `f^1_1 = K^4`.

use std::collections::BTreeMap;

use dashmap::DashMap;
use thiserror::Error;

use crate::cocycle::{Algebra, Automorphism, Cochain};
use crate::hopf::{CrossElem, HopfError, IntegralOp, QuantumSu2};
use crate::ncpoly::presentations::{E, F};
use crate::ncpoly::{NCPoly, QScalar, Word};

/// Exponent `w_k` with `f^k_k = K^{w_k}`.
pub const F_POWER: [i32; 3] = [2, 4, 2];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error("form has components below top degree: {0}")]
    NotTopDegree(String),
}

/// Element of the exterior algebra, `Σ x_I ω_I` with increasing index words `I`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormElem {
    terms: BTreeMap<Vec<u8>, NCPoly<QScalar>>,
}

impl FormElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn function(x: NCPoly<QScalar>) -> Self {
        let mut f = Self::zero();
        f.add_part(vec![], x);
        f
    }

    pub fn add_part(&mut self, index: Vec<u8>, x: NCPoly<QScalar>) {
        if x.is_zero() {
            return;
        }
        let entry = self.terms.entry(index.clone()).or_default();
        *entry = entry.add(&x);
        if entry.is_zero() {
            self.terms.remove(&index);
        }
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Vec<u8>, &NCPoly<QScalar>)> {
        self.terms.iter()
    }

    pub fn part(&self, index: &[u8]) -> NCPoly<QScalar> {
        self.terms.get(index).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, x) in other.parts() {
            out.add_part(i.clone(), x.clone());
        }
        out
    }
}

/// Coefficient `c` with `ω_i ω_j = c ω_j ω_i` for `i > j`.
pub fn swap_constant(i: u8, j: u8) -> QScalar {
    match (i, j) {
        (1, 0) => QScalar::q_pow(4).neg(),
        (2, 0) => QScalar::q_pow(2).neg(),
        (2, 1) => QScalar::q_pow(4).neg(),
        _ => unreachable!("swap_constant expects i > j"),
    }
}

/// Sorts an index word with the anticommutation rules; `None` if it vanishes.
pub fn order_omegas(word: &[u8]) -> Option<(QScalar, Vec<u8>)> {
    let mut w = word.to_vec();
    let mut c = QScalar::one();
    for end in (1..w.len()).rev() {
        for i in 0..end {
            if w[i] == w[i + 1] {
                return None;
            }
            if w[i] > w[i + 1] {
                c = c.mul(&swap_constant(w[i], w[i + 1]));
                w.swap(i, i + 1);
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((c, w))
}

/// `π(ω_i ω_j ω_k)`: the coefficient of the volume form `ω_0 ω_1 ω_2`.
pub fn volume_coefficient(i: u8, j: u8, k: u8) -> QScalar {
    match order_omegas(&[i, j, k]) {
        Some((c, w)) if w == [0, 1, 2] => c,
        _ => QScalar::zero(),
    }
}

type Triple = (NCPoly<QScalar>, NCPoly<QScalar>, NCPoly<QScalar>);

pub struct Calculus3D {
    pub qg: QuantumSu2,
    d_cache: DashMap<Word, FormElem>,
    volume_cache: DashMap<Triple, NCPoly<QScalar>>,
}

impl std::fmt::Debug for Calculus3D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Calculus3D")
    }
}

impl Calculus3D {
    pub fn new() -> Result<Self, CalculusError> {
        Ok(Calculus3D { qg: QuantumSu2::new()?, d_cache: DashMap::new(), volume_cache: DashMap::new() })
    }

    /// `X_0 = q^{-1/2} F K`, `X_1 = (1 - q^{-2})^{-1}(1 - K^4)`, `X_2 = q^{1/2} E K`.
    pub fn x_element(&self, k: usize) -> NCPoly<QScalar> {
        let u = &self.qg.u;
        match k {
            0 => u.word(&[F, crate::ncpoly::presentations::K]).scale(&QScalar::q_half_pow(-1)),
            1 => {
                let c = QScalar::one().sub(&QScalar::q_pow(-2)).inv().expect("q^2 != 1");
                NCPoly::one().sub(&u.k_pow(4)).scale(&c)
            }
            _ => u.word(&[E, crate::ncpoly::presentations::K]).scale(&QScalar::q_half_pow(1)),
        }
    }

    /// `f^k_j` as an element of U_q(su_2).
    pub fn f_element(&self, k: usize, j: usize) -> NCPoly<QScalar> {
        if k == j {
            self.qg.u.k_pow(F_POWER[k])
        } else {
            NCPoly::zero()
        }
    }

    pub fn x_op(k: usize) -> IntegralOp {
        [IntegralOp::Lower, IntegralOp::Middle, IntegralOp::Raise][k]
    }

    /// `X_k ▷ x`.
    pub fn partial(&self, k: usize, x: &NCPoly<QScalar>) -> NCPoly<QScalar> {
        self.qg.a.apply(Self::x_op(k), x)
    }

    /// `dx = Σ_k (X_k ▷ x) ω_k`.
    pub fn d(&self, x: &NCPoly<QScalar>) -> FormElem {
        let mut out = FormElem::zero();
        for (w, c) in x.terms() {
            let dw = self.d_word(w);
            for (i, part) in dw.parts() {
                out.add_part(i.clone(), part.scale(c));
            }
        }
        out
    }

    fn d_word(&self, w: &Word) -> FormElem {
        if let Some(v) = self.d_cache.get(w) {
            return v.clone();
        }
        let x = NCPoly::word(w.clone());
        let mut out = FormElem::zero();
        for k in 0..3 {
            out.add_part(vec![k as u8], self.partial(k, &x));
        }
        self.d_cache.insert(w.clone(), out.clone());
        out
    }

    /// `ω_I y = (f^I ▷ y) ω_I` with `f^I = Π f^{i}_{i}`.
    fn move_past(&self, index: &[u8], y: &NCPoly<QScalar>) -> NCPoly<QScalar> {
        let power: i32 = index.iter().map(|&i| F_POWER[i as usize]).sum();
        if power == 0 {
            return y.clone();
        }
        self.qg.a.apply(IntegralOp::K2(power / 2), y)
    }

    /// Product in the exterior algebra.
    pub fn form_mul(&self, xi: &FormElem, eta: &FormElem) -> FormElem {
        let a = &self.qg.a;
        let mut out = FormElem::zero();
        for (i, x) in xi.parts() {
            for (j, y) in eta.parts() {
                let mut word = i.clone();
                word.extend_from_slice(j);
                let Some((c, sorted)) = order_omegas(&word) else { continue };
                let moved = self.move_past(i, y);
                out.add_part(sorted, a.mul(x, &moved).scale(&c));
            }
        }
        out
    }

    /// Coefficient of the volume form; errors if lower-degree parts are present.
    pub fn pi_volume(&self, xi: &FormElem) -> Result<NCPoly<QScalar>, CalculusError> {
        let mut out = NCPoly::zero();
        for (i, x) in xi.parts() {
            if i.as_slice() != [0, 1, 2] {
                return Err(CalculusError::NotTopDegree(format!("component of degree {}", i.len())));
            }
            out = x.clone();
        }
        Ok(out)
    }

    /// `π(dx1 ∧ dx2 ∧ dx3)`.
    pub fn volume(&self, x1: &NCPoly<QScalar>, x2: &NCPoly<QScalar>, x3: &NCPoly<QScalar>) -> NCPoly<QScalar> {
        let key = (x1.clone(), x2.clone(), x3.clone());
        if let Some(v) = self.volume_cache.get(&key) {
            return v.clone();
        }
        let form = self.form_mul(&self.form_mul(&self.d(x1), &self.d(x2)), &self.d(x3));
        let v = self.pi_volume(&form).expect("a product of three 1-forms has top degree");
        self.volume_cache.insert(key, v.clone());
        v
    }

    /// `τ(x0, x1, x2, x3) = h(π(x0 dx1 ∧ dx2 ∧ dx3))`.
    pub fn tau(&self, xs: [&NCPoly<QScalar>; 4]) -> QScalar {
        let v = self.volume(xs[1], xs[2], xs[3]);
        self.qg.a.haar(&self.qg.a.mul(xs[0], &v))
    }

    /// The six-term expansion of `τ`, evaluated with symbolic actions of
    /// `K^m X_j` in U_q(su_2).
    pub fn tau_explicit(&self, xs: [&NCPoly<QScalar>; 4]) -> QScalar {
        let qg = &self.qg;
        let kx = |m: i32, j: usize, x: &NCPoly<QScalar>| {
            let f = qg.u.mul(&qg.u.k_pow(m), &self.x_element(j));
            qg.act_left(&f, x)
        };
        let m = |p: &NCPoly<QScalar>, r: &NCPoly<QScalar>| qg.a.mul(p, r);
        let q = QScalar::q_pow;
        let [x0, x1, x2, x3] = xs;
        let t0 = m(&kx(2, 1, x2), &kx(6, 2, x3)).sub(&m(&kx(2, 2, x2), &kx(4, 1, x3)).scale(&q(4)));
        let t1 = m(&kx(4, 2, x2), &kx(6, 0, x3)).scale(&q(6)).sub(&m(&kx(4, 0, x2), &kx(6, 2, x3)).scale(&q(4)));
        let t2 = m(&kx(2, 0, x2), &kx(4, 1, x3)).scale(&q(6)).sub(&m(&kx(2, 1, x2), &kx(6, 0, x3)).scale(&q(10)));
        let total = m(&m(x0, &kx(0, 0, x1)), &t0)
            .add(&m(&m(x0, &kx(0, 1, x1)), &t1))
            .add(&m(&m(x0, &kx(0, 2, x1)), &t2));
        qg.a.haar(&total)
    }

    /// `Σ x0 [X_j1, x1][X_j2, x2][X_j3, x3] S(f^{j1}_{k1} f^{j2}_{k2} f^{j3}_{k3}) π(ω_k1 ω_k2 ω_k3)`,
    /// evaluated in the cross-product algebra.
    pub fn commutator_expansion(&self, xs: [&NCPoly<QScalar>; 4]) -> Result<NCPoly<QScalar>, CalculusError> {
        let qg = &self.qg;
        let comms: Vec<Vec<CrossElem>> =
            xs[1..].iter().map(|x| (0..3).map(|j| qg.cross_commutator(&self.x_element(j), x)).collect()).collect();
        let x0 = CrossElem::from_parts(xs[0], &NCPoly::one());
        let mut total = CrossElem::zero();
        for j in 0..27 {
            let (j1, j2, j3) = (j / 9, (j / 3) % 3, j % 3);
            let mut prod: Option<CrossElem> = None;
            for k in 0..27 {
                let (k1, k2, k3) = (k / 9, (k / 3) % 3, k % 3);
                let c = volume_coefficient(k1 as u8, k2 as u8, k3 as u8);
                if c.is_zero() {
                    continue;
                }
                let f = qg.u.mul(&qg.u.mul(&self.f_element(j1, k1), &self.f_element(j2, k2)), &self.f_element(j3, k3));
                if f.is_zero() {
                    continue;
                }
                let base = prod.get_or_insert_with(|| {
                    let p = qg.cross_mul(&x0, &comms[0][j1]);
                    let p = qg.cross_mul(&p, &comms[1][j2]);
                    qg.cross_mul(&p, &comms[2][j3])
                });
                let s = CrossElem::from_parts(&NCPoly::one(), &qg.u.antipode(&f));
                total = total.add(&qg.cross_mul(base, &s).scale(&c));
            }
        }
        Ok(total.into_algebra()?)
    }

    /// `π(x0 dx1 ∧ dx2 ∧ dx3)` through the exterior algebra.
    pub fn volume_form_coefficient(&self, xs: [&NCPoly<QScalar>; 4]) -> NCPoly<QScalar> {
        self.qg.a.mul(xs[0], &self.volume(xs[1], xs[2], xs[3]))
    }
}

impl Algebra for Calculus3D {
    type Elem = NCPoly<QScalar>;

    fn mul(&self, x: &NCPoly<QScalar>, y: &NCPoly<QScalar>) -> NCPoly<QScalar> {
        self.qg.a.mul(x, y)
    }

    fn describe(&self, x: &NCPoly<QScalar>) -> String {
        self.qg.a.pres().render(x)
    }
}

impl Calculus3D {
    /// `τ` as a 4-linear functional.
    pub fn tau_cochain(&self) -> Cochain<'_, NCPoly<QScalar>, QScalar> {
        Cochain::new(4, move |xs: &[NCPoly<QScalar>]| self.tau([&xs[0], &xs[1], &xs[2], &xs[3]]))
    }

    /// The twist `σ(x) = K^6 ▷ x ◁ K^{-2}`.
    pub fn sigma_automorphism(&self) -> Automorphism<'_, NCPoly<QScalar>> {
        Automorphism::new(move |x: &NCPoly<QScalar>| self.qg.sigma(x))
    }
}
