//! The coordinate Hopf *-algebra O(SU_q(2)) over a generic coefficient field.

use std::collections::BTreeMap;
use std::sync::RwLock;

use dashmap::DashMap;

use super::tensor::Tensor;
use super::HopfError;
use crate::ncpoly::presentations::{self, A, B, C as CC, D};
use crate::ncpoly::{Coeff, Gen, NCPoly, Presentation, Word};

/// Matrix position `(i, j)` of a coordinate generator `u_ij`.
pub fn matrix_index(g: Gen) -> (usize, usize) {
    match g {
        A => (0, 0),
        B => (0, 1),
        CC => (1, 0),
        _ => (1, 1),
    }
}

/// Coordinate generator `u_ij`.
pub fn coordinate(i: usize, j: usize) -> Gen {
    [[A, B], [CC, D]][i][j]
}

/// Left and right weights of a word, in units of one half.
///
/// `K^{2n}` acts on the left by `q^{n * left}` and on the right by `q^{n * right}`.
pub fn weights(w: &Word) -> (i32, i32) {
    w.letters().iter().fold((0, 0), |(l, r), &g| {
        let (dl, dr) = match g {
            A => (-1, -1),
            B => (1, -1),
            CC => (-1, 1),
            _ => (1, 1),
        };
        (l + dl, r + dr)
    })
}

/// Integral operators acting on the left: `X_0 = q^{-1/2} F K`,
/// `X_1 = (1 - q^{-2})^{-1} (1 - K^4)`, `X_2 = q^{1/2} E K` and `K^{2n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntegralOp {
    Lower,
    Middle,
    Raise,
    K2(i32),
}

pub struct SuQ2<C: Coeff> {
    pres: Presentation<C>,
    q: C,
    qinv: C,
    delta: DashMap<Word, Tensor<C>>,
    ops: DashMap<(IntegralOp, Word), NCPoly<C>>,
    haar: RwLock<Vec<C>>,
}

impl<C: Coeff> std::fmt::Debug for SuQ2<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SuQ2").field("q", &self.q).finish()
    }
}

impl<C: Coeff> SuQ2<C> {
    pub fn new(q: C) -> Result<Self, HopfError> {
        let qinv = q.inverse().ok_or(HopfError::Degenerate("q = 0".into()))?;
        if q == C::one() || q == C::one().negated() {
            return Err(HopfError::Degenerate("q = ±1".into()));
        }
        let pres = presentations::coordinate_algebra(&q)?;
        Ok(SuQ2 { pres, q, qinv, delta: DashMap::new(), ops: DashMap::new(), haar: RwLock::new(vec![C::one()]) })
    }

    pub fn pres(&self) -> &Presentation<C> {
        &self.pres
    }

    pub fn q(&self) -> &C {
        &self.q
    }

    pub fn q_pow(&self, n: i64) -> C {
        if n >= 0 {
            self.q.powi(n).expect("nonnegative power")
        } else {
            self.qinv.powi(-n).expect("nonnegative power")
        }
    }

    pub fn gen(&self, g: Gen) -> NCPoly<C> {
        NCPoly::generator(g)
    }

    pub fn word(&self, letters: &[Gen]) -> NCPoly<C> {
        self.pres.mul_word(&Word::empty(), &Word(letters.to_vec()))
    }

    pub fn mul(&self, x: &NCPoly<C>, y: &NCPoly<C>) -> NCPoly<C> {
        self.pres.mul(x, y)
    }

    pub fn star(&self, x: &NCPoly<C>) -> NCPoly<C> {
        self.pres.star(x).expect("coordinate algebra has a star")
    }

    /// `Δ(u_ij) = Σ_k u_ik ⊗ u_kj`, extended multiplicatively.
    pub fn coproduct(&self, x: &NCPoly<C>) -> Tensor<C> {
        let mut out = Tensor::zero();
        for (w, c) in x.terms() {
            out.add_scaled(&self.coproduct_word(w), c);
        }
        out
    }

    fn coproduct_word(&self, w: &Word) -> Tensor<C> {
        if let Some(t) = self.delta.get(w) {
            return t.clone();
        }
        let t = match w.letters().split_last() {
            None => Tensor::one(),
            Some((&g, rest)) => {
                let head = self.coproduct_word(&Word(rest.to_vec()));
                let (i, j) = matrix_index(g);
                let mut dg = Tensor::zero();
                for k in 0..2 {
                    dg.add_term(Word::letter(coordinate(i, k)), Word::letter(coordinate(k, j)), C::one());
                }
                head.mul(&dg, &self.pres, &self.pres)
            }
        };
        self.delta.insert(w.clone(), t.clone());
        t
    }

    pub fn counit_word(&self, w: &Word) -> C {
        if w.letters().iter().all(|&g| g == A || g == D) {
            C::one()
        } else {
            C::zero()
        }
    }

    pub fn counit(&self, x: &NCPoly<C>) -> C {
        x.terms().fold(C::zero(), |acc, (w, c)| acc.plus(&self.counit_word(w).times(c)))
    }

    /// Antipode: the inverse of the fundamental corepresentation matrix.
    pub fn antipode(&self, x: &NCPoly<C>) -> NCPoly<C> {
        let images = [
            NCPoly::generator(D),
            NCPoly::monomial(Word::letter(B), self.qinv.negated()),
            NCPoly::monomial(Word::letter(CC), self.q.negated()),
            NCPoly::generator(A),
        ];
        let mut out = NCPoly::zero();
        for (w, c) in x.terms() {
            let mut acc = NCPoly::one();
            for &g in w.letters().iter().rev() {
                acc = self.mul(&acc, &images[g as usize]);
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// PBW monomials `a^k b^m c^n`, `d^k b^m c^n` of total degree at most `max_degree`,
    /// ordered by degree.
    pub fn pbw_basis(&self, max_degree: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for n in 0..=max_degree {
            for k in 0..=n {
                for m in 0..=(n - k) {
                    let l = n - k - m;
                    let mut w = vec![A; k];
                    w.extend(std::iter::repeat_n(B, m));
                    w.extend(std::iter::repeat_n(CC, l));
                    out.push(Word(w.clone()));
                    if k > 0 {
                        for x in w.iter_mut().take(k) {
                            *x = D;
                        }
                        out.push(Word(w));
                    }
                }
            }
        }
        out
    }

    /// Applies an integral operator through its twisted Leibniz rule.
    pub fn apply(&self, op: IntegralOp, x: &NCPoly<C>) -> NCPoly<C> {
        let mut out = NCPoly::zero();
        for (w, c) in x.terms() {
            out.add_scaled(&self.apply_word(op, w), c);
        }
        out
    }

    pub fn apply_word(&self, op: IntegralOp, w: &Word) -> NCPoly<C> {
        match op {
            IntegralOp::K2(n) => {
                let (l, _) = weights(w);
                NCPoly::monomial(w.clone(), self.q_pow(n as i64 * l as i64))
            }
            IntegralOp::Middle => {
                // (1 - q^{2l}) / (1 - q^{-2})
                let (l, _) = weights(w);
                let num = C::one().minus(&self.q_pow(2 * l as i64));
                let den = C::one().minus(&self.q_pow(-2));
                NCPoly::monomial(w.clone(), num.times(&den.inverse().expect("q^2 != 1")))
            }
            IntegralOp::Lower | IntegralOp::Raise => {
                let key = (op, w.clone());
                if let Some(v) = self.ops.get(&key) {
                    return v.clone();
                }
                let letters = w.letters();
                let mut out = NCPoly::zero();
                // X(w_1..w_m) = Σ_i w_1..w_{i-1} (X w_i) (K^2 w_{i+1}..w_m)
                for i in 0..letters.len() {
                    let image = match (op, letters[i]) {
                        (IntegralOp::Raise, A) => B,
                        (IntegralOp::Raise, CC) => D,
                        (IntegralOp::Lower, B) => A,
                        (IntegralOp::Lower, D) => CC,
                        _ => continue,
                    };
                    let (tail_weight, _) = weights(&Word(letters[i + 1..].to_vec()));
                    let mut word = letters.to_vec();
                    word[i] = image;
                    let reduced = self.pres.mul_word(&Word::empty(), &Word(word));
                    out.add_scaled(&reduced, &self.q_pow(tail_weight as i64));
                }
                self.ops.insert(key, out.clone());
                out
            }
        }
    }

    /// `x ◁ K^{2n}`.
    pub fn k2_right(&self, n: i32, x: &NCPoly<C>) -> NCPoly<C> {
        NCPoly::from_terms(x.terms().map(|(w, c)| (w.clone(), c.times(&self.q_pow(n as i64 * weights(w).1 as i64)))))
    }

    /// Haar state value on a single normal word.
    ///
    /// Words of nonzero left or right weight are annihilated by K-invariance;
    /// the only normal words of weight zero are `b^n c^n`.
    pub fn haar_word(&self, w: &Word) -> C {
        if weights(w) != (0, 0) {
            return C::zero();
        }
        let n = w.len() / 2;
        debug_assert!(w.letters()[..n].iter().all(|&g| g == B) && w.letters()[n..].iter().all(|&g| g == CC));
        self.haar_bc_power(n)
    }

    pub fn haar(&self, x: &NCPoly<C>) -> C {
        x.terms().fold(C::zero(), |acc, (w, c)| acc.plus(&self.haar_word(w).times(c)))
    }

    /// `h((bc)^n)`, solved degree by degree from `h(X_2 ▷ (a b^{n-1} c^n)) = 0`.
    pub fn haar_bc_power(&self, n: usize) -> C {
        if let Some(v) = self.haar.read().expect("haar lock").get(n) {
            return v.clone();
        }
        let mut table = self.haar.write().expect("haar lock");
        while table.len() <= n {
            let m = table.len();
            let mut letters = vec![A];
            letters.extend(std::iter::repeat_n(B, m - 1));
            letters.extend(std::iter::repeat_n(CC, m));
            let y = self.apply_word(IntegralOp::Raise, &Word(letters));
            let mut rhs = C::zero();
            let mut lead = C::zero();
            for (w, c) in y.terms() {
                if weights(w) != (0, 0) {
                    continue;
                }
                let k = w.len() / 2;
                if k == m {
                    lead = lead.plus(c);
                } else {
                    rhs = rhs.plus(&c.times(&table[k]));
                }
            }
            let inv = lead.inverse().expect("invariance equation determines h((bc)^n)");
            table.push(rhs.negated().times(&inv));
        }
        table[n].clone()
    }

    /// Coefficients of `x` grouped by (left, right) weight.
    pub fn weight_components(&self, x: &NCPoly<C>) -> BTreeMap<(i32, i32), NCPoly<C>> {
        let mut out: BTreeMap<(i32, i32), NCPoly<C>> = BTreeMap::new();
        for (w, c) in x.terms() {
            out.entry(weights(w)).or_default().add_term(w.clone(), c.clone());
        }
        out
    }
}
