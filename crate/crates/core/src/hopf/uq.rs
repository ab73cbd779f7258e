//! The Hopf *-algebra U_q(su_2).

use dashmap::DashMap;

use super::tensor::Tensor;
use super::HopfError;
use crate::ncpoly::presentations::{self, E, F, K, KINV};
use crate::ncpoly::{Gen, NCPoly, Presentation, QScalar, Word};

/// 2x2 matrix over `Q(q^{1/2})`.
pub type Mat2 = [[QScalar; 2]; 2];

pub fn mat2_identity() -> Mat2 {
    [[QScalar::one(), QScalar::zero()], [QScalar::zero(), QScalar::one()]]
}

pub fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[QScalar::zero(), QScalar::zero()], [QScalar::zero(), QScalar::zero()]];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]));
        }
    }
    out
}

pub struct Uq {
    pres: Presentation<QScalar>,
    delta: DashMap<Word, Tensor<QScalar>>,
}

impl std::fmt::Debug for Uq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Uq")
    }
}

impl Uq {
    pub fn new() -> Result<Self, HopfError> {
        Ok(Uq { pres: presentations::enveloping_algebra()?, delta: DashMap::new() })
    }

    pub fn pres(&self) -> &Presentation<QScalar> {
        &self.pres
    }

    pub fn mul(&self, x: &NCPoly<QScalar>, y: &NCPoly<QScalar>) -> NCPoly<QScalar> {
        self.pres.mul(x, y)
    }

    pub fn word(&self, letters: &[Gen]) -> NCPoly<QScalar> {
        self.pres.mul_word(&Word::empty(), &Word(letters.to_vec()))
    }

    /// `K^n`.
    pub fn k_pow(&self, n: i32) -> NCPoly<QScalar> {
        NCPoly::word(presentations::k_power(n))
    }

    fn generator_coproduct(g: Gen) -> Tensor<QScalar> {
        let one = QScalar::one();
        let l = Word::letter;
        let mut t = Tensor::zero();
        match g {
            E | F => {
                t.add_term(l(g), l(K), one.clone());
                t.add_term(l(KINV), l(g), one);
            }
            _ => t.add_term(l(g), l(g), one),
        }
        t
    }

    /// `Δ(E) = E ⊗ K + K^{-1} ⊗ E`, `Δ(F) = F ⊗ K + K^{-1} ⊗ F`, `Δ(K) = K ⊗ K`.
    pub fn coproduct(&self, x: &NCPoly<QScalar>) -> Tensor<QScalar> {
        let mut out = Tensor::zero();
        for (w, c) in x.terms() {
            out.add_scaled(&self.coproduct_word(w), c);
        }
        out
    }

    pub fn coproduct_word(&self, w: &Word) -> Tensor<QScalar> {
        if let Some(t) = self.delta.get(w) {
            return t.clone();
        }
        let t = match w.letters().split_last() {
            None => Tensor::one(),
            Some((&g, rest)) => {
                let head = self.coproduct_word(&Word(rest.to_vec()));
                head.mul(&Self::generator_coproduct(g), &self.pres, &self.pres)
            }
        };
        self.delta.insert(w.clone(), t.clone());
        t
    }

    pub fn counit_word(&self, w: &Word) -> QScalar {
        if w.letters().iter().all(|&g| g == K || g == KINV) {
            QScalar::one()
        } else {
            QScalar::zero()
        }
    }

    pub fn counit(&self, x: &NCPoly<QScalar>) -> QScalar {
        x.terms().fold(QScalar::zero(), |acc, (w, c)| acc.add(&self.counit_word(w).mul(c)))
    }

    /// `S(K) = K^{-1}`, `S(E) = -q E`, `S(F) = -q^{-1} F`.
    pub fn antipode(&self, x: &NCPoly<QScalar>) -> NCPoly<QScalar> {
        let images = [
            NCPoly::monomial(Word::letter(F), QScalar::q_pow(-1).neg()),
            NCPoly::monomial(Word::letter(E), QScalar::q_pow(1).neg()),
            NCPoly::generator(KINV),
            NCPoly::generator(K),
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

    pub fn star(&self, x: &NCPoly<QScalar>) -> NCPoly<QScalar> {
        self.pres.star(x).expect("U_q(su_2) has a star")
    }

    /// The spin-1/2 representation: `K ↦ diag(q^{-1/2}, q^{1/2})`, `E ↦ E_21`, `F ↦ E_12`.
    pub fn fundamental(g: Gen) -> Mat2 {
        let z = QScalar::zero;
        let o = QScalar::one;
        match g {
            F => [[z(), o()], [z(), z()]],
            E => [[z(), z()], [o(), z()]],
            K => [[QScalar::q_half_pow(-1), z()], [z(), QScalar::q_half_pow(1)]],
            _ => [[QScalar::q_half_pow(1), z()], [z(), QScalar::q_half_pow(-1)]],
        }
    }

    /// Image of a word in the spin-1/2 representation.
    pub fn fundamental_word(w: &Word) -> Mat2 {
        w.letters().iter().fold(mat2_identity(), |acc, &g| mat2_mul(&acc, &Self::fundamental(g)))
    }

    /// PBW-type words `F^i E^j K^l` with `i + j + |l| <= max_len`.
    pub fn short_words(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for i in 0..=max_len {
            for j in 0..=(max_len - i) {
                let rest = (max_len - i - j) as i32;
                for l in -rest..=rest {
                    let mut w = vec![F; i];
                    w.extend(std::iter::repeat_n(E, j));
                    w.extend(presentations::k_power(l).0);
                    out.push(Word(w));
                }
            }
        }
        out
    }
}
