//! Two-fold tensor products of a presented algebra with itself.

use std::collections::BTreeMap;

use crate::ncpoly::{Coeff, NCPoly, Presentation, Word};

/// Element of `A ⊗ A`, stored on pairs of normal words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor<C> {
    terms: BTreeMap<(Word, Word), C>,
}

impl<C: Coeff> Default for Tensor<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Tensor<C> {
    pub fn zero() -> Self {
        Tensor { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::pure(Word::empty(), Word::empty(), C::one())
    }

    pub fn pure(l: Word, r: Word, c: C) -> Self {
        let mut t = Self::zero();
        t.add_term(l, r, c);
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &C)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, l: Word, r: Word, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        let next = match self.terms.get(&key) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if next.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, next);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        for ((l, r), d) in other.terms() {
            self.add_term(l.clone(), r.clone(), d.times(c));
        }
    }

    /// `x ⊗ y` for two polynomials.
    pub fn outer(x: &NCPoly<C>, y: &NCPoly<C>) -> Self {
        let mut t = Self::zero();
        for (u, c) in x.terms() {
            for (v, d) in y.terms() {
                t.add_term(u.clone(), v.clone(), c.times(d));
            }
        }
        t
    }

    /// Product in `A ⊗ B` with normal-form reduction on each leg.
    pub fn mul(&self, other: &Self, left: &Presentation<C>, right: &Presentation<C>) -> Self {
        let mut out = Self::zero();
        for ((l1, r1), c1) in self.terms() {
            for ((l2, r2), c2) in other.terms() {
                let lp = left.mul_word(l1, l2);
                let rp = right.mul_word(r1, r2);
                let c = c1.times(c2);
                for (u, cu) in lp.terms() {
                    for (v, cv) in rp.terms() {
                        out.add_term(u.clone(), v.clone(), c.times(cu).times(cv));
                    }
                }
            }
        }
        out
    }

    /// Applies a linear functional to the left leg.
    pub fn contract_left<F: FnMut(&Word) -> C>(&self, mut f: F) -> NCPoly<C> {
        let mut out = NCPoly::zero();
        for ((l, r), c) in self.terms() {
            out.add_term(r.clone(), f(l).times(c));
        }
        out
    }

    /// Applies a linear functional to the right leg.
    pub fn contract_right<F: FnMut(&Word) -> C>(&self, mut f: F) -> NCPoly<C> {
        let mut out = NCPoly::zero();
        for ((l, r), c) in self.terms() {
            out.add_term(l.clone(), f(r).times(c));
        }
        out
    }
}
