//! Finitely presented algebras with a terminating, confluent rewriting system.
//!
//! Normal forms are built by right-multiplying a normal monomial by one letter
//! at a time.  Any reducible subword of `m·g` with `m` normal must be a suffix,
//! so a single suffix lookup per step suffices; results are memoized per
//! `(monomial, letter)`.

use std::cmp::Ordering;
use std::collections::HashMap;

use dashmap::DashMap;
use thiserror::Error;

use super::coeff::Coeff;
use super::poly::{Gen, NCPoly, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("symbol {symbol} does not belong to presentation {presentation}")]
    UnknownSymbol { presentation: String, symbol: String },
    #[error("rule {lhs} -> {rhs} does not decrease the monomial order")]
    NonTerminating { lhs: String, rhs: String },
    #[error("critical pair on {overlap} does not resolve: {left} vs {right}")]
    NotConfluent { overlap: String, left: String, right: String },
    #[error("presentation {0} has no star structure")]
    NoStar(String),
    #[error("malformed presentation: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSymbol {
    pub name: String,
    pub degree: u32,
}

impl GeneratorSymbol {
    pub fn new(name: &str, degree: u32) -> Self {
        GeneratorSymbol { name: name.to_string(), degree }
    }
}

#[derive(Debug, Clone)]
pub struct Rule<C> {
    pub lhs: Word,
    pub rhs: NCPoly<C>,
}

/// Monomial order: weighted degree, then an optional secondary weight, then
/// lexicographic comparison by letter rank.
#[derive(Debug, Clone)]
pub struct MonomialOrder {
    pub rank: Vec<u8>,
    pub secondary: Vec<u32>,
}

pub struct Presentation<C: Coeff> {
    name: String,
    gens: Vec<GeneratorSymbol>,
    order: MonomialOrder,
    rules: Vec<Rule<C>>,
    by_last: HashMap<Gen, Vec<usize>>,
    star: Option<Vec<NCPoly<C>>>,
    cache: DashMap<(Word, Gen), NCPoly<C>>,
}

impl<C: Coeff> std::fmt::Debug for Presentation<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presentation").field("name", &self.name).field("gens", &self.gens).field("rules", &self.rules.len()).finish()
    }
}

impl<C: Coeff> Presentation<C> {
    /// Builds a presentation, rejecting non-decreasing rules and unresolved critical pairs.
    pub fn new(
        name: &str,
        gens: Vec<GeneratorSymbol>,
        order: MonomialOrder,
        rules: Vec<Rule<C>>,
        star: Option<Vec<NCPoly<C>>>,
    ) -> Result<Self, NcError> {
        let n = gens.len();
        if order.rank.len() != n || (!order.secondary.is_empty() && order.secondary.len() != n) {
            return Err(NcError::Malformed("order does not match generator count".into()));
        }
        if let Some(s) = &star {
            if s.len() != n {
                return Err(NcError::Malformed("star map does not match generator count".into()));
            }
        }
        let mut by_last: HashMap<Gen, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            let last = *r.lhs.letters().last().ok_or_else(|| NcError::Malformed("empty rule".into()))?;
            by_last.entry(last).or_default().push(i);
        }
        let pres = Presentation { name: name.to_string(), gens, order, rules, by_last, star, cache: DashMap::new() };
        for r in &pres.rules {
            pres.check_word(&r.lhs)?;
            for (w, _) in r.rhs.terms() {
                pres.check_word(w)?;
                if pres.compare(w, &r.lhs) != Ordering::Less {
                    return Err(NcError::NonTerminating { lhs: pres.render_word(&r.lhs), rhs: pres.render(&r.rhs) });
                }
            }
        }
        if let Some(s) = &pres.star {
            for p in s {
                for (w, _) in p.terms() {
                    pres.check_word(w)?;
                }
            }
        }
        pres.check_confluence()?;
        Ok(pres)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[GeneratorSymbol] {
        &self.gens
    }

    pub fn rules(&self) -> &[Rule<C>] {
        &self.rules
    }

    pub fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    pub fn gen_id(&self, name: &str) -> Result<Gen, NcError> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as Gen)
            .ok_or_else(|| NcError::UnknownSymbol { presentation: self.name.clone(), symbol: name.to_string() })
    }

    /// Parses a space-separated word of generator names.
    pub fn parse_word(&self, text: &str) -> Result<Word, NcError> {
        text.split_whitespace().map(|t| self.gen_id(t)).collect::<Result<Vec<_>, _>>().map(Word)
    }

    pub fn generator(&self, name: &str) -> Result<NCPoly<C>, NcError> {
        Ok(NCPoly::generator(self.gen_id(name)?))
    }

    fn check_word(&self, w: &Word) -> Result<(), NcError> {
        for &g in w.letters() {
            if g as usize >= self.gens.len() {
                return Err(NcError::UnknownSymbol { presentation: self.name.clone(), symbol: format!("#{}", g) });
            }
        }
        Ok(())
    }

    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.letters().iter().map(|&g| self.gens[g as usize].name.as_str()).collect::<Vec<_>>().join(" ")
    }

    pub fn render(&self, p: &NCPoly<C>) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = p
            .terms()
            .map(|(w, c)| {
                if w.is_empty() {
                    format!("({})", c)
                } else if c.is_one() {
                    self.render_word(w)
                } else {
                    format!("({})*{}", c, self.render_word(w))
                }
            })
            .collect();
        parts.join(" + ")
    }

    fn weighted_degree(&self, w: &Word) -> u64 {
        w.letters().iter().map(|&g| self.gens[g as usize].degree as u64).sum()
    }

    fn secondary_weight(&self, w: &Word) -> u64 {
        if self.order.secondary.is_empty() {
            return 0;
        }
        w.letters().iter().map(|&g| self.order.secondary[g as usize] as u64).sum()
    }

    /// The monomial order used for termination.
    pub fn compare(&self, a: &Word, b: &Word) -> Ordering {
        self.weighted_degree(a)
            .cmp(&self.weighted_degree(b))
            .then_with(|| self.secondary_weight(a).cmp(&self.secondary_weight(b)))
            .then_with(|| a.len().cmp(&b.len()))
            .then_with(|| {
                let ra = a.letters().iter().map(|&g| self.order.rank[g as usize]);
                let rb = b.letters().iter().map(|&g| self.order.rank[g as usize]);
                ra.cmp(rb)
            })
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        let l = w.letters();
        self.rules.iter().all(|r| !l.windows(r.lhs.len()).any(|s| s == r.lhs.letters()))
    }

    fn suffix_rule(&self, w: &[Gen]) -> Option<&Rule<C>> {
        let last = *w.last()?;
        self.by_last.get(&last)?.iter().map(|&i| &self.rules[i]).find(|r| w.ends_with(r.lhs.letters()))
    }

    /// Normal form of `mono · g` for a normal monomial `mono`.
    pub fn mul_gen(&self, mono: &Word, g: Gen) -> NCPoly<C> {
        let key = (mono.clone(), g);
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let mut w = mono.0.clone();
        w.push(g);
        let result = match self.suffix_rule(&w) {
            None => NCPoly::word(Word(w)),
            Some(rule) => {
                let prefix = Word(w[..w.len() - rule.lhs.len()].to_vec());
                let mut acc = NCPoly::zero();
                for (rw, c) in rule.rhs.terms() {
                    let part = self.mul_word(&prefix, rw);
                    acc.add_scaled(&part, c);
                }
                acc
            }
        };
        self.cache.insert(key, result.clone());
        result
    }

    /// Normal form of `mono · word` for a normal monomial `mono`.
    pub fn mul_word(&self, mono: &Word, word: &Word) -> NCPoly<C> {
        let mut p = NCPoly::word(mono.clone());
        for &g in word.letters() {
            p = self.mul_poly_gen(&p, g);
        }
        p
    }

    fn mul_poly_gen(&self, p: &NCPoly<C>, g: Gen) -> NCPoly<C> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            out.add_scaled(&self.mul_gen(w, g), c);
        }
        out
    }

    /// Normal form of an arbitrary polynomial.
    pub fn normal_form(&self, p: &NCPoly<C>) -> Result<NCPoly<C>, NcError> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            self.check_word(w)?;
            out.add_scaled(&self.mul_word(&Word::empty(), w), c);
        }
        Ok(out)
    }

    /// Product of two polynomials already in normal form.
    pub fn mul(&self, x: &NCPoly<C>, y: &NCPoly<C>) -> NCPoly<C> {
        let mut out = NCPoly::zero();
        for (u, c) in x.terms() {
            for (v, d) in y.terms() {
                out.add_scaled(&self.mul_word(u, v), &c.times(d));
            }
        }
        out
    }

    pub fn mul_all(&self, factors: &[&NCPoly<C>]) -> NCPoly<C> {
        let mut acc = NCPoly::one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    pub fn pow(&self, x: &NCPoly<C>, n: usize) -> NCPoly<C> {
        let mut acc = NCPoly::one();
        for _ in 0..n {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn commutator(&self, x: &NCPoly<C>, y: &NCPoly<C>) -> NCPoly<C> {
        self.mul(x, y).sub(&self.mul(y, x))
    }

    pub fn has_star(&self) -> bool {
        self.star.is_some()
    }

    /// Antilinear anti-multiplicative involution.
    pub fn star(&self, p: &NCPoly<C>) -> Result<NCPoly<C>, NcError> {
        let images = self.star.as_ref().ok_or_else(|| NcError::NoStar(self.name.clone()))?;
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            self.check_word(w)?;
            let mut acc = NCPoly::one();
            for &g in w.letters().iter().rev() {
                acc = self.mul(&acc, &images[g as usize]);
            }
            out.add_scaled(&acc, &c.conj());
        }
        Ok(out)
    }

    /// Resolves every critical pair of the rewriting system.
    pub fn check_confluence(&self) -> Result<(), NcError> {
        for (i, r1) in self.rules.iter().enumerate() {
            for (j, r2) in self.rules.iter().enumerate() {
                let (l1, l2) = (r1.lhs.letters(), r2.lhs.letters());
                // proper overlaps: suffix of l1 equals prefix of l2
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        let tail = Word(l2[k..].to_vec());
                        let head = Word(l1[..l1.len() - k].to_vec());
                        let left = self.reduce_with(&Word::empty(), &r1.rhs, &tail);
                        let right = self.reduce_with(&head, &r2.rhs, &Word::empty());
                        self.compare_pair(&Word(l1.iter().chain(&l2[k..]).copied().collect()), left, right)?;
                    }
                }
                // inclusions: l2 strictly inside l1
                if i != j && l2.len() < l1.len() {
                    for p in 0..=l1.len() - l2.len() {
                        if l1[p..p + l2.len()] == *l2 {
                            let head = Word(l1[..p].to_vec());
                            let tail = Word(l1[p + l2.len()..].to_vec());
                            let left = self.normal_form(&r1.rhs)?;
                            let right = self.reduce_with(&head, &r2.rhs, &tail);
                            self.compare_pair(&r1.lhs, left, right)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn reduce_with(&self, head: &Word, mid: &NCPoly<C>, tail: &Word) -> NCPoly<C> {
        let mut out = NCPoly::zero();
        for (w, c) in mid.terms() {
            let full = head.concat(w).concat(tail);
            out.add_scaled(&self.mul_word(&Word::empty(), &full), c);
        }
        out
    }

    fn compare_pair(&self, overlap: &Word, left: NCPoly<C>, right: NCPoly<C>) -> Result<(), NcError> {
        if left != right {
            return Err(NcError::NotConfluent {
                overlap: self.render_word(overlap),
                left: self.render(&left),
                right: self.render(&right),
            });
        }
        Ok(())
    }

    /// Number of memoized `(monomial, letter)` products.
    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }
}
