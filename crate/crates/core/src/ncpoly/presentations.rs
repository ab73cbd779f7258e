//! The three presentations used throughout the crate.

use num_rational::BigRational;

use super::coeff::Coeff;
use super::poly::{Gen, NCPoly, Word};
use super::presentation::{GeneratorSymbol, MonomialOrder, NcError, Presentation, Rule};
use super::scalar::QScalar;

pub const Z: Gen = 0;
pub const ZS: Gen = 1;

pub const A: Gen = 0;
pub const B: Gen = 1;
pub const C: Gen = 2;
pub const D: Gen = 3;

pub const F: Gen = 0;
pub const E: Gen = 1;
pub const K: Gen = 2;
pub const KINV: Gen = 3;

fn w(letters: &[Gen]) -> Word {
    Word(letters.to_vec())
}

fn rule<Co: Coeff>(lhs: &[Gen], rhs: Vec<(&[Gen], Co)>) -> Rule<Co> {
    Rule { lhs: w(lhs), rhs: NCPoly::from_terms(rhs.into_iter().map(|(l, c)| (w(l), c))) }
}

/// The quantum disc family: `z* z = q^2 z z* + alpha (1 - q^2)`, `alpha ∈ {-1, 0, 1}`.
pub fn disc(alpha: i32) -> Result<Presentation<QScalar>, NcError> {
    if !(-1..=1).contains(&alpha) {
        return Err(NcError::Malformed(format!("alpha must be -1, 0 or 1, got {}", alpha)));
    }
    let q2 = QScalar::q_pow(2);
    let constant = QScalar::from_int(alpha as i64).mul(&QScalar::one().sub(&q2));
    Presentation::new(
        &format!("disc(alpha={})", alpha),
        vec![GeneratorSymbol::new("z", 1), GeneratorSymbol::new("z*", 1)],
        MonomialOrder { rank: vec![0, 1], secondary: vec![] },
        vec![rule(&[ZS, Z], vec![(&[Z, ZS], q2), (&[], constant)])],
        Some(vec![NCPoly::generator(ZS), NCPoly::generator(Z)]),
    )
}

/// Coordinate algebra of the quantum group SU_q(2) over any coefficient field
/// containing `q`.  Normal words are `a^k b^m c^n` and `d^k b^m c^n`.
pub fn coordinate_algebra<Co: Coeff>(q: &Co) -> Result<Presentation<Co>, NcError> {
    let qi = q.inverse().ok_or_else(|| NcError::Malformed("q must be invertible".into()))?;
    let one = Co::one();
    let rules = vec![
        rule(&[B, A], vec![(&[A, B], qi.clone())]),
        rule(&[C, A], vec![(&[A, C], qi.clone())]),
        rule(&[C, B], vec![(&[B, C], one.clone())]),
        rule(&[B, D], vec![(&[D, B], q.clone())]),
        rule(&[C, D], vec![(&[D, C], q.clone())]),
        rule(&[A, D], vec![(&[], one.clone()), (&[B, C], q.clone())]),
        rule(&[D, A], vec![(&[], one.clone()), (&[B, C], qi.clone())]),
    ];
    let star = vec![
        NCPoly::generator(D),
        NCPoly::monomial(w(&[C]), q.negated()),
        NCPoly::monomial(w(&[B]), qi.negated()),
        NCPoly::generator(A),
    ];
    Presentation::new(
        "O(SU_q(2))",
        vec![
            GeneratorSymbol::new("a", 1),
            GeneratorSymbol::new("b", 1),
            GeneratorSymbol::new("c", 1),
            GeneratorSymbol::new("d", 1),
        ],
        MonomialOrder { rank: vec![0, 2, 3, 1], secondary: vec![1, 0, 0, 1] },
        rules,
        Some(star),
    )
}

/// Coordinate algebra at a rational value of `q`.
pub fn coordinate_algebra_at(q0: &BigRational) -> Result<Presentation<BigRational>, NcError> {
    coordinate_algebra(q0)
}

/// The quantized enveloping algebra U_q(su_2) with generators `F, E, K, K^{-1}`.
pub fn enveloping_algebra() -> Result<Presentation<QScalar>, NcError> {
    let q = QScalar::q_pow(1);
    let qi = QScalar::q_pow(-1);
    let inv_diff = q.sub(&qi).inv().expect("q - 1/q is nonzero");
    let one = QScalar::one();
    let rules = vec![
        rule(&[K, KINV], vec![(&[], one.clone())]),
        rule(&[KINV, K], vec![(&[], one.clone())]),
        rule(&[E, F], vec![(&[F, E], one), (&[K, K], inv_diff.clone()), (&[KINV, KINV], inv_diff.neg())]),
        rule(&[K, E], vec![(&[E, K], q.clone())]),
        rule(&[KINV, E], vec![(&[E, KINV], qi.clone())]),
        rule(&[K, F], vec![(&[F, K], qi)]),
        rule(&[KINV, F], vec![(&[F, KINV], q)]),
    ];
    let star = vec![NCPoly::generator(E), NCPoly::generator(F), NCPoly::generator(K), NCPoly::generator(KINV)];
    Presentation::new(
        "U_q(su_2)",
        vec![
            GeneratorSymbol::new("F", 1),
            GeneratorSymbol::new("E", 1),
            GeneratorSymbol::new("K", 0),
            GeneratorSymbol::new("Kinv", 0),
        ],
        MonomialOrder { rank: vec![0, 1, 2, 3], secondary: vec![0, 0, 1, 1] },
        rules,
        Some(star),
    )
}

/// `K^n` as a word, using `K^{-1}` for negative powers.
pub fn k_power(n: i32) -> Word {
    let g = if n >= 0 { K } else { KINV };
    Word(vec![g; n.unsigned_abs() as usize])
}
