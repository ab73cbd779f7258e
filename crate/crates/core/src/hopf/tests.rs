use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::ncpoly::presentations::{A, B, C, D};
use crate::ncpoly::{Coeff, NCPoly, Presentation};

fn qg() -> &'static QuantumSu2 {
    static QG: OnceLock<QuantumSu2> = OnceLock::new();
    QG.get_or_init(|| QuantumSu2::new().unwrap())
}

fn q(n: i32) -> QScalar {
    QScalar::q_pow(n)
}

fn poly(l: &[Gen]) -> NCPoly<QScalar> {
    qg().a.word(l)
}

fn upoly(l: &[Gen]) -> NCPoly<QScalar> {
    qg().u.word(l)
}

type Triple = BTreeMap<(Word, Word, Word), QScalar>;

fn add3(t: &mut Triple, k: (Word, Word, Word), c: QScalar) {
    let e = t.entry(k.clone()).or_insert_with(QScalar::zero);
    *e = e.add(&c);
    if e.is_zero() {
        t.remove(&k);
    }
}

fn coassoc<Dl: Fn(&Word) -> Tensor<QScalar>>(delta: Dl, x: &Word) -> (Triple, Triple) {
    let mut left = Triple::new();
    let mut right = Triple::new();
    for ((x1, x2), c) in delta(x).terms() {
        for ((y1, y2), d) in delta(x1).terms() {
            add3(&mut left, (y1.clone(), y2.clone(), x2.clone()), c.mul(d));
        }
        for ((y1, y2), d) in delta(x2).terms() {
            add3(&mut right, (x1.clone(), y1.clone(), y2.clone()), c.mul(d));
        }
    }
    (left, right)
}

fn hopf_axioms<FD, FE, FS>(pres: &Presentation<QScalar>, words: &[Word], delta: FD, eps: FE, antipode: FS)
where
    FD: Fn(&Word) -> Tensor<QScalar>,
    FE: Fn(&Word) -> QScalar,
    FS: Fn(&NCPoly<QScalar>) -> NCPoly<QScalar>,
{
    for x in words {
        let xp = NCPoly::word(x.clone());
        let (l, r) = coassoc(&delta, x);
        assert_eq!(l, r, "coassociativity on {}", pres.render_word(x));
        let d = delta(x);
        assert_eq!(d.contract_left(&eps), xp, "left counit on {}", pres.render_word(x));
        assert_eq!(d.contract_right(&eps), xp, "right counit on {}", pres.render_word(x));
        let mut ls = NCPoly::zero();
        let mut rs = NCPoly::zero();
        for ((x1, x2), c) in d.terms() {
            let p1 = NCPoly::word(x1.clone());
            let p2 = NCPoly::word(x2.clone());
            ls.add_scaled(&pres.mul(&antipode(&p1), &p2), c);
            rs.add_scaled(&pres.mul(&p1, &antipode(&p2)), c);
        }
        let unit = NCPoly::constant(eps(x));
        assert_eq!(ls, unit, "left antipode on {}", pres.render_word(x));
        assert_eq!(rs, unit, "right antipode on {}", pres.render_word(x));
    }
}

#[test]
fn coordinate_algebra_is_a_hopf_algebra() {
    let g = qg();
    let words = g.a.pbw_basis(3);
    assert_eq!(words.len(), 1 + 4 + 9 + 16);
    hopf_axioms(g.a.pres(), &words, |x| g.a.coproduct(&NCPoly::word(x.clone())), |x| g.a.counit_word(x), |x| g.a.antipode(x));
}

#[test]
fn enveloping_algebra_is_a_hopf_algebra() {
    let g = qg();
    let words = g.u.short_words(3);
    hopf_axioms(g.u.pres(), &words, |x| g.u.coproduct_word(x), |x| g.u.counit_word(x), |x| g.u.antipode(x));
}

#[test]
fn structure_maps_respect_relations() {
    let g = qg();
    for rule in g.a.pres().rules() {
        let lhs = NCPoly::word(rule.lhs.clone());
        let rhs = g.a.pres().normal_form(&rule.rhs).unwrap();
        assert_eq!(g.a.coproduct(&lhs), g.a.coproduct(&rhs));
        assert_eq!(g.a.antipode(&lhs), g.a.antipode(&rhs));
        assert_eq!(g.a.counit(&lhs), g.a.counit(&rhs));
    }
    for rule in g.u.pres().rules() {
        let lhs = NCPoly::word(rule.lhs.clone());
        assert_eq!(g.u.coproduct(&lhs), g.u.coproduct(&rule.rhs));
        assert_eq!(g.u.antipode(&lhs), g.u.antipode(&rule.rhs));
        assert_eq!(g.u.counit(&lhs), g.u.counit(&rule.rhs));
    }
}

#[test]
fn coproduct_commutes_with_star() {
    let g = qg();
    for x in g.a.pbw_basis(2) {
        let xp = NCPoly::word(x);
        let lhs = g.a.coproduct(&g.a.star(&xp));
        let mut rhs = Tensor::zero();
        for ((x1, x2), c) in g.a.coproduct(&xp).terms() {
            let s1 = g.a.star(&NCPoly::word(x1.clone()));
            let s2 = g.a.star(&NCPoly::word(x2.clone()));
            rhs.add_scaled(&Tensor::outer(&s1, &s2), c);
        }
        assert_eq!(lhs, rhs);
        // S(S(x^*)^*) = x
        assert_eq!(g.a.antipode(&g.a.star(&g.a.antipode(&g.a.star(&xp)))), xp);
    }
}

#[test]
fn pairing_on_generators() {
    let g = qg();
    assert_eq!(g.pairing(&upoly(&[K]), &poly(&[A])), QScalar::q_half_pow(-1));
    assert_eq!(g.pairing(&upoly(&[E]), &poly(&[C])), QScalar::one());
    assert_eq!(g.pairing(&upoly(&[F]), &poly(&[B])), QScalar::one());
    assert_eq!(g.pairing(&upoly(&[E]), &poly(&[B])), QScalar::zero());
    assert_eq!(g.pairing(&NCPoly::one(), &poly(&[A, A])), QScalar::one());
}

#[test]
fn pairing_routes_agree_and_respect_relations() {
    let g = qg();
    let uw = g.u.short_words(2);
    let aw = g.a.pbw_basis(2);
    for f in &uw {
        for x in &aw {
            let fp = NCPoly::word(f.clone());
            let xp = NCPoly::word(x.clone());
            assert_eq!(g.pairing(&fp, &xp), g.pairing_via_coordinates(&fp, &xp));
        }
    }
    for f in &uw {
        let fp = NCPoly::word(f.clone());
        for rule in g.a.pres().rules() {
            let rel = NCPoly::word(rule.lhs.clone()).sub(&rule.rhs);
            assert!(g.pairing_via_coordinates(&fp, &rel).is_zero());
        }
    }
    for x in &aw {
        let xp = NCPoly::word(x.clone());
        for rule in g.u.pres().rules() {
            let rel = NCPoly::word(rule.lhs.clone()).sub(&rule.rhs);
            assert!(g.pairing_via_coordinates(&rel, &xp).is_zero());
        }
    }
}

#[test]
fn pairing_is_a_duality() {
    let g = qg();
    let uw = g.u.short_words(1);
    let aw = g.a.pbw_basis(2);
    for f in &uw {
        for h in &uw {
            for x in &aw {
                let fh = g.u.mul(&NCPoly::word(f.clone()), &NCPoly::word(h.clone()));
                let lhs = g.pairing(&fh, &NCPoly::word(x.clone()));
                let mut rhs = QScalar::zero();
                for ((x1, x2), c) in g.a.coproduct(&NCPoly::word(x.clone())).terms() {
                    rhs = rhs.add(&g.pairing_word(f, x1).mul(&g.pairing_word(h, x2)).mul(c));
                }
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn actions_match_their_definitions() {
    let g = qg();
    let uw = g.u.short_words(2);
    for f in &uw {
        for x in g.a.pbw_basis(3) {
            let fp = NCPoly::word(f.clone());
            let xp = NCPoly::word(x);
            assert_eq!(g.act_left(&fp, &xp), g.act_left_by_definition(&fp, &xp));
            assert_eq!(g.act_right(&xp, &fp), g.act_right_by_definition(&xp, &fp));
        }
    }
}

#[test]
fn generator_action_tables() {
    let g = qg();
    let e = upoly(&[E]);
    let f = upoly(&[F]);
    assert_eq!(g.act_left(&e, &poly(&[A])), poly(&[B]));
    assert_eq!(g.act_left(&e, &poly(&[C])), poly(&[D]));
    assert!(g.act_left(&e, &poly(&[B])).is_zero());
    assert!(g.act_left(&e, &poly(&[D])).is_zero());
    assert_eq!(g.act_left(&f, &poly(&[B])), poly(&[A]));
    assert_eq!(g.act_left(&f, &poly(&[D])), poly(&[C]));
    assert_eq!(g.act_left(&upoly(&[K]), &poly(&[A])), poly(&[A]).scale(&QScalar::q_half_pow(-1)));
    assert_eq!(g.act_right(&poly(&[C]), &upoly(&[K])), poly(&[C]).scale(&QScalar::q_half_pow(1)));
    assert_eq!(g.sigma2(&poly(&[A])), poly(&[A]).scale(&q(2)));
    assert_eq!(g.sigma(&poly(&[A])), poly(&[A]).scale(&q(-2)));
}

#[test]
fn integral_operators_match_enveloping_elements() {
    let g = qg();
    let x0 = g.u.word(&[F, K]).scale(&QScalar::q_half_pow(-1));
    let x2 = g.u.word(&[E, K]).scale(&QScalar::q_half_pow(1));
    let k4 = g.u.k_pow(4);
    let x1 = NCPoly::one().sub(&k4).scale(&QScalar::one().sub(&q(-2)).inv().unwrap());
    for x in g.a.pbw_basis(3) {
        let xp = NCPoly::word(x);
        assert_eq!(g.a.apply(IntegralOp::Lower, &xp), g.act_left(&x0, &xp));
        assert_eq!(g.a.apply(IntegralOp::Middle, &xp), g.act_left(&x1, &xp));
        assert_eq!(g.a.apply(IntegralOp::Raise, &xp), g.act_left(&x2, &xp));
        assert_eq!(g.a.apply(IntegralOp::K2(-3), &xp), g.act_left(&g.u.k_pow(-6), &xp));
        assert_eq!(g.a.k2_right(2, &xp), g.act_right(&xp, &g.u.k_pow(4)));
    }
}

fn haar_closed_form(n: i32) -> QScalar {
    // (-q)^n (1 - q^2) / (1 - q^{2n+2})
    let sign = if n % 2 == 0 { QScalar::one() } else { QScalar::from_int(-1) };
    let num = sign.mul(&q(n)).mul(&QScalar::one().sub(&q(2)));
    num.div(&QScalar::one().sub(&q(2 * n + 2))).unwrap()
}

#[test]
fn haar_values() {
    let g = qg();
    assert_eq!(g.a.haar(&NCPoly::one()), QScalar::one());
    let bc = poly(&[B, C]);
    let expect = q(1).neg().div(&QScalar::one().add(&q(2))).unwrap();
    assert_eq!(g.a.haar(&bc), expect);
    let ccs = g.a.mul(&poly(&[C]), &g.a.star(&poly(&[C])));
    assert_eq!(g.a.haar(&ccs), QScalar::one().div(&QScalar::one().add(&q(2))).unwrap());
    for n in 0..=8 {
        assert_eq!(g.a.haar_bc_power(n as usize), haar_closed_form(n), "n = {}", n);
    }
    assert!(g.a.haar(&poly(&[A])).is_zero());
    assert!(g.a.haar(&poly(&[A, B, C])).is_zero());
}

#[test]
fn haar_is_bi_invariant() {
    let g = qg();
    for x in g.a.pbw_basis(4) {
        let xp = NCPoly::word(x);
        let h = NCPoly::constant(g.a.haar(&xp));
        let d = g.a.coproduct(&xp);
        assert_eq!(d.contract_left(|w| g.a.haar_word(w)), h);
        assert_eq!(d.contract_right(|w| g.a.haar_word(w)), h);
    }
}

#[test]
fn haar_modular_property() {
    let g = qg();
    let basis = g.a.pbw_basis(3);
    for x in &basis {
        for y in &basis {
            let (xp, yp) = (NCPoly::word(x.clone()), NCPoly::word(y.clone()));
            let lhs = g.a.haar(&g.a.mul(&xp, &yp));
            let rhs = g.a.haar(&g.a.mul(&g.sigma2(&yp), &xp));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn rational_haar_matches_symbolic() {
    let q0 = BigRational::new(1.into(), 2.into());
    let num = SuQ2::new(q0.clone()).unwrap();
    for n in 0..10 {
        assert_eq!(num.haar_bc_power(n), qg().a.haar_bc_power(n).evaluate_q(&q0).unwrap());
    }
}

#[test]
fn haar_is_positive_on_squares() {
    let q0 = BigRational::new(1.into(), 2.into());
    let alg = SuQ2::new(q0).unwrap();
    let x = alg.word(&[A, B]).add(&alg.word(&[C]).scale(&BigRational::from_integer(3.into()))).add(&alg.word(&[D, D, C]));
    let v = alg.haar(&alg.mul(&alg.star(&x), &x));
    assert!(v > <BigRational as Coeff>::zero());
}

#[test]
fn degenerate_q_is_rejected() {
    assert!(SuQ2::new(<BigRational as Coeff>::one()).is_err());
    assert!(SuQ2::new(<BigRational as Coeff>::zero()).is_err());
}

#[test]
fn cross_product_normal_form() {
    let g = qg();
    let ea = g.cross_normal(&[Letter::U(E), Letter::A(A)]);
    let expect = CrossElem::from_parts(&poly(&[B]), &upoly(&[K]))
        .add(&CrossElem::from_parts(&poly(&[A]), &upoly(&[E])).scale(&QScalar::q_half_pow(1)));
    assert_eq!(ea, expect);
    let ka = g.cross_normal(&[Letter::U(K), Letter::A(A)]);
    assert_eq!(ka, CrossElem::from_parts(&poly(&[A]), &upoly(&[K])).scale(&QScalar::q_half_pow(-1)));
}

fn arb_letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        prop_oneof![(0u8..4).prop_map(Letter::A), (0u8..4).prop_map(Letter::U)],
        0..4,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cross_product_is_associative(x in arb_letters(), y in arb_letters(), z in arb_letters()) {
        let g = qg();
        let (ex, ey, ez) = (g.cross_normal(&x), g.cross_normal(&y), g.cross_normal(&z));
        prop_assert_eq!(g.cross_mul(&g.cross_mul(&ex, &ey), &ez), g.cross_mul(&ex, &g.cross_mul(&ey, &ez)));
    }

    #[test]
    fn left_action_is_a_module_algebra(f in 0u8..4, x in prop::collection::vec(0u8..4, 0..3), y in prop::collection::vec(0u8..4, 0..3)) {
        let g = qg();
        let (xp, yp) = (poly(&x), poly(&y));
        let fp = upoly(&[f]);
        let lhs = g.act_left(&fp, &g.a.mul(&xp, &yp));
        let mut rhs = NCPoly::zero();
        for ((f1, f2), c) in g.u.coproduct(&fp).terms() {
            let l = g.act_left(&NCPoly::word(f1.clone()), &xp);
            let r = g.act_left(&NCPoly::word(f2.clone()), &yp);
            rhs.add_scaled(&g.a.mul(&l, &r), c);
        }
        prop_assert_eq!(lhs, rhs);
    }
}
