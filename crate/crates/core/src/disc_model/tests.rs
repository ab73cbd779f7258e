use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cocycle::{cocycle_suite, CochainValue};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rep_q(alpha: Alpha, q: BigRational, len: usize) -> TruncatedRep<f64> {
    TruncatedRep::build(&DiscParams::new(alpha, q).unwrap(), len).unwrap()
}

fn rep(alpha: Alpha) -> TruncatedRep<f64> {
    rep_q(alpha, rat(1, 2), 64)
}

fn unit(r: &TruncatedRep<f64>, m: i64, n: i64) -> Mat<f64> {
    r.embed(&FiniteRankOp::unit(m, n)).unwrap()
}

fn samples(r: &TruncatedRep<f64>, seed: u64, count: usize, arity: usize) -> Vec<Vec<Mat<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = sample_box(r.params().alpha);
    (0..count).map(|_| (0..arity).map(|_| r.embed(&FiniteRankOp::random(&mut rng, lo, hi)).unwrap()).collect()).collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn shift_entries_follow_the_formulas() {
    let q2 = 0.25f64;
    let r = rep(Alpha::One);
    assert!(close(*r.z().get(1, 0), (1.0 - q2).sqrt(), 1e-15));
    let r = rep(Alpha::MinusOne);
    assert!((0..64).all(|i| *r.z().get(i, 0) == 0.0));
    assert!(close(*r.z().get(0, 1), (1.0 / q2 - 1.0).sqrt(), 1e-15));
    let r = rep(Alpha::Zero);
    let (i0, im1) = (r.window().index(0).unwrap(), r.window().index(-1).unwrap());
    assert_eq!(*r.z_star().get(im1, i0), 1.0);
}

#[test]
fn y_matches_its_definition() {
    for alpha in Alpha::ALL {
        for q in [rat(1, 2), rat(3, 4)] {
            let r = rep_q(alpha, q.clone(), 32);
            let from_shifts = r.y_from_shifts();
            let direct = Tracked::new(Mat::diag(r.y_of()));
            assert!(relative_residual(&from_shifts, &direct, r.interior()) < 1e-13, "alpha={alpha} q={q}");
            assert!(r.y_of().iter().all(|v| *v > 0.0));
        }
    }
    let q = 0.5f64;
    let r = rep(Alpha::One);
    assert!(close(r.y_of()[3], q.powi(6), 1e-15));
    let r = rep(Alpha::Zero);
    assert!(close(r.y_of()[r.window().index(2).unwrap()], q.powi(4), 1e-15));
    let r = rep(Alpha::MinusOne);
    assert!(close(r.y_of()[2], q.powi(-6), 1e-15));
}

#[test]
fn defining_relation_holds_on_the_interior() {
    for alpha in Alpha::ALL {
        for q in [rat(1, 2), rat(1, 3), rat(4, 5)] {
            let r = rep_q(alpha, q, 64);
            let res = r.relation_residual();
            assert!(relative_size(&res, r.interior()) < 1e-12, "alpha={alpha}");
        }
    }
    let r = rep(Alpha::One);
    let res = r.relation_residual();
    assert!(relative_size(&res, 0..64) > 1e-3);
}

#[test]
fn differentials_of_generators() {
    for alpha in Alpha::ALL {
        let r = rep(alpha);
        let n = r.dim();
        let range = r.comparison_range(2);
        let by: Vec<f64> = r.y_of().iter().map(|v| v * alpha.beta() as f64).collect();
        let zero = Tracked::new(Mat::zeros(n));
        let y = Tracked::new(Mat::diag(&by));
        let dz = BlockOp2::new([[zero.clone(), zero.clone()], [y.clone(), zero.clone()]], 1);
        let dzs = BlockOp2::new([[zero.clone(), y.scale(&-1.0)], [zero.clone(), zero.clone()]], 1);
        assert!(block_relative_residual(&r.d_commutator(r.z()), &dz, range.clone()) < 1e-12);
        assert!(block_relative_residual(&r.d_commutator(r.z_star()), &dzs, range.clone()) < 1e-12);
        let d1 = r.d_commutator(&Mat::identity(n));
        assert!(d1.blocks.iter().flatten().all(|b| b.value.max_abs_on(0..n) == 0.0));
    }
}

#[test]
fn bimodule_rules() {
    for alpha in Alpha::ALL {
        let r = rep(alpha);
        let range = r.comparison_range(3);
        let (z, zs) = (r.z(), r.z_star());
        let (dz, dzs) = (r.d_commutator(z), r.d_commutator(zs));
        let scaled = |x: &BlockOp2<f64>, c: f64| x.scale_blocks([c, c]);
        for (d, x, c) in [(&dz, z, 0.25), (&dz, zs, 4.0), (&dzs, z, 0.25), (&dzs, zs, 4.0)] {
            let lhs = d.mul(&r.rho(x));
            let rhs = scaled(&r.rho(x).mul(d), c);
            assert!(block_relative_residual(&lhs, &rhs, range.clone()) < 1e-12, "alpha={alpha}");
        }
    }
}

#[test]
fn differentials_twist_by_sigma() {
    for alpha in Alpha::ALL {
        let r = rep(alpha);
        let range = r.comparison_range(3);
        let mut xs = vec![r.z().clone(), r.z_star().clone()];
        xs.extend(samples(&r, 11, 5, 1).into_iter().flatten());
        for d in [r.d_commutator(r.z()), r.d_commutator(r.z_star())] {
            for x in &xs {
                let lhs = d.mul(&r.rho(x));
                let rhs = r.rho(&r.sigma(x)).mul(&d);
                assert!(block_relative_residual(&lhs, &rhs, range.clone()) < 1e-12, "alpha={alpha}");
            }
        }
    }
}

#[test]
fn leibniz_rule() {
    for alpha in Alpha::ALL {
        let r = rep(alpha);
        let range = r.comparison_range(3);
        let mut pairs = vec![(r.z().clone(), r.z_star().clone()), (r.z_star().clone(), r.z().clone())];
        pairs.extend(samples(&r, 12, 5, 2).into_iter().map(|v| (v[0].clone(), v[1].clone())));
        for (x, y) in pairs {
            let lhs = r.d_commutator(&x.mul(&y));
            let rhs_a = r.d_commutator(&x).mul(&r.rho(&y));
            let rhs_b = r.rho(&x).mul(&r.d_commutator(&y));
            let rhs = BlockOp2::new(
                [
                    [rhs_a.blocks[0][0].add(&rhs_b.blocks[0][0]), rhs_a.blocks[0][1].add(&rhs_b.blocks[0][1])],
                    [rhs_a.blocks[1][0].add(&rhs_b.blocks[1][0]), rhs_a.blocks[1][1].add(&rhs_b.blocks[1][1])],
                ],
                1,
            );
            assert!(block_relative_residual(&lhs, &rhs, range.clone()) < 1e-12, "alpha={alpha}");
        }
    }
}

#[test]
fn partial_derivatives() {
    for alpha in Alpha::ALL {
        let r = rep(alpha);
        let n = r.dim();
        let range = r.comparison_range(3);
        let t = |m: &Mat<f64>| Tracked::new(m.clone());
        let (dz, dzs) = r.partials_tracked(&t(r.z()));
        assert!(relative_residual(&dz, &t(&Mat::identity(n)), range.clone()) < 1e-12);
        assert_eq!(dzs.value.max_abs_on(0..n), 0.0);
        let z2 = t(r.z()).mul(&t(r.z()));
        let (dz2, _) = r.partials_tracked(&z2);
        assert!(relative_residual(&dz2, &t(&r.z().scale(&1.25)), range.clone()) < 1e-12);
        for x in samples(&r, 13, 5, 1).into_iter().flatten() {
            let (a, b) = r.partials(&x);
            let lhs = r.d_commutator(&x);
            let da = r.rho(&a).mul(&r.d_commutator(r.z()));
            let db = r.rho(&b).mul(&r.d_commutator(r.z_star()));
            let sum = |i: usize, j: usize| da.blocks[i][j].add(&db.blocks[i][j]);
            let rhs = BlockOp2::new([[sum(0, 0), sum(0, 1)], [sum(1, 0), sum(1, 1)]], 1);
            assert!(block_relative_residual(&lhs, &rhs, r.support_range()) < 1e-12, "alpha={alpha}");
        }
    }
}

#[test]
fn sigma_examples() {
    for alpha in Alpha::ALL {
        let r = rep(alpha);
        let n = r.dim();
        let t = |m: &Mat<f64>| Tracked::new(m.clone());
        assert!(relative_residual(&t(&r.sigma(&Mat::identity(n))), &t(&Mat::identity(n)), 0..n) < 1e-15);
        assert!(relative_residual(&t(&r.sigma(r.z())), &t(&r.z().scale(&0.25)), 0..n) < 1e-12);
        let (i, j) = (2usize, 5usize);
        let mut e = Mat::zeros(n);
        e.set(i, j, 1.0);
        assert!(close(*r.sigma(&e).get(i, j), r.y_of()[i] / r.y_of()[j], 1e-15));
    }
}

#[test]
fn functional_h_examples() {
    let r = rep(Alpha::One);
    assert_eq!(r.h(&unit(&r, 0, 0)).unwrap().0, 1.0);
    assert_eq!(r.h(&unit(&r, 0, 1)).unwrap().0, 0.0);
    let r = rep(Alpha::Zero);
    for n in [-3i64, 0, 2] {
        assert!(close(r.h(&unit(&r, n, n)).unwrap().0, 0.5f64.powi(-2 * n as i32), 1e-15));
    }
}

#[test]
fn h_is_positive_and_twisted_tracial() {
    for alpha in Alpha::ALL {
        let r = rep(alpha);
        for v in samples(&r, 21, 100, 1) {
            let x = &v[0];
            let (val, _) = r.h(&x.transpose().mul(x)).unwrap();
            assert!(val >= 0.0);
        }
        for v in samples(&r, 22, 20, 2) {
            let (a, sa) = r.h(&v[0].mul(&v[1])).unwrap();
            let (b, sb) = r.h(&r.sigma(&v[1]).mul(&v[0])).unwrap();
            assert!((a - b).abs() <= 1e-12 * (sa + sb));
        }
    }
}

#[test]
fn frozen_tau_value_on_the_corner_unit() {
    // τ(E00, E00, E00) = -1/(1-q²) for α = 1
    let r = rep(Alpha::One);
    let e = unit(&r, 0, 0);
    for route in TauRoute::ALL {
        let (v, _) = r.tau(&e, &e, &e, route).unwrap();
        assert!(close(v, -4.0 / 3.0, 1e-14), "{route:?}: {v}");
    }
    let (lit, _) = r.tau_trace_literal(&e, &e, &e).unwrap();
    assert!(close(lit, 4.0 / 3.0, 1e-14));
    let rx: TruncatedRep<Extended> = TruncatedRep::build(r.params(), 32).unwrap();
    let ex = rx.embed(&FiniteRankOp::unit(0, 0)).unwrap();
    let (v, _) = rx.tau(&ex, &ex, &ex, TauRoute::Trace).unwrap();
    let four_thirds = Extended::from_rational(&rat(4, 3));
    assert!(v.add(&four_thirds).abs().to_f64() < 1e-100);
}

#[test]
fn tau_vanishes_when_a_slot_is_constant() {
    let r = rep(Alpha::One);
    let n = r.dim();
    let xs = &samples(&r, 3, 1, 2)[0];
    let one = Mat::identity(n);
    let d = r.d_commutator(&one);
    assert!(d.blocks.iter().flatten().all(|b| b.value.max_abs_on(0..n) == 0.0));
    let (v, _) = r.two_form_coeff(&xs[0], &Mat::zeros(n), &xs[1]).unwrap().trace();
    assert_eq!(v, 0.0);
}

#[test]
fn routes_agree_on_random_triples() {
    for alpha in Alpha::ALL {
        let r = rep(alpha);
        for v in samples(&r, 7, 20, 3) {
            let vals: Vec<(f64, f64)> = TauRoute::ALL.iter().map(|rt| r.tau(&v[0], &v[1], &v[2], *rt).unwrap()).collect();
            for (a, sa) in &vals[1..] {
                assert!((a - vals[0].0).abs() <= 1e-12 * (sa + vals[0].1), "alpha={alpha}: {vals:?}");
            }
        }
    }
}

#[test]
fn hinv_vanishes() {
    for alpha in Alpha::ALL {
        let r = rep(alpha);
        let e = unit(&r, 0, 0);
        let (v, s) = r.hinv_check(&e, &e).unwrap();
        assert!(v.abs() <= 1e-12 * s.max(1.0));
        let (v, _) = r.hinv_check(&Mat::zeros(r.dim()), &e).unwrap();
        assert_eq!(v, 0.0);
        for p in samples(&r, 8, 20, 2) {
            let (v, s) = r.hinv_check(&p[0], &p[1]).unwrap();
            assert!(v.abs() <= 1e-10 * s, "alpha={alpha}: {v} vs {s}");
        }
    }
}

#[test]
fn window_doubling_leaves_values_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for alpha in Alpha::ALL {
        let small = rep_q(alpha, rat(1, 2), 32);
        let large = rep_q(alpha, rat(1, 2), 64);
        let (lo, hi) = sample_box(alpha);
        for _ in 0..5 {
            let ops: Vec<FiniteRankOp> = (0..3).map(|_| FiniteRankOp::random(&mut rng, lo, hi)).collect();
            let a: Vec<Mat<f64>> = ops.iter().map(|o| small.embed(o).unwrap()).collect();
            let b: Vec<Mat<f64>> = ops.iter().map(|o| large.embed(o).unwrap()).collect();
            assert!((small.h(&a[0]).unwrap().0 - large.h(&b[0]).unwrap().0).abs() <= 1e-12);
            for route in TauRoute::ALL {
                let x = small.tau(&a[0], &a[1], &a[2], route).unwrap().0;
                let y = large.tau(&b[0], &b[1], &b[2], route).unwrap().0;
                assert!((x - y).abs() <= 1e-12, "{alpha} {route:?}");
            }
            let x = small.hinv_check(&a[0], &a[1]).unwrap().0;
            let y = large.hinv_check(&b[0], &b[1]).unwrap().0;
            assert!((x - y).abs() <= 1e-12);
        }
    }
}

#[test]
fn tau_is_a_twisted_cyclic_cocycle() {
    for alpha in Alpha::ALL {
        let r = rep(alpha);
        let phi = r.tau_cochain(TauRoute::Form);
        let sigma = r.sigma_automorphism();
        let out = cocycle_suite(&r, &phi, &sigma, &samples(&r, 4, 20, 4), &samples(&r, 5, 20, 3), 1e-9).unwrap();
        assert!(out.pass, "alpha={alpha}: {} {}", out.max_coboundary, out.max_cyclicity);
        assert!(out.samples.iter().filter(|s| s.scale > 0.0).count() >= 30);
    }
}

#[test]
fn untwisted_conditions_fail() {
    let r = rep(Alpha::One);
    let phi = r.tau_cochain(TauRoute::Form);
    let id = Automorphism::new(|x: &Mat<f64>| x.clone());
    let out = cocycle_suite(&r, &phi, &id, &samples(&r, 4, 10, 4), &samples(&r, 5, 10, 3), 1e-9).unwrap();
    assert!(!out.pass);
    let h3 = Cochain::new(3, |xs: &[Mat<f64>]| {
        let (v, s) = r.h(&xs[0].mul(&xs[1]).mul(&xs[2])).unwrap();
        Scaled::new(v, s)
    });
    let out = cocycle_suite(&r, &h3, &id, &samples(&r, 6, 10, 4), &[], 1e-9).unwrap();
    assert!(!out.pass);
}

#[test]
fn extended_precision_matches_double() {
    let params = DiscParams::new(Alpha::MinusOne, rat(1, 2)).unwrap();
    let rd: TruncatedRep<f64> = TruncatedRep::build(&params, 24).unwrap();
    let rx: TruncatedRep<Extended> = TruncatedRep::build(&params, 24).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let ops: Vec<FiniteRankOp> = (0..3).map(|_| FiniteRankOp::random(&mut rng, 0, 8)).collect();
    let d: Vec<Mat<f64>> = ops.iter().map(|o| rd.embed(o).unwrap()).collect();
    let x: Vec<Mat<Extended>> = ops.iter().map(|o| rx.embed(o).unwrap()).collect();
    let (vd, s) = rd.tau(&d[0], &d[1], &d[2], TauRoute::Form).unwrap();
    let (vx, _) = rx.tau(&x[0], &x[1], &x[2], TauRoute::Trace).unwrap();
    assert!((vd - vx.to_f64()).abs() <= 1e-13 * s);
}

#[test]
fn parameter_and_support_errors() {
    assert_eq!(Alpha::from_i64(2), Err(DiscError::InvalidAlpha(2)));
    assert!(DiscParams::new(Alpha::One, rat(1, 1)).is_err());
    assert!(DiscParams::new(Alpha::One, rat(-1, 2)).is_err());
    let p = DiscParams::new(Alpha::One, rat(1, 2)).unwrap();
    assert!(TruncatedRep::<f64>::with_window(&p, Window { start: -4, len: 16 }).is_err());
    assert!(TruncatedRep::<f64>::build(&p, 4).is_err());
    let r = rep_q(Alpha::One, rat(1, 2), 16);
    let edge = unit(&r, 14, 14);
    assert!(matches!(r.h(&edge), Err(DiscError::WindowTooSmall { .. })));
    assert!(FiniteRankOp::unit(40, 0).to_mat::<f64>(r.window()).is_err());
}

#[test]
fn finite_rank_parsing() {
    assert_eq!(FiniteRankOp::parse("E00").unwrap(), FiniteRankOp::unit(0, 0));
    assert_eq!(FiniteRankOp::parse("E-2_3").unwrap(), FiniteRankOp::unit(-2, 3));
    assert!(FiniteRankOp::parse("0").unwrap().is_zero());
    assert!(FiniteRankOp::parse("z").is_err());
    assert!(FiniteRankOp::parse("E123").is_err());
    assert_eq!(FiniteRankOp::unit(1, 2).to_string(), "E(1,2)");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tau_is_linear_in_each_slot(seed in 0u64..1000, c in -2.0f64..2.0) {
        let r = rep_q(Alpha::One, rat(1, 2), 24);
        let v = samples(&r, seed, 1, 4).remove(0);
        for slot in 0..3 {
            let mut a = vec![v[0].clone(), v[1].clone(), v[2].clone()];
            let mut b = a.clone();
            b[slot] = v[3].clone();
            let mut comb = a.clone();
            comb[slot] = a[slot].scale(&c).add(&v[3]);
            let phi = |xs: &[Mat<f64>]| r.tau(&xs[0], &xs[1], &xs[2], TauRoute::Commutator).unwrap();
            let (l, sl) = phi(&comb);
            let (x, sx) = phi(&a);
            let (y, sy) = phi(&b);
            prop_assert!((l - (c * x + y)).abs() <= 1e-12 * (sl + sx.abs() * c.abs() + sy));
            a.clear();
        }
    }

    #[test]
    fn scaled_sums_keep_scales(a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let s = Scaled::new(a, a.abs()).minus(&Scaled::new(b, b.abs()));
        prop_assert!(s.magnitude() <= s.scale() + 1e-15);
    }
}
