use std::time::Instant;

use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CaseRecord, Parameters, VerificationReport, VerifyError};
use crate::cocycle::{cocycle_suite, CocycleCheck};
use crate::disc_model::{
    block_relative_residual, relative_residual, relative_size, sample_box, Alpha, BlockOp2, DiscParams, Extended, FiniteRankOp, Mat,
    Precision, Real, TauRoute, Tracked, TruncatedRep,
};
use crate::ncpoly::rational_to_f64;

#[derive(Clone, Debug)]
pub struct DiscOptions {
    pub alpha: Alpha,
    pub q: BigRational,
    pub window: usize,
    pub seed: u64,
    /// Replaces every default tolerance when set.
    pub tolerance: Option<f64>,
    pub precision: Precision,
}

impl DiscOptions {
    pub fn new(alpha: Alpha, q: BigRational) -> Self {
        DiscOptions { alpha, q, window: 64, seed: 7, tolerance: None, precision: Precision::Double }
    }
}

const EXACT_TOL: f64 = 1e-12;
const ROUTE_TOL: f64 = 1e-10;
const HINV_TOL: f64 = 1e-10;
const COCYCLE_TOL: f64 = 1e-9;
const WINDOW_TOL: f64 = 1e-12;
const SAMPLES: usize = 20;

struct Sampler {
    rng: ChaCha8Rng,
    lo: i64,
    hi: i64,
}

impl Sampler {
    fn new(alpha: Alpha, seed: u64, stream: u64) -> Self {
        let (lo, hi) = sample_box(alpha);
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(stream)), lo, hi }
    }

    fn tuples(&mut self, count: usize, arity: usize) -> Vec<Vec<FiniteRankOp>> {
        (0..count).map(|_| (0..arity).map(|_| FiniteRankOp::random(&mut self.rng, self.lo, self.hi)).collect()).collect()
    }
}

fn labels(ops: &[FiniteRankOp]) -> Vec<String> {
    ops.iter().map(|o| o.to_string()).collect()
}

fn embed_all<R: Real>(rep: &TruncatedRep<R>, ops: &[FiniteRankOp]) -> Result<Vec<Mat<R>>, VerifyError> {
    ops.iter().map(|o| rep.embed(o).map_err(VerifyError::from)).collect()
}

fn block_sum(a: &BlockOp2<f64>, b: &BlockOp2<f64>) -> BlockOp2<f64> {
    let s = |i: usize, j: usize| a.blocks[i][j].add(&b.blocks[i][j]);
    BlockOp2::new([[s(0, 0), s(0, 1)], [s(1, 0), s(1, 1)]], a.phase)
}

pub fn verify_disc(opts: &DiscOptions) -> Result<VerificationReport, VerifyError> {
    let started = Instant::now();
    let params = DiscParams::new(opts.alpha, opts.q.clone())?;
    let rep: TruncatedRep<f64> = TruncatedRep::build(&params, opts.window)?;
    let precision = match opts.precision {
        Precision::Double => "double".to_string(),
        Precision::Extended { digits } => format!("extended({digits})"),
    };
    let mut report = VerificationReport::new(
        "verify disc",
        "quantum disc",
        Parameters {
            q: Some(opts.q.to_string()),
            alpha: Some(opts.alpha.value()),
            window: Some(opts.window),
            seed: Some(opts.seed),
            precision: Some(precision),
            ..Default::default()
        },
    );
    let tol = |default: f64| opts.tolerance.unwrap_or(default);
    let n = rep.dim();
    let t = |m: &Mat<f64>| Tracked::new(m.clone());
    let near = rep.comparison_range(2);
    let inner = rep.comparison_range(3);

    report.push(CaseRecord::residual("relation", 0, vec!["z*z - q^2 zz* - (1-q^2) + alpha(1-q^2)".into()], relative_size(&rep.relation_residual(), rep.interior()), tol(EXACT_TOL)));
    let direct = Tracked::new(Mat::diag(rep.y_of()));
    report.push(CaseRecord::residual("y-definition", 0, vec!["y".into()], relative_residual(&rep.y_from_shifts(), &direct, rep.interior()), tol(EXACT_TOL)));

    // dz = (0 0; βy 0), dz* = (0 -βy; 0 0), times i
    let by: Vec<f64> = rep.y_of().iter().map(|v| v * opts.alpha.beta() as f64).collect();
    let zero = Tracked::new(Mat::zeros(n));
    let y = Tracked::new(Mat::diag(&by));
    let dz_form = BlockOp2::new([[zero.clone(), zero.clone()], [y.clone(), zero.clone()]], 1);
    let dzs_form = BlockOp2::new([[zero.clone(), y.scale(&-1.0)], [zero.clone(), zero]], 1);
    let (dz, dzs) = (rep.d_commutator(rep.z()), rep.d_commutator(rep.z_star()));
    report.push(CaseRecord::residual("dz-matrix", 0, vec!["z".into()], block_relative_residual(&dz, &dz_form, near.clone()), tol(EXACT_TOL)));
    report.push(CaseRecord::residual("dz-matrix", 1, vec!["z*".into()], block_relative_residual(&dzs, &dzs_form, near), tol(EXACT_TOL)));

    let q2 = rational_to_f64(&opts.q).powi(2);
    let rules = [(&dz, "dz", rep.z(), "z", q2), (&dz, "dz", rep.z_star(), "z*", 1.0 / q2), (&dzs, "dz*", rep.z(), "z", q2), (&dzs, "dz*", rep.z_star(), "z*", 1.0 / q2)];
    for (i, (d, dn, x, xn, c)) in rules.into_iter().enumerate() {
        let lhs = d.mul(&rep.rho(x));
        let rhs = rep.rho(x).mul(d).scale_blocks([c, c]);
        report.push(CaseRecord::residual("bimodule", i, vec![format!("{dn} {xn}")], block_relative_residual(&lhs, &rhs, inner.clone()), tol(EXACT_TOL)));
    }

    let mut sampler = Sampler::new(opts.alpha, opts.seed, 1);
    let mut twist_inputs: Vec<(String, Mat<f64>)> = vec![("z".into(), rep.z().clone()), ("z*".into(), rep.z_star().clone())];
    for ops in sampler.tuples(5, 1) {
        twist_inputs.push((ops[0].to_string(), rep.embed(&ops[0])?));
    }
    let mut idx = 0;
    for (dn, d) in [("dz", &dz), ("dz*", &dzs)] {
        for (xn, x) in &twist_inputs {
            let lhs = d.mul(&rep.rho(x));
            let rhs = rep.rho(&rep.sigma(x)).mul(d);
            report.push(CaseRecord::residual("sigma-twist", idx, vec![dn.to_string(), xn.clone()], block_relative_residual(&lhs, &rhs, inner.clone()), tol(EXACT_TOL)));
            idx += 1;
        }
    }

    let mut pairs: Vec<(Vec<String>, Mat<f64>, Mat<f64>)> =
        vec![(vec!["z".into(), "z*".into()], rep.z().clone(), rep.z_star().clone()), (vec!["z*".into(), "z".into()], rep.z_star().clone(), rep.z().clone())];
    for ops in sampler.tuples(5, 2) {
        let m = embed_all(&rep, &ops)?;
        pairs.push((labels(&ops), m[0].clone(), m[1].clone()));
    }
    for (i, (names, x, y)) in pairs.iter().enumerate() {
        let lhs = rep.d_commutator(&x.mul(y));
        let rhs = block_sum(&rep.d_commutator(x).mul(&rep.rho(y)), &rep.rho(x).mul(&rep.d_commutator(y)));
        report.push(CaseRecord::residual("leibniz", i, names.clone(), block_relative_residual(&lhs, &rhs, inner.clone()), tol(EXACT_TOL)));
    }

    let (dzz, _) = rep.partials_tracked(&t(rep.z()));
    report.push(CaseRecord::residual("partials", 0, vec!["z".into()], relative_residual(&dzz, &t(&Mat::identity(n)), inner.clone()), tol(EXACT_TOL)));
    for (i, ops) in sampler.tuples(5, 1).into_iter().enumerate() {
        let x = rep.embed(&ops[0])?;
        let (a, b) = rep.partials(&x);
        let lhs = rep.d_commutator(&x);
        let rhs = block_sum(&rep.rho(&a).mul(&dz), &rep.rho(&b).mul(&dzs));
        report.push(CaseRecord::residual("partials", i + 1, labels(&ops), block_relative_residual(&lhs, &rhs, rep.support_range()), tol(EXACT_TOL)));
    }

    let route_triples = Sampler::new(opts.alpha, opts.seed, 2).tuples(SAMPLES, 3);
    for (i, ops) in route_triples.iter().enumerate() {
        let m = embed_all(&rep, ops)?;
        let (form, _) = rep.tau(&m[0], &m[1], &m[2], TauRoute::Form)?;
        for (check, route) in [("route-trace", TauRoute::Trace), ("route-commutator", TauRoute::Commutator)] {
            let (v, _) = rep.tau(&m[0], &m[1], &m[2], route)?;
            let scale = form.abs().max(1.0);
            report.push(CaseRecord::numeric(check, i, labels(ops), form, v, scale, tol(ROUTE_TOL) * scale));
        }
    }

    for (i, ops) in Sampler::new(opts.alpha, opts.seed, 3).tuples(SAMPLES, 2).iter().enumerate() {
        let m = embed_all(&rep, ops)?;
        let (v, s) = rep.hinv_check(&m[0], &m[1])?;
        report.push(CaseRecord::numeric("hinv", i, labels(ops), v, 0.0, s, tol(HINV_TOL) * s));
    }

    let four = Sampler::new(opts.alpha, opts.seed, 4).tuples(SAMPLES, 4);
    let three = Sampler::new(opts.alpha, opts.seed, 5).tuples(SAMPLES, 3);
    let four_m: Vec<Vec<Mat<f64>>> = four.iter().map(|o| embed_all(&rep, o)).collect::<Result<_, _>>()?;
    let three_m: Vec<Vec<Mat<f64>>> = three.iter().map(|o| embed_all(&rep, o)).collect::<Result<_, _>>()?;
    let phi = rep.tau_cochain(TauRoute::Form);
    let sigma = rep.sigma_automorphism();
    let out = cocycle_suite(&rep, &phi, &sigma, &four_m, &three_m, tol(COCYCLE_TOL)).map_err(|e| VerifyError::Failure(e.to_string()))?;
    for s in &out.samples {
        let (check, ops) = match s.check {
            CocycleCheck::Coboundary => ("cocycle-b", &four[s.index]),
            CocycleCheck::Cyclicity => ("cocycle-lambda", &three[s.index]),
        };
        let mut c = CaseRecord::numeric(check, s.index, labels(ops), s.magnitude, 0.0, s.scale, tol(COCYCLE_TOL) * s.scale);
        c.pass = s.pass;
        report.push(c);
    }

    let big: TruncatedRep<f64> = TruncatedRep::build(&params, 2 * opts.window)?;
    for (i, ops) in Sampler::new(opts.alpha, opts.seed, 6).tuples(5, 3).iter().enumerate() {
        let a = embed_all(&rep, ops)?;
        let b = embed_all(&big, ops)?;
        let mut values = vec![(rep.h(&a[0])?.0, big.h(&b[0])?.0)];
        for route in TauRoute::ALL {
            values.push((rep.tau(&a[0], &a[1], &a[2], route)?.0, big.tau(&b[0], &b[1], &b[2], route)?.0));
        }
        values.push((rep.hinv_check(&a[0], &a[1])?.0, big.hinv_check(&b[0], &b[1])?.0));
        for (j, (x, y)) in values.into_iter().enumerate() {
            report.push(CaseRecord::numeric("window-doubling", 5 * i + j, labels(ops), x, y, 1.0, tol(WINDOW_TOL)));
        }
    }

    if opts.alpha == Alpha::One {
        let e = rep.embed(&FiniteRankOp::unit(0, 0))?;
        let expect = -1.0 / (1.0 - q2);
        for (i, route) in TauRoute::ALL.into_iter().enumerate() {
            let (v, _) = rep.tau(&e, &e, &e, route)?;
            report.push(CaseRecord::numeric("corner-unit", i, vec!["E(0,0)".into(); 3], v, expect, expect.abs(), tol(EXACT_TOL) * expect.abs()));
        }
    }

    if let Precision::Extended { .. } = opts.precision {
        // a narrower window keeps the big-float products affordable
        let len = opts.window.min(32);
        let ext: TruncatedRep<Extended> = TruncatedRep::build(&params, len)?;
        for (i, ops) in route_triples.iter().take(5).enumerate() {
            let a = embed_all(&rep, ops)?;
            let b = embed_all(&ext, ops)?;
            let (v, s) = rep.tau(&a[0], &a[1], &a[2], TauRoute::Trace)?;
            let (w, _) = ext.tau(&b[0], &b[1], &b[2], TauRoute::Trace)?;
            report.push(CaseRecord::numeric("extended-oracle", i, labels(ops), v, w.to_f64(), s, tol(ROUTE_TOL) * s.max(1.0)));
        }
        report.note(format!("extended oracle on window {len} with {} significant digits", Extended::significant_digits()));
    }

    report.note("tolerances are relative to the absolute-value evaluation of each expression");
    Ok(report.finish(started))
}

/// `τ` on one triple of finite-rank operators by every route.
pub fn eval_tau_disc(opts: &DiscOptions, tuple: &str) -> Result<VerificationReport, VerifyError> {
    let started = Instant::now();
    let ops: Vec<FiniteRankOp> = tuple.split(',').map(|s| FiniteRankOp::parse(s.trim())).collect::<Result<_, _>>()?;
    if ops.len() != 3 {
        return Err(VerifyError::Usage(format!("tau-disc takes three operators, got {}", ops.len())));
    }
    let params = DiscParams::new(opts.alpha, opts.q.clone())?;
    let rep: TruncatedRep<f64> = TruncatedRep::build(&params, opts.window)?;
    let m = embed_all(&rep, &ops)?;
    let mut report = VerificationReport::new(
        "eval tau-disc",
        "quantum disc",
        Parameters { q: Some(opts.q.to_string()), alpha: Some(opts.alpha.value()), window: Some(opts.window), ..Default::default() },
    );
    let (form, fs) = rep.tau(&m[0], &m[1], &m[2], TauRoute::Form)?;
    report.note(format!("tau = {form}"));
    for (name, route) in [("form-vs-commutator", TauRoute::Commutator), ("form-vs-trace", TauRoute::Trace)] {
        let (v, s) = rep.tau(&m[0], &m[1], &m[2], route)?;
        let scale = fs.max(s).max(1.0);
        report.push(CaseRecord::numeric(name, 0, labels(&ops), form, v, scale, opts.tolerance.unwrap_or(ROUTE_TOL) * scale));
    }
    if opts.alpha == Alpha::One && ops.iter().all(|o| *o == FiniteRankOp::unit(0, 0)) {
        let q2 = &opts.q * &opts.q;
        report.note(format!("closed form -1/(1-q^2) = {}", -BigRational::one() / (BigRational::one() - q2)));
    }
    Ok(report.finish(started))
}
