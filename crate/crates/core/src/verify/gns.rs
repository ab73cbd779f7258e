use std::time::Instant;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::su2::pi_reference;
use super::{CaseRecord, Parameters, VerificationReport, VerifyError};
use crate::gns_suq2::{
    discriminant, specialize, trace_norm, BigOperator, EtaSet, GnsSpace, HaarVariant, Poly, QuadNum, TraceEval,
};
use crate::hopf::weights;
use crate::ncpoly::presentations::{A, B, C, D};
use crate::ncpoly::{rational_to_f64, Gen, NCPoly, QScalar, Word};
use crate::su2_calculus::Calculus3D;

#[derive(Clone, Debug)]
pub struct GnsOptions {
    pub q: BigRational,
    pub z: f64,
    pub degree: usize,
    pub seed: u64,
}

impl GnsOptions {
    pub fn new(q: BigRational) -> Self {
        GnsOptions { q, z: 3.0, degree: 10, seed: 7 }
    }
}

/// Inputs for the Haar-state trace formula.
pub const HAAR_SAMPLES: [&[Gen]; 5] = [&[], &[A], &[B, C], &[B, B, C, C], &[A, D]];

const SPECTRAL_BALANCED: usize = 20;
const SPECTRAL_UNBALANCED: usize = 4;
const ETA_QS: [(i64, i64); 3] = [(1, 4), (1, 2), (3, 4)];

fn label(letters: &[Gen]) -> String {
    if letters.is_empty() {
        "1".into()
    } else {
        letters.iter().map(|g| ["a", "b", "c", "d"][*g as usize]).collect()
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `10 · tail · max(1, ‖P‖) / ζ`, where `‖P‖` bounds the trace norm of the
/// multiplication part of the operator.
pub(crate) fn trace_tolerance(q: &BigRational, p: &Poly, eval: &TraceEval) -> Result<f64, VerifyError> {
    Ok(10.0 * eval.tail * trace_norm(q, p, HaarVariant::Conjugated).max(1.0) / eval.zeta)
}

fn haar_tolerance(q: &BigRational, x: &Poly, eval: &TraceEval, variant: HaarVariant) -> f64 {
    10.0 * eval.tail * trace_norm(q, x, variant).max(1.0) / eval.zeta
}

/// Generator quadruples, split by whether the total weight vanishes.
fn generator_quadruples() -> (Vec<[Gen; 4]>, Vec<[Gen; 4]>) {
    let mut balanced = Vec::new();
    let mut other = Vec::new();
    for n in 0..256usize {
        let t: [Gen; 4] = std::array::from_fn(|i| ((n >> (2 * i)) & 3) as Gen);
        if weights(&Word(t.to_vec())) == (0, 0) {
            balanced.push(t);
        } else {
            other.push(t);
        }
    }
    (balanced, other)
}

pub fn verify_su2_gns(opts: &GnsOptions) -> Result<VerificationReport, VerifyError> {
    let started = Instant::now();
    if opts.degree < 4 {
        return Err(VerifyError::Usage(format!("degree must be at least 4, got {}", opts.degree)));
    }
    if !(opts.z > 1.0) {
        return Err(VerifyError::Usage(format!("z must exceed 1, got {}", opts.z)));
    }
    let q = &opts.q;
    let space = GnsSpace::new(q, opts.degree)?;
    let eta = EtaSet::build(q)?;
    let alg = space.algebra();
    let mut report = VerificationReport::new(
        "verify su2-gns",
        "SU_q(2) GNS",
        Parameters { q: Some(q.to_string()), z: Some(opts.z), degree: Some(opts.degree), seed: Some(opts.seed), ..Default::default() },
    );

    for (i, class) in space.classes().iter().enumerate() {
        let min = class.pivots.iter().min().cloned().unwrap_or_else(BigRational::zero);
        let ok = class.pivots.iter().all(|p| p.is_positive());
        let inputs = vec![format!("weight {:?}, size {}", class.weight, class.members.len())];
        report.push(CaseRecord::exact("gram-positive", i, inputs, format!("min pivot {min}"), "> 0".into(), ok, 0.0));
    }

    let levels = space.casimir_decomp()?;
    let qf = rational_to_f64(q);
    for level in &levels {
        let n = level.degree + 1;
        // [n/2]_q² from half-integer powers
        let qn = (qf.powf(n as f64 / 2.0) - qf.powf(-(n as f64) / 2.0)) / (qf - 1.0 / qf);
        let expect = qn * qn;
        let got = rational_to_f64(&level.eigenvalue);
        let inputs = vec![format!("n = {n}")];
        report.push(CaseRecord::numeric("casimir-eigenvalue", level.degree, inputs.clone(), got, expect, expect, 1e-10 * expect));
        report.push(CaseRecord::exact(
            "casimir-multiplicity",
            level.degree,
            inputs,
            level.multiplicity.to_string(),
            (n * n).to_string(),
            level.multiplicity == n * n,
            (level.multiplicity as f64 - (n * n) as f64).abs(),
        ));
    }

    let mut eta_qs: Vec<BigRational> = ETA_QS.iter().map(|&(a, b)| rat(a, b)).collect();
    if !eta_qs.contains(q) {
        eta_qs.push(q.clone());
    }
    for (qi, q0) in eta_qs.iter().enumerate() {
        let set = EtaSet::build(q0)?;
        for n in 0..27usize {
            let w = [n / 9, (n / 3) % 3, n % 3];
            let t = set.trace_word(&w);
            let p = pi_reference(w[0] as u8, w[1] as u8, w[2] as u8).evaluate_q(q0).map_err(|e| VerifyError::Failure(e.to_string()))?;
            let equal = t == QuadNum::rational(p.clone());
            let err = (set.field.to_f64(&t) - rational_to_f64(&p)).abs();
            let inputs = vec![format!("q={q0}"), format!("eta{} eta{} eta{}", w[0], w[1], w[2])];
            report.push(CaseRecord::exact("eta-trace", 27 * qi + n, inputs, t.to_string(), p.to_string(), equal, err));
        }
        let inputs = vec![format!("q={q0}")];
        report.push(CaseRecord::exact("eta-adjoint", qi, inputs.clone(), set.adjoint_relations_hold().to_string(), "true".into(), set.adjoint_relations_hold(), 0.0));
        for (j, r) in set.constraint_residuals().iter().enumerate() {
            report.push(CaseRecord::exact("eta-constraint", 3 * qi + j, inputs.clone(), r.to_string(), "0".into(), r.is_zero(), set.field.to_f64(r).abs()));
        }
        let disc = discriminant(q0);
        report.push(CaseRecord::exact("eta-discriminant", qi, inputs, disc.to_string(), "> 0".into(), disc.is_positive(), 0.0));
    }

    let dirac_d = opts.degree.min(3);
    for d in 0..=dirac_d {
        let ok = BigOperator::dirac_is_self_adjoint(&space, &eta, d)?;
        report.push(CaseRecord::exact("dirac-self-adjoint", d, vec![format!("P_{d}")], ok.to_string(), "true".into(), ok, 0.0));
    }

    let comm_d = opts.degree.saturating_sub(1).min(4);
    let gens: [&[Gen]; 5] = [&[], &[A], &[B], &[C], &[D]];
    for (i, g) in gens.iter().enumerate() {
        let x = alg.word(g);
        let direct = BigOperator::commutator_direct(&space, &eta, &x, comm_d)?.materialize(&eta.field);
        let expanded = BigOperator::commutator_expanded(&space, &eta, &x, comm_d)?.materialize(&eta.field);
        let equal = direct == expanded;
        let zero_ok = !g.is_empty() || direct.iter().flatten().all(QuadNum::is_zero);
        let worst = direct
            .iter()
            .flatten()
            .zip(expanded.iter().flatten())
            .map(|(a, b)| eta.field.to_f64(&a.sub(b)).abs())
            .fold(0.0, f64::max);
        report.push(CaseRecord::exact("commutator-routes", i, vec![label(g), format!("P_{comm_d}")], "direct".into(), "expanded".into(), equal && zero_ok, worst));
    }

    let mut tail_used = 0.0f64;
    let mut zeta_used = 0.0f64;
    for (i, letters) in HAAR_SAMPLES.iter().enumerate() {
        let x = alg.word(letters);
        let h = rational_to_f64(&alg.haar(&x));
        let e1 = space.haar_trace(&x, opts.z, HaarVariant::KSquared)?;
        let e2 = space.haar_trace(&x, opts.z, HaarVariant::Conjugated)?;
        tail_used = e1.tail;
        zeta_used = e1.zeta;
        let t1 = haar_tolerance(q, &x, &e1, HaarVariant::KSquared);
        let t2 = haar_tolerance(q, &x, &e2, HaarVariant::Conjugated);
        let inputs = vec![label(letters)];
        report.push(CaseRecord::numeric("haar-trace-k2", i, inputs.clone(), e1.value, h, h.abs().max(1.0), t1));
        report.push(CaseRecord::numeric("haar-trace-conjugated", i, inputs.clone(), e2.value, h, h.abs().max(1.0), t2));
        // K^8 conjugation preserves every spectral block, so the two truncations share one bound
        report.push(CaseRecord::numeric("haar-trace-variants", i, inputs, e1.value, e2.value, h.abs().max(1.0), t1.max(t2)));
    }

    let calc = Calculus3D::new()?;
    let (mut balanced, mut other) = generator_quadruples();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    balanced.shuffle(&mut rng);
    other.shuffle(&mut rng);
    let chosen: Vec<[Gen; 4]> = balanced.into_iter().take(SPECTRAL_BALANCED).chain(other.into_iter().take(SPECTRAL_UNBALANCED)).collect();
    for (i, t) in chosen.iter().enumerate() {
        let xs: Vec<Poly> = t.iter().map(|g| alg.word(&[*g])).collect();
        let sym: Vec<NCPoly<QScalar>> = t.iter().map(|g| calc.qg.a.word(&[*g])).collect();
        let srefs = [&sym[0], &sym[1], &sym[2], &sym[3]];
        let exact = calc.tau(srefs).evaluate_q(q).map_err(|e| VerifyError::Failure(e.to_string()))?;
        let exact = rational_to_f64(&exact);
        let p = specialize(&calc.volume_form_coefficient(srefs), q)?;
        let eval = space.tau_trace([&xs[0], &xs[1], &xs[2], &xs[3]], opts.z, &eta)?;
        let tol = trace_tolerance(q, &p, &eval)?;
        let inputs: Vec<String> = t.iter().map(|g| label(&[*g])).collect();
        report.push(CaseRecord::numeric("tau-spectral", i, inputs, eval.value, exact, exact.abs().max(1.0), tol));
    }

    report.note(format!(
        "tolerance = 10 * tail * max(1, |P|) / zeta with tail = sum over n >= {} of n [n]_q [n/2]_q^(-2z) = {tail_used:.6e} and zeta = {zeta_used:.6e}",
        opts.degree + 2
    ));
    report.note("|P| is the sum of |c_w| q^(-4 l(w)) over the monomials of the multiplication part");
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_quadruples() {
        let (balanced, other) = generator_quadruples();
        assert_eq!(balanced.len(), 36);
        assert_eq!(other.len(), 220);
    }

    #[test]
    fn small_degrees_and_divergent_z_are_usage_errors() {
        let q = rat(1, 2);
        let low = GnsOptions { degree: 3, ..GnsOptions::new(q.clone()) };
        assert!(matches!(verify_su2_gns(&low), Err(VerifyError::Usage(_))));
        let z1 = GnsOptions { z: 1.0, ..GnsOptions::new(q) };
        assert!(matches!(verify_su2_gns(&z1), Err(VerifyError::Usage(_))));
    }
}
