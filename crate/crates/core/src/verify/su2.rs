use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CaseRecord, Parameters, VerificationReport, VerifyError};
use crate::cocycle::{cocycle_suite, Cochain, CocycleCheck};
use crate::gns_suq2::{specialize, EtaSet, GnsSpace, Poly};
use crate::hopf::Tensor;
use crate::ncpoly::presentations::{A, B, C, D};
use crate::ncpoly::{rational_to_f64, Gen, NCPoly, Presentation, QScalar, Word};
use crate::su2_calculus::{volume_coefficient, Calculus3D};

#[derive(Clone, Debug)]
pub struct Su2Options {
    pub q: BigRational,
    /// Degree bound for the Hopf and modular checks.
    pub max_degree: usize,
    pub seed: u64,
}

impl Su2Options {
    pub fn new(q: BigRational) -> Self {
        Su2Options { q, max_degree: 3, seed: 7 }
    }
}

type Sym = NCPoly<QScalar>;

/// A monomial in `a, b, c, d`: letters with optional `^n` powers, or `1`.
pub fn parse_su2_word(text: &str) -> Result<Vec<Gen>, VerifyError> {
    let t = text.trim();
    if t == "1" {
        return Ok(Vec::new());
    }
    if t.is_empty() {
        return Err(VerifyError::Usage("empty word".into()));
    }
    let mut out: Vec<Gen> = Vec::new();
    let mut chars = t.chars().filter(|c| !c.is_whitespace() && *c != '*').peekable();
    while let Some(ch) = chars.next() {
        let g = match ch {
            'a' => A,
            'b' => B,
            'c' => C,
            'd' => D,
            _ => return Err(VerifyError::Usage(format!("unknown letter {ch:?} in {text:?}; use a, b, c, d"))),
        };
        let mut power = 1usize;
        if chars.peek() == Some(&'^') {
            chars.next();
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            power = digits.parse().map_err(|_| VerifyError::Usage(format!("bad exponent in {text:?}")))?;
        }
        out.extend(std::iter::repeat_n(g, power));
    }
    Ok(out)
}

/// Four comma-separated words.
pub fn parse_su2_tuple(text: &str) -> Result<[Vec<Gen>; 4], VerifyError> {
    let words: Vec<Vec<Gen>> = text.split(',').map(parse_su2_word).collect::<Result<_, _>>()?;
    words.try_into().map_err(|w: Vec<Vec<Gen>>| VerifyError::Usage(format!("tau-su2 takes four words, got {}", w.len())))
}

fn render(letters: &[Gen]) -> String {
    if letters.is_empty() {
        "1".into()
    } else {
        letters.iter().map(|g| ["a", "b", "c", "d"][*g as usize]).collect()
    }
}

struct Ctx<'a> {
    q: &'a BigRational,
}

impl Ctx<'_> {
    fn at_q(&self, x: &QScalar) -> Result<BigRational, VerifyError> {
        x.evaluate_q(self.q).map_err(|e| VerifyError::Failure(e.to_string()))
    }

    fn compare(&self, check: &str, index: usize, inputs: Vec<String>, lhs: &QScalar, rhs: &QScalar) -> Result<CaseRecord, VerifyError> {
        let err = (self.approx(lhs)? - self.approx(rhs)?).abs();
        Ok(CaseRecord::exact(check, index, inputs, self.show(lhs), self.show(rhs), lhs == rhs, err))
    }

    /// The exact value at `q` when it is rational, the symbolic value otherwise.
    fn show(&self, x: &QScalar) -> String {
        match x.evaluate_q(self.q) {
            Ok(v) => v.to_string(),
            Err(_) => x.to_string(),
        }
    }

    fn approx(&self, x: &QScalar) -> Result<f64, VerifyError> {
        x.evaluate_f64(rational_to_f64(self.q)).map_err(|e| VerifyError::Failure(e.to_string()))
    }

    fn words(&self, pres: &Presentation<QScalar>, ws: &[&Word]) -> Vec<String> {
        ws.iter().map(|w| pres.render_word(w)).collect()
    }
}

fn structural(check: &str, index: usize, inputs: Vec<String>, failures: Vec<&str>) -> CaseRecord {
    let ok = failures.is_empty();
    let lhs = if ok { "holds".to_string() } else { format!("fails: {}", failures.join(", ")) };
    CaseRecord::exact(check, index, inputs, lhs, "holds".into(), ok, if ok { 0.0 } else { 1.0 })
}

type Triple = BTreeMap<(Word, Word, Word), QScalar>;

fn add3(t: &mut Triple, k: (Word, Word, Word), c: QScalar) {
    let e = t.entry(k.clone()).or_insert_with(QScalar::zero);
    *e = e.add(&c);
    if e.is_zero() {
        t.remove(&k);
    }
}

/// Which of coassociativity, the counit laws and the antipode laws fail on `x`.
fn hopf_failures<FD, FE, FS>(pres: &Presentation<QScalar>, x: &Word, delta: FD, eps: FE, antipode: FS) -> Vec<&'static str>
where
    FD: Fn(&Word) -> Tensor<QScalar>,
    FE: Fn(&Word) -> QScalar,
    FS: Fn(&Sym) -> Sym,
{
    let mut bad = Vec::new();
    let d = delta(x);
    let (mut left, mut right) = (Triple::new(), Triple::new());
    for ((x1, x2), c) in d.terms() {
        for ((y1, y2), e) in delta(x1).terms() {
            add3(&mut left, (y1.clone(), y2.clone(), x2.clone()), c.mul(e));
        }
        for ((y1, y2), e) in delta(x2).terms() {
            add3(&mut right, (x1.clone(), y1.clone(), y2.clone()), c.mul(e));
        }
    }
    if left != right {
        bad.push("coassociativity");
    }
    let xp = NCPoly::word(x.clone());
    if d.contract_left(&eps) != xp || d.contract_right(&eps) != xp {
        bad.push("counit");
    }
    let (mut ls, mut rs) = (NCPoly::zero(), NCPoly::zero());
    for ((x1, x2), c) in d.terms() {
        let (p1, p2) = (NCPoly::word(x1.clone()), NCPoly::word(x2.clone()));
        ls.add_scaled(&pres.mul(&antipode(&p1), &p2), c);
        rs.add_scaled(&pres.mul(&p1, &antipode(&p2)), c);
    }
    let unit = NCPoly::constant(eps(x));
    if ls != unit || rs != unit {
        bad.push("antipode");
    }
    bad
}

fn generator_tuples(calc: &Calculus3D, len: usize) -> Vec<Vec<Sym>> {
    (0..4usize.pow(len as u32))
        .map(|mut n| {
            let mut t = Vec::with_capacity(len);
            for _ in 0..len {
                t.push(calc.qg.a.word(&[(n % 4) as Gen]));
                n /= 4;
            }
            t
        })
        .collect()
}

/// The volume-form coefficients `π(ω_i ω_j ω_k)` as listed for the calculus.
pub(crate) fn pi_reference(i: u8, j: u8, k: u8) -> QScalar {
    let q = QScalar::q_pow;
    match (i, j, k) {
        (0, 1, 2) => QScalar::one(),
        (1, 0, 2) | (0, 2, 1) => q(4).neg(),
        (1, 2, 0) | (2, 0, 1) => q(6),
        (2, 1, 0) => q(10).neg(),
        _ => QScalar::zero(),
    }
}

pub fn verify_su2_symbolic(opts: &Su2Options) -> Result<VerificationReport, VerifyError> {
    let started = Instant::now();
    let calc = Calculus3D::new()?;
    let cx = Ctx { q: &opts.q };
    let qg = &calc.qg;
    let mut report = VerificationReport::new(
        "verify su2-symbolic",
        "SU_q(2)",
        Parameters { q: Some(opts.q.to_string()), degree: Some(opts.max_degree), seed: Some(opts.seed), ..Default::default() },
    );

    let a_words = qg.a.pbw_basis(opts.max_degree);
    for (i, w) in a_words.iter().enumerate() {
        let bad = hopf_failures(qg.a.pres(), w, |x| qg.a.coproduct(&NCPoly::word(x.clone())), |x| qg.a.counit_word(x), |x| qg.a.antipode(x));
        report.push(structural("hopf-coordinate", i, cx.words(qg.a.pres(), &[w]), bad));
    }
    for (i, w) in qg.u.short_words(opts.max_degree).iter().enumerate() {
        let bad = hopf_failures(qg.u.pres(), w, |x| qg.u.coproduct_word(x), |x| qg.u.counit_word(x), |x| qg.u.antipode(x));
        report.push(structural("hopf-enveloping", i, cx.words(qg.u.pres(), &[w]), bad));
    }

    let uw = qg.u.short_words(1);
    let aw = qg.a.pbw_basis(opts.max_degree.min(2));
    let mut idx = 0;
    for f in &uw {
        for h in &uw {
            for x in &aw {
                let fh = qg.u.mul(&NCPoly::word(f.clone()), &NCPoly::word(h.clone()));
                let lhs = qg.pairing(&fh, &NCPoly::word(x.clone()));
                let mut rhs = QScalar::zero();
                for ((x1, x2), c) in qg.a.coproduct(&NCPoly::word(x.clone())).terms() {
                    rhs = rhs.add(&qg.pairing_word(f, x1).mul(&qg.pairing_word(h, x2)).mul(c));
                }
                let inputs = vec![qg.u.pres().render_word(f), qg.u.pres().render_word(h), qg.a.pres().render_word(x)];
                report.push(cx.compare("pairing-duality", idx, inputs, &lhs, &rhs)?);
                idx += 1;
            }
        }
    }

    let mut idx = 0;
    for x in &a_words {
        for y in &a_words {
            let (xp, yp) = (NCPoly::word(x.clone()), NCPoly::word(y.clone()));
            let lhs = qg.a.haar(&qg.a.mul(&xp, &yp));
            let rhs = qg.a.haar(&qg.a.mul(&qg.sigma2(&yp), &xp));
            report.push(cx.compare("haar-modular", idx, cx.words(qg.a.pres(), &[x, y]), &lhs, &rhs)?);
            idx += 1;
        }
    }

    for n in 0..27u8 {
        let (i, j, k) = (n / 9, (n / 3) % 3, n % 3);
        let inputs = vec![format!("w{i} w{j} w{k}")];
        report.push(cx.compare("pi-table", n as usize, inputs, &volume_coefficient(i, j, k), &pi_reference(i, j, k))?);
    }

    let basis = qg.a.pbw_basis(2);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for i in 0..50 {
        let ws: Vec<&Word> = (0..4).map(|_| &basis[rng.gen_range(0..basis.len())]).collect();
        let xs: Vec<Sym> = ws.iter().map(|w| NCPoly::word((*w).clone())).collect();
        let refs = [&xs[0], &xs[1], &xs[2], &xs[3]];
        let lhs = calc.commutator_expansion(refs)?;
        let rhs = calc.volume_form_coefficient(refs);
        let (hl, hr) = (cx.at_q(&qg.a.haar(&lhs))?, cx.at_q(&qg.a.haar(&rhs))?);
        let err = if lhs == rhs { 0.0 } else { rational_to_f64(&(&hl - &hr)).abs().max(f64::MIN_POSITIVE) };
        report.push(CaseRecord::exact("commutator-expansion", i, cx.words(qg.a.pres(), &ws), qg.a.pres().render(&lhs), qg.a.pres().render(&rhs), lhs == rhs, err));
    }

    let quads = generator_tuples(&calc, 4);
    for (i, xs) in quads.iter().enumerate() {
        let refs = [&xs[0], &xs[1], &xs[2], &xs[3]];
        let inputs: Vec<String> = xs.iter().map(|x| qg.a.pres().render(x)).collect();
        let form = calc.tau(refs);
        report.push(cx.compare("tau-explicit", i, inputs.clone(), &form, &calc.tau_explicit(refs))?);
        report.push(cx.compare("tau-commutators", i, inputs, &form, &qg.a.haar(&calc.commutator_expansion(refs)?))?);
    }

    let phi = calc.tau_cochain();
    let sigma = calc.sigma_automorphism();
    let out = cocycle_suite(&calc, &phi, &sigma, &generator_tuples(&calc, 5), &quads, 0.0).map_err(|e| VerifyError::Failure(e.to_string()))?;
    for s in &out.samples {
        let check = match s.check {
            CocycleCheck::Coboundary => "cocycle-b",
            CocycleCheck::Cyclicity => "cocycle-lambda",
        };
        report.push(CaseRecord::exact(check, s.index, s.inputs.clone(), s.value.clone(), "0".into(), s.pass, if s.pass { 0.0 } else { s.magnitude.max(f64::MIN_POSITIVE) }));
    }

    let one = NCPoly::one();
    for (i, xs) in generator_tuples(&calc, 3).iter().enumerate() {
        let inputs: Vec<String> = std::iter::once("1".to_string()).chain(xs.iter().map(|x| qg.a.pres().render(x))).collect();
        report.push(cx.compare("constant-slot", i, inputs, &calc.tau([&one, &xs[0], &xs[1], &xs[2]]), &QScalar::zero())?);
    }

    // the untwisted functional h(x0 x1 x2 x3) must be caught by the same checks
    let plain = Cochain::new(4, |xs: &[Sym]| qg.a.haar(&qg.a.mul(&qg.a.mul(&xs[0], &xs[1]), &qg.a.mul(&xs[2], &xs[3]))));
    let letters = [NCPoly::one(), qg.a.word(&[B]), qg.a.word(&[C])];
    let tuples: Vec<Vec<Sym>> = (0..243usize).map(|n| (0..5).map(|i| letters[(n / 3usize.pow(i)) % 3].clone()).collect()).collect();
    let control = cocycle_suite(&calc, &plain, &sigma, &tuples, &[], 0.0).map_err(|e| VerifyError::Failure(e.to_string()))?;
    let caught = control.samples.iter().filter(|s| !s.pass).count();
    report.push(CaseRecord::exact(
        "negative-control",
        0,
        vec!["h(x0 x1 x2 x3) on {1, b, c}".into()],
        format!("{caught} violations"),
        "at least 1".into(),
        caught > 0,
        0.0,
    ));

    report.note("identities are checked in Q(q^(1/2)); lhs and rhs show values at the given q");
    Ok(report.finish(started))
}

/// `τ` on four monomials by the form route, the six-term expansion, the
/// commutator formula and, when `gns` is `Some((z, degree))`, the spectral trace.
pub fn eval_tau_su2(q: &BigRational, tuple: &str, gns: Option<(f64, usize)>) -> Result<VerificationReport, VerifyError> {
    let started = Instant::now();
    let letters = parse_su2_tuple(tuple)?;
    let calc = Calculus3D::new()?;
    let cx = Ctx { q };
    let qg = &calc.qg;
    let xs: Vec<Sym> = letters.iter().map(|l| qg.a.word(l)).collect();
    let refs = [&xs[0], &xs[1], &xs[2], &xs[3]];
    let inputs: Vec<String> = letters.iter().map(|l| render(l)).collect();
    let mut report = VerificationReport::new(
        "eval tau-su2",
        "SU_q(2)",
        Parameters { q: Some(q.to_string()), z: gns.map(|g| g.0), degree: gns.map(|g| g.1), ..Default::default() },
    );
    let form = calc.tau(refs);
    report.push(cx.compare("form-vs-explicit", 0, inputs.clone(), &form, &calc.tau_explicit(refs))?);
    report.push(cx.compare("form-vs-commutators", 0, inputs.clone(), &form, &qg.a.haar(&calc.commutator_expansion(refs)?))?);
    report.note(format!("tau = {form}"));
    if let Some((z, degree)) = gns {
        let space = GnsSpace::new(q, degree)?;
        let eta = EtaSet::build(q)?;
        let num: Vec<Poly> = xs.iter().map(|x| specialize(x, q)).collect::<Result<_, _>>()?;
        let eval = space.tau_trace([&num[0], &num[1], &num[2], &num[3]], z, &eta)?;
        let p = specialize(&calc.volume_form_coefficient(refs), q)?;
        let tol = super::gns::trace_tolerance(q, &p, &eval)?;
        let exact = rational_to_f64(&cx.at_q(&form)?);
        report.push(CaseRecord::numeric("form-vs-spectral", 0, inputs, exact, eval.value, exact.abs().max(1.0), tol));
        report.note(format!("spectral tail bound {:.3e}, zeta {:.6e}", eval.tail, eval.zeta));
    }
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_syntax() {
        assert_eq!(parse_su2_word("1").unwrap(), Vec::<Gen>::new());
        assert_eq!(parse_su2_word("b^2c^2").unwrap(), vec![B, B, C, C]);
        assert_eq!(parse_su2_word(" a d ").unwrap(), vec![A, D]);
        assert_eq!(parse_su2_word("a*b").unwrap(), vec![A, B]);
        assert!(parse_su2_word("x").is_err());
        assert!(parse_su2_word("").is_err());
        assert!(parse_su2_word("a^").is_err());
        assert!(parse_su2_tuple("a,b,c").is_err());
        assert_eq!(render(&parse_su2_tuple("1,a,bc,d").unwrap()[2]), "bc");
    }

    #[test]
    fn pi_reference_is_antisymmetric_up_to_powers() {
        let nonzero = (0..27u8).filter(|n| !pi_reference(n / 9, (n / 3) % 3, n % 3).is_zero()).count();
        assert_eq!(nonzero, 6);
    }
}
