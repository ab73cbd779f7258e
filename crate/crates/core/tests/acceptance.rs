//! Acceptance criteria, one line each.  Run with `cargo test --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use qcocycle::disc_model::Alpha;
use qcocycle::verify::{
    verify_disc, verify_su2_gns, verify_su2_symbolic, CaseRecord, DiscOptions, GnsOptions, Su2Options, VerificationReport,
};

const RELATION_TOL: f64 = 1e-12;
const ROUTE_TOL: f64 = 1e-10;
const HINV_TOL: f64 = 1e-10;
const COCYCLE_TOL: f64 = 1e-9;
const WINDOW_TOL: f64 = 1e-12;
const HAAR_TOL_Z3_D10: f64 = 1e-4;
const HAAR_TOL_Z2_D14: f64 = 1e-3;
const CASIMIR_TOL: f64 = 1e-10;

const DISC_CALCULUS_LIMIT: Duration = Duration::from_secs(10);
const DISC_ROUTE_LIMIT: Duration = Duration::from_secs(30);
const SYMBOLIC_LIMIT: Duration = Duration::from_secs(300);
const HAAR_LIMIT: Duration = Duration::from_secs(120);
const SPECTRAL_TAU_LIMIT: Duration = Duration::from_secs(600);

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn cases<'a>(r: &'a VerificationReport, check: &str) -> Vec<&'a CaseRecord> {
    r.cases.iter().filter(|c| c.check == check).collect()
}

fn value(s: &str) -> f64 {
    s.parse().unwrap_or(f64::NAN)
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

/// Every listed check present, passing, and within `tol` as an absolute error.
fn checks_within(r: &VerificationReport, checks: &[&str], tol: f64) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for check in checks {
        let cs = cases(r, check);
        if cs.is_empty() {
            return Err(format!("no {check} cases"));
        }
        for c in cs {
            if !c.pass || c.abs_err > tol {
                return Err(format!("{} err {:.3e}", c.key, c.abs_err));
            }
            worst = worst.max(c.abs_err);
        }
    }
    Ok(worst)
}

fn counted(r: &VerificationReport, check: &str, expect: usize) -> Result<(), String> {
    let cs = cases(r, check);
    if cs.len() != expect {
        return Err(format!("{check}: {} cases, expected {expect}", cs.len()));
    }
    if let Some(c) = cs.iter().find(|c| !c.pass) {
        return Err(format!("{} fails: {} vs {}", c.key, c.lhs, c.rhs));
    }
    Ok(())
}

fn criterion_1(disc: &[(Alpha, VerificationReport, Duration)]) -> Outcome {
    let mut worst = 0.0f64;
    for (alpha, r, _) in disc {
        match checks_within(r, &["relation", "y-definition", "dz-matrix", "bimodule", "sigma-twist", "leibniz", "partials"], RELATION_TOL) {
            Ok(w) => worst = worst.max(w),
            Err(e) => return outcome(false, format!("alpha={alpha}: {e}")),
        }
    }
    let total: Duration = disc.iter().map(|d| d.2).sum();
    outcome(total < DISC_CALCULUS_LIMIT, format!("max relative residual {worst:.2e}, {:.2} s", total.as_secs_f64()))
}

fn criterion_2(disc: &[(Alpha, VerificationReport, Duration)]) -> Outcome {
    let mut worst = 0.0f64;
    for (alpha, r, _) in disc {
        let cs = cases(r, "route-trace");
        if cs.len() != 20 {
            return outcome(false, format!("alpha={alpha}: {} triples", cs.len()));
        }
        for c in cs {
            let (form, trace) = (value(&c.lhs), value(&c.rhs));
            let bound = ROUTE_TOL * form.abs().max(1.0);
            if !((form - trace).abs() <= bound) {
                return outcome(false, format!("alpha={alpha} {}: {form} vs {trace}", c.key));
            }
            worst = worst.max((form - trace).abs() / form.abs().max(1.0));
        }
        if !r.check_passes("route-commutator") {
            return outcome(false, format!("alpha={alpha}: commutator route disagrees"));
        }
    }
    let total: Duration = disc.iter().map(|d| d.2).sum();
    outcome(total < DISC_ROUTE_LIMIT, format!("max |form - trace| / max(1,|tau|) = {worst:.2e}"))
}

fn criterion_3(disc: &[(Alpha, VerificationReport, Duration)]) -> Outcome {
    let mut worst = 0.0f64;
    for (alpha, r, _) in disc {
        let cs = cases(r, "hinv");
        if cs.len() != 20 {
            return outcome(false, format!("alpha={alpha}: {} pairs", cs.len()));
        }
        for c in cs {
            // rel_err is |value| / scale
            if !(c.rel_err <= HINV_TOL) {
                return outcome(false, format!("alpha={alpha} {}: {:.3e}", c.key, c.rel_err));
            }
            worst = worst.max(c.rel_err);
        }
    }
    outcome(true, format!("max |h(dx1 dx2)| / scale = {worst:.2e}"))
}

fn criterion_4(disc: &[(Alpha, VerificationReport, Duration)]) -> Outcome {
    let mut worst = 0.0f64;
    for (alpha, r, _) in disc {
        for check in ["cocycle-b", "cocycle-lambda"] {
            let cs = cases(r, check);
            if cs.len() != 20 {
                return outcome(false, format!("alpha={alpha}: {} {check} samples", cs.len()));
            }
            for c in cs {
                if !c.pass || !(c.rel_err <= COCYCLE_TOL) {
                    return outcome(false, format!("alpha={alpha} {}: {:.3e}", c.key, c.rel_err));
                }
                worst = worst.max(c.rel_err);
            }
        }
    }
    outcome(true, format!("max residual / scale = {worst:.2e}"))
}

fn criterion_5(disc: &[(Alpha, VerificationReport, Duration)]) -> Outcome {
    let mut worst = 0.0f64;
    for (alpha, r, _) in disc {
        match checks_within(r, &["window-doubling"], WINDOW_TOL) {
            Ok(w) => worst = worst.max(w),
            Err(e) => return outcome(false, format!("alpha={alpha}: {e}")),
        }
    }
    outcome(true, format!("max change {worst:.2e}"))
}

fn criterion_6() -> Outcome {
    let started = Instant::now();
    let r = match verify_su2_symbolic(&Su2Options::new(half())) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let elapsed = started.elapsed();
    let expected = [
        ("hopf-coordinate", 30),
        ("haar-modular", 900),
        ("pi-table", 27),
        ("commutator-expansion", 50),
        ("tau-explicit", 256),
        ("cocycle-lambda", 256),
        ("cocycle-b", 1024),
        ("constant-slot", 64),
    ];
    for (check, n) in expected {
        if let Err(e) = counted(&r, check, n) {
            return outcome(false, e);
        }
    }
    for check in ["hopf-enveloping", "pairing-duality", "tau-commutators", "negative-control"] {
        if !r.check_passes(check) {
            return outcome(false, format!("{check} fails"));
        }
    }
    let max_err = r.cases.iter().map(|c| c.abs_err).fold(0.0, f64::max);
    outcome(r.pass && max_err == 0.0 && elapsed < SYMBOLIC_LIMIT, format!("{} exact cases, max error {max_err}, {:.1} s", r.cases.len(), elapsed.as_secs_f64()))
}

fn criterion_7(gns: &VerificationReport) -> Outcome {
    for (check, n) in [("eta-trace", 81), ("eta-adjoint", 3), ("eta-constraint", 9), ("eta-discriminant", 3)] {
        if let Err(e) = counted(gns, check, n) {
            return outcome(false, e);
        }
    }
    outcome(true, "27/27 traces at q = 1/4, 1/2, 3/4; adjoints, constraints and discriminants hold")
}

fn haar_check(r: &VerificationReport, cap: f64) -> Result<f64, String> {
    let mut worst_tol = 0.0f64;
    for check in ["haar-trace-k2", "haar-trace-conjugated", "haar-trace-variants"] {
        let cs = cases(r, check);
        if cs.len() != 5 {
            return Err(format!("{check}: {} samples", cs.len()));
        }
        for c in cs {
            if !c.pass || c.tolerance > cap {
                return Err(format!("{}: err {:.3e} tol {:.3e}", c.key, c.abs_err, c.tolerance));
            }
            worst_tol = worst_tol.max(c.tolerance);
        }
    }
    Ok(worst_tol)
}

fn criterion_8(z3: &(VerificationReport, Duration), z2: &(VerificationReport, Duration)) -> Outcome {
    match (haar_check(&z3.0, HAAR_TOL_Z3_D10), haar_check(&z2.0, HAAR_TOL_Z2_D14)) {
        (Ok(a), Ok(b)) => outcome(
            z3.1 + z2.1 < HAAR_LIMIT,
            format!("tolerances {a:.2e} (z=3, D=10) and {b:.2e} (z=2, D=14), {:.1} s", (z3.1 + z2.1).as_secs_f64()),
        ),
        (Err(e), _) | (_, Err(e)) => outcome(false, e),
    }
}

fn criterion_9(z3: &(VerificationReport, Duration), z2: &(VerificationReport, Duration)) -> Outcome {
    let a = cases(&z3.0, "tau-spectral");
    if a.len() < 20 {
        return outcome(false, format!("{} quadruples", a.len()));
    }
    if let Some(c) = a.iter().find(|c| !c.pass) {
        return outcome(false, format!("{}: {} vs {}", c.key, c.lhs, c.rhs));
    }
    let mut worst = 0.0f64;
    for c in &a {
        let Some(d) = z2.0.case(&c.key) else {
            return outcome(false, format!("{} missing at z=2", c.key));
        };
        if d.inputs != c.inputs {
            return outcome(false, format!("{}: different inputs at z=2", c.key));
        }
        let gap = (value(&c.lhs) - value(&d.lhs)).abs();
        if !(gap <= c.tolerance + d.tolerance) {
            return outcome(false, format!("{}: z-dependence {gap:.3e}", c.key));
        }
        worst = worst.max(gap);
    }
    outcome(
        z3.1 + z2.1 < SPECTRAL_TAU_LIMIT,
        format!("{} quadruples within tolerance, max z-gap {worst:.2e}", a.len()),
    )
}

fn criterion_10(gns: &VerificationReport) -> Outcome {
    if let Err(e) = counted(gns, "casimir-multiplicity", 11) {
        return outcome(false, e);
    }
    let cs = cases(gns, "casimir-eigenvalue");
    if cs.len() != 11 {
        return outcome(false, format!("{} levels", cs.len()));
    }
    let worst = cs.iter().map(|c| c.rel_err).fold(0.0, f64::max);
    outcome(cs.iter().all(|c| c.pass) && worst <= CASIMIR_TOL, format!("n = 1..11 with multiplicities n^2, max relative error {worst:.2e}"))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let s = Instant::now();
    let v = f();
    (v, s.elapsed())
}

fn main() -> ExitCode {
    let disc: Vec<(Alpha, VerificationReport, Duration)> = Alpha::ALL
        .into_iter()
        .map(|alpha| {
            let (r, t) = timed(|| verify_disc(&DiscOptions::new(alpha, half())).expect("disc suite runs"));
            (alpha, r, t)
        })
        .collect();
    let gns = |z: f64, degree: usize| {
        let opts = GnsOptions { z, degree, ..GnsOptions::new(half()) };
        timed(|| verify_su2_gns(&opts).expect("gns suite runs"))
    };
    let z3 = gns(3.0, 10);
    let z2 = gns(2.0, 14);

    let results = [
        ("1 disc relation and calculus", criterion_1(&disc)),
        ("2 disc route agreement", criterion_2(&disc)),
        ("3 disc h of two-forms", criterion_3(&disc)),
        ("4 disc twisted cocycle", criterion_4(&disc)),
        ("5 disc window stability", criterion_5(&disc)),
        ("6 SU_q(2) symbolic suite", criterion_6()),
        ("7 eta matrices", criterion_7(&z3.0)),
        ("8 Haar state as a spectral trace", criterion_8(&z3, &z2)),
        ("9 cocycle as a spectral trace", criterion_9(&z3, &z2)),
        ("10 Casimir spectrum", criterion_10(&z3.0)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
