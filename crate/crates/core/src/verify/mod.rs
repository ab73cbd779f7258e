//! Verification suites and the report format shared by the command line and
//! the acceptance tests.

mod disc;
mod gns;
mod su2;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use disc::{eval_tau_disc, verify_disc, DiscOptions};
pub use gns::{verify_su2_gns, GnsOptions, HAAR_SAMPLES};
pub use su2::{eval_tau_su2, parse_su2_tuple, parse_su2_word, verify_su2_symbolic, Su2Options};

use crate::disc_model::DiscError;
use crate::gns_suq2::GnsError;
use crate::hopf::HopfError;
use crate::ncpoly::parse_rational;
use crate::su2_calculus::CalculusError;

#[derive(Debug, Error)]
pub enum VerifyError {
    /// Bad parameters or input syntax.
    #[error("{0}")]
    Usage(String),
    /// A computation that should succeed did not.
    #[error("{0}")]
    Failure(String),
}

impl From<DiscError> for VerifyError {
    fn from(e: DiscError) -> Self {
        VerifyError::Usage(e.to_string())
    }
}

impl From<GnsError> for VerifyError {
    fn from(e: GnsError) -> Self {
        match e {
            GnsError::InvalidQ(_) | GnsError::InvalidZ(_) | GnsError::CutoffOverflow { .. } => VerifyError::Usage(e.to_string()),
            _ => VerifyError::Failure(e.to_string()),
        }
    }
}

impl From<CalculusError> for VerifyError {
    fn from(e: CalculusError) -> Self {
        VerifyError::Failure(e.to_string())
    }
}

impl From<HopfError> for VerifyError {
    fn from(e: HopfError) -> Self {
        VerifyError::Failure(e.to_string())
    }
}

/// `p/r` or an integer, strictly between 0 and 1.
pub fn parse_q_rational(text: &str) -> Result<BigRational, VerifyError> {
    if text.contains('.') || text.contains('e') || text.contains('E') {
        return Err(VerifyError::Usage(format!("q must be a rational p/r here, got {text:?}")));
    }
    let q = parse_rational(text).ok_or_else(|| VerifyError::Usage(format!("cannot parse q = {text:?}")))?;
    check_unit_interval(q)
}

/// Like [`parse_q_rational`], but also accepts decimal and scientific notation.
pub fn parse_q_numeric(text: &str) -> Result<BigRational, VerifyError> {
    let q = match parse_rational(text) {
        Some(q) => q,
        None => {
            let f: f64 = text.trim().parse().map_err(|_| VerifyError::Usage(format!("cannot parse q = {text:?}")))?;
            BigRational::from_f64(f).ok_or_else(|| VerifyError::Usage(format!("q = {text:?} is not finite")))?
        }
    };
    check_unit_interval(q)
}

fn check_unit_interval(q: BigRational) -> Result<BigRational, VerifyError> {
    if q.is_positive() && q < BigRational::one() {
        Ok(q)
    } else {
        Err(VerifyError::Usage(format!("q must satisfy 0 < q < 1, got {q}")))
    }
}

fn finite(x: f64) -> f64 {
    if x.is_nan() {
        f64::MAX
    } else {
        x.clamp(-f64::MAX, f64::MAX)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub q: Option<String>,
    pub alpha: Option<i64>,
    pub z: Option<f64>,
    pub degree: Option<usize>,
    pub window: Option<usize>,
    pub seed: Option<u64>,
    pub precision: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub key: String,
    pub check: String,
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CaseRecord {
    /// `|lhs - rhs| ≤ tolerance`, with `rel_err` measured against `scale`.
    pub fn numeric(check: &str, index: usize, inputs: Vec<String>, lhs: f64, rhs: f64, scale: f64, tolerance: f64) -> Self {
        let abs_err = (lhs - rhs).abs();
        let rel_err = if scale > 0.0 { abs_err / scale } else { abs_err };
        CaseRecord {
            key: case_key(check, index),
            check: check.to_string(),
            inputs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            abs_err: finite(abs_err),
            rel_err: finite(rel_err),
            tolerance: finite(tolerance),
            pass: abs_err <= tolerance,
        }
    }

    /// A residual that must not exceed `tolerance`.
    pub fn residual(check: &str, index: usize, inputs: Vec<String>, residual: f64, tolerance: f64) -> Self {
        let mut c = Self::numeric(check, index, inputs, residual, 0.0, 1.0, tolerance);
        c.rhs = "0".into();
        c
    }

    /// An exact comparison; `abs_err` is the floating-point size of the difference.
    pub fn exact(check: &str, index: usize, inputs: Vec<String>, lhs: String, rhs: String, equal: bool, abs_err: f64) -> Self {
        CaseRecord {
            key: case_key(check, index),
            check: check.to_string(),
            inputs,
            lhs,
            rhs,
            abs_err: finite(abs_err),
            rel_err: finite(abs_err),
            tolerance: 0.0,
            pass: equal,
        }
    }

    pub fn lhs_value(&self) -> Option<f64> {
        self.lhs.parse().ok()
    }
}

fn case_key(check: &str, index: usize) -> String {
    format!("{check}/{index:04}")
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub cases: usize,
    pub failures: usize,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub model: String,
    pub parameters: Parameters,
    pub cases: Vec<CaseRecord>,
    pub notes: Vec<String>,
    pub pass: bool,
    pub wall_time_ms: f64,
}

impl VerificationReport {
    pub fn new(check: &str, model: &str, parameters: Parameters) -> Self {
        VerificationReport {
            check: check.to_string(),
            model: model.to_string(),
            parameters,
            cases: Vec::new(),
            notes: Vec::new(),
            pass: true,
            wall_time_ms: 0.0,
        }
    }

    pub fn push(&mut self, case: CaseRecord) {
        self.cases.push(case);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Sorts cases by key and sets the overall flag.
    pub fn finish(mut self, started: std::time::Instant) -> Self {
        self.cases.sort_by(|a, b| a.key.cmp(&b.key));
        self.pass = !self.cases.is_empty() && self.cases.iter().all(|c| c.pass);
        self.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
        self
    }

    pub fn summary(&self) -> BTreeMap<String, CheckSummary> {
        let mut out: BTreeMap<String, CheckSummary> = BTreeMap::new();
        for c in &self.cases {
            let s = out.entry(c.check.clone()).or_default();
            s.cases += 1;
            s.failures += usize::from(!c.pass);
            s.max_abs_err = s.max_abs_err.max(c.abs_err);
            s.max_rel_err = s.max_rel_err.max(c.rel_err);
        }
        out
    }

    pub fn check_passes(&self, check: &str) -> bool {
        let mut any = false;
        for c in self.cases.iter().filter(|c| c.check == check) {
            any = true;
            if !c.pass {
                return false;
            }
        }
        any
    }

    pub fn case(&self, key: &str) -> Option<&CaseRecord> {
        self.cases.binary_search_by(|c| c.key.as_str().cmp(key)).ok().map(|i| &self.cases[i])
    }

    /// Equal up to wall time.
    pub fn same_results(&self, other: &Self) -> bool {
        let mut a = self.clone();
        a.wall_time_ms = other.wall_time_ms;
        a == *other
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    pub fn from_json(text: &str) -> Result<Self, VerifyError> {
        serde_json::from_str(text).map_err(|e| VerifyError::Usage(format!("not a report: {e}")))
    }

    pub fn render_text(&self, verbose: bool) -> String {
        let mut s = String::new();
        let status = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{} [{}] {}  ({:.0} ms)", self.check, self.model, status, self.wall_time_ms);
        let p = &self.parameters;
        let mut params = Vec::new();
        if let Some(q) = &p.q {
            params.push(format!("q={q}"));
        }
        if let Some(a) = p.alpha {
            params.push(format!("alpha={a}"));
        }
        if let Some(z) = p.z {
            params.push(format!("z={z}"));
        }
        if let Some(d) = p.degree {
            params.push(format!("degree={d}"));
        }
        if let Some(w) = p.window {
            params.push(format!("window={w}"));
        }
        if let Some(seed) = p.seed {
            params.push(format!("seed={seed}"));
        }
        if let Some(pr) = &p.precision {
            params.push(format!("precision={pr}"));
        }
        if !params.is_empty() {
            let _ = writeln!(s, "  {}", params.join(" "));
        }
        for (name, sum) in self.summary() {
            let mark = if sum.failures == 0 { "ok  " } else { "FAIL" };
            let _ = writeln!(
                s,
                "  {mark} {name:<24} {:>5} cases  max abs err {:.3e}  max rel err {:.3e}",
                sum.cases, sum.max_abs_err, sum.max_rel_err
            );
        }
        for c in &self.cases {
            if verbose || !c.pass {
                let _ = writeln!(
                    s,
                    "    {} {} ({}): lhs={} rhs={} err={:.3e} tol={:.3e}",
                    if c.pass { "ok" } else { "FAILED" },
                    c.key,
                    c.inputs.join(", "),
                    c.lhs,
                    c.rhs,
                    c.abs_err,
                    c.tolerance
                );
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }
}
