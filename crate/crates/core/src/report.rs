//! Verification reports and their JSON encoding.
//!
//! Every float is written with 17 significant digits so that reports
//! round-trip losslessly; complex numbers are `[re, im]`.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::identities::{Param, ParamMap};

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail(_) => "fail",
            Verdict::Skipped(_) => "skipped",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(r) | Verdict::Skipped(r) => Some(r),
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, Verdict::Skipped(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason() {
            None => f.write_str(self.label()),
            Some(r) => write!(f, "{} ({r})", self.label()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub id: String,
    pub sample_seed: u64,
    pub q: Complex64,
    pub params: ParamMap,
    pub lhs: Option<Complex64>,
    pub rhs: Option<Complex64>,
    pub rel_residual: Option<f64>,
    pub abs_residual: Option<f64>,
    /// Larger cancellation amplification of the two sides.
    pub condition: Option<f64>,
    /// Combined propagated truncation bound of the two sides.
    pub error_bound: Option<f64>,
    pub verdict: Verdict,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(id: &str, sample_seed: u64, q: Complex64, params: ParamMap) -> Self {
        VerificationReport {
            id: id.to_string(),
            sample_seed,
            q,
            params,
            lhs: None,
            rhs: None,
            rel_residual: None,
            abs_residual: None,
            condition: None,
            error_bound: None,
            verdict: Verdict::Skipped("not evaluated".into()),
            elapsed: Duration::ZERO,
        }
    }

    pub fn to_json(&self, timing: bool) -> String {
        serde_json::to_string_pretty(&ReportJson::from_report(self, timing)).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "identity     {}", self.id)?;
        writeln!(f, "q            {}", fmt_c(self.q))?;
        for (k, v) in self.params.iter() {
            match v {
                Param::Complex(z) => writeln!(f, "  {k:<10} {}", fmt_c(z))?,
                Param::Int(i) => writeln!(f, "  {k:<10} {i}")?,
            }
        }
        if let (Some(l), Some(r)) = (self.lhs, self.rhs) {
            writeln!(f, "lhs          {}", fmt_c(l))?;
            writeln!(f, "rhs          {}", fmt_c(r))?;
        }
        if let (Some(rel), Some(abs)) = (self.rel_residual, self.abs_residual) {
            writeln!(f, "residual     rel {rel:.3e}, abs {abs:.3e}")?;
        }
        write!(f, "verdict      {}", self.verdict)
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.16e} {:+.16e}i", z.re, z.im)
}

/// A float written with 17 significant digits; non-finite values become null.
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

fn cnum(z: Complex64) -> [Num; 2] {
    [Num(z.re), Num(z.im)]
}

#[derive(Serialize)]
#[serde(untagged)]
enum ParamJson {
    Complex([Num; 2]),
    Int(i64),
}

#[derive(Serialize)]
struct TimingJson {
    elapsed_s: Num,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    id: &'a str,
    sample_seed: u64,
    q: [Num; 2],
    params: BTreeMap<&'a str, ParamJson>,
    lhs: Option<[Num; 2]>,
    rhs: Option<[Num; 2]>,
    rel_residual: Option<Num>,
    abs_residual: Option<Num>,
    condition: Option<Num>,
    error_bound: Option<Num>,
    verdict: &'static str,
    reason: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<TimingJson>,
}

impl<'a> ReportJson<'a> {
    fn from_report(r: &'a VerificationReport, timing: bool) -> Self {
        ReportJson {
            id: &r.id,
            sample_seed: r.sample_seed,
            q: cnum(r.q),
            params: r
                .params
                .iter()
                .map(|(k, v)| {
                    let j = match v {
                        Param::Complex(z) => ParamJson::Complex(cnum(z)),
                        Param::Int(i) => ParamJson::Int(i),
                    };
                    (k, j)
                })
                .collect(),
            lhs: r.lhs.map(cnum),
            rhs: r.rhs.map(cnum),
            rel_residual: r.rel_residual.map(Num),
            abs_residual: r.abs_residual.map(Num),
            condition: r.condition.map(Num),
            error_bound: r.error_bound.map(Num),
            verdict: r.verdict.label(),
            reason: r.verdict.reason(),
            timing: timing.then(|| TimingJson { elapsed_s: Num(r.elapsed.as_secs_f64()) }),
        }
    }
}

/// JSON array of reports, in the given order.
pub fn reports_to_json(reports: &[VerificationReport], timing: bool) -> String {
    let v: Vec<ReportJson> = reports.iter().map(|r| ReportJson::from_report(r, timing)).collect();
    serde_json::to_string_pretty(&v).expect("reports serialize")
}
