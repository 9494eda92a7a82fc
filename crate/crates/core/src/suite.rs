//! Named checks over a [`DataSet`], run concurrently and reported in a
//! fixed order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{verify_modular_s, verify_t_consistency, DEFAULT_ORDER, DEFAULT_TAU};
use crate::data::{validate, ToleranceConfig};
use crate::format::DataSet;
use crate::fr::{hexagon_check, ms_identity_check, pentagon_check, verify_rigidity, verify_s_from_fr, MsIdentity};
use crate::fusion::{
    verify_balancing, verify_diagonalization, verify_fusion_axioms, verify_nondegeneracy, verify_s_properties,
    verify_verlinde,
};
use crate::report::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Unit,
    Assoc,
    Symmetry,
    UnitRow,
    Diag,
    Verlinde,
    Balancing,
    Nondeg,
    Pentagon,
    Hexagon,
    Rigidity,
    Ms1,
    Ms2,
    SFromFr,
    Chars,
}

impl Check {
    pub const ALL: [Check; 15] = [
        Check::Unit,
        Check::Assoc,
        Check::Symmetry,
        Check::UnitRow,
        Check::Diag,
        Check::Verlinde,
        Check::Balancing,
        Check::Nondeg,
        Check::Pentagon,
        Check::Hexagon,
        Check::Rigidity,
        Check::Ms1,
        Check::Ms2,
        Check::SFromFr,
        Check::Chars,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Unit => "unit",
            Check::Assoc => "assoc",
            Check::Symmetry => "symmetry",
            Check::UnitRow => "unitrow",
            Check::Diag => "diag",
            Check::Verlinde => "verlinde",
            Check::Balancing => "balancing",
            Check::Nondeg => "nondeg",
            Check::Pentagon => "pentagon",
            Check::Hexagon => "hexagon",
            Check::Rigidity => "rigidity",
            Check::Ms1 => "ms1",
            Check::Ms2 => "ms2",
            Check::SFromFr => "sfromfr",
            Check::Chars => "chars",
        }
    }

    /// Parses a comma-separated list; `all` selects every check. The result
    /// is deduplicated and in canonical order.
    pub fn parse_list(text: &str) -> Result<Vec<Check>, String> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if part == "all" {
                out.extend(Check::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err("no checks selected".into());
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown check `{s}`"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: Check,
    pub status: Status,
    pub residual: Option<f64>,
    pub tol: Option<f64>,
    pub detail: String,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub tol: ToleranceConfig,
    pub tau: Complex64,
    pub order: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { tol: ToleranceConfig::default(), tau: DEFAULT_TAU, order: DEFAULT_ORDER }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub source: String,
    pub tol: f64,
    pub outcomes: Vec<CheckOutcome>,
}

#[derive(Serialize)]
struct JsonCheck<'a> {
    name: &'a str,
    status: Status,
    residual: Option<f64>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    source: &'a str,
    tol: f64,
    checks: Vec<JsonCheck<'a>>,
}

impl SuiteReport {
    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.outcomes.iter().any(|o| o.status == Status::Fail))
    }

    pub fn get(&self, check: Check) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.check == check)
    }

    pub fn to_json(&self) -> String {
        let doc = JsonReport {
            source: &self.source,
            tol: self.tol,
            checks: self
                .outcomes
                .iter()
                .map(|o| JsonCheck {
                    name: o.check.name(),
                    status: o.status,
                    // JSON has no infinity
                    residual: o.residual.filter(|r| r.is_finite()),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            match o.status {
                Status::Skip => writeln!(f, "{} SKIP {}", o.check, o.detail)?,
                status => writeln!(
                    f,
                    "{} {} residual={:.3e} tol={:.1e}  {}",
                    o.check,
                    if status == Status::Pass { "PASS" } else { "FAIL" },
                    o.residual.unwrap_or(f64::INFINITY),
                    o.tol.unwrap_or(0.0),
                    o.detail
                )?,
            }
        }
        Ok(())
    }
}

fn skipped(check: Check, why: &str) -> CheckOutcome {
    CheckOutcome {
        check,
        status: Status::Skip,
        residual: None,
        tol: None,
        detail: format!("skipped: {why}"),
        report: VerificationReport::new(),
    }
}

fn from_report(check: Check, report: VerificationReport) -> CheckOutcome {
    let (residual, tol, detail) = match report.worst() {
        Some(w) => (w.residual, w.tol, format!("{}: {}", w.name, w.detail)),
        None => (f64::INFINITY, 0.0, "no entries".into()),
    };
    CheckOutcome {
        check,
        status: if !report.is_empty() && report.all_passed() { Status::Pass } else { Status::Fail },
        residual: Some(residual),
        tol: Some(tol),
        detail,
        report,
    }
}

fn from_error(check: Check, tol: f64, err: crate::error::Error) -> CheckOutcome {
    let mut report = VerificationReport::new();
    report.record(check.name(), f64::INFINITY, tol, err.to_string());
    from_report(check, report)
}

fn only(mut report: VerificationReport, names: &[&str]) -> VerificationReport {
    report.retain(|e| names.contains(&e.name.as_str()));
    report
}

pub fn run_check(ds: &DataSet, check: Check, opts: &SuiteOptions) -> CheckOutcome {
    let tol = &opts.tol;
    let (data, s) = (&ds.data, &ds.s);
    let needs_fr =
        matches!(check, Check::Pentagon | Check::Hexagon | Check::Rigidity | Check::Ms1 | Check::Ms2 | Check::SFromFr);
    if needs_fr && ds.fr.is_none() {
        return skipped(check, "no F/R data");
    }
    let fr = ds.fr.as_ref();
    let report = match check {
        Check::Unit => validate(data),
        Check::Assoc => verify_fusion_axioms(data),
        Check::Symmetry => only(verify_s_properties(s, data.unit(), tol), &["symmetry"]),
        Check::UnitRow => only(verify_s_properties(s, data.unit(), tol), &["unit-row", "invertible"]),
        Check::Diag => match verify_diagonalization(data, s, tol) {
            Ok(r) => r,
            Err(e) => return from_error(check, tol.eps, e),
        },
        Check::Verlinde => verify_verlinde(data, s, tol),
        Check::Balancing => verify_balancing(data, s, tol),
        Check::Nondeg => verify_nondegeneracy(data, s, tol),
        Check::Pentagon => pentagon_check(data, fr.expect("checked"), tol),
        Check::Hexagon => hexagon_check(data, fr.expect("checked"), tol),
        Check::Rigidity => verify_rigidity(data, fr.expect("checked"), tol),
        Check::Ms1 | Check::Ms2 => {
            let which = if check == Check::Ms1 { MsIdentity::SigmaRigidity } else { MsIdentity::MonodromyConjugation };
            match ms_identity_check(data, fr.expect("checked"), s, which, tol) {
                Ok(r) => r,
                Err(e) => return from_error(check, tol.eps, e),
            }
        }
        Check::SFromFr => verify_s_from_fr(data, fr.expect("checked"), s, tol),
        Check::Chars => {
            let Some(gen) = ds.chars else {
                return skipped(check, "no character data");
            };
            let both = verify_modular_s(&gen, s, opts.tau, opts.order).and_then(|mut r| {
                r.extend(verify_t_consistency(&gen, data, opts.tau, opts.order)?);
                Ok(r)
            });
            match both {
                Ok(r) => r,
                Err(e) => return from_error(check, tol.eps, e),
            }
        }
    };
    from_report(check, report)
}

/// Runs `checks` concurrently; outcomes come back in the order given.
pub fn run_checks(ds: &DataSet, source: &str, checks: &[Check], opts: &SuiteOptions) -> SuiteReport {
    let outcomes = checks.par_iter().map(|&c| run_check(ds, c, opts)).collect();
    SuiteReport { source: source.to_string(), tol: opts.tol.eps, outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_entry;

    #[test]
    fn parse_lists() {
        assert_eq!(Check::parse_list("all").unwrap().len(), 15);
        assert_eq!(Check::parse_list("chars,unit,unit").unwrap(), vec![Check::Unit, Check::Chars]);
        assert!(Check::parse_list("nope").is_err());
        assert!(Check::parse_list("").is_err());
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
    }

    #[test]
    fn ising_all_pass() {
        let ds = get_entry("ising").unwrap();
        let report = run_checks(&ds, "catalog:ising", &Check::ALL, &SuiteOptions::default());
        assert_eq!(report.outcomes.len(), 15);
        assert!(report.outcomes.iter().all(|o| o.status == Status::Pass), "{report}");
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn fibonacci_chars_skip() {
        let ds = get_entry("fibonacci").unwrap();
        let report = run_checks(&ds, "catalog:fibonacci", &[Check::Chars], &SuiteOptions::default());
        assert_eq!(report.outcomes[0].status, Status::Skip);
        assert!(report.to_string().contains("skipped: no character data"));
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn json_shape() {
        let ds = get_entry("su2-2").unwrap();
        let report = run_checks(&ds, "catalog:su2-2", &[Check::Unit, Check::Pentagon], &SuiteOptions::default());
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["source"], "catalog:su2-2");
        assert_eq!(v["checks"][0]["status"], "pass");
        assert_eq!(v["checks"][1]["status"], "skip");
        assert!(v["checks"][1]["residual"].is_null());
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["checks", "source", "tol"]);
    }
}
