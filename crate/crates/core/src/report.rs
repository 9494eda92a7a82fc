//! Named check results with residuals and tolerances.

use std::fmt;

use serde::Serialize;

/// One named check: `passed` is exactly `residual <= tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tol: f64,
    pub detail: String,
}

/// An ordered list of check entries.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a residual against a tolerance. NaN residuals never pass.
    pub fn record(&mut self, name: impl Into<String>, residual: f64, tol: f64, detail: impl Into<String>) {
        let residual = if residual.is_nan() { f64::INFINITY } else { residual.abs() };
        self.entries.push(CheckEntry {
            name: name.into(),
            passed: residual <= tol,
            residual,
            tol,
            detail: detail.into(),
        });
    }

    /// Integer-valued check: residual 0 when `ok`, 1 otherwise, tolerance 0.
    pub fn record_bool(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.record(name, if ok { 0.0 } else { 1.0 }, 0.0, detail);
    }

    /// Lower-bound check `value > bound`; the residual is how far `value`
    /// falls short of the bound.
    pub fn record_lower_bound(&mut self, name: impl Into<String>, value: f64, bound: f64, detail: impl Into<String>) {
        let shortfall = if value.is_nan() {
            f64::INFINITY
        } else if value > bound {
            0.0
        } else {
            // strictly-greater is required, so equality still counts as a miss
            (bound - value).max(f64::MIN_POSITIVE)
        };
        self.record(name, shortfall, 0.0, detail);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
    }

    /// Keeps only the entries for which `keep` returns true.
    pub fn retain(&mut self, keep: impl FnMut(&CheckEntry) -> bool) {
        self.entries.retain(keep);
    }

    pub fn entries(&self) -> &[CheckEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    /// The entry that best summarizes the report: the first failure, or the
    /// largest residual when everything passed.
    pub fn worst(&self) -> Option<&CheckEntry> {
        self.failures().next().or_else(|| self.entries.iter().max_by(|a, b| a.residual.total_cmp(&b.residual)))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "{:<24} {} residual={:.3e} tol={:.1e}  {}",
                e.name,
                if e.passed { "PASS" } else { "FAIL" },
                e.residual,
                e.tol,
                e.detail
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_iff_residual_within_tol() {
        let mut r = VerificationReport::new();
        r.record("a", 1e-10, 1e-9, "");
        r.record("b", 1e-8, 1e-9, "");
        r.record("c", f64::NAN, 1.0, "");
        assert!(r.get("a").unwrap().passed);
        assert!(!r.get("b").unwrap().passed);
        assert!(!r.get("c").unwrap().passed);
        assert_eq!(r.worst().unwrap().name, "b");
    }

    #[test]
    fn lower_bound_is_strict() {
        let mut r = VerificationReport::new();
        r.record_lower_bound("ok", 0.5, 0.1, "");
        r.record_lower_bound("edge", 0.1, 0.1, "");
        r.record_lower_bound("low", 0.0, 0.1, "");
        assert!(r.get("ok").unwrap().passed);
        assert!(!r.get("edge").unwrap().passed);
        assert!((r.get("low").unwrap().residual - 0.1).abs() < 1e-15);
    }
}
