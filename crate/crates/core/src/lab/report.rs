use serde::{Deserialize, Serialize};

use crate::metric::Norm;

/// Number of lowest-ratio instances kept in a [`ProbeReport`].
pub const EXTREMAL_KEEP: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub descriptor: String,
    pub margin: f64,
}

/// Outcome of one theorem-check campaign.
///
/// Every recorded comparison contributes a margin (slack) that the theorem
/// predicts to be `≥ −tolerance`; `violations` lists those that are not.
/// A NaN margin (a failed computation) always counts as a violation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub instances: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub worst_margin: f64,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new(check_name: impl Into<String>, seed: u64, tolerance: f64) -> Self {
        Self {
            check_name: check_name.into(),
            instances: 0,
            seed,
            tolerance,
            worst_margin: f64::INFINITY,
            violations: Vec::new(),
        }
    }

    pub fn record(&mut self, descriptor: impl Into<String>, margin: f64) {
        self.instances += 1;
        if margin.is_nan() || self.worst_margin.is_nan() {
            self.worst_margin = f64::NAN;
        } else {
            self.worst_margin = self.worst_margin.min(margin);
        }
        if !(margin >= -self.tolerance) {
            self.violations.push(Violation { descriptor: descriptor.into(), margin });
        }
    }

    /// Records a computation that could not be carried out.
    pub fn record_failure(&mut self, descriptor: impl Into<String>, err: &crate::Error) {
        self.record(format!("{}: {err}", descriptor.into()), f64::NAN);
    }

    /// Folds a sub-report in, prefixing its violation descriptors.
    pub fn absorb(&mut self, other: CheckReport, prefix: &str) {
        self.instances += other.instances;
        if other.worst_margin.is_nan() || self.worst_margin.is_nan() {
            self.worst_margin = f64::NAN;
        } else {
            self.worst_margin = self.worst_margin.min(other.worst_margin);
        }
        for v in other.violations {
            let descriptor = if prefix.is_empty() { v.descriptor } else { format!("{prefix} {}", v.descriptor) };
            if !(v.margin >= -self.tolerance) {
                self.violations.push(Violation { descriptor, margin: v.margin });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Process exit status for a set of theorem reports: 1 iff any violation.
/// Probe reports are deliberately not an input.
pub fn exit_code(checks: &[CheckReport]) -> i32 {
    if checks.iter().all(CheckReport::passed) {
        0
    } else {
        1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProbeVerdict {
    NoCounterexample,
    CandidateFound,
}

/// Geometry of a probed instance, recorded so that candidates can be sorted
/// by which extra hypotheses they satisfy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisProfile {
    pub norm: Option<Norm>,
    pub dim: Option<usize>,
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeInstance {
    pub descriptor: String,
    /// Left side over right side of the conjectured inequality.
    pub ratio: f64,
    pub profile: HypothesisProfile,
}

/// Outcome of a conjecture probe. A candidate is a finding for human
/// review, never a failure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub probe_name: String,
    pub instances: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub min_ratio: f64,
    /// Instances with ratio below `1 + tolerance`.
    pub near_violations: Vec<ProbeInstance>,
    /// The lowest-ratio instances, ascending.
    pub extremal: Vec<ProbeInstance>,
    /// Instances that could not be evaluated, with the reason.
    pub skipped: Vec<String>,
    pub verdict: ProbeVerdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_gap: Option<f64>,
}

/// Accumulates probe observations; [`ProbeBuilder::finish`] fixes the verdict.
#[derive(Clone, Debug)]
pub struct ProbeBuilder {
    name: String,
    seed: u64,
    tolerance: f64,
    observed: Vec<ProbeInstance>,
    skipped: Vec<String>,
}

impl ProbeBuilder {
    pub fn new(name: impl Into<String>, seed: u64, tolerance: f64) -> Self {
        Self { name: name.into(), seed, tolerance, observed: Vec::new(), skipped: Vec::new() }
    }

    pub fn observe(&mut self, instance: ProbeInstance) {
        self.observed.push(instance);
    }

    pub fn skip(&mut self, reason: impl Into<String>) {
        self.skipped.push(reason.into());
    }

    pub fn extend(&mut self, other: ProbeBuilder) {
        self.observed.extend(other.observed);
        self.skipped.extend(other.skipped);
    }

    pub fn finish(self) -> ProbeReport {
        let tol = self.tolerance;
        let min_ratio = self.observed.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
        let candidate = self.observed.iter().any(|p| p.ratio < 1.0 - tol);
        let near_violations: Vec<ProbeInstance> =
            self.observed.iter().filter(|p| p.ratio < 1.0 + tol).cloned().collect();
        let mut sorted = self.observed.clone();
        sorted.sort_by(|a, b| a.ratio.total_cmp(&b.ratio));
        sorted.truncate(EXTREMAL_KEEP);
        ProbeReport {
            probe_name: self.name,
            instances: self.observed.len(),
            seed: self.seed,
            tolerance: tol,
            min_ratio,
            near_violations,
            extremal: sorted,
            skipped: self.skipped,
            verdict: if candidate { ProbeVerdict::CandidateFound } else { ProbeVerdict::NoCounterexample },
            min_gap: None,
        }
    }
}

impl ProbeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(ratio: f64) -> ProbeInstance {
        ProbeInstance {
            descriptor: format!("r={ratio}"),
            ratio,
            profile: HypothesisProfile { norm: None, dim: None, sizes: vec![] },
        }
    }

    #[test]
    fn check_report_bookkeeping() {
        let mut r = CheckReport::new("demo", 3, 1e-9);
        r.record("a", 0.5);
        r.record("b", -1e-12);
        assert!(r.passed());
        r.record("c", -1e-6);
        assert!(!r.passed());
        assert_eq!(r.instances, 3);
        assert_eq!(r.worst_margin, -1e-6);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(exit_code(&[r.clone()]), 1);
        assert_eq!(exit_code(&[CheckReport::new("empty", 0, 1e-9)]), 0);

        let mut nan = CheckReport::new("nan", 0, 1e-9);
        nan.record("x", f64::NAN);
        assert!(!nan.passed());
    }

    #[test]
    fn report_json_has_required_fields() {
        let mut r = CheckReport::new("styan", 7, 1e-9);
        r.record("#0", 0.25);
        r.record("#1", -1.0);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["check_name", "instances", "seed", "tolerance", "worst_margin", "violations"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["violations"][0]["descriptor"], "#1");
        assert_eq!(v["violations"][0]["margin"], -1.0);
    }

    #[test]
    fn probe_verdict_follows_ratios() {
        let mut b = ProbeBuilder::new("mock", 0, 1e-9);
        for r in [1.3, 1.0 + 1e-12, 2.0] {
            b.observe(instance(r));
        }
        let report = b.finish();
        assert_eq!(report.verdict, ProbeVerdict::NoCounterexample);
        assert_eq!(report.near_violations.len(), 1);

        let mut b = ProbeBuilder::new("mock", 0, 1e-9);
        b.observe(instance(1.2));
        b.observe(instance(0.5));
        let report = b.finish();
        assert_eq!(report.verdict, ProbeVerdict::CandidateFound);
        assert_eq!(report.min_ratio, 0.5);
        assert_eq!(report.extremal[0].ratio, 0.5);
    }
}
