//! Seeded randomized campaigns over the theorem checks.
//!
//! Instance `i` of a campaign with seed `s` is generated from the streams
//! `(s, i, field)` only, so reports do not depend on evaluation order or on
//! how many instances run alongside it.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gen::{comparable_pair, random_correlation, random_l1_space, random_spd};
use crate::lab::checks::{
    check_convexity, check_hadamard_square_bound, check_inverse_convexity, check_styan, check_subadditivity,
    check_subexponential, check_sum_metric, check_upper_bound, check_wang_zhang, trace_identity_gap,
    UpperBoundHypothesis,
};
use crate::lab::report::CheckReport;
use crate::magnitude::{classify, default_grid, linear_grid, zeta_matrix};
use crate::metric::FiniteMetricSpace;
use crate::par::map_indexed;
use crate::rng::{derive_seed, CounterRng};
use crate::symmat::{self, SymMatrix, DEFAULT_PD_TOL};

/// Largest product space on which the tensor route is exercised.
pub const TENSOR_ROUTE_CAP: usize = 400;
/// Pairs `(s, t)` drawn per subadditivity instance.
pub const SCALE_PAIRS: usize = 5;
/// Largest multiple `k` in the subexponential campaign.
pub const SUBEXPONENTIAL_K_MAX: usize = 5;
const MAX_ATTEMPTS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Styan,
    HadamardBound,
    WangZhang,
    InverseConvexity,
    UpperBound,
    Subadditivity,
    Convexity,
    Subexponential,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Styan,
        Suite::HadamardBound,
        Suite::WangZhang,
        Suite::InverseConvexity,
        Suite::UpperBound,
        Suite::Subadditivity,
        Suite::Convexity,
        Suite::Subexponential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Styan => "styan",
            Suite::HadamardBound => "hadamard-bound",
            Suite::WangZhang => "wang-zhang",
            Suite::InverseConvexity => "inverse-convexity",
            Suite::UpperBound => "upper-bound",
            Suite::Subadditivity => "subadditivity",
            Suite::Convexity => "convexity",
            Suite::Subexponential => "subexponential",
        }
    }

    pub fn default_instances(self) -> usize {
        match self {
            Suite::Styan | Suite::HadamardBound => 1000,
            Suite::WangZhang | Suite::InverseConvexity | Suite::UpperBound => 500,
            Suite::Subadditivity | Suite::Convexity | Suite::Subexponential => 200,
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::WangZhang => 1e-8,
            _ => 1e-9,
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CampaignConfig {
    pub seed: u64,
    /// Overrides the suite's default instance count.
    pub instances: Option<usize>,
    /// Overrides the suite's default tolerance.
    pub tolerance: Option<f64>,
}

impl CampaignConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, instances: None, tolerance: None }
    }
}

/// Correlation matrix shared by the Styan and Hadamard-bound campaigns;
/// size in `[2, 50]`.
pub fn styan_instance(seed: u64, i: u64) -> Result<SymMatrix> {
    let n = CounterRng::stream(seed, i, 0).int_in(2, 50);
    random_correlation(n, derive_seed(seed, i, 1))
}

/// `(A, B, C, D)` with `A, B` positive definite `n × n` (`n ≤ 30`) and
/// Gaussian `C, D` of shape `m × n` (`m ≤ 10`).
pub fn wang_zhang_instance(seed: u64, i: u64) -> Result<(SymMatrix, SymMatrix, DMatrix<f64>, DMatrix<f64>)> {
    let mut rng = CounterRng::stream(seed, i, 10);
    let n = rng.int_in(2, 30);
    let m = rng.int_in(1, 10);
    let a = random_spd(n, derive_seed(seed, i, 11))?;
    let b = random_spd(n, derive_seed(seed, i, 12))?;
    let c = DMatrix::from_fn(m, n, |_, _| rng.normal());
    let d = DMatrix::from_fn(m, n, |_, _| rng.normal());
    Ok((a, b, c, d))
}

pub fn inverse_convexity_instance(seed: u64, i: u64) -> Result<(SymMatrix, SymMatrix, f64)> {
    let mut rng = CounterRng::stream(seed, i, 20);
    let n = rng.int_in(2, 30);
    let t = rng.uniform();
    Ok((random_spd(n, derive_seed(seed, i, 21))?, random_spd(n, derive_seed(seed, i, 22))?, t))
}

/// Random ℓ¹ space: `n ∈ [n_min, n_max]`, dimension in `[1, 5]`, coordinates
/// in `[0, scale]` with `scale` log-uniform in `[1/2, 4]`.
fn l1_space(rng: &mut CounterRng, n_min: usize, n_max: usize) -> Result<FiniteMetricSpace> {
    let n = rng.int_in(n_min, n_max);
    let dim = rng.int_in(1, 5);
    let scale = rng.log_uniform(0.5, 4.0);
    random_l1_space(n, dim, scale, rng.next_u64())
}

/// ℓ¹ space with `n ≤ 30` that classifies as stably positive definite on
/// the default grid; redrawn from a fresh substream otherwise.
pub fn upper_bound_instance(seed: u64, i: u64) -> Result<FiniteMetricSpace> {
    let base = CounterRng::stream(seed, i, 30);
    let grid = default_grid();
    for attempt in 0..MAX_ATTEMPTS {
        let x = l1_space(&mut base.split(attempt), 2, 30)?;
        if classify(&x, &grid, DEFAULT_PD_TOL)?.stably_positive_definite_on_grid {
            return Ok(x);
        }
    }
    Err(Error::Generation(format!("instance {i}: no stably positive definite draw")))
}

/// ℓ¹ space with `n ≤ 30` and five scale pairs log-uniform in `[1/8, 8]`.
pub fn subadditivity_instance(seed: u64, i: u64) -> Result<(FiniteMetricSpace, Vec<(f64, f64)>)> {
    let mut rng = CounterRng::stream(seed, i, 40);
    let x = l1_space(&mut rng, 2, 30)?;
    let pairs = (0..SCALE_PAIRS).map(|_| (rng.log_uniform(0.125, 8.0), rng.log_uniform(0.125, 8.0))).collect();
    Ok((x, pairs))
}

/// Second ℓ¹ metric on the same number of points, for the sum-metric check.
fn sum_metric_partner(seed: u64, i: u64, n: usize) -> Result<FiniteMetricSpace> {
    let mut rng = CounterRng::stream(seed, i, 41);
    let dim = rng.int_in(1, 5);
    let scale = rng.log_uniform(0.5, 4.0);
    random_l1_space(n, dim, scale, rng.next_u64())
}

/// Comparable pair `d0 ≤ d1` on `n ≤ 20` points, both positive definite.
/// `d0` is a random ℓ¹ space; `d1` stretches it by factors up to 3.
pub fn convexity_instance(seed: u64, i: u64) -> Result<(FiniteMetricSpace, FiniteMetricSpace)> {
    let base = CounterRng::stream(seed, i, 50);
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = base.split(attempt);
        let x = l1_space(&mut rng, 2, 20)?;
        let stretch = rng.uniform_in(1.0, 3.0);
        let (d0, d1) = comparable_pair(&x, rng.next_u64(), stretch)?;
        let pd = |x: &FiniteMetricSpace| symmat::is_positive_definite(&zeta_matrix(x), DEFAULT_PD_TOL);
        if pd(&d0) && pd(&d1) {
            return Ok((d0, d1));
        }
    }
    Err(Error::Generation(format!("instance {i}: no positive definite comparable pair")))
}

pub fn subexponential_instance(seed: u64, i: u64) -> Result<FiniteMetricSpace> {
    l1_space(&mut CounterRng::stream(seed, i, 60), 2, 30)
}

/// Eleven equally spaced points of `[0, 1]`.
pub fn convexity_grid() -> Vec<f64> {
    linear_grid(0.0, 1.0, 11)
}

fn verdict_report(name: &str, tol: f64, descriptor: String, margin: Result<f64>) -> CheckReport {
    let mut r = CheckReport::new(name, 0, tol);
    match margin {
        Ok(m) => r.record(descriptor, m),
        Err(e) => r.record_failure(descriptor, &e),
    }
    r
}

fn run_instance(suite: Suite, seed: u64, i: u64, tol: f64) -> CheckReport {
    let name = suite.name();
    let failed = |e: Error| {
        let mut r = CheckReport::new(name, 0, tol);
        r.record_failure(format!("#{i}"), &e);
        r
    };
    match suite {
        Suite::Styan => match styan_instance(seed, i) {
            Ok(r) => verdict_report(name, tol, format!("#{i} n={}", r.n()), check_styan(&r, tol).map(|v| v.margin)),
            Err(e) => failed(e),
        },
        Suite::HadamardBound => match styan_instance(seed, i) {
            Ok(r) => {
                let mut rep = verdict_report(
                    name,
                    tol,
                    format!("#{i} n={} slack", r.n()),
                    check_hadamard_square_bound(&r, tol).map(|v| v.margin),
                );
                let trace = trace_identity_gap(&r).map(|g| -g.abs());
                rep.absorb(verdict_report(name, tol, format!("#{i} n={} trace-identity", r.n()), trace), "");
                rep
            }
            Err(e) => failed(e),
        },
        Suite::WangZhang => match wang_zhang_instance(seed, i) {
            Ok((a, b, c, d)) => verdict_report(
                name,
                tol,
                format!("#{i} n={} m={}", a.n(), c.nrows()),
                check_wang_zhang(&a, &b, &c, &d, tol).map(|v| v.margin),
            ),
            Err(e) => failed(e),
        },
        Suite::InverseConvexity => match inverse_convexity_instance(seed, i) {
            Ok((a, b, t)) => verdict_report(
                name,
                tol,
                format!("#{i} n={} t={t:.6}", a.n()),
                check_inverse_convexity(&a, &b, t, tol).map(|v| v.margin),
            ),
            Err(e) => failed(e),
        },
        Suite::UpperBound => upper_bound_instance(seed, i)
            .and_then(|x| check_upper_bound(&x, &default_grid(), tol, UpperBoundHypothesis::StablyPositiveDefinite))
            .unwrap_or_else(failed),
        Suite::Subadditivity => {
            let run = || -> Result<CheckReport> {
                let (x, pairs) = subadditivity_instance(seed, i)?;
                let mut rep = check_subadditivity(&x, &pairs, tol, TENSOR_ROUTE_CAP)?;
                let partner = sum_metric_partner(seed, i, x.n())?;
                rep.absorb(check_sum_metric(&x, &partner, tol)?, "");
                Ok(rep)
            };
            run().unwrap_or_else(failed)
        }
        Suite::Convexity => convexity_instance(seed, i)
            .and_then(|(x0, x1)| check_convexity(&x0, &x1, &convexity_grid(), tol))
            .unwrap_or_else(failed),
        Suite::Subexponential => subexponential_instance(seed, i)
            .and_then(|x| check_subexponential(&x, SUBEXPONENTIAL_K_MAX, tol))
            .unwrap_or_else(failed),
    }
}

/// Runs one campaign. Instances run in parallel when the `parallel`
/// feature is on; the report is assembled in instance order.
pub fn run_suite(suite: Suite, config: &CampaignConfig) -> CheckReport {
    let instances = config.instances.unwrap_or_else(|| suite.default_instances());
    let tol = config.tolerance.unwrap_or_else(|| suite.default_tolerance());
    let seed = config.seed;
    let parts = map_indexed(instances, |i| run_instance(suite, seed, i as u64, tol));
    let mut report = CheckReport::new(suite.name(), seed, tol);
    for (i, part) in parts.into_iter().enumerate() {
        let prefix =
            if matches!(suite, Suite::UpperBound | Suite::Subadditivity | Suite::Convexity | Suite::Subexponential) {
                format!("#{i}")
            } else {
                String::new()
            };
        report.absorb(part, &prefix);
    }
    report
}

pub fn run_all(config: &CampaignConfig) -> Vec<CheckReport> {
    Suite::ALL.iter().map(|&s| run_suite(s, config)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn instances_are_addressable() {
        assert_eq!(styan_instance(7, 13).unwrap(), styan_instance(7, 13).unwrap());
        assert_ne!(styan_instance(7, 13).unwrap(), styan_instance(7, 14).unwrap());
        let (a, b) = convexity_instance(3, 5).unwrap();
        assert_eq!((a.clone(), b.clone()), convexity_instance(3, 5).unwrap());
    }

    #[test]
    fn small_campaigns_pass() {
        let config = CampaignConfig { seed: 11, instances: Some(6), tolerance: None };
        for suite in Suite::ALL {
            let r = run_suite(suite, &config);
            assert!(r.passed(), "{}: {:?}", suite.name(), r.violations);
            assert!(r.instances >= 6);
        }
    }

    #[test]
    fn report_independent_of_instance_count() {
        // Instance k is identical whether or not later instances run.
        let short = run_suite(Suite::Styan, &CampaignConfig { seed: 2, instances: Some(3), tolerance: None });
        let one = run_suite(Suite::Styan, &CampaignConfig { seed: 2, instances: Some(1), tolerance: None });
        assert!(short.worst_margin <= one.worst_margin);
    }
}
