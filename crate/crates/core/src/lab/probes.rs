//! Counterexample probes for open conjectures. A probe never fails: a
//! ratio below `1 − tol` marks a candidate for human review.

use crate::error::{Error, Result};
use crate::gen::random_pointcloud;
use crate::lab::report::{HypothesisProfile, ProbeBuilder, ProbeInstance, ProbeReport};
use crate::magnitude::{classify, default_grid, linear_grid, magnitude_of_zeta, scaled_zeta, zeta_matrix};
use crate::metric::{minkowski_combine, rescale, to_metric_space, FiniteMetricSpace, Norm, PointCloud};
use crate::par::map_indexed;
use crate::rng::CounterRng;
use crate::symmat::{self, DEFAULT_PD_TOL};

/// Default tolerance for probe verdicts.
pub const DEFAULT_PROBE_TOL: f64 = 1e-9;
/// Largest factor set size drawn by the Brunn–Minkowski campaigns.
pub const BM_MAX_SIZE: usize = 8;

fn pd_magnitude(x: &FiniteMetricSpace) -> Result<f64> {
    let z = zeta_matrix(x);
    if !symmat::is_positive_definite(&z, DEFAULT_PD_TOL) {
        return Err(Error::NotPositiveDefinite { row: 0, pivot: symmat::min_eigenvalue(&z) });
    }
    magnitude_of_zeta(&z)
}

fn cloud_magnitude(p: &PointCloud) -> Result<f64> {
    pd_magnitude(&to_metric_space(p)?)
}

fn bm_observe(builder: &mut ProbeBuilder, tag: &str, x: &PointCloud, y: &PointCloud, lambdas: &[f64]) {
    let factors = cloud_magnitude(x).and_then(|mx| Ok((mx, cloud_magnitude(y)?)));
    let (mx, my) = match factors {
        Ok(v) => v,
        Err(e) => {
            builder.skip(format!("{tag}: {e}"));
            return;
        }
    };
    for &lambda in lambdas {
        let combined = minkowski_combine(x, y, lambda).and_then(|c| Ok((c.len(), cloud_magnitude(&c)?)));
        match combined {
            Ok((size, m)) => builder.observe(ProbeInstance {
                descriptor: format!("{tag} lambda={lambda} |X|={} |Y|={} |Z|={size}", x.len(), y.len()),
                ratio: m / (mx.powf(lambda) * my.powf(1.0 - lambda)),
                profile: HypothesisProfile { norm: Some(x.norm), dim: Some(x.dim), sizes: vec![x.len(), y.len()] },
            }),
            Err(e) => builder.skip(format!("{tag} lambda={lambda}: {e}")),
        }
    }
}

/// Ratio `Mag(λX + (1−λ)Y) / (Mag(X)^λ Mag(Y)^(1−λ))` at each `λ`.
/// Intermediate sets that are not positive definite are listed as skipped.
pub fn probe_brunn_minkowski(x: &PointCloud, y: &PointCloud, lambdas: &[f64], tol: f64) -> Result<ProbeReport> {
    if x.dim != y.dim || x.norm != y.norm {
        return Err(Error::input("both point sets must live in the same normed space"));
    }
    if let Some(l) = lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::input(format!("lambda {l} outside [0, 1]")));
    }
    let mut builder = ProbeBuilder::new("brunn-minkowski", 0, tol);
    bm_observe(&mut builder, "", x, y, lambdas);
    Ok(builder.finish())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BmCampaign {
    pub dim: usize,
    pub norm: Norm,
    pub instances: usize,
    pub seed: u64,
    pub tol: f64,
}

impl BmCampaign {
    /// ℓ¹ sets in `R^dim`, `instances` pairs, default tolerance.
    pub fn new(dim: usize, instances: usize, seed: u64) -> Self {
        Self { dim, norm: Norm::L1, instances, seed, tol: DEFAULT_PROBE_TOL }
    }
}

/// Interior values `0.1, 0.2, …, 0.9`.
pub fn interior_lambdas() -> Vec<f64> {
    linear_grid(0.1, 0.9, 9)
}

fn random_set(rng: &mut CounterRng, dim: usize, norm: Norm) -> Result<PointCloud> {
    let n = rng.int_in(1, BM_MAX_SIZE);
    let scale = rng.log_uniform(0.25, 4.0);
    random_pointcloud(n, dim, norm, scale, rng.next_u64())
}

fn run_campaign(
    name: &str,
    c: &BmCampaign,
    per_instance: impl Fn(u64) -> Result<(PointCloud, PointCloud, Vec<f64>)> + Sync,
) -> ProbeReport {
    let parts = map_indexed(c.instances, |i| {
        let mut b = ProbeBuilder::new(name, c.seed, c.tol);
        let tag = format!("#{i}");
        match per_instance(i as u64) {
            Ok((x, y, lambdas)) => bm_observe(&mut b, &tag, &x, &y, &lambdas),
            Err(e) => b.skip(format!("{tag}: {e}")),
        }
        b
    });
    let mut builder = ProbeBuilder::new(name, c.seed, c.tol);
    for part in parts {
        builder.extend(part);
    }
    builder.finish()
}

/// Two random sets per instance, probed at the interior `λ` grid.
pub fn bm_campaign(c: &BmCampaign) -> ProbeReport {
    run_campaign("bm", c, |i| {
        let mut rng = CounterRng::stream(c.seed, i, 70);
        let x = random_set(&mut rng, c.dim, c.norm)?;
        let y = random_set(&mut rng, c.dim, c.norm)?;
        Ok((x, y, interior_lambdas()))
    })
}

/// One random set against the origin: `Mag(λX) ≥ Mag(X)^λ`, at `λ = 1/k`
/// for `k = 1..=5` and at the interior grid.
pub fn bm_one_set_campaign(c: &BmCampaign) -> ProbeReport {
    run_campaign("bm-one-set", c, |i| {
        let mut rng = CounterRng::stream(c.seed, i, 71);
        let x = random_set(&mut rng, c.dim, c.norm)?;
        let origin = PointCloud::new(c.dim, c.norm, vec![vec![0.0; c.dim]])?;
        let mut lambdas: Vec<f64> = (1..=5).map(|k| 1.0 / k as f64).collect();
        lambdas.extend(interior_lambdas());
        Ok((x, origin, lambdas))
    })
}

/// Source of spaces for the equality-gap search: ℓ¹ clouds with
/// `n ∈ [n_min, n_max]` points in `R^dim`, rescaled so that the minimum
/// distance is at least `min_separation`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapGenerator {
    pub n_min: usize,
    pub n_max: usize,
    pub dim: usize,
    pub min_separation: f64,
}

impl Default for GapGenerator {
    fn default() -> Self {
        Self { n_min: 4, n_max: 12, dim: 2, min_separation: 0.5 }
    }
}

impl GapGenerator {
    pub fn sample(&self, seed: u64, i: u64) -> Result<FiniteMetricSpace> {
        if self.n_min < 4 || self.n_max < self.n_min || self.dim == 0 || !(self.min_separation > 0.0) {
            return Err(Error::input("gap generator needs 4 ≤ n_min ≤ n_max, dim ≥ 1, separation > 0"));
        }
        let mut rng = CounterRng::stream(seed, i, 80);
        let n = rng.int_in(self.n_min, self.n_max);
        let cloud = random_pointcloud(n, self.dim, Norm::L1, 1.0, rng.next_u64())?;
        let x = to_metric_space(&cloud)?;
        let stretch = rng.uniform_in(1.0, 2.0);
        rescale(&x, stretch * self.min_separation / x.min_distance())
    }
}

/// Searches for stably positive definite spaces with `n ≥ 4` and
/// `Mag(X)` close to `n`. The ratio is `n / Mag(X)`, so near-equality shows
/// up as a ratio near 1; `min_gap` is the smallest `n − Mag(X)` observed.
/// Spaces failing the grid definiteness test are skipped.
pub fn equality_gap_search(generator: &GapGenerator, instances: usize, seed: u64, tol: f64) -> Result<ProbeReport> {
    generator.sample(seed, 0)?;
    let grid = default_grid();
    let parts = map_indexed(instances, |i| {
        let mut b = ProbeBuilder::new("equality-gap", seed, tol);
        let outcome = generator.sample(seed, i as u64).and_then(|x| {
            if !classify(&x, &grid, DEFAULT_PD_TOL)?.stably_positive_definite_on_grid {
                return Err(Error::Precondition("not stably positive definite on the grid".into()));
            }
            Ok((x.n(), x.min_distance(), pd_magnitude(&x)?))
        });
        match &outcome {
            &Ok((n, sep, m)) => b.observe(ProbeInstance {
                descriptor: format!("#{i} n={n} min_distance={sep:e} gap={:e}", n as f64 - m),
                ratio: n as f64 / m,
                profile: HypothesisProfile { norm: Some(Norm::L1), dim: Some(generator.dim), sizes: vec![n] },
            }),
            Err(e) => b.skip(format!("#{i}: {e}")),
        }
        (b, outcome.ok().map(|(n, _, m)| n as f64 - m))
    });
    let mut builder = ProbeBuilder::new("equality-gap", seed, tol);
    let mut min_gap = f64::INFINITY;
    for (part, gap) in parts {
        builder.extend(part);
        if let Some(g) = gap {
            min_gap = min_gap.min(g);
        }
    }
    let mut report = builder.finish();
    report.min_gap = min_gap.is_finite().then_some(min_gap);
    Ok(report)
}

/// Probes monotonicity of `t ↦ Mag(tX)` on consecutive grid scales with
/// ratio `Mag(t_{k+1}X) / Mag(t_kX)`. Monotonicity is open for stably
/// positive definite spaces, so this only reports.
pub fn probe_monotonicity(x: &FiniteMetricSpace, grid: &[f64], tol: f64) -> ProbeReport {
    let mags: Vec<Result<f64>> = grid.iter().map(|&t| magnitude_of_zeta(&scaled_zeta(x, t))).collect();
    let mut builder = ProbeBuilder::new("monotonicity", 0, tol);
    for k in 1..grid.len() {
        match (&mags[k - 1], &mags[k]) {
            (Ok(a), Ok(b)) => builder.observe(ProbeInstance {
                descriptor: format!("t={:e}->{:e}", grid[k - 1], grid[k]),
                ratio: b / a,
                profile: HypothesisProfile { norm: None, dim: None, sizes: vec![x.n()] },
            }),
            (Err(e), _) | (_, Err(e)) => builder.skip(format!("t={:e}: {e}", grid[k])),
        }
    }
    builder.finish()
}
