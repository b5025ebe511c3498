//! Magnitude of finite metric spaces through the zeta matrix, with
//! definiteness classification on a scale grid and magnitude-function sweeps.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::symmat::{self, cofactor, Cholesky, SymMatrix, DEFAULT_PD_TOL};

/// Default bound on `‖Zw − 1‖_∞` for accepting a weighting.
pub const DEFAULT_WEIGHTING_TOL: f64 = 1e-8;
/// Weights at or above this are "non-negative" for the positively-weighted test.
pub const POSITIVE_WEIGHT_TOL: f64 = 1e-10;
/// Exponents beyond this underflow; the similarity is clamped to 0.
pub const UNDERFLOW_EXPONENT: f64 = 700.0;
/// Smallest determinant accepted by the cofactor oracle.
pub const SINGULAR_DET: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WeightingMethod {
    SpdSolve,
    MinNorm,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeResult {
    pub magnitude: f64,
    pub weighting: Vec<f64>,
    /// `‖Z w − 1‖_∞`.
    pub residual: f64,
    pub method: WeightingMethod,
}

#[inline]
fn similarity(d: f64) -> f64 {
    if d > UNDERFLOW_EXPONENT {
        0.0
    } else {
        (-d).exp()
    }
}

/// `Z_X = (e^{−d(i,j)})`.
pub fn zeta_matrix(x: &FiniteMetricSpace) -> SymMatrix {
    SymMatrix::from_fn(x.n(), |i, j| similarity(x.d(i, j)))
}

/// Zeta matrix of `tX` without materializing the rescaled space.
pub fn scaled_zeta(x: &FiniteMetricSpace, t: f64) -> SymMatrix {
    SymMatrix::from_fn(x.n(), |i, j| similarity(t * x.d(i, j)))
}

fn residual_inf(z: &SymMatrix, w: &[f64]) -> f64 {
    z.mul_vec(w).iter().fold(0.0, |m, v| m.max((v - 1.0).abs()))
}

/// Weighting of a given similarity matrix: Cholesky when positive definite,
/// otherwise the minimum-norm least-squares solution, accepted iff its
/// residual is within `tol`.
pub fn weighting_of_zeta(z: &SymMatrix, tol: f64) -> Result<MagnitudeResult> {
    let n = z.n();
    let ones = vec![1.0; n];
    let max_diag = z.diagonal().into_iter().fold(0.0, f64::max);
    if let Ok(chol) = Cholesky::factor_with_threshold(z, DEFAULT_PD_TOL * max_diag) {
        let w = symmat::refined_solve(&chol, z, &ones);
        let residual = residual_inf(z, &w);
        if residual <= tol {
            return Ok(MagnitudeResult {
                magnitude: w.iter().sum(),
                weighting: w,
                residual,
                method: WeightingMethod::SpdSolve,
            });
        }
    }
    let svd = z.to_dmatrix().svd(true, true);
    let cutoff = f64::EPSILON * n as f64 * svd.singular_values.max();
    let w = svd
        .solve(&DVector::from_element(n, 1.0), cutoff)
        .map_err(|e| Error::input(format!("least-squares solve failed: {e}")))?;
    let w: Vec<f64> = w.iter().copied().collect();
    let residual = residual_inf(z, &w);
    if !(residual <= tol) {
        return Err(Error::NoWeighting { residual, tol });
    }
    Ok(MagnitudeResult { magnitude: w.iter().sum(), weighting: w, residual, method: WeightingMethod::MinNorm })
}

pub fn weighting(x: &FiniteMetricSpace, tol: f64) -> Result<MagnitudeResult> {
    weighting_of_zeta(&zeta_matrix(x), tol)
}

/// Sum of the entries of any weighting.
pub fn magnitude(x: &FiniteMetricSpace) -> Result<f64> {
    Ok(weighting(x, DEFAULT_WEIGHTING_TOL)?.magnitude)
}

/// `Mag(tX)`.
pub fn magnitude_at(x: &FiniteMetricSpace, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::input(format!("scale must be positive, got {t}")));
    }
    Ok(weighting_of_zeta(&scaled_zeta(x, t), DEFAULT_WEIGHTING_TOL)?.magnitude)
}

pub fn magnitude_of_zeta(z: &SymMatrix) -> Result<f64> {
    Ok(weighting_of_zeta(z, DEFAULT_WEIGHTING_TOL)?.magnitude)
}

/// `⟨1, adj(Z) 1⟩ / det Z` by exact cofactor expansion, for `n ≤ 4`.
pub fn magnitude_bruteforce(x: &FiniteMetricSpace) -> Result<f64> {
    Ok(weighting_bruteforce(x)?.magnitude)
}

pub fn weighting_bruteforce(x: &FiniteMetricSpace) -> Result<MagnitudeResult> {
    if x.n() > 4 {
        return Err(Error::input(format!("cofactor oracle limited to 4 points, got {}", x.n())));
    }
    let z = zeta_matrix(x);
    let rows = z.to_rows();
    let det = cofactor::det(&rows);
    if det.abs() < SINGULAR_DET {
        return Err(Error::SingularZeta(det));
    }
    let adj = cofactor::adjugate(&rows);
    let w: Vec<f64> = adj.iter().map(|r| r.iter().sum::<f64>() / det).collect();
    let residual = residual_inf(&z, &w);
    Ok(MagnitudeResult { magnitude: w.iter().sum(), weighting: w, residual, method: WeightingMethod::BruteForce })
}

/// 41 scales `2^k`, `k = −10, −9.5, …, 10`.
pub fn default_grid() -> Vec<f64> {
    log_grid(2f64.powi(-10), 2f64.powi(10), 41)
}

/// `count` log-spaced scales in `[lo, hi]`, computed as `2^(a + k·step)`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log2(), hi.log2());
            let step = (b - a) / (count - 1) as f64;
            (0..count).map(|k| 2f64.powf(a + step * k as f64)).collect()
        }
    }
}

pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count).map(|k| lo + step * k as f64).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceClassification {
    pub positively_weighted: bool,
    pub witness_weighting: Option<Vec<f64>>,
    pub positive_definite: bool,
    /// Positive definite at every scale of `grid`; a finite surrogate for
    /// "positive definite at every scale".
    pub stably_positive_definite_on_grid: bool,
    pub grid: Vec<f64>,
    /// Scales at which the zeta matrix failed the definiteness test.
    pub failing_scales: Vec<f64>,
}

/// Classifies `x`. `tol` is the relative pivot threshold of the
/// definiteness test.
///
/// The positively-weighted witness is the Cholesky weighting when `Z` is
/// positive definite (then unique) and the minimum-norm weighting otherwise.
pub fn classify(x: &FiniteMetricSpace, grid: &[f64], tol: f64) -> Result<SpaceClassification> {
    if grid.is_empty() || grid.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::input("scale grid must be nonempty and positive"));
    }
    let z = zeta_matrix(x);
    let positive_definite = symmat::is_positive_definite(&z, tol);
    let witness = weighting_of_zeta(&z, DEFAULT_WEIGHTING_TOL).ok().map(|r| r.weighting);
    let positively_weighted = witness.as_ref().is_some_and(|w| w.iter().all(|&v| v >= -POSITIVE_WEIGHT_TOL));
    let failing_scales: Vec<f64> =
        grid.iter().copied().filter(|&t| !symmat::is_positive_definite(&scaled_zeta(x, t), tol)).collect();
    Ok(SpaceClassification {
        positively_weighted,
        witness_weighting: if positively_weighted { witness } else { None },
        positive_definite,
        stably_positive_definite_on_grid: failing_scales.is_empty(),
        grid: grid.to_vec(),
        failing_scales,
    })
}

/// `t ↦ Mag(tX)` sampled on a grid. Scales at which no weighting exists are
/// gaps (`None`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeCurve {
    pub scales: Vec<f64>,
    pub values: Vec<Option<f64>>,
    pub space_size: usize,
}

impl MagnitudeCurve {
    /// CSV with header `t,magnitude`; gaps are written as `NaN`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,magnitude\n");
        for (t, v) in self.scales.iter().zip(&self.values) {
            match v {
                Some(m) => out.push_str(&format!("{t:?},{m:?}\n")),
                None => out.push_str(&format!("{t:?},NaN\n")),
            }
        }
        out
    }
}

/// Grid points are independent, so they may be evaluated in parallel; the
/// curve is assembled in grid order either way.
pub fn magnitude_function(x: &FiniteMetricSpace, grid: &[f64]) -> MagnitudeCurve {
    let values = crate::par::map_indexed(grid.len(), |k| magnitude_at(x, grid[k]).ok());
    MagnitudeCurve { scales: grid.to_vec(), values, space_size: x.n() }
}

/// Source of finite subsets of a fixed compact space.
pub trait FiniteSampler {
    fn sample(&self, size: usize) -> Result<FiniteMetricSpace>;
}

impl<F> FiniteSampler for F
where
    F: Fn(usize) -> Result<FiniteMetricSpace>,
{
    fn sample(&self, size: usize) -> Result<FiniteMetricSpace> {
        self(size)
    }
}

/// Uniform grid of `size` points on `[lo, hi]` ⊂ ℝ.
#[derive(Clone, Copy, Debug)]
pub struct IntervalGrid {
    pub lo: f64,
    pub hi: f64,
}

impl FiniteSampler for IntervalGrid {
    fn sample(&self, size: usize) -> Result<FiniteMetricSpace> {
        if size == 0 || !(self.hi > self.lo) {
            return Err(Error::input("interval grid needs size ≥ 1 and hi > lo"));
        }
        let pts = if size == 1 { vec![self.lo] } else { linear_grid(self.lo, self.hi, size) };
        let n = pts.len();
        let dist = (0..n * n).map(|k| (pts[k / n] - pts[k % n]).abs()).collect();
        Ok(FiniteMetricSpace::from_flat_unchecked(n, dist, None))
    }
}

/// Magnitudes of the sampler's subsets at each size; their supremum
/// approximates the magnitude of the compact space.
pub fn approximate_compact_magnitude(sampler: &dyn FiniteSampler, sizes: &[usize]) -> Result<Vec<(usize, f64)>> {
    sizes
        .iter()
        .map(|&size| {
            let x = sampler.sample(size)?;
            let z = zeta_matrix(&x);
            if !symmat::is_positive_definite(&z, DEFAULT_PD_TOL) {
                return Err(Error::SubsetNotPositiveDefinite { size });
            }
            Ok((size, magnitude_of_zeta(&z)?))
        })
        .collect()
}

/// Closed form for finite subsets of the real line:
/// `Mag = 1 + Σ tanh(g/2)` over consecutive gaps `g`.
pub fn magnitude_on_line(points: &[f64]) -> f64 {
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    1.0 + sorted.windows(2).map(|w| ((w[1] - w[0]) / 2.0).tanh()).sum::<f64>()
}
