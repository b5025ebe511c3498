//! Seeded generators for test spaces and matrices. Every generator is a
//! pure function of its parameters and seed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{to_metric_space, FiniteMetricSpace, Norm, PointCloud};
use crate::rng::CounterRng;
use crate::symmat::{self, SymMatrix, DEFAULT_PD_TOL};

const CORRELATION_ATTEMPTS: u64 = 16;

pub fn two_point(d: f64) -> Result<FiniteMetricSpace> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::input(format!("distance must be positive and finite, got {d}")));
    }
    FiniteMetricSpace::new(&[vec![0.0, d], vec![d, 0.0]])
}

/// `n` points, all pairwise distances equal to `side`.
pub fn equilateral(n: usize, side: f64) -> Result<FiniteMetricSpace> {
    if n == 0 || !(side > 0.0) || !side.is_finite() {
        return Err(Error::input("equilateral space needs n ≥ 1 and a positive side"));
    }
    let dist = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { side }).collect();
    Ok(FiniteMetricSpace::from_flat_unchecked(n, dist, None))
}

/// `n` distinct points uniform in `[0, scale]^dim`. Exact collisions are
/// resampled from the same stream.
pub fn random_pointcloud(n: usize, dim: usize, norm: Norm, scale: f64, seed: u64) -> Result<PointCloud> {
    if n == 0 || dim == 0 || !(scale > 0.0) {
        return Err(Error::input("point cloud needs n ≥ 1, dim ≥ 1 and a positive scale"));
    }
    let mut rng = CounterRng::new(seed);
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n);
    while points.len() < n {
        let p: Vec<f64> = (0..dim).map(|_| rng.uniform_in(0.0, scale)).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    PointCloud::new(dim, norm, points)
}

/// Random ℓ¹ space; always of negative type.
pub fn random_l1_space(n: usize, dim: usize, scale: f64, seed: u64) -> Result<FiniteMetricSpace> {
    to_metric_space(&random_pointcloud(n, dim, Norm::L1, scale, seed)?)
}

/// Shortest-path metric of a connected, positively weighted graph.
/// Parallel edges keep the lighter weight.
pub fn graph_metric(n: usize, edges: &[(usize, usize, f64)]) -> Result<FiniteMetricSpace> {
    if n == 0 {
        return Err(Error::input("graph needs at least one vertex"));
    }
    let mut dist = vec![f64::INFINITY; n * n];
    for i in 0..n {
        dist[i * n + i] = 0.0;
    }
    for (k, &(i, j, w)) in edges.iter().enumerate() {
        if i >= n || j >= n {
            return Err(Error::input(format!("edge {k} ({i}, {j}) references a missing vertex")));
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::input(format!("edge {k} has non-positive weight {w}")));
        }
        if i != j && w < dist[i * n + j] {
            dist[i * n + j] = w;
            dist[j * n + i] = w;
        }
    }
    shortest_path_closure(n, &mut dist);
    if let Some(k) = dist.iter().position(|d| d.is_infinite()) {
        return Err(Error::input(format!("graph is disconnected: no path between {} and {}", k / n, k % n)));
    }
    Ok(FiniteMetricSpace::from_flat_unchecked(n, dist, None))
}

/// In-place Floyd–Warshall closure of a symmetric weight matrix.
fn shortest_path_closure(n: usize, dist: &mut [f64]) {
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = dik + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                }
            }
        }
    }
}

/// Random positive definite matrix with unit diagonal: the Gram matrix of
/// `k > n` Gaussian samples, normalized to unit diagonal.
pub fn random_correlation(n: usize, seed: u64) -> Result<SymMatrix> {
    if n == 0 {
        return Err(Error::input("correlation matrix needs n ≥ 1"));
    }
    if n == 1 {
        return Ok(SymMatrix::identity(1));
    }
    let base = CounterRng::new(seed);
    for attempt in 0..CORRELATION_ATTEMPTS {
        let mut rng = base.split(attempt);
        let k = n + 1 + rng.int_in(0, 2 * n);
        let b: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| rng.normal()).collect()).collect();
        let gram = SymMatrix::from_fn(n, |i, j| (0..k).map(|r| b[r][i] * b[r][j]).sum());
        let diag = gram.diagonal();
        if diag.iter().any(|&d| !(d > 0.0)) {
            continue;
        }
        let r = SymMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { gram.get(i, j) / (diag[i] * diag[j]).sqrt() });
        if symmat::is_positive_definite(&r, DEFAULT_PD_TOL) {
            return Ok(r);
        }
    }
    Err(Error::Generation(format!("no full-rank correlation matrix of size {n} after {CORRELATION_ATTEMPTS} attempts")))
}

/// `D R D` for a random correlation `R` and diagonal `D` with entries in
/// `[1/2, 2]`.
pub fn random_spd(n: usize, seed: u64) -> Result<SymMatrix> {
    let r = random_correlation(n, seed)?;
    let mut rng = CounterRng::new(seed).split(u64::MAX);
    let d: Vec<f64> = (0..n).map(|_| rng.log_uniform(0.5, 2.0)).collect();
    Ok(SymMatrix::from_fn(n, |i, j| d[i] * r.get(i, j) * d[j]))
}

/// Returns `(d0, d1)` with `d0 = x` and `d1 ≥ d0` entrywise: each distance
/// is stretched by a random factor in `[1, stretch]` and the result is
/// closed under shortest paths to restore the triangle inequality.
///
/// The closure never drops below `d0`: any path in the stretched graph is at
/// least as long as the same path under `d0`, which is at least `d0`.
pub fn comparable_pair(
    x: &FiniteMetricSpace,
    seed: u64,
    stretch: f64,
) -> Result<(FiniteMetricSpace, FiniteMetricSpace)> {
    if !(stretch >= 1.0) || !stretch.is_finite() {
        return Err(Error::input(format!("stretch must be ≥ 1, got {stretch}")));
    }
    let n = x.n();
    let mut rng = CounterRng::new(seed);
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let f = rng.uniform_in(1.0, stretch);
            let d = x.d(i, j) * f;
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    shortest_path_closure(n, &mut dist);
    for (d, &d0) in dist.iter_mut().zip(x.flat()) {
        *d = d.max(d0);
    }
    let labels = x.labels().map(<[String]>::to_vec);
    Ok((x.clone(), FiniteMetricSpace::from_flat_unchecked(n, dist, labels)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GenKind {
    #[serde(alias = "two_point")]
    TwoPoint { d: f64 },
    #[serde(alias = "equilateral")]
    Equilateral { n: usize, side: f64 },
    #[serde(alias = "pointcloud")]
    Pointcloud {
        n: usize,
        dim: usize,
        norm: Norm,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    #[serde(alias = "graph")]
    Graph { n: usize, edges: Vec<(usize, usize, f64)> },
    #[serde(alias = "correlation")]
    Correlation { n: usize },
    /// Base space is a random ℓ¹ cloud.
    #[serde(alias = "comparable_pair")]
    ComparablePair {
        n: usize,
        dim: usize,
        #[serde(default = "default_scale")]
        scale: f64,
        stretch: f64,
    },
}

fn default_scale() -> f64 {
    1.0
}

/// Serialized generator request, e.g.
/// `{"kind": "POINTCLOUD", "params": {"n": 8, "dim": 2, "norm": "l1"}, "seed": 3}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub kind: GenKind,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generated {
    Space(FiniteMetricSpace),
    Cloud(PointCloud),
    Matrix(SymMatrix),
    Pair(FiniteMetricSpace, FiniteMetricSpace),
}

impl GenSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn generate(&self) -> Result<Generated> {
        let seed = self.seed;
        Ok(match &self.kind {
            GenKind::TwoPoint { d } => Generated::Space(two_point(*d)?),
            GenKind::Equilateral { n, side } => Generated::Space(equilateral(*n, *side)?),
            GenKind::Pointcloud { n, dim, norm, scale } => {
                Generated::Cloud(random_pointcloud(*n, *dim, *norm, *scale, seed)?)
            }
            GenKind::Graph { n, edges } => Generated::Space(graph_metric(*n, edges)?),
            GenKind::Correlation { n } => Generated::Matrix(random_correlation(*n, seed)?),
            GenKind::ComparablePair { n, dim, scale, stretch } => {
                let base = random_l1_space(*n, *dim, *scale, crate::rng::derive_seed(seed, 0, 0))?;
                let (d0, d1) = comparable_pair(&base, crate::rng::derive_seed(seed, 0, 1), *stretch)?;
                Generated::Pair(d0, d1)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnitude::magnitude;
    use crate::metric::{interpolate, validate_metric};
    use approx::assert_relative_eq;

    #[test]
    fn two_point_examples() {
        assert_eq!(two_point(1.0).unwrap().to_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_relative_eq!(
            magnitude(&two_point(1.0).unwrap()).unwrap(),
            2.0 / (1.0 + (-1f64).exp()),
            max_relative = 1e-15
        );
        let mut prev = 1.0;
        for d in [0.5, 2.0, 8.0, 32.0, 128.0] {
            let m = magnitude(&two_point(d).unwrap()).unwrap();
            assert!(m > prev);
            prev = m;
        }
        assert!(2.0 - prev < 1e-12);
        assert!(two_point(0.0).is_err());
        assert!(two_point(-1.0).is_err());
    }

    #[test]
    fn pointcloud_examples() {
        let p = random_pointcloud(1, 3, Norm::L1, 1.0, 5).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(magnitude(&to_metric_space(&p).unwrap()).unwrap(), 1.0);
        assert_eq!(
            random_pointcloud(12, 3, Norm::L2, 2.0, 99).unwrap(),
            random_pointcloud(12, 3, Norm::L2, 2.0, 99).unwrap()
        );
        for norm in [Norm::L1, Norm::L2, Norm::Linf] {
            let p = random_pointcloud(25, 4, norm, 3.0, 11).unwrap();
            assert!(p.points.iter().flatten().all(|&c| (0.0..3.0).contains(&c)));
            let x = to_metric_space(&p).unwrap();
            assert!(validate_metric(&x.to_rows(), 1e-12).unwrap().ok);
        }
    }

    #[test]
    fn graph_examples() {
        let path = graph_metric(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(path.d(0, 2), 2.0);
        let complete =
            graph_metric(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(complete, equilateral(4, 1.0).unwrap());
        let weighted = graph_metric(4, &[(0, 1, 0.5), (1, 2, 2.0), (0, 2, 3.0), (2, 3, 0.25)]).unwrap();
        assert_eq!(weighted.d(0, 2), 2.5);
        assert!(validate_metric(&weighted.to_rows(), 0.0).unwrap().ok);
        assert!(graph_metric(3, &[(0, 1, 1.0)]).is_err());
        assert!(graph_metric(2, &[(0, 1, 0.0)]).is_err());
        assert!(graph_metric(2, &[(0, 2, 1.0)]).is_err());
    }

    #[test]
    fn correlation_examples() {
        assert_eq!(random_correlation(1, 0).unwrap(), SymMatrix::identity(1));
        for seed in 0..200 {
            let n = 2 + (seed as usize % 49);
            let r = random_correlation(n, seed).unwrap();
            assert!(r.diagonal().iter().all(|&d| d == 1.0));
            assert!(symmat::is_positive_definite(&r, DEFAULT_PD_TOL));
        }
        assert_eq!(random_correlation(9, 4).unwrap(), random_correlation(9, 4).unwrap());
    }

    #[test]
    fn comparable_pair_examples() {
        let x = random_l1_space(10, 3, 2.0, 1).unwrap();
        let (d0, d1) = comparable_pair(&x, 2, 1.0).unwrap();
        assert_eq!(d0, x);
        assert_eq!(d1, x);
        for seed in 0..20 {
            let (d0, d1) = comparable_pair(&x, seed, 3.0).unwrap();
            for i in 0..10 {
                for j in 0..10 {
                    assert!(d0.d(i, j) <= d1.d(i, j));
                }
            }
            assert!(validate_metric(&d1.to_rows(), 1e-9).unwrap().ok);
            let mid = interpolate(&d0, &d1, 0.5).unwrap();
            assert!(validate_metric(&mid.to_rows(), 1e-9).unwrap().ok);
        }
        assert!(comparable_pair(&x, 0, 0.5).is_err());
    }

    #[test]
    fn genspec_json() {
        let spec = GenSpec::from_json(r#"{"kind": "TWO_POINT", "params": {"d": 2.0}}"#).unwrap();
        assert_eq!(spec.generate().unwrap(), Generated::Space(two_point(2.0).unwrap()));
        let spec = GenSpec::from_json(
            r#"{"kind": "pointcloud", "params": {"n": 5, "dim": 2, "norm": "l1", "scale": 3.0}, "seed": 8}"#,
        )
        .unwrap();
        match spec.generate().unwrap() {
            Generated::Cloud(c) => assert_eq!(c, random_pointcloud(5, 2, Norm::L1, 3.0, 8).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
        let spec = GenSpec::from_json(r#"{"kind": "GRAPH", "params": {"n": 3, "edges": [[0, 1, 1.0], [1, 2, 2.0]]}}"#)
            .unwrap();
        let back: GenSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        assert!(GenSpec::from_json(r#"{"kind": "HYPERCUBE", "params": {}}"#).is_err());
    }
}
