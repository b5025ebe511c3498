//! Finite metric spaces, point clouds, and the metric transforms used
//! throughout: rescaling, exponential interpolation, sum metrics, tensor
//! (ℓ¹) products and Minkowski combinations.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default validation tolerance, relative to the largest distance.
pub const DEFAULT_METRIC_TOL: f64 = 1e-9;
/// Absolute slack tolerated on `d0 ≤ d1` before [`interpolate`] rejects.
pub const DOMINATION_TOL: f64 = 1e-12;
/// Default cap on the number of points in a tensor product.
pub const DEFAULT_TENSOR_CAP: usize = 4096;

/// `n` points with a validated distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl FiniteMetricSpace {
    /// Validates `rows` at [`DEFAULT_METRIC_TOL`] and wraps them.
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        Self::with_tolerance(rows, DEFAULT_METRIC_TOL)
    }

    pub fn with_tolerance(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let report = validate_metric(rows, tol)?;
        if !report.ok {
            return Err(Error::input(format!("not a metric: {}", report.summary())));
        }
        let n = rows.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = 0.5 * (rows[i][j] + rows[j][i]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(Self { n, dist, labels: None })
    }

    /// Caller guarantees the metric axioms (e.g. transforms of valid spaces).
    pub(crate) fn from_flat_unchecked(n: usize, dist: Vec<f64>, labels: Option<Vec<String>>) -> Self {
        debug_assert_eq!(dist.len(), n * n);
        Self { n, dist, labels }
    }

    pub fn single_point() -> Self {
        Self { n: 1, dist: vec![0.0], labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::input(format!("{} labels for {} points", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.dist[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    pub(crate) fn flat(&self) -> &[f64] {
        &self.dist
    }

    pub fn max_distance(&self) -> f64 {
        self.dist.iter().fold(0.0, |m, &d| m.max(d))
    }

    /// Smallest off-diagonal distance (`+∞` for a single point).
    pub fn min_distance(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                m = m.min(self.d(i, j));
            }
        }
        m
    }

    /// Relabels so that new point `k` is old point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::input("not a permutation of the point indices"));
        }
        let n = self.n;
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = self.d(perm[i], perm[j]);
            }
        }
        let labels = self.labels.as_ref().map(|l| perm.iter().map(|&p| l[p].clone()).collect());
        Ok(Self { n, dist, labels })
    }
}

/// Result of checking the metric axioms on a square matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    /// Largest `d(i,k) − d(i,j) − d(j,k)` over ordered triples (0 if none positive).
    pub worst_triangle_violation: f64,
    pub worst_asymmetry: f64,
    pub worst_diagonal: f64,
    /// Off-diagonal pairs with `d(i,j) ≤ 0`.
    pub nonpositive_pairs: Vec<(usize, usize)>,
    /// Worst offending pair (asymmetry) and triple (triangle), when nonzero.
    pub offending_indices: Vec<Vec<usize>>,
}

impl ValidationReport {
    pub fn summary(&self) -> String {
        format!(
            "triangle violation {:e}, asymmetry {:e}, diagonal {:e}, {} non-positive pairs",
            self.worst_triangle_violation,
            self.worst_asymmetry,
            self.worst_diagonal,
            self.nonpositive_pairs.len()
        )
    }
}

/// Checks the metric axioms up to `tol`.
/// `tol` is relative to the largest entry.
pub fn validate_metric(dist: &[Vec<f64>], tol: f64) -> Result<ValidationReport> {
    let n = dist.len();
    if n == 0 {
        return Err(Error::input("distance matrix is empty"));
    }
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            return Err(Error::input(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("entry ({i}, {j}) is not finite")));
        }
    }
    let scale = dist.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = tol * if scale > 0.0 { scale } else { 1.0 };

    let mut worst_asymmetry = 0.0;
    let mut worst_pair = None;
    let mut worst_diagonal: f64 = 0.0;
    let mut nonpositive_pairs = Vec::new();
    for i in 0..n {
        worst_diagonal = worst_diagonal.max(dist[i][i].abs());
        for j in (i + 1)..n {
            let asym = (dist[i][j] - dist[j][i]).abs();
            if asym > worst_asymmetry {
                worst_asymmetry = asym;
                worst_pair = Some(vec![i, j]);
            }
            if dist[i][j] <= 0.0 || dist[j][i] <= 0.0 {
                nonpositive_pairs.push((i, j));
            }
        }
    }

    let mut worst_triangle = 0.0;
    let mut worst_triple = None;
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let dij = dist[i][j];
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let excess = dist[i][k] - dij - dist[j][k];
                if excess > worst_triangle {
                    worst_triangle = excess;
                    worst_triple = Some(vec![i, j, k]);
                }
            }
        }
    }

    let ok = worst_asymmetry <= threshold
        && worst_triangle <= threshold
        && worst_diagonal <= threshold
        && nonpositive_pairs.is_empty();
    Ok(ValidationReport {
        ok,
        worst_triangle_violation: worst_triangle,
        worst_asymmetry,
        worst_diagonal,
        nonpositive_pairs,
        offending_indices: worst_pair.into_iter().chain(worst_triple).collect(),
    })
}

/// `(X, t·d)`.
pub fn rescale(x: &FiniteMetricSpace, t: f64) -> Result<FiniteMetricSpace> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::input(format!("scale factor must be positive and finite, got {t}")));
    }
    let dist = x.dist.iter().map(|&d| t * d).collect();
    Ok(FiniteMetricSpace::from_flat_unchecked(x.n, dist, x.labels.clone()))
}

fn check_same_carrier(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<()> {
    if a.n != b.n {
        return Err(Error::input(format!("spaces have {} and {} points", a.n, b.n)));
    }
    if let (Some(la), Some(lb)) = (&a.labels, &b.labels) {
        if la != lb {
            return Err(Error::input("spaces carry different labels"));
        }
    }
    Ok(())
}

/// The metric `d_t = −log[(1−t)e^{−d0} + t e^{−d1}]` between two comparable
/// metrics `d0 ≤ d1` on the same set. Its similarity matrix is the convex
/// mix `(1−t)Z0 + tZ1`. Endpoints return the inputs.
pub fn interpolate(x0: &FiniteMetricSpace, x1: &FiniteMetricSpace, t: f64) -> Result<FiniteMetricSpace> {
    check_same_carrier(x0, x1)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::input(format!("interpolation parameter {t} outside [0, 1]")));
    }
    let n = x0.n;
    for i in 0..n {
        for j in 0..n {
            let excess = x0.d(i, j) - x1.d(i, j);
            if excess > DOMINATION_TOL {
                return Err(Error::Domination { i, j, excess });
            }
        }
    }
    if t == 0.0 {
        return Ok(x0.clone());
    }
    if t == 1.0 {
        return Ok(x1.clone());
    }
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (d0, d1) = (x0.d(i, j), x1.d(i, j).max(x0.d(i, j)));
            let dt = if d0 == d1 {
                d0
            } else {
                let s = (1.0 - t) * (-d0).exp() + t * (-d1).exp();
                (-s.ln()).clamp(d0, d1)
            };
            dist[i * n + j] = dt;
            dist[j * n + i] = dt;
        }
    }
    let labels = x0.labels.clone().or_else(|| x1.labels.clone());
    let out = FiniteMetricSpace::from_flat_unchecked(n, dist, labels);
    // Both inputs satisfy the triangle inequality, and so does every mix.
    debug_assert!(validate_metric(&out.to_rows(), DEFAULT_METRIC_TOL).map(|r| r.ok).unwrap_or(false));
    Ok(out)
}

/// `d1 + d2` on a shared carrier.
pub fn sum_metric(d1: &FiniteMetricSpace, d2: &FiniteMetricSpace) -> Result<FiniteMetricSpace> {
    check_same_carrier(d1, d2)?;
    let dist = d1.dist.iter().zip(&d2.dist).map(|(a, b)| a + b).collect();
    let labels = d1.labels.clone().or_else(|| d2.labels.clone());
    Ok(FiniteMetricSpace::from_flat_unchecked(d1.n, dist, labels))
}

/// ℓ¹ product `A ⊗ B`: carrier `A × B` in lexicographic order, distance
/// `d(a,a') + d(b,b')`.
pub fn tensor_product(a: &FiniteMetricSpace, b: &FiniteMetricSpace, cap: usize) -> Result<FiniteMetricSpace> {
    let points = a.n.saturating_mul(b.n);
    if points > cap {
        return Err(Error::Size { points, cap });
    }
    let mut dist = vec![0.0; points * points];
    for ia in 0..a.n {
        for ib in 0..b.n {
            let row = ia * b.n + ib;
            for ja in 0..a.n {
                let da = a.d(ia, ja);
                let base = row * points + ja * b.n;
                for jb in 0..b.n {
                    dist[base + jb] = da + b.d(ib, jb);
                }
            }
        }
    }
    let labels = match (&a.labels, &b.labels) {
        (Some(la), Some(lb)) => Some(la.iter().flat_map(|x| lb.iter().map(move |y| format!("({x},{y})"))).collect()),
        _ => None,
    };
    Ok(FiniteMetricSpace::from_flat_unchecked(points, dist, labels))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub fn distance(self, x: &[f64], y: &[f64]) -> f64 {
        let diffs = x.iter().zip(y).map(|(a, b)| (a - b).abs());
        match self {
            Norm::L1 => diffs.sum(),
            Norm::L2 => diffs.map(|v| v * v).sum::<f64>().sqrt(),
            Norm::Linf => diffs.fold(0.0, f64::max),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" => Ok(Norm::Linf),
            other => Err(Error::input(format!("unknown norm {other:?} (expected l1, l2 or linf)"))),
        }
    }
}

/// Finitely many points of `R^dim` under a chosen norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub dim: usize,
    pub norm: Norm,
    pub points: Vec<Vec<f64>>,
}

impl PointCloud {
    /// Checks dimensions and finiteness. Duplicates are allowed here and
    /// rejected by [`to_metric_space`].
    pub fn new(dim: usize, norm: Norm, points: Vec<Vec<f64>>) -> Result<Self> {
        let cloud = Self { dim, norm, points };
        cloud.check()?;
        Ok(cloud)
    }

    pub fn check(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::input("point cloud dimension must be positive"));
        }
        if self.points.is_empty() {
            return Err(Error::input("point cloud is empty"));
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != self.dim {
                return Err(Error::input(format!("point {i} has {} coordinates, expected {}", p.len(), self.dim)));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::input(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cloud: PointCloud = serde_json::from_str(s)?;
        cloud.check()?;
        Ok(cloud)
    }
}

fn coordinate_key(p: &[f64]) -> Vec<u64> {
    // +0.0 folds -0.0 into 0.0 so equality is numeric, not bitwise.
    p.iter().map(|&v| (v + 0.0).to_bits()).collect()
}

/// Pairwise distances under the cloud's norm.
pub fn to_metric_space(p: &PointCloud) -> Result<FiniteMetricSpace> {
    p.check()?;
    let mut seen = HashSet::new();
    for (i, pt) in p.points.iter().enumerate() {
        if !seen.insert(coordinate_key(pt)) {
            return Err(Error::input(format!("point {i} duplicates an earlier point")));
        }
    }
    let n = p.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = p.norm.distance(&p.points[i], &p.points[j]);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    Ok(FiniteMetricSpace::from_flat_unchecked(n, dist, None))
}

/// `{λx + (1−λ)y}` with exact duplicates removed, in first-appearance order
/// over `x` outer, `y` inner.
pub fn minkowski_combine(x: &PointCloud, y: &PointCloud, lambda: f64) -> Result<PointCloud> {
    if x.dim != y.dim {
        return Err(Error::input(format!("dimensions differ: {} vs {}", x.dim, y.dim)));
    }
    if x.norm != y.norm {
        return Err(Error::input("point clouds use different norms"));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::input(format!("lambda {lambda} outside [0, 1]")));
    }
    let mut seen = HashSet::new();
    let mut points = Vec::new();
    for px in &x.points {
        for py in &y.points {
            let p: Vec<f64> = px.iter().zip(py).map(|(a, b)| lambda * a + (1.0 - lambda) * b + 0.0).collect();
            if seen.insert(coordinate_key(&p)) {
                points.push(p);
            }
        }
    }
    Ok(PointCloud { dim: x.dim, norm: x.norm, points })
}

/// Distance-matrix CSV: square numeric matrix with an optional header row
/// of labels.
pub mod csv_io {
    use std::io::{Read, Write};

    use super::*;

    /// Optional header labels and the numeric rows.
    pub type LabeledRows = (Option<Vec<String>>, Vec<Vec<f64>>);

    pub fn read_matrix<R: Read>(reader: R) -> Result<LabeledRows> {
        let mut rdr =
            csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(reader);
        let mut labels: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(row) => rows.push(row),
                Err(_) if line == 0 => labels = Some(record.iter().map(str::to_owned).collect()),
                Err(_) => {
                    let col = record.iter().position(|f| f.parse::<f64>().is_err()).unwrap_or(0);
                    return Err(Error::input(format!(
                        "row {}, column {}: {:?} is not a number",
                        line + 1,
                        col + 1,
                        record.get(col).unwrap_or("")
                    )));
                }
            }
        }
        if rows.is_empty() {
            return Err(Error::input("no numeric rows"));
        }
        let n = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            let line = i + 1 + usize::from(labels.is_some());
            return Err(Error::input(format!("row {line} has {} fields, expected {n} for a square matrix", row.len())));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::input(format!("header has {} labels, expected {n}", l.len())));
            }
        }
        Ok((labels, rows))
    }

    pub fn read_space<R: Read>(reader: R) -> Result<FiniteMetricSpace> {
        let (labels, rows) = read_matrix(reader)?;
        let space = FiniteMetricSpace::new(&rows)?;
        match labels {
            Some(l) => space.with_labels(l),
            None => Ok(space),
        }
    }

    pub fn write_matrix<W: Write>(writer: W, labels: Option<&[String]>, rows: &[Vec<f64>]) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        if let Some(l) = labels {
            wtr.write_record(l)?;
        }
        for row in rows {
            wtr.write_record(row.iter().map(|v| format!("{v:?}")))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn write_space<W: Write>(writer: W, space: &FiniteMetricSpace) -> Result<()> {
        write_matrix(writer, space.labels(), &space.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_point(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::new(&[vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    fn equilateral(side: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::new(&[vec![0.0, side, side], vec![side, 0.0, side], vec![side, side, 0.0]]).unwrap()
    }

    #[test]
    fn validate_examples() {
        let r = validate_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1e-12).unwrap();
        assert!(r.ok);

        let r = validate_metric(&[vec![0.0, 1.0], vec![2.0, 0.0]], 1e-12).unwrap();
        assert!(!r.ok);
        assert_eq!(r.worst_asymmetry, 1.0);

        let r = validate_metric(&[vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]], 1e-12).unwrap();
        assert!(!r.ok);
        assert_eq!(r.worst_triangle_violation, 1.0);
        assert_eq!(r.offending_indices, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn validate_rejects_bad_shapes_and_values() {
        assert!(validate_metric(&[vec![0.0, 1.0]], 1e-9).is_err());
        assert!(validate_metric(&[vec![0.0, f64::INFINITY], vec![1.0, 0.0]], 1e-9).is_err());
        let r = validate_metric(&[vec![0.0, 0.0], vec![0.0, 0.0]], 1e-9).unwrap();
        assert!(!r.ok);
        assert_eq!(r.nonpositive_pairs, vec![(0, 1)]);
        let r = validate_metric(&[vec![0.5, 1.0], vec![1.0, 0.0]], 1e-9).unwrap();
        assert!(!r.ok);
    }

    #[test]
    fn rescale_examples() {
        let x = equilateral(1.0).with_labels(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        assert_eq!(rescale(&x, 1.0).unwrap(), x);
        assert_eq!(rescale(&two_point(1.0), 3.0).unwrap(), two_point(3.0));
        let half = rescale(&x, 0.5).unwrap();
        assert_eq!(half.to_rows(), equilateral(0.5).to_rows());
        assert_eq!(half.labels(), x.labels());
        assert!(validate_metric(&half.to_rows(), 1e-12).unwrap().ok);
        assert!(rescale(&x, 0.0).is_err());
        assert!(rescale(&x, -1.0).is_err());
    }

    #[test]
    fn interpolate_examples() {
        let x0 = two_point(2f64.ln());
        let x1 = two_point(4f64.ln());
        assert_eq!(interpolate(&x0, &x1, 0.0).unwrap(), x0);
        assert_eq!(interpolate(&x0, &x1, 1.0).unwrap(), x1);
        let mid = interpolate(&x0, &x1, 0.5).unwrap();
        assert_relative_eq!(mid.d(0, 1), (8.0f64 / 3.0).ln(), max_relative = 1e-15);
        assert_relative_eq!((-mid.d(0, 1)).exp(), 0.375, max_relative = 1e-15);
        for t in [0.1, 0.5, 0.9] {
            assert_eq!(interpolate(&x0, &x0, t).unwrap(), x0);
        }
    }

    #[test]
    fn interpolate_errors() {
        let x0 = two_point(1.0);
        assert!(matches!(interpolate(&two_point(2.0), &x0, 0.5), Err(Error::Domination { i: 0, j: 1, .. })));
        // Rounding noise below the tolerance is clamped.
        let noisy = two_point(1.0 - 1e-13);
        let mid = interpolate(&x0, &noisy, 0.5).unwrap();
        assert_eq!(mid.d(0, 1), 1.0);
        assert!(interpolate(&x0, &equilateral(1.0), 0.5).is_err());
        assert!(interpolate(&x0, &x0, 1.5).is_err());
    }

    #[test]
    fn sum_metric_examples() {
        let x = equilateral(1.5);
        assert_eq!(sum_metric(&x, &x).unwrap(), rescale(&x, 2.0).unwrap());
        let zero = FiniteMetricSpace::new(&[vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]]);
        assert!(matches!(zero, Err(Error::Input(_))));
        let a = FiniteMetricSpace::new(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.5], vec![2.0, 1.5, 0.0]]).unwrap();
        let s = sum_metric(&a, &x).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s.d(i, j), a.d(i, j) + x.d(i, j));
            }
        }
        assert!(validate_metric(&s.to_rows(), 1e-12).unwrap().ok);
        assert!(sum_metric(&a, &two_point(1.0)).is_err());
    }

    #[test]
    fn tensor_product_examples() {
        let b = equilateral(0.7);
        let p = tensor_product(&FiniteMetricSpace::single_point(), &b, DEFAULT_TENSOR_CAP).unwrap();
        assert_eq!(p.to_rows(), b.to_rows());

        let (s, t, d) = (0.3, 1.1, 2.0);
        let p = tensor_product(&two_point(s * d), &two_point(t * d), DEFAULT_TENSOR_CAP).unwrap();
        // Diagonal points (0,0) and (1,1) are indices 0 and 3.
        assert_relative_eq!(p.d(0, 3), (s + t) * d, max_relative = 1e-15);
        assert!(validate_metric(&p.to_rows(), 1e-12).unwrap().ok);

        assert!(matches!(
            tensor_product(&equilateral(1.0), &equilateral(1.0), 8),
            Err(Error::Size { points: 9, cap: 8 })
        ));
    }

    #[test]
    fn minkowski_examples() {
        let x = PointCloud::new(1, Norm::L1, vec![vec![0.0], vec![1.0]]).unwrap();
        let y = PointCloud::new(1, Norm::L1, vec![vec![0.0], vec![2.0]]).unwrap();
        assert_eq!(minkowski_combine(&x, &y, 1.0).unwrap(), x);
        assert_eq!(minkowski_combine(&x, &y, 0.0).unwrap(), y);
        let mut pts: Vec<f64> = minkowski_combine(&x, &y, 0.5).unwrap().points.into_iter().map(|p| p[0]).collect();
        pts.sort_by(f64::total_cmp);
        assert_eq!(pts, vec![0.0, 0.5, 1.0, 1.5]);

        let x2 = PointCloud::new(2, Norm::L2, vec![vec![1.0, -2.0], vec![3.0, 4.0]]).unwrap();
        let origin = PointCloud::new(2, Norm::L2, vec![vec![0.0, 0.0]]).unwrap();
        let half = minkowski_combine(&x2, &origin, 0.5).unwrap();
        assert_eq!(half.points, vec![vec![0.5, -1.0], vec![1.5, 2.0]]);

        assert!(minkowski_combine(&x, &x2, 0.5).is_err());
    }

    #[test]
    fn to_metric_space_examples() {
        let p = PointCloud::new(1, Norm::L1, vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(to_metric_space(&p).unwrap(), two_point(1.0));
        let p = PointCloud::new(2, Norm::L1, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let x = to_metric_space(&p).unwrap();
        assert_eq!((x.d(0, 1), x.d(0, 2), x.d(1, 2)), (1.0, 1.0, 2.0));
        let dup = PointCloud::new(1, Norm::L2, vec![vec![0.0], vec![-0.0]]).unwrap();
        assert!(to_metric_space(&dup).is_err());
    }

    #[test]
    fn point_cloud_json() {
        let p = PointCloud::from_json(r#"{"dim": 2, "norm": "linf", "points": [[0, 0], [1, 2]]}"#).unwrap();
        assert_eq!(p.norm, Norm::Linf);
        assert_eq!(to_metric_space(&p).unwrap().d(0, 1), 2.0);
        assert!(PointCloud::from_json(r#"{"dim": 2, "norm": "l3", "points": [[0, 0]]}"#).is_err());
        assert!(PointCloud::from_json(r#"{"dim": 2, "norm": "l1", "points": [[0]]}"#).is_err());
    }

    #[test]
    fn csv_roundtrip_with_labels() {
        let text = "a,b,c\n0,1,2\n1,0,1.5\n2,1.5,0\n";
        let x = csv_io::read_space(text.as_bytes()).unwrap();
        assert_eq!(x.labels().unwrap(), &["a", "b", "c"]);
        let mut out = Vec::new();
        csv_io::write_space(&mut out, &x).unwrap();
        assert_eq!(csv_io::read_space(out.as_slice()).unwrap(), x);
    }

    #[test]
    fn csv_errors_name_the_row() {
        let err = csv_io::read_space("0,1\n1,x\n".as_bytes()).unwrap_err().to_string();
        assert!(err.contains("row 2"), "{err}");
        let err = csv_io::read_space("0,1,2\n1,0\n".as_bytes()).unwrap_err().to_string();
        assert!(err.contains("row"), "{err}");
    }

    #[test]
    fn permutation_relabels() {
        let x = FiniteMetricSpace::new(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.5], vec![2.0, 1.5, 0.0]])
            .unwrap()
            .with_labels(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let y = x.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(y.d(0, 1), x.d(2, 0));
        assert_eq!(y.labels().unwrap()[0], "c");
        assert!(x.permuted(&[0, 0, 1]).is_err());
    }
}
