//! Dense symmetric matrices and the kernels every inequality check is built on:
//! Hadamard products, Cholesky-based positive-definiteness tests and solves,
//! smallest eigenvalues and Löwner-order comparisons.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative pivot threshold for [`is_positive_definite`].
pub const DEFAULT_PD_TOL: f64 = 1e-10;

/// Dense symmetric real matrix, stored row-major.
///
/// Symmetry is exact: every constructor averages the input with its transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds a matrix from `f(i, j)`, symmetrized as `(M + Mᵀ)/2`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = f(i, j);
            }
        }
        let mut m = Self { n, data };
        m.symmetrize();
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::input("matrix must have at least one row"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::input(format!("entry ({i}, {j}) is not finite")));
            }
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub(crate) fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        Self { n, data }
    }

    pub fn ones(n: usize) -> Self {
        Self { n, data: vec![1.0; n * n] }
    }

    fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        check_same_size(self, other)?;
        let data = self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect();
        Ok(Self { n: self.n, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    pub fn shift(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += c;
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub(crate) fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }
}

fn check_same_size(a: &SymMatrix, b: &SymMatrix) -> Result<()> {
    if a.n != b.n {
        return Err(Error::input(format!("size mismatch: {} vs {}", a.n, b.n)));
    }
    Ok(())
}

/// Entrywise (Hadamard) product.
pub fn hadamard(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    check_same_size(a, b)?;
    let data = a.data.iter().zip(&b.data).map(|(x, y)| x * y).collect();
    Ok(SymMatrix { n: a.n, data })
}

/// Sum of all entries, i.e. `⟨1, A 1⟩`.
pub fn ones_sum(a: &SymMatrix) -> f64 {
    a.data.iter().sum()
}

/// Lower-triangular Cholesky factor `A = L Lᵀ`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
    min_pivot: f64,
}

impl Cholesky {
    /// Factorizes `a`, failing at the first pivot `≤ threshold` (or non-finite).
    pub fn factor_with_threshold(a: &SymMatrix, threshold: f64) -> Result<Self> {
        let n = a.n;
        let mut l = vec![0.0; n * n];
        let mut min_pivot = f64::INFINITY;
        for j in 0..n {
            let mut pivot = a.get(j, j);
            for k in 0..j {
                pivot -= l[j * n + k] * l[j * n + k];
            }
            if !(pivot > threshold) || !pivot.is_finite() {
                return Err(Error::NotPositiveDefinite { row: j, pivot });
            }
            min_pivot = min_pivot.min(pivot);
            let ljj = pivot.sqrt();
            l[j * n + j] = ljj;
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                let (ri, rj) = (&l[i * n..i * n + j], &l[j * n..j * n + j]);
                for k in 0..j {
                    s -= ri[k] * rj[k];
                }
                l[i * n + j] = s / ljj;
            }
        }
        Ok(Self { n, l, min_pivot })
    }

    pub fn factor(a: &SymMatrix) -> Result<Self> {
        Self::factor_with_threshold(a, 0.0)
    }

    /// Smallest pivot `l_jj²` encountered.
    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        y
    }

    pub fn log_det(&self) -> f64 {
        (0..self.n).map(|i| 2.0 * self.l[i * self.n + i].ln()).sum()
    }
}

/// Positive definite iff Cholesky succeeds with every pivot `> tol·max(diag)`.
pub fn is_positive_definite(a: &SymMatrix, tol: f64) -> bool {
    let max_diag = a.diagonal().into_iter().fold(0.0, f64::max);
    if !(max_diag > 0.0) {
        return false;
    }
    Cholesky::factor_with_threshold(a, tol * max_diag).is_ok()
}

/// Smallest eigenvalue (symmetric QR iteration).
pub fn min_eigenvalue(a: &SymMatrix) -> f64 {
    eigenvalues(a).into_iter().fold(f64::INFINITY, f64::min)
}

pub fn eigenvalues(a: &SymMatrix) -> Vec<f64> {
    SymmetricEigen::new(a.to_dmatrix()).eigenvalues.iter().copied().collect()
}

/// Outcome of a Löwner comparison `A ≺ B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoewnerVerdict {
    pub holds: bool,
    /// Smallest eigenvalue of `B − A`.
    pub margin: f64,
}

impl LoewnerVerdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        Self { holds: margin >= -tol, margin }
    }
}

/// Tests `A ≺ B`, i.e. `B − A` positive semidefinite up to `tol`.
pub fn loewner_le(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<LoewnerVerdict> {
    let diff = b.sub(a)?;
    Ok(LoewnerVerdict::from_margin(min_eigenvalue(&diff), tol))
}

/// Solves `A x = b` for positive definite `A`, with one step of iterative
/// refinement.
pub fn spd_solve(a: &SymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.n {
        return Err(Error::input(format!("rhs has length {}, expected {}", b.len(), a.n)));
    }
    let chol = Cholesky::factor(a)?;
    Ok(refined_solve(&chol, a, b))
}

pub(crate) fn refined_solve(chol: &Cholesky, a: &SymMatrix, b: &[f64]) -> Vec<f64> {
    let mut x = chol.solve(b);
    let ax = a.mul_vec(&x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let dx = chol.solve(&r);
    for (xi, di) in x.iter_mut().zip(&dx) {
        *xi += di;
    }
    x
}

/// Inverse of a positive definite matrix via column solves, re-symmetrized.
pub fn spd_inverse(a: &SymMatrix) -> Result<SymMatrix> {
    let n = a.n;
    let chol = Cholesky::factor(a)?;
    let mut cols = Vec::with_capacity(n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        cols.push(refined_solve(&chol, a, &e));
        e[j] = 0.0;
    }
    Ok(SymMatrix::from_fn(n, |i, j| cols[j][i]))
}

/// Exact determinant and adjugate by cofactor expansion. Intended for
/// `n ≤ 4`; it shares no code with the factorization path and serves as an
/// independent oracle.
pub mod cofactor {
    pub fn det(m: &[Vec<f64>]) -> f64 {
        let n = m.len();
        match n {
            0 => 1.0,
            1 => m[0][0],
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => (0..n)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    sign * m[0][j] * det(&minor(m, 0, j))
                })
                .sum(),
        }
    }

    pub fn minor(m: &[Vec<f64>], row: usize, col: usize) -> Vec<Vec<f64>> {
        m.iter()
            .enumerate()
            .filter(|&(i, _)| i != row)
            .map(|(_, r)| r.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &v)| v).collect())
            .collect()
    }

    /// `adj(M)[i][j] = (-1)^(i+j) det(minor(M, j, i))`.
    pub fn adjugate(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = m.len();
        if n == 1 {
            return vec![vec![1.0]];
        }
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                        sign * det(&minor(m, j, i))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn inverse(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
        let d = det(m);
        if d == 0.0 {
            return None;
        }
        Some(adjugate(m).into_iter().map(|r| r.into_iter().map(|v| v / d).collect()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;
    use approx::assert_abs_diff_eq;

    fn m2(r: f64) -> SymMatrix {
        SymMatrix::from_rows(&[vec![1.0, r], vec![r, 1.0]]).unwrap()
    }

    fn random_spd(n: usize, seed: u64) -> SymMatrix {
        let mut rng = CounterRng::new(seed);
        let k = n + 3;
        let b: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| rng.normal()).collect()).collect();
        SymMatrix::from_fn(n, |i, j| (0..k).map(|r| b[r][i] * b[r][j]).sum::<f64>() / k as f64)
    }

    #[test]
    fn construction_symmetrizes() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![4.0, 1.0]]).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
        assert!(SymMatrix::from_rows(&[vec![1.0, f64::NAN], vec![0.0, 1.0]]).is_err());
        assert!(SymMatrix::from_rows(&[vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn hadamard_examples() {
        let a = random_spd(4, 1);
        let diag = hadamard(&a, &SymMatrix::identity(4)).unwrap();
        assert_eq!(diag, SymMatrix::from_diagonal(&a.diagonal()));
        let sq = hadamard(&m2(0.5), &m2(0.5)).unwrap();
        assert_eq!(sq, m2(0.25));
        assert!(hadamard(&a, &SymMatrix::identity(3)).is_err());
    }

    #[test]
    fn schur_product_preserves_pd() {
        for seed in 0..50 {
            let a = random_spd(6, seed);
            let b = random_spd(6, seed + 1000);
            assert!(min_eigenvalue(&hadamard(&a, &b).unwrap()) > 0.0);
        }
    }

    #[test]
    fn pd_examples() {
        assert!(is_positive_definite(&SymMatrix::identity(5), 0.5));
        assert!(!is_positive_definite(&SymMatrix::ones(2), DEFAULT_PD_TOL));
        assert!(is_positive_definite(&m2(0.5), DEFAULT_PD_TOL));
        assert!(!is_positive_definite(&m2(1.5), DEFAULT_PD_TOL));
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert_abs_diff_eq!(min_eigenvalue(&SymMatrix::from_diagonal(&[1.0, 3.0])), 1.0, epsilon = 1e-14);
        for r in [-0.9, -0.3, 0.0, 0.4, 0.99] {
            assert_abs_diff_eq!(min_eigenvalue(&m2(r)), 1.0 - f64::abs(r), epsilon = 1e-14);
        }
        let a = random_spd(7, 3);
        let base = min_eigenvalue(&a);
        assert_abs_diff_eq!(min_eigenvalue(&a.shift(2.5)), base + 2.5, epsilon = 1e-12);
    }

    #[test]
    fn loewner_examples() {
        let i = SymMatrix::identity(3);
        let v = loewner_le(&i, &i.scale(2.0), 1e-12).unwrap();
        assert!(v.holds);
        assert_abs_diff_eq!(v.margin, 1.0, epsilon = 1e-14);
        let v = loewner_le(&i.scale(2.0), &i, 1e-12).unwrap();
        assert!(!v.holds);
        assert_abs_diff_eq!(v.margin, -1.0, epsilon = 1e-14);
        let a = random_spd(5, 9);
        assert_eq!(loewner_le(&a, &a, 0.0).unwrap().margin, 0.0);
        assert!(loewner_le(&a, &i, 0.0).is_err());
    }

    #[test]
    fn spd_solve_examples() {
        let b = [0.3, -1.0, 2.0];
        assert_eq!(spd_solve(&SymMatrix::identity(3), &b).unwrap(), b.to_vec());
        let x = spd_solve(&m2(0.5), &[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(x[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 2.0 / 3.0, epsilon = 1e-15);
        assert!(matches!(spd_solve(&SymMatrix::ones(2), &[1.0, 1.0]), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn spd_solve_relative_residual() {
        let mut rng = CounterRng::new(77);
        for n in [1, 5, 20, 60] {
            let a = random_spd(n, n as u64);
            let b: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
            let x = spd_solve(&a, &b).unwrap();
            let ax = a.mul_vec(&x);
            let res = ax.iter().zip(&b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
            let norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(res / norm <= 1e-10, "n={n} residual {}", res / norm);
        }
    }

    #[test]
    fn spd_inverse_examples() {
        assert_eq!(spd_inverse(&SymMatrix::identity(4)).unwrap(), SymMatrix::identity(4));
        let inv = spd_inverse(&SymMatrix::from_diagonal(&[2.0, 4.0])).unwrap();
        assert_eq!(inv, SymMatrix::from_diagonal(&[0.5, 0.25]));
    }

    #[test]
    fn spd_inverse_residual_up_to_200() {
        for n in [2, 17, 80, 200] {
            let a = random_spd(n, 100 + n as u64);
            let inv = spd_inverse(&a).unwrap();
            let mut worst: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let v: f64 = (0..n).map(|k| a.get(i, k) * inv.get(k, j)).sum();
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((v - target).abs());
                }
            }
            assert!(worst <= 1e-9, "n={n} worst {worst}");
        }
    }

    #[test]
    fn ones_sum_examples() {
        assert_eq!(ones_sum(&SymMatrix::ones(3)), 9.0);
        assert_eq!(ones_sum(&SymMatrix::identity(6)), 6.0);
    }

    #[test]
    fn cofactor_oracle_agrees_with_solve() {
        for seed in 0..40 {
            let n = 1 + (seed as usize % 4);
            let a = random_spd(n, seed);
            let inv = cofactor::inverse(&a.to_rows()).unwrap();
            let fast = spd_inverse(&a).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_abs_diff_eq!(inv[i][j], fast.get(i, j), epsilon = 1e-10);
                }
            }
        }
        assert_eq!(cofactor::det(&[vec![2.0, 1.0], vec![1.0, 1.0]]), 1.0);
    }
}
