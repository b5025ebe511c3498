//! Single-instance checks of the matrix inequalities and the magnitude
//! bounds derived from them. Each returns a margin that the corresponding
//! theorem predicts to be non-negative.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lab::report::CheckReport;
use crate::magnitude::{classify, magnitude_of_zeta, scaled_zeta, zeta_matrix};
use crate::metric::{interpolate, rescale, sum_metric, tensor_product, FiniteMetricSpace};
use crate::symmat::{
    self, hadamard, loewner_le, ones_sum, spd_inverse, Cholesky, LoewnerVerdict, SymMatrix, DEFAULT_PD_TOL,
};

/// Default absolute tolerance on Löwner margins.
pub const DEFAULT_LOEWNER_TOL: f64 = 1e-9;
/// Largest deviation from 1 accepted on the diagonal of a correlation matrix.
pub const UNIT_DIAGONAL_TOL: f64 = 1e-12;

/// Löwner tolerance for a comparison of `n × n` matrices: absolute up to
/// `n = 50`, scaled by the max-norm beyond.
pub fn loewner_tolerance(tol: f64, n: usize, scale: f64) -> f64 {
    if n > 50 {
        tol * scale.max(1.0)
    } else {
        tol
    }
}

fn require_correlation(r: &SymMatrix) -> Result<()> {
    if let Some(i) = (0..r.n()).find(|&i| (r.get(i, i) - 1.0).abs() > UNIT_DIAGONAL_TOL) {
        return Err(Error::input(format!("diagonal entry {i} is {}, expected 1", r.get(i, i))));
    }
    Cholesky::factor(r).map_err(|e| Error::input(format!("matrix is not positive definite: {e}")))?;
    Ok(())
}

/// Margin of `2(R∘R)⁻¹ ≺ R⁻¹∘R + I` for a positive definite `R` with unit
/// diagonal.
pub fn check_styan(r: &SymMatrix, tol: f64) -> Result<LoewnerVerdict> {
    require_correlation(r)?;
    let r_inv = spd_inverse(r)?;
    let sq_inv = spd_inverse(&hadamard(r, r)?)?;
    let lhs = sq_inv.scale(2.0);
    let rhs = hadamard(&r_inv, r)?.shift(1.0);
    let scale = lhs.max_abs().max(rhs.max_abs());
    loewner_le(&lhs, &rhs, loewner_tolerance(tol, r.n(), scale))
}

/// Slack `n − ⟨1, (R∘R)⁻¹ 1⟩`, predicted non-negative.
pub fn check_hadamard_square_bound(r: &SymMatrix, tol: f64) -> Result<LoewnerVerdict> {
    require_correlation(r)?;
    let slack = r.n() as f64 - ones_sum(&spd_inverse(&hadamard(r, r)?)?);
    Ok(LoewnerVerdict::from_margin(slack, tol))
}

/// `⟨1, (R⁻¹∘R) 1⟩ − n`, which vanishes identically (it equals `tr(R⁻¹R) − n`).
pub fn trace_identity_gap(r: &SymMatrix) -> Result<f64> {
    require_correlation(r)?;
    Ok(ones_sum(&hadamard(&spd_inverse(r)?, r)?) - r.n() as f64)
}

fn to_sym(m: &DMatrix<f64>) -> SymMatrix {
    SymMatrix::from_dmatrix(m)
}

fn entrywise(c: &DMatrix<f64>, d: &DMatrix<f64>) -> DMatrix<f64> {
    c.component_mul(d)
}

/// Both sides of the Wang–Zhang inequality
/// `(C∘D)(A∘B)⁻¹(C∘D)ᵀ ≺ (CA⁻¹Cᵀ)∘(DB⁻¹Dᵀ)`, as `(lhs, rhs)`.
pub fn wang_zhang_sides(
    a: &SymMatrix,
    b: &SymMatrix,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
) -> Result<(SymMatrix, SymMatrix)> {
    let n = a.n();
    if b.n() != n || c.ncols() != n || d.ncols() != n || c.nrows() != d.nrows() {
        return Err(Error::input(format!(
            "dimension mismatch: A {n}×{n}, B {0}×{0}, C {1}×{2}, D {3}×{4}",
            b.n(),
            c.nrows(),
            c.ncols(),
            d.nrows(),
            d.ncols()
        )));
    }
    let a_inv = spd_inverse(a)?.to_dmatrix();
    let b_inv = spd_inverse(b)?.to_dmatrix();
    let ab_inv = spd_inverse(&hadamard(a, b)?)?.to_dmatrix();
    let cd = entrywise(c, d);
    let lhs = &cd * ab_inv * cd.transpose();
    let rhs = entrywise(&(c * a_inv * c.transpose()), &(d * b_inv * d.transpose()));
    Ok((to_sym(&lhs), to_sym(&rhs)))
}

pub fn check_wang_zhang(
    a: &SymMatrix,
    b: &SymMatrix,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
    tol: f64,
) -> Result<LoewnerVerdict> {
    let (lhs, rhs) = wang_zhang_sides(a, b, c, d)?;
    let scale = lhs.max_abs().max(rhs.max_abs());
    loewner_le(&lhs, &rhs, loewner_tolerance(tol, lhs.n(), scale))
}

/// Margin of `[(1−t)A + tB]⁻¹ ≺ (1−t)A⁻¹ + tB⁻¹`.
pub fn check_inverse_convexity(a: &SymMatrix, b: &SymMatrix, t: f64, tol: f64) -> Result<LoewnerVerdict> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::input(format!("t = {t} outside [0, 1]")));
    }
    let mix_inv = spd_inverse(&a.combine(1.0 - t, b, t)?)?;
    let inv_mix = spd_inverse(a)?.combine(1.0 - t, &spd_inverse(b)?, t)?;
    let scale = mix_inv.max_abs().max(inv_mix.max_abs());
    loewner_le(&mix_inv, &inv_mix, loewner_tolerance(tol, a.n(), scale))
}

/// Which hypothesis licenses `Mag(tX) ≤ n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpperBoundHypothesis {
    /// `tX` positive definite at every grid scale.
    StablyPositiveDefinite,
    /// `(t/2)X` positive definite at every grid scale.
    HalfScalePositiveDefinite,
}

/// Checks `Mag(tX) ≤ n` at every grid scale; margin `n − Mag(tX)`.
pub fn check_upper_bound(
    x: &FiniteMetricSpace,
    grid: &[f64],
    tol: f64,
    hypothesis: UpperBoundHypothesis,
) -> Result<CheckReport> {
    match hypothesis {
        UpperBoundHypothesis::StablyPositiveDefinite => {
            let c = classify(x, grid, DEFAULT_PD_TOL)?;
            if !c.stably_positive_definite_on_grid {
                return Err(Error::Precondition(format!(
                    "space is not positive definite at scales {:?}",
                    c.failing_scales
                )));
            }
        }
        UpperBoundHypothesis::HalfScalePositiveDefinite => {
            if let Some(t) =
                grid.iter().find(|&&t| !symmat::is_positive_definite(&scaled_zeta(x, t / 2.0), DEFAULT_PD_TOL))
            {
                return Err(Error::Precondition(format!("half-scale space at t = {t} is not positive definite")));
            }
        }
    }
    let n = x.n() as f64;
    let mut report = CheckReport::new("upper-bound", 0, tol);
    for &t in grid {
        match magnitude_of_zeta(&scaled_zeta(x, t)) {
            Ok(m) => report.record(format!("t={t:e} n={} mag={m:e}", x.n()), n - m),
            Err(e) => report.record_failure(format!("t={t:e}"), &e),
        }
    }
    Ok(report)
}

/// `(Mag((s+t)X), Mag(sX), Mag(tX))`, requiring `sX` and `tX` positive definite.
pub fn subadditivity_values(x: &FiniteMetricSpace, s: f64, t: f64) -> Result<(f64, f64, f64)> {
    let zs = scaled_zeta(x, s);
    let zt = scaled_zeta(x, t);
    for (scale, z) in [(s, &zs), (t, &zt)] {
        if !symmat::is_positive_definite(z, DEFAULT_PD_TOL) {
            return Err(Error::Precondition(format!("space at scale {scale} is not positive definite")));
        }
    }
    Ok((magnitude_of_zeta(&scaled_zeta(x, s + t))?, magnitude_of_zeta(&zs)?, magnitude_of_zeta(&zt)?))
}

/// `Mag((s+t)X) ≤ Mag(sX)·Mag(tX)` for every pair, with relative margin
/// `1 − Mag((s+t)X) / (Mag(sX)Mag(tX))`.
///
/// When `n² ≤ tensor_cap` the bound is also checked through the ℓ¹ product:
/// the diagonal embedding gives `Mag((s+t)X) ≤ Mag(sX ⊗ tX)` (relative
/// margin), and `Mag(sX ⊗ tX) = Mag(sX)Mag(tX)` is recorded as an equality
/// with margin `−|difference|`.
pub fn check_subadditivity(
    x: &FiniteMetricSpace,
    pairs: &[(f64, f64)],
    tol: f64,
    tensor_cap: usize,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("subadditivity", 0, tol);
    for &(s, t) in pairs {
        let (mst, ms, mt) = subadditivity_values(x, s, t)?;
        let tag = format!("s={s:e} t={t:e} n={}", x.n());
        report.record(format!("{tag} product-bound"), 1.0 - mst / (ms * mt));
        if x.n() * x.n() <= tensor_cap {
            let product = tensor_product(&rescale(x, s)?, &rescale(x, t)?, tensor_cap)?;
            match magnitude_of_zeta(&zeta_matrix(&product)) {
                Ok(mp) => {
                    report.record(format!("{tag} tensor-embedding"), 1.0 - mst / mp);
                    report.record(format!("{tag} tensor-multiplicative"), -(mp - ms * mt).abs());
                }
                Err(e) => report.record_failure(format!("{tag} tensor"), &e),
            }
        }
    }
    Ok(report)
}

/// `Mag(d1 + d2) ≤ Mag(d1)·Mag(d2)` for positive definite `d1`, `d2` on one
/// carrier; relative margin.
pub fn check_sum_metric(d1: &FiniteMetricSpace, d2: &FiniteMetricSpace, tol: f64) -> Result<CheckReport> {
    let z1 = zeta_matrix(d1);
    let z2 = zeta_matrix(d2);
    if !symmat::is_positive_definite(&z1, DEFAULT_PD_TOL) || !symmat::is_positive_definite(&z2, DEFAULT_PD_TOL) {
        return Err(Error::Precondition("both metrics must be positive definite".into()));
    }
    let sum = sum_metric(d1, d2)?;
    let m = magnitude_of_zeta(&zeta_matrix(&sum))?;
    let (m1, m2) = (magnitude_of_zeta(&z1)?, magnitude_of_zeta(&z2)?);
    let mut report = CheckReport::new("sum-metric", 0, tol);
    report.record(format!("n={} sum-metric", d1.n()), 1.0 - m / (m1 * m2));
    Ok(report)
}

/// Convexity of `t ↦ Mag(X_t)` along the interpolation between comparable
/// positive definite metrics: records `chord − Mag(X_t)` and the margin of
/// `Z_t⁻¹ ≺ (1−t)Z_0⁻¹ + tZ_1⁻¹` at every grid point.
pub fn check_convexity(
    x0: &FiniteMetricSpace,
    x1: &FiniteMetricSpace,
    t_grid: &[f64],
    tol: f64,
) -> Result<CheckReport> {
    let z0 = zeta_matrix(x0);
    let z1 = zeta_matrix(x1);
    let z0_inv = spd_inverse(&z0)?;
    let z1_inv = spd_inverse(&z1)?;
    for z in [&z0, &z1] {
        if !symmat::is_positive_definite(z, DEFAULT_PD_TOL) {
            return Err(Error::NotPositiveDefinite { row: 0, pivot: symmat::min_eigenvalue(z) });
        }
    }
    let (m0, m1) = (ones_sum(&z0_inv), ones_sum(&z1_inv));
    let mut report = CheckReport::new("convexity", 0, tol);
    for &t in t_grid {
        let xt = interpolate(x0, x1, t)?;
        let zt_inv = spd_inverse(&zeta_matrix(&xt))?;
        let mt = magnitude_of_zeta(&zeta_matrix(&xt))?;
        let chord = (1.0 - t) * m0 + t * m1;
        report.record(format!("t={t} n={} chord", x0.n()), chord - mt);
        let bound = z0_inv.combine(1.0 - t, &z1_inv, t)?;
        let scale = bound.max_abs().max(zt_inv.max_abs());
        let verdict = loewner_le(&zt_inv, &bound, loewner_tolerance(tol, x0.n(), scale))?;
        report.record(format!("t={t} n={} loewner", x0.n()), verdict.margin);
    }
    Ok(report)
}

/// `Mag(kX) ≤ Mag(X)^k` for `k = 1..=k_max`; relative margin.
pub fn check_subexponential(x: &FiniteMetricSpace, k_max: usize, tol: f64) -> Result<CheckReport> {
    let mut mags = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let z = scaled_zeta(x, k as f64);
        if !symmat::is_positive_definite(&z, DEFAULT_PD_TOL) {
            return Err(Error::Precondition(format!("{k}X is not positive definite")));
        }
        mags.push(magnitude_of_zeta(&z)?);
    }
    let mut report = CheckReport::new("subexponential", 0, tol);
    for (k, mk) in (1..=k_max).zip(&mags) {
        let bound = mags[0].powi(k as i32);
        report.record(format!("k={k} n={}", x.n()), 1.0 - mk / bound);
    }
    Ok(report)
}
