//! WebAssembly bindings for the static demo page in `www/`. Each export
//! takes and returns plain numbers and flat arrays; the `*_impl` functions
//! carry the logic and are tested natively.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use wasm_bindgen::prelude::*;

use magnitude_core::gen::{comparable_pair, random_correlation, random_l1_space};
use magnitude_core::lab::checks::check_styan;
use magnitude_core::magnitude::{linear_grid, log_grid, magnitude, magnitude_function};
use magnitude_core::metric::{interpolate, to_metric_space, PointCloud};
use magnitude_core::rng::{derive_seed, CounterRng};
use magnitude_core::{Error, Result};

/// `Mag(tX)` on `count` log-spaced scales in `[t_min, t_max]` for the cloud
/// whose coordinates are `coords` (row-major, `dim` per point). Scales
/// without a weighting yield `NaN`.
pub fn magnitude_curve_impl(
    coords: &[f64],
    dim: usize,
    norm: &str,
    t_min: f64,
    t_max: f64,
    count: usize,
) -> Result<Vec<f64>> {
    if dim == 0 || coords.is_empty() || !coords.len().is_multiple_of(dim) {
        return Err(Error::Input(format!("{} coordinates do not form points of dimension {dim}", coords.len())));
    }
    if !(t_min > 0.0 && t_min < t_max) || count == 0 {
        return Err(Error::Input("need 0 < t_min < t_max and count ≥ 1".into()));
    }
    let cloud = PointCloud::new(dim, norm.parse()?, coords.chunks(dim).map(<[f64]>::to_vec).collect())?;
    let x = to_metric_space(&cloud)?;
    let curve = magnitude_function(&x, &log_grid(t_min, t_max, count));
    Ok(curve.values.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
}

/// Interpolation between a random planar ℓ¹ space `d0` and a stretched copy
/// `d1`. Returns `[t, Mag(X_t), chord]` triples, flattened, at `steps`
/// equally spaced `t`.
pub fn interpolation_profile_impl(n: usize, seed: u64, stretch: f64, steps: usize) -> Result<Vec<f64>> {
    if !(2..=60).contains(&n) || steps < 2 {
        return Err(Error::Input("need 2 ≤ n ≤ 60 and steps ≥ 2".into()));
    }
    let base = random_l1_space(n, 2, 2.0, derive_seed(seed, 0, 0))?;
    let (d0, d1) = comparable_pair(&base, derive_seed(seed, 0, 1), stretch)?;
    let (m0, m1) = (magnitude(&d0)?, magnitude(&d1)?);
    let mut out = Vec::with_capacity(3 * steps);
    for t in linear_grid(0.0, 1.0, steps) {
        out.extend([t, magnitude(&interpolate(&d0, &d1, t)?)?, (1.0 - t) * m0 + t * m1]);
    }
    Ok(out)
}

/// Styan margins of `count` random correlation matrices with sizes in
/// `[2, n_max]`, as flattened `[n, margin]` pairs.
pub fn styan_margins_impl(n_max: usize, count: usize, seed: u64) -> Result<Vec<f64>> {
    if !(2..=80).contains(&n_max) {
        return Err(Error::Input("need 2 ≤ n_max ≤ 80".into()));
    }
    let mut out = Vec::with_capacity(2 * count);
    for i in 0..count as u64 {
        let n = CounterRng::stream(seed, i, 0).int_in(2, n_max);
        let r = random_correlation(n, derive_seed(seed, i, 1))?;
        out.extend([n as f64, check_styan(&r, 1e-9)?.margin]);
    }
    Ok(out)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn magnitude_curve(
    coords: &[f64],
    dim: usize,
    norm: &str,
    t_min: f64,
    t_max: f64,
    count: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    magnitude_curve_impl(coords, dim, norm, t_min, t_max, count).map_err(js)
}

#[wasm_bindgen]
pub fn interpolation_profile(
    n: usize,
    seed: u32,
    stretch: f64,
    steps: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    interpolation_profile_impl(n, u64::from(seed), stretch, steps).map_err(js)
}

#[wasm_bindgen]
pub fn styan_margins(n_max: usize, count: usize, seed: u32) -> std::result::Result<Vec<f64>, JsError> {
    styan_margins_impl(n_max, count, u64::from(seed)).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_of_two_points() {
        let v = magnitude_curve_impl(&[0.0, 0.0, 1.0, 0.0], 2, "l2", 0.5, 2.0, 3).unwrap();
        for (m, t) in v.iter().zip([0.5f64, 1.0, 2.0]) {
            assert!((m - 2.0 / (1.0 + (-t).exp())).abs() < 1e-14);
        }
        assert!(magnitude_curve_impl(&[0.0, 1.0, 2.0], 2, "l1", 0.5, 2.0, 3).is_err());
        assert!(magnitude_curve_impl(&[0.0, 1.0], 1, "l7", 0.5, 2.0, 3).is_err());
    }
}
