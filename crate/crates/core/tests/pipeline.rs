use magnitude_core::gen::{GenSpec, Generated};
use magnitude_core::lab::campaign::{run_suite, CampaignConfig, Suite};
use magnitude_core::magnitude::{classify, default_grid, magnitude, magnitude_function};
use magnitude_core::metric::{csv_io, to_metric_space};
use magnitude_core::symmat::DEFAULT_PD_TOL;

#[test]
fn csv_roundtrip_preserves_magnitude() {
    let spec = GenSpec::from_json(r#"{"kind":"POINTCLOUD","params":{"n":9,"dim":3,"norm":"l1","scale":2.0},"seed":5}"#)
        .unwrap();
    let Generated::Cloud(cloud) = spec.generate().unwrap() else { panic!("expected a cloud") };
    let x = to_metric_space(&cloud).unwrap();
    let mut buf = Vec::new();
    csv_io::write_space(&mut buf, &x).unwrap();
    let back = csv_io::read_space(buf.as_slice()).unwrap();
    assert_eq!(back.to_rows(), x.to_rows());
    assert_eq!(magnitude(&back).unwrap(), magnitude(&x).unwrap());
}

#[test]
fn l1_cloud_is_stably_positive_definite_and_bounded() {
    let spec = GenSpec::from_json(r#"{"kind":"pointcloud","params":{"n":20,"dim":2,"norm":"l1"},"seed":1}"#).unwrap();
    let Generated::Cloud(cloud) = spec.generate().unwrap() else { panic!("expected a cloud") };
    let x = to_metric_space(&cloud).unwrap();
    let c = classify(&x, &default_grid(), DEFAULT_PD_TOL).unwrap();
    assert!(c.stably_positive_definite_on_grid, "{:?}", c.failing_scales);
    let curve = magnitude_function(&x, &default_grid());
    assert!(curve.values.iter().all(|v| v.is_some_and(|m| (1.0..=20.0 + 1e-9).contains(&m))));
    assert!(curve.to_csv().starts_with("t,magnitude\n"));
}

#[test]
fn campaigns_are_reproducible() {
    let config = CampaignConfig { seed: 42, instances: Some(20), tolerance: None };
    for suite in Suite::ALL {
        let a = run_suite(suite, &config);
        assert!(a.passed(), "{}: {:?}", suite.name(), a.violations);
        assert_eq!(a.to_json(), run_suite(suite, &config).to_json());
    }
}
