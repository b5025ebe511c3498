use magnitude_wasm::{interpolation_profile_impl, styan_margins_impl};

#[test]
fn interpolation_profile_lies_below_chord() {
    let v = interpolation_profile_impl(12, 3, 2.5, 11).unwrap();
    assert_eq!(v.len(), 33);
    for triple in v.chunks(3) {
        assert!(triple[1] <= triple[2] + 1e-9, "{triple:?}");
    }
    assert_eq!(v[0], 0.0);
    assert_eq!(v[30], 1.0);
    assert!(interpolation_profile_impl(1, 3, 2.0, 11).is_err());
}

#[test]
fn styan_margins_are_nonnegative() {
    let v = styan_margins_impl(20, 50, 9).unwrap();
    assert_eq!(v.len(), 100);
    for pair in v.chunks(2) {
        assert!((2.0..=20.0).contains(&pair[0]));
        assert!(pair[1] >= -1e-9);
    }
    assert_eq!(v, styan_margins_impl(20, 50, 9).unwrap());
}
