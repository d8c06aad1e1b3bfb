//! Long runs kept out of the default test pass: `cargo test -- --ignored`.

use strata_cones::cone::{extremality_certificate, verify_certificate, ConeSpec};

fn direct_sweep(cone: &ConeSpec) {
    for g in 0..cone.len() {
        let cert = extremality_certificate(g, cone)
            .unwrap()
            .unwrap_or_else(|| panic!("{} is not extremal", cone.labels[g]));
        assert!(verify_certificate(&cone.generators[g], &cone.without(g), &cert));
    }
}

/// Every generator solved on its own, without orbit transport.
#[test]
#[ignore]
fn v2_extremality_direct() {
    direct_sweep(&ConeSpec::v2());
}

#[test]
#[ignore]
fn v2kv_extremality_direct() {
    direct_sweep(&ConeSpec::v2kv());
}
