mod support;

use support::CASES;

#[test]
fn pair_is_s7_equivariant() {
    support::pair_equivariance(CASES).unwrap();
}

#[test]
fn surface_class_is_projectively_invariant() {
    support::projective_invariance(CASES).unwrap();
}

#[test]
fn certificates_round_trip() {
    support::certificate_round_trip(CASES).unwrap();
}

#[test]
fn canonical_forms_are_idempotent() {
    support::canonicalization(CASES).unwrap();
}
