//! Property suites shared by the `properties` test target and the
//! acceptance runner. Each runs a fixed number of deterministic cases.

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use strata_cones::classes::ClassSpace;
use strata_cones::cone::{membership, verify_certificate, ConeSpec, FarkasCertificate};
use strata_cones::intersection::pair;
use strata_cones::labels::{DivisorClass, LabelSet, Stratum};
use strata_cones::lifts::{kv_lift, KvDivisor, KvLift};
use strata_cones::linalg::Rational;
use strata_cones::perm::{act, Permutation};
use strata_cones::plane::{fixtures, line_arrangement, on_common_conic, surface_class, Field, PointConfig};

pub const CASES: u32 = 1000;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn perms() -> &'static [Permutation] {
    static ALL: OnceLock<Vec<Permutation>> = OnceLock::new();
    ALL.get_or_init(Permutation::all)
}

fn any_perm() -> impl Strategy<Value = Permutation> {
    (0..perms().len()).prop_map(|i| perms()[i])
}

fn any_stratum() -> impl Strategy<Value = Stratum> {
    let n = ClassSpace::get().strata().len();
    (0..n).prop_map(|i| ClassSpace::get().strata()[i])
}

/// `pair(τs, τt) = pair(s, t)`.
pub fn pair_equivariance(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(any_perm(), any_stratum(), any_stratum()), |(tau, s, t)| {
            prop_assert_eq!(pair(act(&tau, s), act(&tau, t)), pair(s, t));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn fixture_configs() -> Vec<PointConfig> {
    vec![fixtures::h1(), fixtures::h2(), fixtures::h3(), fixtures::fano()]
}

/// A 3×3 integer matrix, invertible over the field (rejected otherwise).
fn transform(field: Field) -> impl Strategy<Value = [[i64; 3]; 3]> {
    prop::array::uniform3(prop::array::uniform3(-4i64..=4)).prop_filter("singular", move |m| {
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        match field.characteristic() {
            0 => det != 0,
            p => det.rem_euclid(p as i64) != 0,
        }
    })
}

/// A change of coordinates leaves lines, the conic test and the surface
/// class unchanged; relabeling the points permutes the class.
pub fn projective_invariance(cases: u32) -> Result<(), String> {
    let configs = fixture_configs();
    let classes: Vec<_> = configs.iter().map(|c| surface_class(c).unwrap()).collect();
    let strategy = (0..configs.len()).prop_flat_map(|k| {
        let field = fixture_configs()[k].field();
        (Just(k), transform(field), any_perm())
    });
    runner(cases)
        .run(&strategy, |(k, m, tau)| {
            let m = m.map(|row| row.map(|x| Rational::from_integer(x.into())));
            let moved = configs[k].transformed(&m).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(line_arrangement(&moved), line_arrangement(&configs[k]));
            prop_assert_eq!(on_common_conic(&moved), on_common_conic(&configs[k]));
            let class = surface_class(&moved).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&class, &classes[k]);
            let relabeled = surface_class(&moved.relabeled(&tau)).unwrap();
            prop_assert_eq!(relabeled, classes[k].permuted(&tau));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

struct Seed {
    cone: ConeSpec,
    lift: strata_cones::classes::CycleClass,
    cert: FarkasCertificate,
}

fn seed() -> &'static Seed {
    static SEED: OnceLock<Seed> = OnceLock::new();
    SEED.get_or_init(|| {
        let cone = ConeSpec::v2();
        let lift = kv_lift("67,5,12".parse().unwrap());
        let cert = membership(&lift, &cone)
            .unwrap()
            .certificate()
            .expect("lift lies outside V2")
            .clone();
        Seed { cone, lift, cert }
    })
}

/// Certificates survive JSON and still verify; corrupted ones do not.
pub fn certificate_round_trip(cases: u32) -> Result<(), String> {
    let seed = seed();
    runner(cases)
        .run(&(any_perm(), 1i64..50), |(tau, scale)| {
            let target = seed.lift.permuted(&tau);
            let cert = seed.cert.permuted(&tau, "V2".into());
            let json = serde_json::to_string(&cert).unwrap();
            let back: FarkasCertificate = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(&back, &cert);
            prop_assert!(verify_certificate(&target, &seed.cone, &back));
            prop_assert!(verify_certificate(&target.scaled(scale), &seed.cone, &back));
            let mut flipped = back.clone();
            for x in flipped.functional.iter_mut() {
                *x = -x.clone();
            }
            prop_assert!(!verify_certificate(&target, &seed.cone, &flipped));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn any_partition() -> impl Strategy<Value = (LabelSet, LabelSet, LabelSet)> {
    // labels go to I, J or K; resample until |I|, |K| ≥ 2 and J ≠ ∅
    prop::array::uniform7(0u8..3).prop_filter_map("unstable", |slots| {
        let mut parts = [LabelSet::EMPTY; 3];
        for (l, &s) in (1..=7).zip(&slots) {
            parts[s as usize] = parts[s as usize].with(l);
        }
        let [i, j, k] = parts;
        (i.len() >= 2 && k.len() >= 2 && !j.is_empty()).then_some((i, j, k))
    })
}

/// Canonical forms are fixed points and forget the presentation.
pub fn canonicalization(cases: u32) -> Result<(), String> {
    let strategy = (any_partition(), any_perm(), 1u8..=7);
    runner(cases)
        .run(&strategy, |((i, j, k), tau, dropped)| {
            let s = Stratum::new(i, j, k).unwrap();
            prop_assert_eq!(Stratum::new(k, j, i).unwrap(), s);
            prop_assert_eq!(Stratum::new(s.i(), s.j(), s.k()).unwrap(), s);
            prop_assert_eq!(s.to_string().trim_start_matches("s_{").trim_end_matches('}').parse::<Stratum>().unwrap(), s);
            prop_assert_eq!(act(&Permutation::IDENTITY, s), s);
            let (a, b) = s.divisors();
            prop_assert_eq!(Stratum::from_divisors(b, a).unwrap(), s);
            for d in [a, b] {
                prop_assert_eq!(DivisorClass::new(d.rep()).unwrap(), d);
                prop_assert_eq!(DivisorClass::new(d.rep().complement()).unwrap(), d);
            }

            // Keel–Vermeire divisors on the six labels other than `dropped`
            let ground = LabelSet::singleton(dropped).complement();
            let order: Vec<u8> = (1..=7).map(|l| tau.apply(l)).filter(|&l| l != dropped).collect();
            let [m, q, x, y, z, w] = order[..] else {
                unreachable!()
            };
            let kv = KvDivisor::new(ground, m, q, x, y).unwrap();
            for (a, b, c, d) in [(q, m, x, y), (x, y, m, q), (m, q, y, x), (m, q, z, w), (z, w, y, x)] {
                prop_assert_eq!(KvDivisor::new(ground, a, b, c, d).unwrap(), kv);
            }
            let (a, b, c, d) = kv.presentation();
            prop_assert_eq!(KvDivisor::new(ground, a, b, c, d).unwrap(), kv);
            prop_assert_eq!(kv.expansion(), KvDivisor::new(ground, a, b, c, d).unwrap().expansion());

            let lift = KvLift::new(m, q, x, y, z).unwrap();
            let (a, b, c, d, e) = lift.labels();
            prop_assert_eq!(KvLift::new(a, b, c, d, e).unwrap(), lift);
            prop_assert_eq!(KvLift::new(q, m, x, y, z).unwrap(), lift);
            prop_assert_eq!(lift.to_string().parse::<KvLift>().unwrap(), lift);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
