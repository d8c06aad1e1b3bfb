//! The invariant suite behind `selfcheck`.

use rayon::prelude::*;
use serde_json::{json, Value};

use strata_cones::classes::{classes_equal_criterion, stratum_class, ClassSpace};
use strata_cones::cone::{extremality_sweep, membership, non_membership_sweep, verify_certificate, ConeSpec};
use strata_cones::intersection::{pair, self_intersection_oracle};
use strata_cones::labels::{enumerate_divisors, enumerate_strata, LabelSet, Stratum, N};
use strata_cones::lifts::{enumerate_kv, enumerate_kv_lifts, kv_lift, pushforward_combination};
use strata_cones::linalg::{rank, signature, RatMatrix};
use strata_cones::plane::{classify_special_surfaces, fixtures, planar_realization_check, special_labels, surface_class, Hypertree};

use crate::input::{self, Input};

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn st(s: &str) -> Stratum {
    s.parse().expect("valid stratum literal")
}

fn counts() -> Result<String, String> {
    let kv_ok = (1..=N).all(|y| enumerate_kv(LabelSet::singleton(y).complement()).is_ok_and(|v| v.len() == 15));
    let got = (
        enumerate_divisors().len(),
        enumerate_strata().len(),
        ClassSpace::get().reps().len(),
        enumerate_kv_lifts().len(),
    );
    ensure(got == (56, 490, 420, 315) && kv_ok, || format!("{got:?}, 15 KV each: {kv_ok}"))?;
    Ok("56 divisors, 490 strata, 420 classes, 315 lifts".into())
}

fn tables() -> Result<String, String> {
    for (s, want) in [("12,3,4567", 0), ("123,4,567", 1), ("12,34,567", 1), ("12,345,67", 2)] {
        ensure(pair(st(s), st(s)) == want, || format!("self-intersection of s_{{{s}}}"))?;
    }
    ensure(pair(st("12,3,4567"), st("45,123,67")) == 1, || "mixed value".into())?;
    Ok("self-intersections 0, 1, 1, 2".into())
}

fn oracle() -> Result<String, String> {
    for s in enumerate_strata() {
        let o = self_intersection_oracle(s).map_err(err)?;
        ensure(o == pair(s, s), || format!("{s}: oracle {o}"))?;
    }
    Ok("490 strata".into())
}

fn criterion() -> Result<String, String> {
    let strata = enumerate_strata();
    let vectors: Vec<_> = strata.iter().map(|&s| stratum_class(s)).collect();
    for a in 0..strata.len() {
        for b in 0..strata.len() {
            ensure((vectors[a] == vectors[b]) == classes_equal_criterion(strata[a], strata[b]), || {
                format!("{} vs {}", strata[a], strata[b])
            })?;
        }
    }
    Ok("490² pairs".into())
}

fn rank_signature() -> Result<String, String> {
    let m = RatMatrix::from_int_rows(ClassSpace::get().gram()).map_err(err)?;
    let (r, sig) = (rank(&m), signature(&m).map_err(err)?);
    ensure(r == 127 && sig == (86, 41), || format!("rank {r}, signature {sig:?}"))?;
    Ok("rank 127, signature (86, 41)".into())
}

fn pushforwards() -> Result<String, String> {
    for lift in enumerate_kv_lifts() {
        for y in 1..=N {
            let want = lift.expected_pushforward(y).map_err(err)?;
            ensure(pushforward_combination(y, &lift.terms()) == want, || format!("π_{y} of {lift}"))?;
        }
    }
    Ok("315 × 7".into())
}

fn load(name: &str) -> Result<strata_cones::plane::PointConfig, String> {
    let input = Input::read(&input::resolve(name).map_err(err)?).map_err(err)?;
    input::points(&input).map_err(err)
}

/// The fixture files realize what they claim and match the built-ins.
fn fixture_library() -> Result<String, String> {
    let g0 = load("gamma0")?;
    ensure(planar_realization_check(&g0, &Hypertree::gamma0()), || "gamma0 does not realize Γ₀".into())?;
    let built_in = [("h1", fixtures::h1()), ("h2", fixtures::h2()), ("h3", fixtures::h3()), ("fano", fixtures::fano())];
    for (name, reference) in built_in {
        let c = load(name)?;
        let special = special_labels(&c).map_err(err)?;
        let want = if name == "fano" { 7 } else { 3 };
        ensure(special.len() == want, || format!("{name}: special labels {special}"))?;
        ensure(surface_class(&c).map_err(err)? == surface_class(&reference).map_err(err)?, || {
            format!("{name}: class differs from the built-in configuration")
        })?;
    }
    Ok("gamma0, h1, h2, h3, fano".into())
}

fn classification() -> Result<String, String> {
    let c0 = classify_special_surfaces(0).map_err(err)?;
    let c2 = classify_special_surfaces(2).map_err(err)?;
    let got = (c0.orbit_size, c0.stabilizer_order, c2.orbit_size, c2.stabilizer_order);
    ensure(got == (210, 24, 30, 168), || format!("{got:?}"))?;
    ensure(c0.contains_listed_subgroups == Some(true) && c0.relations_hold == Some(true), || "G1, G2 or relations".into())?;
    Ok("(210, 24) and (30, 168)".into())
}

fn certificates() -> Result<String, String> {
    let v2 = ConeSpec::v2();
    let v2kv = ConeSpec::v2kv();
    let lifts: Vec<_> = enumerate_kv_lifts().into_iter().map(kv_lift).collect();
    let (certs, _) = non_membership_sweep(&lifts, &v2).map_err(err)?;
    ensure(certs.iter().all(Option::is_some), || "a lift lies in V2".into())?;
    let surfaces = [fixtures::h1(), fixtures::h2(), fixtures::h3(), fixtures::fano()]
        .iter()
        .map(surface_class)
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    for cone in [&v2, &v2kv] {
        let (certs, _) = non_membership_sweep(&surfaces, cone).map_err(err)?;
        for (k, c) in certs.iter().enumerate() {
            let c = c.as_ref().ok_or_else(|| format!("surface {} inside {}", k + 1, cone.name))?;
            ensure(verify_certificate(&surfaces[k], cone, c), || "certificate fails".into())?;
        }
    }
    let ct = ConeSpec::v2kvct(surfaces[..3].to_vec()).map_err(err)?;
    ensure(membership(&surfaces[0], &ct).map_err(err)?.is_member(), || "h1 ∉ V2KVCT".into())?;
    Ok("lifts ∉ V2; surfaces ∉ V2, V2KV; h1 ∈ V2KVCT".into())
}

fn extremality() -> Result<String, String> {
    for cone in [ConeSpec::v2(), ConeSpec::v2kv()] {
        let (certs, _) = extremality_sweep(&cone).map_err(err)?;
        let count = certs.iter().filter(|c| c.is_some()).count();
        ensure(count == cone.len(), || format!("{count}/{} extremal in {}", cone.len(), cone.name))?;
    }
    Ok("420 in V2, 735 in V2KV".into())
}

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Result<String, String>,
}

/// Runs the suite on the current rayon pool. `quick` skips the linear
/// programs.
pub fn run(quick: bool) -> Vec<CheckResult> {
    let mut checks: Vec<(&'static str, Check)> = vec![
        ("counts", counts),
        ("intersection tables", tables),
        ("oracle equivalence", oracle),
        ("criterion-Gram agreement", criterion),
        ("rank and signature", rank_signature),
        ("pushforward table", pushforwards),
        ("fixture library", fixture_library),
        ("classification", classification),
    ];
    if !quick {
        checks.push(("non-membership certificates", certificates));
        checks.push(("extremality sweeps", extremality));
    }
    let _ = ClassSpace::get();
    checks
        .into_par_iter()
        .map(|(name, check)| CheckResult { name, outcome: check() })
        .collect()
}

pub fn to_json(results: &[CheckResult]) -> Value {
    let checks: Vec<Value> = results
        .iter()
        .map(|r| match &r.outcome {
            Ok(d) => json!({ "name": r.name, "passed": true, "detail": d }),
            Err(d) => json!({ "name": r.name, "passed": false, "detail": d }),
        })
        .collect();
    let passed = results.iter().filter(|r| r.outcome.is_ok()).count();
    json!({ "checks": checks, "passed": passed, "total": results.len() })
}
