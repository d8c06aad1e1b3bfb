use std::collections::BTreeMap;

use serde_json::{json, Value};

use strata_cones::classes::{classes_equal_criterion, ClassSpace};
use strata_cones::cone::{membership, non_membership_sweep, verify_certificate, ConeName, ConeSpec, FarkasCertificate, MembershipResult};
use strata_cones::labels::{enumerate_divisors, enumerate_strata, N};
use strata_cones::lifts::{enumerate_kv_lifts, kv_lift, pushforward_combination};
use strata_cones::linalg::{format_rational, rank, signature, RatMatrix};
use strata_cones::perm::generating_set;
use strata_cones::plane::{
    check_embedding, classify_special_surfaces, hypertree_check, line_arrangement, on_common_conic,
    planar_realization_check, special_labels, surface_class, Hypertree, PointConfig,
};

use crate::input::{self, Input, PointsJson};
use crate::CliError;

/// A finished command: what went into the digest and what comes out.
pub struct Outcome {
    pub args: Vec<String>,
    pub inputs: Vec<Input>,
    pub outputs: Value,
    pub summary: Vec<String>,
    /// Reported after the run report is written.
    pub failure: Option<CliError>,
}

impl Outcome {
    fn new(args: Vec<String>, outputs: Value, summary: Vec<String>) -> Self {
        Outcome {
            args,
            inputs: Vec::new(),
            outputs,
            summary,
            failure: None,
        }
    }
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum Kind {
    Divisors,
    Strata,
    Classes,
}

pub fn enumerate(kind: Kind) -> Outcome {
    let (name, items): (&str, Vec<Value>) = match kind {
        Kind::Divisors => ("divisors", enumerate_divisors().iter().map(|d| json!(d.to_string())).collect()),
        Kind::Strata => ("strata", enumerate_strata().iter().map(|s| json!(s.to_string())).collect()),
        Kind::Classes => {
            let space = ClassSpace::get();
            let items = space
                .reps()
                .iter()
                .map(|&r| {
                    let members: Vec<String> = space
                        .strata()
                        .iter()
                        .filter(|&&s| classes_equal_criterion(s, r))
                        .map(|s| s.to_string())
                        .collect();
                    json!({ "rep": r.to_string(), "members": members })
                })
                .collect();
            ("classes", items)
        }
    };
    let count = items.len();
    Outcome::new(
        vec![name.into()],
        json!({ "kind": name, "count": count, "items": items }),
        vec![format!("{count} {name}")],
    )
}

pub fn gram(want_rank: bool, want_signature: bool) -> Result<Outcome, CliError> {
    let (want_rank, want_signature) = match (want_rank, want_signature) {
        (false, false) => (true, true),
        flags => flags,
    };
    let gram = ClassSpace::get().gram();
    let m = RatMatrix::from_int_rows(gram)?;
    let mut diagonal: Vec<i64> = (0..gram.len()).map(|i| gram[i][i]).collect();
    diagonal.sort_unstable();
    diagonal.dedup();
    let mut outputs = json!({
        "size": gram.len(),
        "symmetric": m.is_symmetric(),
        "diagonal_values": diagonal,
        "matrix": gram,
    });
    let mut summary = vec![format!("{0}×{0} Gram matrix, diagonal values {diagonal:?}", gram.len())];
    let mut args = Vec::new();
    if want_rank {
        let r = rank(&m);
        outputs["rank"] = json!(r);
        summary.push(format!("rank {r}"));
        args.push("--rank".into());
    }
    if want_signature {
        let (p, n) = signature(&m)?;
        outputs["signature"] = json!([p, n]);
        summary.push(format!("signature ({p}, {n})"));
        args.push("--signature".into());
    }
    Ok(Outcome::new(args, outputs, summary))
}

/// Lines with three or more points, read as a hypertree on the labels.
fn arrangement_hypertree(c: &PointConfig) -> Value {
    let parts: Vec<_> = line_arrangement(c)
        .into_iter()
        .map(|l| l.members)
        .filter(|m| m.len() >= 3)
        .collect();
    let tree = Hypertree {
        ground: c.labels(),
        parts,
    };
    let check = hypertree_check(&tree);
    json!({
        "parts": tree.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "valid": check.valid,
        "irreducible": check.irreducible,
        "realized": planar_realization_check(c, &tree),
    })
}

pub fn surface(arg: &str) -> Result<Outcome, CliError> {
    let input = Input::read(&input::resolve(arg)?)?;
    let config = input::points(&input)?;
    let lines: Vec<String> = line_arrangement(&config)
        .iter()
        .filter(|l| l.members.len() >= 3)
        .map(|l| l.members.to_string())
        .collect();
    let mut outputs = json!({
        "points": PointsJson::from_config(&config),
        "lines": lines,
        "common_conic": on_common_conic(&config),
        "hypertree": arrangement_hypertree(&config),
    });
    let mut summary = vec![format!("{} points, lines through 3 or more: {lines:?}", config.len())];
    let full = config.labels() == strata_cones::labels::LabelSet::FULL;
    if !full {
        // a partial configuration: report the arrangement only
        let reason = check_embedding(&config).expect_err("fewer than seven labels").to_string();
        outputs["embedding"] = json!({ "valid": false, "reason": reason });
        summary.push(format!("no embedded blow-up: {reason}"));
    } else {
        check_embedding(&config)?;
        let special = special_labels(&config)?;
        let class = surface_class(&config)?;
        let nonzero = class.coords.iter().filter(|&&x| x != 0).count();
        outputs["embedding"] = json!({ "valid": true });
        outputs["special_labels"] = json!(special.iter().collect::<Vec<_>>());
        outputs["special"] = json!(special.len() >= 3);
        outputs["class"] = json!({ "coords": class.coords });
        let special_text = if special.is_empty() { "none".to_string() } else { format!("{{{special}}}") };
        summary.push(format!("special labels {special_text}, class with {nonzero} nonzero coordinates"));
    }
    let mut out = Outcome::new(vec![], outputs, summary);
    out.inputs.push(input);
    Ok(out)
}

fn build_cone(name: &ConeName, surfaces: &[String], inputs: &mut Vec<Input>) -> Result<ConeSpec, CliError> {
    match name {
        ConeName::V2 => Ok(ConeSpec::v2()),
        ConeName::V2KV => Ok(ConeSpec::v2kv()),
        ConeName::V2KVCT => {
            let defaults = ["h1", "h2", "h3"].map(String::from);
            let names = if surfaces.is_empty() { &defaults[..] } else { surfaces };
            let mut classes = Vec::new();
            for s in names {
                let input = Input::read(&input::resolve(s)?)?;
                classes.push(surface_class(&input::points(&input)?)?);
                inputs.push(input);
            }
            Ok(ConeSpec::v2kvct(classes)?)
        }
        ConeName::Custom(other) => Err(CliError::Invalid(format!("unknown cone {other:?}; expected V2, V2KV or V2KVCT"))),
    }
}

/// Serialize, parse back, verify from scratch.
fn recheck(target: &strata_cones::classes::CycleClass, cone: &ConeSpec, cert: &FarkasCertificate) -> Result<Value, CliError> {
    let text = serde_json::to_string(cert).map_err(|e| CliError::Internal(e.to_string()))?;
    let back: FarkasCertificate = serde_json::from_str(&text).map_err(|e| CliError::Internal(e.to_string()))?;
    if !verify_certificate(target, cone, &back) {
        return Err(CliError::Internal("emitted certificate fails verification on re-load".into()));
    }
    serde_json::from_str(&text).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn cone(target_arg: &str, cone_arg: &str, surfaces: &[String], verify: Option<&str>) -> Result<Outcome, CliError> {
    let target = input::target(target_arg)?;
    let name: ConeName = cone_arg.parse()?;
    let mut inputs: Vec<Input> = target.input.into_iter().collect();
    let cone = build_cone(&name, surfaces, &mut inputs)?;
    let mut args = vec![target_arg.to_string(), name.to_string()];
    args.extend(surfaces.iter().cloned());
    let mut outputs = json!({
        "target": target.description,
        "cone": name.to_string(),
        "generators": cone.len(),
    });

    if let Some(path) = verify {
        let input = Input::read(&input::resolve(path)?)?;
        let cert: FarkasCertificate = serde_json::from_slice(&input.bytes)
            .map_err(|e| CliError::Invalid(format!("{}: not a certificate: {e}", input.name)))?;
        inputs.push(input);
        let ok = verify_certificate(&target.class, &cone, &cert);
        outputs["verified"] = json!(ok);
        args.push("--verify".into());
        let mut out = Outcome::new(args, outputs, vec![format!("certificate {}", if ok { "verifies" } else { "does not verify" })]);
        out.inputs = inputs;
        if !ok {
            out.failure = Some(CliError::Invalid(format!("certificate does not separate the target from {name}")));
        }
        return Ok(out);
    }

    let summary = match membership(&target.class, &cone)? {
        MembershipResult::Member { coefficients } => {
            let named: BTreeMap<&str, String> = coefficients
                .iter()
                .map(|(&g, c)| (cone.labels[g].as_str(), format_rational(c)))
                .collect();
            outputs["result"] = json!("member");
            outputs["coefficients"] = json!(named);
            let plural = if named.len() == 1 { "" } else { "s" };
            format!("{} ∈ {name}, combination of {} generator{plural}", target.description, named.len())
        }
        MembershipResult::NonMember { certificate } => {
            outputs["result"] = json!("non-member");
            outputs["certificate"] = recheck(&target.class, &cone, &certificate)?;
            outputs["verified"] = json!(true);
            format!("{} ∉ {name}, certificate verified", target.description)
        }
    };
    let mut out = Outcome::new(args, outputs, vec![summary]);
    out.inputs = inputs;
    Ok(out)
}

pub fn classify(characteristic: u32) -> Result<Outcome, CliError> {
    let c = classify_special_surfaces(characteristic)?;
    let stab: std::collections::BTreeSet<_> = c.stabilizer.iter().copied().collect();
    let gens: Vec<String> = generating_set(&stab).iter().map(|g| g.to_string()).collect();
    let outputs = json!({
        "characteristic": c.characteristic,
        "orbit_size": c.orbit_size,
        "stabilizer_order": c.stabilizer_order,
        "stabilizer_generators": gens,
        "stabilizer": c.stabilizer.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "contains_listed_subgroups": c.contains_listed_subgroups,
        "relations_hold": c.relations_hold,
        "distinct_rays": c.distinct_rays,
    });
    let summary = vec![
        format!("characteristic {characteristic}: orbit {}, stabilizer order {}", c.orbit_size, c.stabilizer_order),
        format!("stabilizer generated by {}", gens.join(", ")),
    ];
    Ok(Outcome::new(vec![characteristic.to_string()], outputs, summary))
}

pub fn kv_lifts(certify: bool) -> Result<Outcome, CliError> {
    let lifts = enumerate_kv_lifts();
    let mut checked = 0;
    let mut items = Vec::with_capacity(lifts.len());
    for &lift in &lifts {
        let terms = lift.terms();
        for y in 1..=N {
            if pushforward_combination(y, &terms) != lift.expected_pushforward(y)? {
                return Err(CliError::Internal(format!("pushforward π_{y} of σKV_{{{lift}}} disagrees")));
            }
            checked += 1;
        }
        let terms: BTreeMap<String, i64> = terms.iter().map(|(s, &c)| (s.to_string(), c)).collect();
        items.push(json!({ "lift": lift.to_string(), "terms": terms }));
    }
    let mut outputs = json!({ "count": lifts.len(), "lifts": items, "pushforwards_checked": checked });
    let mut summary = vec![format!("{} lifts, {checked} pushforwards match", lifts.len())];
    let mut args = Vec::new();
    if certify {
        args.push("--certify".into());
        let v2 = ConeSpec::v2();
        let classes: Vec<_> = lifts.iter().map(|&l| kv_lift(l)).collect();
        let (certs, stats) = non_membership_sweep(&classes, &v2)?;
        let outside = certs.iter().filter(|c| c.is_some()).count();
        for (k, c) in certs.iter().enumerate() {
            if let Some(c) = c {
                recheck(&classes[k], &v2, c)?;
            }
        }
        outputs["outside_v2"] = json!(outside);
        outputs["lps_solved"] = json!(stats.solved);
        outputs["certificates_transported"] = json!(stats.transported);
        summary.push(format!(
            "{outside} of {} lifts certified outside V2 ({} LPs, {} transported)",
            lifts.len(),
            stats.solved,
            stats.transported
        ));
    }
    Ok(Outcome::new(args, outputs, summary))
}
