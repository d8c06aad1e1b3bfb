//! Keel–Vermeire divisors on M̄₀,₆, their lifts to M̄₀,₇ along boundary
//! divisors `D_ab`, and pushforward along the forgetful maps `π_y`.
//!
//! On `D_ab ≅ M̄₀,₆` the sixth marking is the attaching node `x`. It never
//! appears in a [`LabelSet`]: a divisor on `D_ab` is given by the two sides
//! of its partition with the node's side named explicitly.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classes::{add_term, combination_class, CycleClass, StrataSum};
use crate::error::{Error, Result};
use crate::labels::{Label, LabelSet, Stratum, N};

/// A boundary divisor `δ_S` on M̄₀,₆ with 6 honest labels.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SixLabelDivisor {
    ground: LabelSet,
    rep: LabelSet,
}

impl SixLabelDivisor {
    /// `side` may be either side; it is stored as the side holding the
    /// smallest ground label.
    pub fn new(ground: LabelSet, side: LabelSet) -> Result<Self> {
        if ground.len() != 6 {
            return Err(Error::InvalidDivisor(format!("ground {ground} must have 6 labels")));
        }
        if !side.is_subset(ground) || !(2..=4).contains(&side.len()) {
            return Err(Error::InvalidDivisor(format!(
                "side {side} is not a divisor side in {ground}"
            )));
        }
        let min = ground.min().expect("nonempty ground");
        let rep = if side.contains(min) {
            side
        } else {
            side.complement_in(ground)
        };
        Ok(SixLabelDivisor { ground, rep })
    }

    pub fn ground(self) -> LabelSet {
        self.ground
    }

    pub fn rep(self) -> LabelSet {
        self.rep
    }
}

impl fmt::Display for SixLabelDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ_{}", self.rep)
    }
}

impl fmt::Debug for SixLabelDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ_{}[{}]", self.rep, self.ground)
    }
}

/// A formal integer combination of divisors on M̄₀,₆.
pub type DivisorSum = BTreeMap<SixLabelDivisor, i64>;

fn add_div(sum: &mut DivisorSum, d: SixLabelDivisor, c: i64) {
    let e = sum.entry(d).or_insert(0);
    *e += c;
    if *e == 0 {
        sum.remove(&d);
    }
}

/// The formal expansion `δ_im + δ_jm + δ_kq + δ_ℓq + 2δ_ijm − δ_mq` of the
/// presentation `δ^{KV}_{mq,ij}`.
pub fn kv_expansion(ground: LabelSet, m: Label, q: Label, i: Label, j: Label) -> Result<DivisorSum> {
    let (k, l) = kv_rest(ground, [m, q, i, j])?;
    let set = |ls: &[Label]| LabelSet::from_labels(ls.iter().copied());
    let mut out = DivisorSum::new();
    for (side, c) in [
        (set(&[i, m])?, 1),
        (set(&[j, m])?, 1),
        (set(&[k, q])?, 1),
        (set(&[l, q])?, 1),
        (set(&[i, j, m])?, 2),
        (set(&[m, q])?, -1),
    ] {
        add_div(&mut out, SixLabelDivisor::new(ground, side)?, c);
    }
    Ok(out)
}

fn kv_rest(ground: LabelSet, used: [Label; 4]) -> Result<(Label, Label)> {
    let used_set = LabelSet::from_labels(used)?;
    if ground.len() != 6 || used_set.len() != 4 || !used_set.is_subset(ground) {
        return Err(Error::LabelConsistency(format!(
            "{used:?} are not four distinct labels of {ground}"
        )));
    }
    let mut rest = used_set.complement_in(ground).iter();
    Ok((rest.next().unwrap(), rest.next().unwrap()))
}

/// A Keel–Vermeire divisor on M̄₀,₆, stored as the lexicographically least
/// of its 24 presentations `(m, q, i, j)`.
///
/// Two presentations name the same divisor exactly when they induce the
/// same partition of the ground set into the pairs `{m,q}`, `{i,j}`, `{k,ℓ}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KvDivisor {
    ground: LabelSet,
    m: Label,
    q: Label,
    i: Label,
    j: Label,
}

impl KvDivisor {
    pub fn new(ground: LabelSet, m: Label, q: Label, i: Label, j: Label) -> Result<Self> {
        let (k, l) = kv_rest(ground, [m, q, i, j])?;
        let pairs = [[m, q], [i, j], [k, l]];
        let mut best: Option<[Label; 4]> = None;
        for first in 0..3 {
            for second in 0..3 {
                if first == second {
                    continue;
                }
                for [a, b] in [pairs[first], [pairs[first][1], pairs[first][0]]] {
                    for [c, d] in [pairs[second], [pairs[second][1], pairs[second][0]]] {
                        let cand = [a, b, c, d];
                        if best.is_none_or(|cur| cand < cur) {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
        let [m, q, i, j] = best.expect("24 candidates");
        Ok(KvDivisor { ground, m, q, i, j })
    }

    pub fn ground(self) -> LabelSet {
        self.ground
    }

    /// `(m, q, i, j)` of the stored presentation.
    pub fn presentation(self) -> (Label, Label, Label, Label) {
        (self.m, self.q, self.i, self.j)
    }

    pub fn expansion(self) -> DivisorSum {
        kv_expansion(self.ground, self.m, self.q, self.i, self.j).expect("validated")
    }
}

impl fmt::Debug for KvDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δKV_{{{}{},{}{}}}", self.m, self.q, self.i, self.j)
    }
}

/// The 15 Keel–Vermeire divisors on the 6-label set `ground`.
pub fn enumerate_kv(ground: LabelSet) -> Result<Vec<KvDivisor>> {
    if ground.len() != 6 {
        return Err(Error::LabelConsistency(format!("ground {ground} must have 6 labels")));
    }
    let labels: Vec<Label> = ground.iter().collect();
    let mut out = Vec::new();
    for &m in &labels {
        for &q in &labels {
            for &i in &labels {
                for &j in &labels {
                    if LabelSet::from_labels([m, q, i, j])?.len() == 4 {
                        out.push(KvDivisor::new(ground, m, q, i, j)?);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Pushforward along `D_ab ↪ M̄₀,₇` of the divisor on `D_ab` whose
/// partition is `node_side ∪ {x}` versus `other_side`.
///
/// The result is `s_{other_side, node_side, ab}`: a rational tail carrying
/// `{x, a, b}` is glued on at the node.
pub fn lift_divisor(a: Label, b: Label, node_side: LabelSet, other_side: LabelSet) -> Result<Stratum> {
    let tail = LabelSet::from_labels([a, b])?;
    if tail.len() != 2 {
        return Err(Error::LabelConsistency(format!("a = b = {a}")));
    }
    if !node_side.is_disjoint(other_side) || node_side.union(other_side) != tail.complement() {
        return Err(Error::LabelConsistency(format!(
            "{node_side} | {other_side} does not split the labels off {tail}"
        )));
    }
    if node_side.is_empty() || other_side.len() < 2 {
        return Err(Error::LabelConsistency(format!(
            "{node_side}x | {other_side} is not a stable partition"
        )));
    }
    Stratum::new(other_side, node_side, tail)
}

/// The lift `σ^{KV}_{ab,m,ij}` of the Keel–Vermeire divisor
/// `δ^{KV}_{mx,ij}` on `D_ab`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KvLift {
    a: Label,
    b: Label,
    m: Label,
    i: Label,
    j: Label,
}

impl KvLift {
    /// Normalized so that `a < b` and `{i, j}` is the pair, among `{i, j}`
    /// and `{k, ℓ}`, holding the smallest label.
    pub fn new(a: Label, b: Label, m: Label, i: Label, j: Label) -> Result<Self> {
        let used = LabelSet::from_labels([a, b, m, i, j])?;
        if used.len() != 5 {
            return Err(Error::LabelConsistency(format!(
                "lift labels {a}{b},{m},{i}{j} must be distinct"
            )));
        }
        let (a, b) = (a.min(b), a.max(b));
        let rest = used.complement();
        let four = rest.union(LabelSet::from_labels([i, j])?);
        let lowest = four.min().expect("four labels");
        let (i, j) = if i == lowest || j == lowest {
            (i.min(j), i.max(j))
        } else {
            let mut it = rest.iter();
            (it.next().unwrap(), it.next().unwrap())
        };
        Ok(KvLift { a, b, m, i, j })
    }

    pub fn labels(self) -> (Label, Label, Label, Label, Label) {
        (self.a, self.b, self.m, self.i, self.j)
    }

    /// `(k, ℓ)`: the two labels not among `a, b, m, i, j`.
    pub fn rest(self) -> (Label, Label) {
        let mut it = LabelSet::from_labels([self.a, self.b, self.m, self.i, self.j])
            .unwrap()
            .complement()
            .iter();
        (it.next().unwrap(), it.next().unwrap())
    }

    /// `σ_{im,jkℓ,ab} + σ_{jm,ikℓ,ab} + σ_{ijℓm,k,ab} + σ_{ijkm,ℓ,ab}
    /// + 2σ_{ijm,kℓ,ab} − σ_{ijkℓ,m,ab}`, computed by lifting each term of
    /// `δ^{KV}_{mx,ij}`.
    pub fn terms(self) -> StrataSum {
        let (a, b, m, i, j) = self.labels();
        let (k, l) = self.rest();
        let set = |ls: &[Label]| LabelSet::from_labels(ls.iter().copied()).unwrap();
        // (node side, other side, coefficient) for each term of δKV_{mx,ij}
        let divisors = [
            (set(&[j, k, l]), set(&[i, m]), 1),    // δ_im
            (set(&[i, k, l]), set(&[j, m]), 1),    // δ_jm
            (set(&[k]), set(&[i, j, l, m]), 1),    // δ_kx
            (set(&[l]), set(&[i, j, k, m]), 1),    // δ_ℓx
            (set(&[k, l]), set(&[i, j, m]), 2),    // δ_ijm
            (set(&[m]), set(&[i, j, k, l]), -1),   // δ_mx
        ];
        let mut out = StrataSum::new();
        for (node, other, c) in divisors {
            let s = lift_divisor(a, b, node, other).expect("KV terms are stable");
            add_term(&mut out, s, c);
        }
        out
    }

    /// What `π_{y*}` of this lift must be: `δ^{KV}_{mb,ij}` for `y = a`,
    /// `δ^{KV}_{ma,ij}` for `y = b`, and `δ_ab` otherwise.
    pub fn expected_pushforward(self, y: Label) -> Result<DivisorSum> {
        let (a, b, m, i, j) = self.labels();
        let ground = LabelSet::singleton(y).complement();
        if y == a {
            kv_expansion(ground, m, b, i, j)
        } else if y == b {
            kv_expansion(ground, m, a, i, j)
        } else {
            let d = SixLabelDivisor::new(ground, LabelSet::from_labels([a, b])?)?;
            Ok(DivisorSum::from([(d, 1)]))
        }
    }
}

impl fmt::Debug for KvLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σKV_{{{}{},{},{}{}}}", self.a, self.b, self.m, self.i, self.j)
    }
}

impl fmt::Display for KvLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{},{},{}{}", self.a, self.b, self.m, self.i, self.j)
    }
}

impl std::str::FromStr for KvLift {
    type Err = Error;

    /// `"67,5,12"`, i.e. `ab,m,ij`.
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<Vec<Label>> = s
            .trim()
            .split(',')
            .map(|p| p.trim().chars().filter_map(|c| c.to_digit(10)).map(|d| d as Label).collect())
            .collect();
        match digits.as_slice() {
            [ab, m, ij] if ab.len() == 2 && m.len() == 1 && ij.len() == 2 => {
                KvLift::new(ab[0], ab[1], m[0], ij[0], ij[1])
            }
            _ => Err(Error::Parse(format!("expected ab,m,ij in {s:?}"))),
        }
    }
}

/// All 315 lifts: 21 tails `D_ab` times 15 Keel–Vermeire divisors each.
pub fn enumerate_kv_lifts() -> Vec<KvLift> {
    let mut out = Vec::with_capacity(315);
    for a in 1..=N {
        for b in a + 1..=N {
            for m in 1..=N {
                let rest = LabelSet::from_labels([a, b, m]).unwrap();
                if rest.len() != 3 {
                    continue;
                }
                let four: Vec<Label> = rest.complement().iter().collect();
                for partner in 1..4 {
                    out.push(KvLift::new(a, b, m, four[0], four[partner]).unwrap());
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The class `σ^{KV}_{ab,m,ij}` (origin retained).
pub fn kv_lift(lift: KvLift) -> CycleClass {
    combination_class(&lift.terms())
}

/// `π_{y*} σ_s`: a boundary divisor when forgetting `y` contracts a
/// component, zero otherwise.
pub fn pushforward_stratum(y: Label, s: Stratum) -> Option<SixLabelDivisor> {
    let ground = LabelSet::singleton(y).complement();
    let (i, j, k) = (s.i(), s.j(), s.k());
    let side = if i.contains(y) && i.len() == 2 {
        i.without(y).union(j)
    } else if (k.contains(y) && k.len() == 2) || j == LabelSet::singleton(y) {
        // the tail carrying y, or the middle component, is contracted
        i
    } else {
        return None;
    };
    Some(SixLabelDivisor::new(ground, side).expect("contracted strata give divisors"))
}

pub fn pushforward_combination(y: Label, terms: &StrataSum) -> DivisorSum {
    let mut out = DivisorSum::new();
    for (&s, &c) in terms {
        if let Some(d) = pushforward_stratum(y, s) {
            add_div(&mut out, d, c);
        }
    }
    out
}
