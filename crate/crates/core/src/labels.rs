//! Marked-point labels, boundary divisors and boundary 2-strata of M̄₀,₇.
//!
//! Everything here is a small `Copy` value built on a 7-bit mask. Divisors
//! and strata are stored in canonical form so that `==` is equality of the
//! underlying geometric objects.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A marked point, `1..=7`.
pub type Label = u8;

/// Number of marked points.
pub const N: u8 = 7;

const FULL_MASK: u8 = (1 << N) - 1;

/// A subset of `{1, …, 7}`.
///
/// Ordered by the numeric value of the mask; this is the fixed total order
/// used for every canonical form in the crate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelSet(u8);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);
    pub const FULL: LabelSet = LabelSet(FULL_MASK);

    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask & !FULL_MASK != 0 {
            return Err(Error::InvalidLabel(8 + (mask >> N).trailing_zeros() as u8));
        }
        Ok(LabelSet(mask))
    }

    pub fn from_labels<I: IntoIterator<Item = Label>>(labels: I) -> Result<Self> {
        let mut mask = 0u8;
        for l in labels {
            if !(1..=N).contains(&l) {
                return Err(Error::InvalidLabel(l));
            }
            mask |= 1 << (l - 1);
        }
        Ok(LabelSet(mask))
    }

    pub fn singleton(l: Label) -> Self {
        assert!((1..=N).contains(&l), "label {l} out of range");
        LabelSet(1 << (l - 1))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, l: Label) -> bool {
        (1..=N).contains(&l) && self.0 & (1 << (l - 1)) != 0
    }

    pub fn complement(self) -> Self {
        LabelSet(!self.0 & FULL_MASK)
    }

    /// Complement inside `ground`.
    pub fn complement_in(self, ground: LabelSet) -> Self {
        LabelSet(ground.0 & !self.0)
    }

    pub fn union(self, other: Self) -> Self {
        LabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        LabelSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        LabelSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn with(self, l: Label) -> Self {
        self.union(LabelSet::singleton(l))
    }

    pub fn without(self, l: Label) -> Self {
        self.difference(LabelSet::singleton(l))
    }

    /// Smallest label, if any.
    pub fn min(self) -> Option<Label> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Label + 1)
    }

    pub fn iter(self) -> impl Iterator<Item = Label> {
        (1..=N).filter(move |&l| self.contains(l))
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = LabelSet> {
        (0..=FULL_MASK)
            .filter(move |m| m & !self.0 == 0)
            .map(LabelSet)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        for l in self.iter() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for LabelSet {
    type Err = Error;

    /// Parses digit strings such as `"4567"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty label set".into()));
        }
        let mut labels = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("bad label character {c:?} in {s:?}")))?;
            labels.push(d as Label);
        }
        let set = LabelSet::from_labels(labels.iter().copied())?;
        if set.len() != labels.len() {
            return Err(Error::Parse(format!("repeated label in {s:?}")));
        }
        Ok(set)
    }
}

/// `a ** b`: one of `a ⊆ b`, `a ⊆ bᶜ`, `a ⊇ b`, `a ⊇ bᶜ`.
///
/// For boundary divisors this is exactly the condition `D_a ∩ D_b ≠ ∅`.
pub fn star(a: LabelSet, b: LabelSet) -> bool {
    let bc = b.complement();
    a.is_subset(b) || a.is_subset(bc) || b.is_subset(a) || bc.is_subset(a)
}

/// A boundary divisor `δ_S = δ_{Sᶜ}` of M̄₀,₇, stored as the side containing 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "LabelSet", into = "LabelSet")]
pub struct DivisorClass(LabelSet);

impl DivisorClass {
    pub fn new(side: LabelSet) -> Result<Self> {
        let n = side.len();
        if !(2..=5).contains(&n) {
            return Err(Error::InvalidDivisor(format!(
                "side {side} has {n} labels, need 2..=5"
            )));
        }
        Ok(DivisorClass(if side.contains(1) {
            side
        } else {
            side.complement()
        }))
    }

    /// The canonical side (contains label 1).
    pub fn rep(self) -> LabelSet {
        self.0
    }

    /// Either side is accepted.
    pub fn has_side(self, side: LabelSet) -> bool {
        self.0 == side || self.0 == side.complement()
    }

    pub fn meets(self, other: DivisorClass) -> bool {
        star(self.0, other.0)
    }

    /// The representative of `self` disjoint from some representative of
    /// `other`, paired with that representative. Requires `self ** other`
    /// and `self ≠ other`.
    pub fn disjoint_sides(self, other: DivisorClass) -> Option<(LabelSet, LabelSet)> {
        if self == other {
            return None;
        }
        for a in [self.0, self.0.complement()] {
            for b in [other.0, other.0.complement()] {
                if a.is_disjoint(b) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

impl TryFrom<LabelSet> for DivisorClass {
    type Error = Error;
    fn try_from(s: LabelSet) -> Result<Self> {
        DivisorClass::new(s)
    }
}

impl From<DivisorClass> for LabelSet {
    fn from(d: DivisorClass) -> LabelSet {
        d.0
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ_{}", self.0)
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All 56 boundary divisors, sorted by canonical side.
pub fn enumerate_divisors() -> Vec<DivisorClass> {
    let mut out: Vec<_> = LabelSet::FULL
        .subsets()
        .filter(|s| s.contains(1) && (2..=5).contains(&s.len()))
        .map(DivisorClass)
        .collect();
    out.sort();
    out
}

/// Multiset of part sizes, sorted ascending, e.g. `(1, 2, 4)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StratumType(pub [usize; 3]);

impl StratumType {
    /// The type whose self-intersection vanishes and whose classes coincide
    /// in threes.
    pub const TWO_ONE_FOUR: StratumType = StratumType([1, 2, 4]);
}

/// A boundary 2-stratum `s_{I,J,K}`: a stable curve with three components
/// carrying `I`, `J`, `K`, where `J` sits on the middle component.
///
/// Canonical orientation has `I < K` in the [`LabelSet`] order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[LabelSet; 3]", into = "[LabelSet; 3]")]
pub struct Stratum {
    i: LabelSet,
    j: LabelSet,
    k: LabelSet,
}

impl Stratum {
    pub fn new(i: LabelSet, j: LabelSet, k: LabelSet) -> Result<Self> {
        let parts_ok = i.is_disjoint(j)
            && i.is_disjoint(k)
            && j.is_disjoint(k)
            && i.union(j).union(k) == LabelSet::FULL;
        if !parts_ok {
            return Err(Error::InvalidStratum(format!(
                "{i},{j},{k} is not a partition of 1..7"
            )));
        }
        let sizes_ok =
            (2..=4).contains(&i.len()) && (1..=3).contains(&j.len()) && (2..=4).contains(&k.len());
        if !sizes_ok {
            return Err(Error::InvalidStratum(format!(
                "{i},{j},{k} violates stability"
            )));
        }
        Ok(if i <= k {
            Stratum { i, j, k }
        } else {
            Stratum { i: k, j, k: i }
        })
    }

    /// The stratum `δ_a · δ_b` for two distinct meeting divisors.
    pub fn from_divisors(a: DivisorClass, b: DivisorClass) -> Result<Self> {
        if !a.meets(b) {
            return Err(Error::InvalidStratum(format!("{a} and {b} do not meet")));
        }
        let (x, y) = a
            .disjoint_sides(b)
            .ok_or_else(|| Error::InvalidStratum(format!("{a} and {b} coincide")))?;
        Stratum::new(x, x.union(y).complement(), y)
    }

    pub fn i(self) -> LabelSet {
        self.i
    }

    pub fn j(self) -> LabelSet {
        self.j
    }

    pub fn k(self) -> LabelSet {
        self.k
    }

    /// The two divisors whose product is this stratum.
    pub fn divisors(self) -> (DivisorClass, DivisorClass) {
        (DivisorClass(canon_side(self.i)), DivisorClass(canon_side(self.k)))
    }

    /// `(I, J, K)` with `|I| ≤ |K|`; ties keep the canonical orientation.
    pub fn size_normalized(self) -> (LabelSet, LabelSet, LabelSet) {
        if self.i.len() <= self.k.len() {
            (self.i, self.j, self.k)
        } else {
            (self.k, self.j, self.i)
        }
    }

    pub fn stratum_type(self) -> StratumType {
        let mut s = [self.i.len(), self.j.len(), self.k.len()];
        s.sort_unstable();
        StratumType(s)
    }

    /// Relabel every part through `f` and re-canonicalize.
    pub fn map_labels(self, f: impl Fn(LabelSet) -> LabelSet) -> Self {
        Stratum::new(f(self.i), f(self.j), f(self.k)).expect("relabeling preserves validity")
    }
}

fn canon_side(s: LabelSet) -> LabelSet {
    if s.contains(1) {
        s
    } else {
        s.complement()
    }
}

impl TryFrom<[LabelSet; 3]> for Stratum {
    type Error = Error;
    fn try_from([i, j, k]: [LabelSet; 3]) -> Result<Self> {
        Stratum::new(i, j, k)
    }
}

impl From<Stratum> for [LabelSet; 3] {
    fn from(s: Stratum) -> Self {
        [s.i, s.j, s.k]
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s_{{{},{},{}}}", self.i, self.j, self.k)
    }
}

impl fmt::Debug for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Stratum {
    type Err = Error;

    /// Parses `"12,3,4567"` (optionally wrapped as `s_{12,3,4567}`).
    fn from_str(s: &str) -> Result<Self> {
        let t = s
            .trim()
            .trim_start_matches("s_")
            .trim_start_matches('{')
            .trim_end_matches('}');
        let parts: Vec<&str> = t.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected I,J,K in {s:?}")));
        }
        Stratum::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?)
    }
}

/// All 490 boundary 2-strata in canonical form, sorted.
pub fn enumerate_strata() -> Vec<Stratum> {
    let mut out = Vec::with_capacity(490);
    for i in LabelSet::FULL.subsets() {
        for k in i.complement().subsets() {
            let j = i.union(k).complement();
            if i < k {
                if let Ok(s) = Stratum::new(i, j, k) {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(s: &str) -> LabelSet {
        s.parse().unwrap()
    }

    #[test]
    fn divisor_count_and_complements() {
        let divs = enumerate_divisors();
        assert_eq!(divs.len(), 56);
        let d12 = DivisorClass::new(ls("12")).unwrap();
        assert_eq!(divs.iter().filter(|&&d| d == d12).count(), 1);
        assert_eq!(DivisorClass::new(ls("34567")).unwrap(), d12);
        assert!(DivisorClass::new(ls("1")).is_err());
        assert!(DivisorClass::new(ls("123456")).is_err());
    }

    #[test]
    fn divisor_count_matches_binomials() {
        // (C(7,2) + C(7,3) + C(7,4) + C(7,5)) / 2
        let brute = (0u8..128)
            .filter(|m| (2..=5).contains(&m.count_ones()))
            .count();
        assert_eq!(brute / 2, enumerate_divisors().len());
    }

    #[test]
    fn strata_enumeration() {
        let strata = enumerate_strata();
        assert_eq!(strata.len(), 490);
        let mut sorted = strata.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 490);
        let a: Stratum = "12,3,4567".parse().unwrap();
        let b: Stratum = "4567,3,12".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(strata.iter().filter(|&&s| s == a).count(), 1);
        let small = strata
            .iter()
            .filter(|s| {
                let (i, j, _) = s.size_normalized();
                j.len() == 1 && i.len() == 2
            })
            .count();
        // C(7,4) choices of the 4-part, then 3 ways to split the rest into 2+1
        assert_eq!(small, 35 * 3);
    }

    #[test]
    fn every_partition_canonicalizes_into_the_list() {
        let strata = enumerate_strata();
        for i in LabelSet::FULL.subsets() {
            for j in i.complement().subsets() {
                let k = i.union(j).complement();
                if let Ok(s) = Stratum::new(i, j, k) {
                    assert!(strata.binary_search(&s).is_ok());
                }
            }
        }
    }

    #[test]
    fn star_examples() {
        assert!(star(ls("12"), ls("123")));
        assert!(!star(ls("13"), ls("12")));
        assert!(star(ls("12"), ls("34567")));
    }

    #[test]
    fn star_symmetric_and_complement_invariant() {
        let divs = enumerate_divisors();
        for a in &divs {
            for b in &divs {
                let (a, b) = (a.rep(), b.rep());
                assert_eq!(star(a, b), star(b, a));
                assert_eq!(star(a, b), star(a.complement(), b));
                assert_eq!(star(a, b), star(a, b.complement()));
            }
        }
    }

    #[test]
    fn stratum_validation() {
        assert!(Stratum::new(ls("1"), ls("23"), ls("4567")).is_err());
        assert!(Stratum::new(ls("12"), ls("3"), ls("456")).is_err());
        assert!(Stratum::new(ls("12"), ls("3456"), ls("7")).is_err());
        let s: Stratum = "12,345,67".parse().unwrap();
        assert_eq!(s.stratum_type(), StratumType([2, 2, 3]));
        assert_eq!(
            Stratum::from_divisors(
                DivisorClass::new(ls("12")).unwrap(),
                DivisorClass::new(ls("67")).unwrap()
            )
            .unwrap(),
            s
        );
    }

    #[test]
    fn display_roundtrip() {
        for s in enumerate_strata() {
            let text = s.to_string();
            assert_eq!(text.parse::<Stratum>().unwrap(), s);
        }
    }
}
