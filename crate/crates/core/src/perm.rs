//! The symmetric group S₇ acting on labels, strata and anything built on them.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labels::{Label, LabelSet, Stratum, N};

/// Order of S₇.
pub const GROUP_ORDER: usize = 5040;

/// A bijection of `{1, …, 7}`, stored as its image array.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Label; 7]", into = "[Label; 7]")]
pub struct Permutation([Label; 7]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([1, 2, 3, 4, 5, 6, 7]);

    pub fn from_images(images: [Label; 7]) -> Result<Self> {
        let set = LabelSet::from_labels(images.iter().copied())
            .map_err(|e| Error::InvalidPermutation(e.to_string()))?;
        if set != LabelSet::FULL {
            return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
        }
        Ok(Permutation(images))
    }

    /// Transposition `(a b)`.
    pub fn transposition(a: Label, b: Label) -> Self {
        let mut img = Self::IDENTITY.0;
        img.swap(a as usize - 1, b as usize - 1);
        Permutation(img)
    }

    pub fn images(&self) -> [Label; 7] {
        self.0
    }

    pub fn apply(&self, l: Label) -> Label {
        self.0[l as usize - 1]
    }

    pub fn apply_set(&self, s: LabelSet) -> LabelSet {
        let mut mask = 0u8;
        for l in s.iter() {
            mask |= 1 << (self.apply(l) - 1);
        }
        LabelSet::from_mask(mask).expect("images stay in range")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut img = [0; 7];
        for (slot, l) in img.iter_mut().zip(1..=N) {
            *slot = self.apply(other.apply(l));
        }
        Permutation(img)
    }

    pub fn inverse(&self) -> Permutation {
        let mut img = [0; 7];
        for l in 1..=N {
            img[self.apply(l) as usize - 1] = l;
        }
        Permutation(img)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest label.
    pub fn cycles(&self) -> Vec<Vec<Label>> {
        let mut seen = LabelSet::EMPTY;
        let mut out = Vec::new();
        for start in 1..=N {
            if seen.contains(start) {
                continue;
            }
            let mut cycle = vec![start];
            seen = seen.with(start);
            let mut next = self.apply(start);
            while next != start {
                cycle.push(next);
                seen = seen.with(next);
                next = self.apply(next);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// All 5040 permutations in lexicographic order of image arrays.
    pub fn all() -> Vec<Permutation> {
        let mut cur = Self::IDENTITY.0;
        let mut out = Vec::with_capacity(GROUP_ORDER);
        loop {
            out.push(Permutation(cur));
            // next lexicographic permutation
            let Some(i) = (0..6).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..7).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

impl TryFrom<[Label; 7]> for Permutation {
    type Error = Error;
    fn try_from(images: [Label; 7]) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for [Label; 7] {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        for c in cycles {
            f.write_str("(")?;
            for l in c {
                write!(f, "{l}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Cycle notation such as `"(156)(473)"` or `"id"`. A product of
    /// cycles is composed right to left, like functions.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "id" || s.is_empty() {
            return Ok(Self::IDENTITY);
        }
        let mut result = Self::IDENTITY;
        let mut rest = s;
        let mut cycles = Vec::new();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::Parse(format!("malformed cycle notation {s:?}")))?;
            cycles.push(body.0);
            rest = body.1.trim_start();
        }
        for body in cycles.into_iter().rev() {
            let labels: Vec<Label> = body
                .chars()
                .filter(|c| !c.is_whitespace() && *c != ',')
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as Label)
                        .ok_or_else(|| Error::Parse(format!("bad label {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?;
            let set = LabelSet::from_labels(labels.iter().copied())?;
            if set.len() != labels.len() {
                return Err(Error::Parse(format!("repeated label in cycle ({body})")));
            }
            let mut img = Self::IDENTITY.0;
            for (idx, &l) in labels.iter().enumerate() {
                img[l as usize - 1] = labels[(idx + 1) % labels.len()];
            }
            result = Permutation(img).compose(&result);
        }
        Ok(result)
    }
}

/// Relabel a stratum pointwise and re-canonicalize.
pub fn act(p: &Permutation, s: Stratum) -> Stratum {
    s.map_labels(|set| p.apply_set(set))
}

/// The subgroup generated by `gens`, by breadth-first closure.
pub fn subgroup_closure(gens: &[Permutation]) -> BTreeSet<Permutation> {
    let mut group = BTreeSet::from([Permutation::IDENTITY]);
    let mut queue = VecDeque::from([Permutation::IDENTITY]);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let gh = g.compose(h);
            if group.insert(gh) {
                queue.push_back(gh);
            }
        }
    }
    group
}

/// A generating set of `group`, greedily: each element is kept when it is
/// not in the subgroup generated by the ones kept so far.
pub fn generating_set(group: &BTreeSet<Permutation>) -> Vec<Permutation> {
    let mut gens = Vec::new();
    let mut span = BTreeSet::from([Permutation::IDENTITY]);
    for g in group {
        if !span.contains(g) {
            gens.push(*g);
            span = subgroup_closure(&gens);
        }
    }
    gens
}

/// Orbit of `seed` under all of S₇ and the order of its stabilizer.
pub fn orbit_with_stabilizer<T, F>(seed: &T, action: F) -> (HashSet<T>, usize)
where
    T: Clone + Eq + Hash,
    F: Fn(&Permutation, &T) -> T,
{
    let mut orbit = HashSet::new();
    let mut stabilizer = 0;
    for p in Permutation::all() {
        let image = action(&p, seed);
        if image == *seed {
            stabilizer += 1;
        }
        orbit.insert(image);
    }
    (orbit, stabilizer)
}

/// Elements of S₇ fixing `seed`.
pub fn stabilizer<T, F>(seed: &T, action: F) -> Vec<Permutation>
where
    T: Eq,
    F: Fn(&Permutation, &T) -> T,
{
    Permutation::all()
        .into_iter()
        .filter(|p| action(p, seed) == *seed)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn generating_sets_span() {
        let group = subgroup_closure(&[p("(1234567)"), p("(12)")]);
        assert_eq!(group.len(), GROUP_ORDER);
        let gens = generating_set(&group);
        assert_eq!(subgroup_closure(&gens), group);
        let klein = subgroup_closure(&[p("(12)(34)"), p("(13)(24)")]);
        let gens = generating_set(&klein);
        assert_eq!(gens.len(), 2);
        assert_eq!(subgroup_closure(&gens), klein);
        assert!(generating_set(&BTreeSet::from([Permutation::IDENTITY])).is_empty());
    }

    #[test]
    fn group_has_5040_distinct_elements() {
        let all = Permutation::all();
        assert_eq!(all.len(), GROUP_ORDER);
        let set: BTreeSet<_> = all.iter().collect();
        assert_eq!(set.len(), GROUP_ORDER);
    }

    #[test]
    fn cycle_notation() {
        let t = p("(36)(45)");
        assert_eq!(t.images(), [1, 2, 6, 5, 4, 3, 7]);
        assert_eq!(t.to_string(), "(36)(45)");
        assert_eq!(p("(156)(473)").apply(1), 5);
        assert_eq!(p("(156)(473)").apply(3), 4);
        assert_eq!(p("id"), Permutation::IDENTITY);
        // right-to-left: (12)(23) sends 3 -> 2 -> 1
        assert_eq!(p("(12)(23)").apply(3), 1);
        assert!("(1 2".parse::<Permutation>().is_err());
        assert!("(11)".parse::<Permutation>().is_err());
    }

    #[test]
    fn act_examples() {
        let s: Stratum = "12,34,567".parse().unwrap();
        assert_eq!(act(&Permutation::IDENTITY, s), s);
        let expected: Stratum = "12,56,347".parse().unwrap();
        assert_eq!(act(&p("(36)(45)"), s), expected);
    }

    #[test]
    fn closure_examples() {
        assert_eq!(subgroup_closure(&[Permutation::IDENTITY]).len(), 1);
        let g = subgroup_closure(&[p("(12)")]);
        assert_eq!(g.len(), 2);
        assert!(g.contains(&Permutation::IDENTITY));
        let g1 = ["(34)(65)", "(47)(16)", "(37)(15)", "(156)(473)", "(165)(374)"];
        let g2 = ["(12)(56)", "(25)(16)", "(26)(15)"];
        let gens: Vec<_> = g1.iter().chain(g2.iter()).map(|s| p(s)).collect();
        assert_eq!(subgroup_closure(&gens).len(), 24);
        assert_eq!(subgroup_closure(&gens[..5]).len(), 6);
        assert_eq!(subgroup_closure(&gens[5..]).len(), 4);
    }

    #[test]
    fn stratum_orbit() {
        let s: Stratum = "12,3,4567".parse().unwrap();
        let (orbit, stab) = orbit_with_stabilizer(&s, |p, s| act(p, *s));
        assert_eq!(orbit.len(), 105);
        assert_eq!(stab, 48);
        assert_eq!(orbit.len() * stab, GROUP_ORDER);
    }
}
