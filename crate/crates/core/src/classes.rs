//! Numerical classes of 2-cycles, recorded as intersection vectors.
//!
//! A class is identified with its 420 intersection numbers against the
//! canonical representatives of the stratum classes. The pairing is
//! nondegenerate, so the vector determines the class.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::intersection::{gram_matrix, pair};
use crate::labels::{enumerate_strata, Stratum, StratumType};
use crate::linalg::Rational;
use crate::perm::{act, Permutation};

/// Number of distinct stratum classes; the length of every [`CycleClass`].
pub const CLASS_COUNT: usize = 420;

/// A formal integer combination of strata.
pub type StrataSum = BTreeMap<Stratum, i64>;

pub fn add_term(sum: &mut StrataSum, s: Stratum, coeff: i64) {
    let e = sum.entry(s).or_insert(0);
    *e += coeff;
    if *e == 0 {
        sum.remove(&s);
    }
}

/// A numerical 2-cycle class.
///
/// Equality compares `coords` only; `origin` is provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CycleClass {
    pub coords: Vec<i64>,
    #[serde(skip)]
    pub origin: Option<StrataSum>,
}

impl PartialEq for CycleClass {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for CycleClass {}

impl std::hash::Hash for CycleClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl CycleClass {
    pub fn from_coords(coords: Vec<i64>) -> Self {
        CycleClass { coords, origin: None }
    }

    pub fn zero() -> Self {
        Self::from_coords(vec![0; CLASS_COUNT])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        CycleClass {
            coords: self.coords.iter().map(|x| x * k).collect(),
            origin: self
                .origin
                .as_ref()
                .map(|o| o.iter().map(|(&s, &c)| (s, c * k)).filter(|(_, c)| *c != 0).collect()),
        }
    }

    pub fn plus(&self, other: &CycleClass) -> Self {
        let origin = match (&self.origin, &other.origin) {
            (Some(a), Some(b)) => {
                let mut sum = a.clone();
                for (&s, &c) in b {
                    add_term(&mut sum, s, c);
                }
                Some(sum)
            }
            _ => None,
        };
        CycleClass {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
            origin,
        }
    }

    /// `τ ⋆ self`, the pushforward along the relabeling automorphism.
    pub fn permuted(&self, tau: &Permutation) -> Self {
        let coords = permute_coords(&self.coords, tau);
        let origin = self
            .origin
            .as_ref()
            .map(|o| o.iter().map(|(&s, &c)| (act(tau, s), c)).collect());
        CycleClass { coords, origin }
    }
}

/// Coordinate `i` of the result is coordinate `index(τ⁻¹ · rep_i)` of `v`.
///
/// On class vectors this is `τ ⋆`; on functionals it is the matching
/// action, so `(τ⋆f)·(τ⋆v) = f·v`.
pub fn permute_coords<T: Clone>(v: &[T], tau: &Permutation) -> Vec<T> {
    let space = ClassSpace::get();
    let inv = tau.inverse();
    space
        .reps()
        .iter()
        .map(|&rep| v[space.class_index(act(&inv, rep))].clone())
        .collect()
}

/// `σ_s = σ_t` by the combinatorial criterion: equal strata, or both of type
/// (2,1,4) sharing the 3-element side `I ∪ J`.
pub fn classes_equal_criterion(s: Stratum, t: Stratum) -> bool {
    if s == t {
        return true;
    }
    if s.stratum_type() != StratumType::TWO_ONE_FOUR || t.stratum_type() != StratumType::TWO_ONE_FOUR {
        return false;
    }
    let (i, j, _) = s.size_normalized();
    let (l, m, _) = t.size_normalized();
    i.union(j) == l.union(m)
}

/// The 490 strata, the 420 class representatives and their Gram matrix.
pub struct ClassSpace {
    strata: Vec<Stratum>,
    reps: Vec<Stratum>,
    index: HashMap<Stratum, usize>,
    gram: Vec<Vec<i64>>,
}

impl ClassSpace {
    /// Shared instance, built on first use.
    pub fn get() -> &'static ClassSpace {
        static SPACE: OnceLock<ClassSpace> = OnceLock::new();
        SPACE.get_or_init(ClassSpace::build)
    }

    fn build() -> ClassSpace {
        let strata = enumerate_strata();
        let mut reps: Vec<Stratum> = Vec::with_capacity(CLASS_COUNT);
        let mut index = HashMap::with_capacity(strata.len());
        for &s in &strata {
            // strata are sorted, so the first member of each class wins
            let found = reps.iter().position(|&r| classes_equal_criterion(r, s));
            let idx = found.unwrap_or_else(|| {
                reps.push(s);
                reps.len() - 1
            });
            index.insert(s, idx);
        }
        let gram = gram_matrix(&reps);
        ClassSpace {
            strata,
            reps,
            index,
            gram,
        }
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    /// Class representatives; position `i` is coordinate `i` of every
    /// [`CycleClass`].
    pub fn reps(&self) -> &[Stratum] {
        &self.reps
    }

    pub fn class_index(&self, s: Stratum) -> usize {
        self.index[&s]
    }

    /// Gram matrix of the representatives.
    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }
}

/// The 420 class representatives (smallest stratum of each class).
pub fn enumerate_class_reps() -> Vec<Stratum> {
    ClassSpace::get().reps().to_vec()
}

/// Intersection vector of `σ_s`.
pub fn stratum_class(s: Stratum) -> CycleClass {
    let coords = ClassSpace::get().reps().iter().map(|&r| pair(s, r)).collect();
    CycleClass {
        coords,
        origin: Some(BTreeMap::from([(s, 1)])),
    }
}

pub fn combination_class(terms: &StrataSum) -> CycleClass {
    let mut coords = vec![0i64; CLASS_COUNT];
    for (&s, &c) in terms {
        for (x, &r) in coords.iter_mut().zip(ClassSpace::get().reps()) {
            *x += c * pair(s, r);
        }
    }
    let mut origin = StrataSum::new();
    for (&s, &c) in terms {
        add_term(&mut origin, s, c);
    }
    CycleClass {
        coords,
        origin: Some(origin),
    }
}

/// `Some(r)` with `u = r · v`, else `None`.
pub fn proportional(u: &CycleClass, v: &CycleClass) -> Option<Rational> {
    let Some(pivot) = v.coords.iter().position(|&x| x != 0) else {
        return u.is_zero().then(Rational::zero);
    };
    let r = Rational::new(u.coords[pivot].into(), v.coords[pivot].into());
    let ok = u
        .coords
        .iter()
        .zip(&v.coords)
        .all(|(&a, &b)| Rational::from_integer(a.into()) == &r * Rational::from_integer(b.into()));
    ok.then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn st(s: &str) -> Stratum {
        s.parse().unwrap()
    }

    #[test]
    fn criterion_examples() {
        assert!(classes_equal_criterion(st("12,3,4567"), st("13,2,4567")));
        assert!(!classes_equal_criterion(st("12,34,567"), st("13,24,567")));
        let s = st("123,4,567");
        assert!(classes_equal_criterion(s, s));
    }

    #[test]
    fn representatives() {
        let reps = enumerate_class_reps();
        assert_eq!(reps.len(), CLASS_COUNT);
        let small = reps
            .iter()
            .filter(|s| s.stratum_type() == StratumType::TWO_ONE_FOUR)
            .count();
        assert_eq!(small, 35);
        let mut sorted = reps.clone();
        sorted.sort();
        assert_eq!(sorted, reps);
    }

    #[test]
    fn equivalent_strata_share_vectors() {
        assert_eq!(stratum_class(st("12,3,4567")), stratum_class(st("13,2,4567")));
        assert_eq!(stratum_class(st("12,3,4567")), stratum_class(st("23,1,4567")));
        let s = st("12,34,567");
        let c = stratum_class(s);
        assert_eq!(c.coords[ClassSpace::get().class_index(s)], pair(s, s));
    }

    #[test]
    fn proportionality() {
        let v = stratum_class(st("12,345,67"));
        assert_eq!(proportional(&v, &v), Some(rat(1)));
        assert_eq!(proportional(&v.scaled(2), &v), Some(rat(2)));
        assert_eq!(proportional(&CycleClass::zero(), &v), Some(rat(0)));
        assert_eq!(proportional(&v, &CycleClass::zero()), None);
        let w = stratum_class(st("12,34,567"));
        assert_eq!(proportional(&v, &w), None);
    }

    #[test]
    fn combinations() {
        assert!(combination_class(&StrataSum::new()).is_zero());
        let s = st("12,3,4567");
        assert_eq!(combination_class(&BTreeMap::from([(s, 1)])), stratum_class(s));
        let t = st("12,345,67");
        let both = combination_class(&BTreeMap::from([(s, 1), (t, 2)]));
        assert_eq!(both, stratum_class(s).plus(&stratum_class(t).scaled(2)));
        // cancelling terms leave no origin entries
        let cancel = stratum_class(s).plus(&stratum_class(s).scaled(-1));
        assert!(cancel.is_zero());
        assert!(cancel.origin.unwrap().is_empty());
    }

    #[test]
    fn permutation_of_class_vectors() {
        let tau: Permutation = "(1253)(47)".parse().unwrap();
        for s in ["12,3,4567", "123,4,567", "12,345,67"] {
            let s = st(s);
            assert_eq!(stratum_class(s).permuted(&tau), stratum_class(act(&tau, s)));
        }
    }
}
