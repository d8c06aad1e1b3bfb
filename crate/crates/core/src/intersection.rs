//! Intersection numbers of boundary 2-strata.
//!
//! [`pair`] is the closed form. [`self_intersection_oracle`] recomputes the
//! diagonal by rewriting one factor with a Keel relation and expanding the
//! result into four-fold divisor products that only need the off-diagonal
//! formula, so the two routes check each other.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::labels::{DivisorClass, Label, LabelSet, Stratum};

/// An integer combination of boundary divisors. Zero coefficients are never
/// stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct DivisorCombination {
    terms: BTreeMap<DivisorClass, i64>,
}

impl DivisorCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, d: DivisorClass, coeff: i64) {
        let entry = self.terms.entry(d).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&d);
        }
    }

    pub fn coefficient(&self, d: DivisorClass) -> i64 {
        self.terms.get(&d).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (DivisorClass, i64)> + '_ {
        self.terms.iter().map(|(&d, &c)| (d, c))
    }
}

impl fmt::Debug for DivisorCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// `s ** t`: every divisor of `s` meets every divisor of `t`.
pub fn stratum_star(s: Stratum, t: Stratum) -> bool {
    let (a, b) = s.divisors();
    let (c, d) = t.divisors();
    a.meets(c) && a.meets(d) && b.meets(c) && b.meets(d)
}

/// `σ_s · σ_t = δ_{I1} · δ_{I2} · δ_{I3} · δ_{I4}` with `I1 ∩ I2 = ∅`,
/// `|I1| ≤ |I2|`, and the repeated divisor (if any) at `I3 = I4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub i1: LabelSet,
    pub i2: LabelSet,
    pub i3: LabelSet,
    pub i4: LabelSet,
}

impl NormalForm {
    pub fn has_repeat(&self) -> bool {
        DivisorClass::new(self.i3).ok() == DivisorClass::new(self.i4).ok()
    }
}

pub fn normal_form(s: Stratum, t: Stratum) -> Result<NormalForm> {
    if s == t {
        return Err(Error::NoNormalForm(format!("{s} is paired with itself")));
    }
    if !stratum_star(s, t) {
        return Err(Error::NoNormalForm(format!("{s} and {t} do not satisfy **")));
    }
    let (a, b) = s.divisors();
    let (c, d) = t.divisors();
    // At most one divisor of s can reappear in t, otherwise s = t.
    let shared = [(a, b), (b, a)]
        .into_iter()
        .find_map(|(x, other_s)| {
            if x == c {
                Some((x, other_s, d))
            } else if x == d {
                Some((x, other_s, c))
            } else {
                None
            }
        });
    let (first, second, i3, i4) = match shared {
        Some((rep, p, q)) => (p, q, rep, rep),
        None => (a, b, c, d),
    };
    let (x, y) = first
        .disjoint_sides(second)
        .expect("distinct meeting divisors have disjoint sides");
    let (i1, i2) = if (x.len(), x) <= (y.len(), y) { (x, y) } else { (y, x) };
    Ok(NormalForm {
        i1,
        i2,
        i3: i3.rep(),
        i4: i4.rep(),
    })
}

/// Self-intersection `σ²_{I,J,K}` in the orientation `|I| ≤ |K|`.
fn self_pairing(s: Stratum) -> i64 {
    let (i, j, _) = s.size_normalized();
    match (i.len(), j.len()) {
        (2, 1) => 0,
        (_, 3) => 2,
        _ => 1,
    }
}

/// The intersection number `σ_s · σ_t`.
pub fn pair(s: Stratum, t: Stratum) -> i64 {
    if s == t {
        return self_pairing(s);
    }
    if !stratum_star(s, t) {
        return 0;
    }
    let nf = normal_form(s, t).expect("distinct ** strata have a normal form");
    if nf.has_repeat() {
        // F-curve self-intersection: −1 on M̄₀,₅, 0 on P¹ × P¹
        let small_five_pointed = nf.i1.len() == 2 && matches!(nf.i2.len(), 2 | 4);
        if small_five_pointed {
            -1
        } else {
            0
        }
    } else {
        1
    }
}

/// `Σ_{i,j∈S; k,l∉S} δ_S − Σ_{i,k∈S; j,l∉S} δ_S`, which is numerically
/// trivial.
pub fn keel_relation(i: Label, j: Label, k: Label, l: Label) -> Result<DivisorCombination> {
    let quad = LabelSet::from_labels([i, j, k, l])?;
    if quad.len() != 4 {
        return Err(Error::RepeatedLabels);
    }
    let free = quad.complement();
    let mut out = DivisorCombination::new();
    for extra in free.subsets() {
        let plus = LabelSet::from_labels([i, j])?.union(extra);
        let minus = LabelSet::from_labels([i, k])?.union(extra);
        out.add(DivisorClass::new(plus)?, 1);
        out.add(DivisorClass::new(minus)?, -1);
    }
    Ok(out)
}

/// The four-fold product `δ_1 · δ_2 · δ_3 · δ_4`, for multisets that can be
/// grouped into two strata.
pub fn quad_product(d: [DivisorClass; 4]) -> Result<i64> {
    for x in 0..4 {
        for y in x + 1..4 {
            if !d[x].meets(d[y]) {
                return Ok(0);
            }
        }
    }
    let pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))];
    for ((a, b), (c, e)) in pairings {
        if d[a] != d[b] && d[c] != d[e] {
            let s = Stratum::from_divisors(d[a], d[b])?;
            let t = Stratum::from_divisors(d[c], d[e])?;
            return Ok(pair(s, t));
        }
    }
    Err(Error::UnsupportedConfiguration(format!(
        "{d:?} does not split into two strata"
    )))
}

/// Keel relation used to rewrite `δ_I` in `σ²_{I,J,K}`: `i, j ∈ I`, `k ∈ J`,
/// `l ∈ K` (smallest labels of each part).
pub fn oracle_relation(s: Stratum) -> (Label, Label, Label, Label) {
    let (i_part, j_part, k_part) = s.size_normalized();
    let mut it = i_part.iter();
    let i = it.next().expect("|I| ≥ 2");
    let j = it.next().expect("|I| ≥ 2");
    (i, j, j_part.min().expect("|J| ≥ 1"), k_part.min().expect("|K| ≥ 2"))
}

/// `σ²_s` recomputed as `Σ_T c_T · δ_T · δ_I · δ_K · δ_K`, where
/// `δ_I = Σ_T c_T δ_T` comes from a Keel relation.
pub fn self_intersection_oracle(s: Stratum) -> Result<i64> {
    let (i_part, _, k_part) = s.size_normalized();
    let di = DivisorClass::new(i_part)?;
    let dk = DivisorClass::new(k_part)?;
    let (i, j, k, l) = oracle_relation(s);
    let relation = keel_relation(i, j, k, l)?;
    if relation.coefficient(di) != 1 || relation.coefficient(dk) != 0 {
        return Err(Error::NoAdmissibleRelation(s.to_string()));
    }
    let mut total = 0;
    for (t, c) in relation.iter() {
        if t == di {
            continue;
        }
        // δ_I = δ_I − R, so every other term enters with the opposite sign.
        total -= c * quad_product([t, di, dk, dk])?;
    }
    Ok(total)
}

/// `gram[a][b] = pair(strata[a], strata[b])`.
pub fn gram_matrix(strata: &[Stratum]) -> Vec<Vec<i64>> {
    strata
        .par_iter()
        .map(|&s| strata.iter().map(|&t| pair(s, t)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::enumerate_strata;

    fn st(s: &str) -> Stratum {
        s.parse().unwrap()
    }

    fn dv(s: &str) -> DivisorClass {
        DivisorClass::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn star_examples() {
        let s = st("12,3,4567");
        assert!(stratum_star(s, s));
        assert!(stratum_star(s, st("45,123,67")));
        assert!(!stratum_star(st("13,2,4567"), st("12,34,567")));
    }

    #[test]
    fn normal_form_examples() {
        assert!(normal_form(st("12,3,4567"), st("12,4,3567")).is_err());
        let nf = normal_form(st("12,3,4567"), st("12,34,567")).unwrap();
        assert!(nf.has_repeat());
        assert_eq!(nf.i3, "12".parse().unwrap());
        assert_eq!((nf.i1, nf.i2), ("123".parse().unwrap(), "567".parse().unwrap()));

        assert!(normal_form(st("12,34,567"), st("12,35,467")).is_err());
        let nf = normal_form(st("12,34,567"), st("12,345,67")).unwrap();
        assert!(nf.has_repeat());
        assert_eq!(nf.i3, "12".parse().unwrap());
        assert_eq!(nf.i4, nf.i3);

        let nf = normal_form(st("12,3,4567"), st("45,123,67")).unwrap();
        assert!(!nf.has_repeat());
        assert!(nf.i1.is_disjoint(nf.i2));
        let four: Vec<_> = [nf.i1, nf.i2, nf.i3, nf.i4]
            .iter()
            .map(|&x| DivisorClass::new(x).unwrap())
            .collect();
        for a in 0..4 {
            for b in a + 1..4 {
                assert_ne!(four[a], four[b]);
            }
        }

        assert!(normal_form(st("12,3,4567"), st("12,3,4567")).is_err());
        assert!(normal_form(st("13,2,4567"), st("12,34,567")).is_err());
    }

    #[test]
    fn worked_values() {
        assert_eq!(pair(st("12,3,4567"), st("12,3,4567")), 0);
        assert_eq!(pair(st("12,345,67"), st("12,345,67")), 2);
        assert_eq!(pair(st("123,4,567"), st("123,4,567")), 1);
        assert_eq!(pair(st("12,34,567"), st("12,34,567")), 1);
        assert_eq!(pair(st("12,3,4567"), st("45,123,67")), 1);
        for other in [
            "12,4,3567", "13,4,2567", "14,2,3567", "14,3,2567", "14,5,2367", "34,1,2567",
            "34,5,1267", "45,1,2367", "45,3,1267", "45,6,1237",
        ] {
            assert_eq!(pair(st(other), st("45,123,67")), 0, "{other}");
        }
    }

    #[test]
    fn keel_relation_shape() {
        let r = keel_relation(1, 2, 3, 4).unwrap();
        assert_eq!(r.coefficient(dv("12")), 1);
        assert_eq!(r.coefficient(dv("13")), -1);
        assert_eq!(r.len(), 16);
        assert_eq!(r.iter().filter(|&(_, c)| c > 0).count(), 8);
        assert_eq!(r.iter().filter(|&(_, c)| c < 0).count(), 8);
        // the displayed expansion of δ₁₂
        for plus in ["13", "135", "136", "137", "1356", "1357", "1367", "13567"] {
            assert_eq!(r.coefficient(dv(plus)), -1, "{plus}");
        }
        for minus in ["125", "126", "127", "1256", "1257", "1267", "12567"] {
            assert_eq!(r.coefficient(dv(minus)), 1, "{minus}");
        }
        assert_eq!(keel_relation(1, 2, 2, 4), Err(Error::RepeatedLabels));
        assert!(keel_relation(1, 2, 3, 9).is_err());
    }

    #[test]
    fn keel_relation_is_numerically_trivial() {
        // Pair the relation against δ_A · δ_B · δ_C for a few F-curve-shaped
        // triples: every term is supported and the total vanishes.
        for (i, j, k, l) in [(1, 2, 3, 4), (2, 5, 7, 1), (3, 6, 4, 7)] {
            let r = keel_relation(i, j, k, l).unwrap();
            for s in enumerate_strata() {
                let (a, b) = s.divisors();
                for c in crate::labels::enumerate_divisors() {
                    if c == a || c == b || !c.meets(a) || !c.meets(b) {
                        continue;
                    }
                    let mut total = 0;
                    for (t, coeff) in r.iter() {
                        total += coeff * quad_product([t, a, b, c]).unwrap();
                    }
                    assert_eq!(total, 0, "{s} {c:?}");
                }
            }
        }
    }

    #[test]
    fn quad_product_examples() {
        assert_eq!(quad_product([dv("12"), dv("4567"), dv("567"), dv("567")]), Ok(-1));
        assert_eq!(quad_product([dv("13"), dv("4567"), dv("12"), dv("4567")]), Ok(0));
        assert_eq!(quad_product([dv("12"), dv("4567"), dv("45"), dv("67")]), Ok(1));
        assert!(matches!(
            quad_product([dv("12"), dv("12"), dv("12"), dv("4567")]),
            Err(Error::UnsupportedConfiguration(_))
        ));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(self_intersection_oracle(st("12,3,4567")), Ok(0));
        assert_eq!(self_intersection_oracle(st("12,345,67")), Ok(2));
        assert_eq!(self_intersection_oracle(st("123,4,567")), Ok(1));
        assert_eq!(self_intersection_oracle(st("12,34,567")), Ok(1));
        assert_eq!(oracle_relation(st("12,345,67")), (1, 2, 3, 6));
    }

    #[test]
    fn oracle_matches_closed_form_everywhere() {
        for s in enumerate_strata() {
            assert_eq!(self_intersection_oracle(s), Ok(pair(s, s)), "{s}");
        }
    }

    #[test]
    fn gram_value_ranges() {
        let strata = enumerate_strata();
        let g = gram_matrix(&strata);
        for a in 0..strata.len() {
            assert!((0..=2).contains(&g[a][a]));
            for b in 0..strata.len() {
                assert_eq!(g[a][b], g[b][a]);
                if a != b {
                    assert!((-1..=1).contains(&g[a][b]));
                    if !stratum_star(strata[a], strata[b]) {
                        assert_eq!(g[a][b], 0);
                    }
                }
            }
        }
    }
}
