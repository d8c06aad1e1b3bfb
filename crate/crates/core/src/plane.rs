//! Labeled point configurations in ℙ², hypertrees, and the surfaces they
//! embed in M̄₀,₇ as blow-ups of the plane.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{ClassSpace, CycleClass};
use crate::error::{Error, Result};
use crate::labels::{DivisorClass, Label, LabelSet, N};
use crate::linalg::{rank, RatMatrix, Rational};
use crate::perm::{subgroup_closure, Permutation, GROUP_ORDER};

/// Largest prime accepted as a characteristic.
pub const MAX_PRIME: u32 = 251;

/// ℚ, or the prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    pub fn from_characteristic(p: u32) -> Result<Self> {
        if p == 0 {
            return Ok(Field::Rational);
        }
        let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if !prime || p > MAX_PRIME {
            return Err(Error::InvalidField(format!(
                "characteristic {p} is not 0 or a prime ≤ {MAX_PRIME}"
            )));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// Map a rational into the field. Over F_p the result is an integer in
    /// `0..p`.
    pub fn element(self, x: &Rational) -> Result<Rational> {
        match self {
            Field::Rational => Ok(x.clone()),
            Field::Prime(p) => {
                let p = BigInt::from(p);
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::InvalidPoint(format!("{x} has no value mod {p}")));
                }
                // p is prime, so den^(p-2) is the inverse
                let inv = den.modpow(&(&p - 2u32), &p);
                Ok(Rational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    /// Whether a value computed from field elements is zero in the field.
    pub fn is_zero(self, x: &Rational) -> bool {
        match self {
            Field::Rational => x.is_zero(),
            Field::Prime(p) => {
                debug_assert!(x.is_integer());
                x.numer().mod_floor(&BigInt::from(p)).is_zero()
            }
        }
    }
}

/// A point of ℙ² given by homogeneous coordinates in some [`Field`].
#[derive(Clone, PartialEq, Eq)]
pub struct PlanePoint {
    coords: [Rational; 3],
}

impl PlanePoint {
    pub fn new(field: Field, coords: [Rational; 3]) -> Result<Self> {
        let [x, y, z] = coords;
        let coords = [field.element(&x)?, field.element(&y)?, field.element(&z)?];
        if coords.iter().all(|c| field.is_zero(c)) {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        Ok(PlanePoint { coords })
    }

    pub fn from_ints(field: Field, coords: [i64; 3]) -> Result<Self> {
        Self::new(field, coords.map(|c| Rational::from_integer(c.into())))
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.coords
    }

    /// Projective equality: the 2×2 minors all vanish.
    pub fn same_point(&self, other: &PlanePoint, field: Field) -> bool {
        let [a, b, c] = &self.coords;
        let [x, y, z] = &other.coords;
        [a * y - b * x, a * z - c * x, b * z - c * y]
            .iter()
            .all(|m| field.is_zero(m))
    }
}

impl fmt::Debug for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.coords;
        write!(f, "({x}:{y}:{z})")
    }
}

fn det3(p: &PlanePoint, q: &PlanePoint, r: &PlanePoint) -> Rational {
    let [a, b, c] = &p.coords;
    let [d, e, f] = &q.coords;
    let [g, h, i] = &r.coords;
    a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
}

/// Whether three points lie on one line.
pub fn collinear(field: Field, p: &PlanePoint, q: &PlanePoint, r: &PlanePoint) -> bool {
    field.is_zero(&det3(p, q, r))
}

/// Labeled, pairwise distinct points, not all on one line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    field: Field,
    points: Vec<(Label, PlanePoint)>,
}

impl PointConfig {
    /// Points labeled `1, 2, …` in order.
    pub fn new(field: Field, coords: Vec<[Rational; 3]>) -> Result<Self> {
        if coords.len() > N as usize {
            return Err(Error::InvalidPoint(format!("{} points; at most 7", coords.len())));
        }
        let labeled = (1..).zip(coords).collect();
        Self::labeled(field, labeled)
    }

    pub fn from_ints(field: Field, coords: &[[i64; 3]]) -> Result<Self> {
        Self::new(
            field,
            coords
                .iter()
                .map(|c| c.map(|x| Rational::from_integer(x.into())))
                .collect(),
        )
    }

    pub fn labeled(field: Field, coords: Vec<(Label, [Rational; 3])>) -> Result<Self> {
        let mut points = Vec::with_capacity(coords.len());
        for (l, c) in coords {
            LabelSet::from_labels([l])?;
            points.push((l, PlanePoint::new(field, c)?));
        }
        points.sort_by_key(|(l, _)| *l);
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::LabelConsistency("repeated point label".into()));
        }
        if points.len() < 3 {
            return Err(Error::InvalidPoint("need at least 3 points".into()));
        }
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                if points[a].1.same_point(&points[b].1, field) {
                    return Err(Error::PointsNotDistinct(format!(
                        "p{} = p{} = {:?}",
                        points[a].0, points[b].0, points[a].1
                    )));
                }
            }
        }
        let config = PointConfig { field, points };
        if config.is_collinear(config.labels()) {
            return Err(Error::AllCollinear);
        }
        Ok(config)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn labels(&self) -> LabelSet {
        LabelSet::from_labels(self.points.iter().map(|(l, _)| *l)).expect("validated labels")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, l: Label) -> Option<&PlanePoint> {
        self.points.iter().find(|(m, _)| *m == l).map(|(_, p)| p)
    }

    pub fn points(&self) -> impl Iterator<Item = (Label, &PlanePoint)> {
        self.points.iter().map(|(l, p)| (*l, p))
    }

    /// The configuration with `p_y` dropped.
    pub fn without(&self, y: Label) -> Result<Self> {
        let rest = self
            .points
            .iter()
            .filter(|(l, _)| *l != y)
            .map(|(l, p)| (*l, p.coords.clone()))
            .collect();
        Self::labeled(self.field, rest)
    }

    /// The point labeled `i` gets label `τ(i)`.
    pub fn relabeled(&self, tau: &Permutation) -> Self {
        let mut points: Vec<_> = self
            .points
            .iter()
            .map(|(l, p)| (tau.apply(*l), p.clone()))
            .collect();
        points.sort_by_key(|(l, _)| *l);
        PointConfig {
            field: self.field,
            points,
        }
    }

    /// Apply the linear map `m` (rows act on column vectors of coordinates).
    pub fn transformed(&self, m: &[[Rational; 3]; 3]) -> Result<Self> {
        let coords = self
            .points
            .iter()
            .map(|(l, p)| {
                let c = &p.coords;
                let img = [0, 1, 2].map(|r| &m[r][0] * &c[0] + &m[r][1] * &c[1] + &m[r][2] * &c[2]);
                (*l, img)
            })
            .collect();
        Self::labeled(self.field, coords)
    }

    /// Whether the points labeled by `s` lie on one line.
    pub fn is_collinear(&self, s: LabelSet) -> bool {
        let pts: Vec<&PlanePoint> = s.iter().filter_map(|l| self.point(l)).collect();
        if pts.len() < 3 {
            return true;
        }
        pts[2..].iter().all(|r| collinear(self.field, pts[0], pts[1], r))
    }
}

/// A line through at least two configuration points, with all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IncidenceLine {
    pub members: LabelSet,
}

/// Every line spanned by the configuration, each once, sorted by members.
pub fn line_arrangement(c: &PointConfig) -> Vec<IncidenceLine> {
    let mut lines = BTreeSet::new();
    for (a, (la, pa)) in c.points.iter().enumerate() {
        for (lb, pb) in &c.points[a + 1..] {
            let mut members = LabelSet::from_labels([*la, *lb]).unwrap();
            for (lc, pc) in &c.points {
                if collinear(c.field, pa, pb, pc) {
                    members = members.with(*lc);
                }
            }
            lines.insert(IncidenceLine { members });
        }
    }
    lines.into_iter().collect()
}

/// Whether some nonzero (possibly reducible) conic passes through every
/// point.
pub fn on_common_conic(c: &PointConfig) -> bool {
    let rows: Vec<Vec<Rational>> = c
        .points
        .iter()
        .map(|(_, p)| {
            let [x, y, z] = &p.coords;
            vec![x * x, x * y, y * y, x * z, y * z, z * z]
        })
        .collect();
    let r = match c.field {
        Field::Rational => rank(&RatMatrix::from_rows(rows).expect("rectangular")),
        Field::Prime(p) => rank_mod_p(rows, p),
    };
    r <= 5
}

fn rank_mod_p(rows: Vec<Vec<Rational>>, p: u32) -> usize {
    let p = p as i64;
    let mut m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.numer().mod_floor(&BigInt::from(p)).to_i64().unwrap())
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = mod_pow(m[rank][col], p - 2, p);
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col] * inv % p;
                for (x, &q) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = (*x - f * q).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_pow(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `h·H + Σ eᵢ·Eᵢ` in the Picard lattice of the blow-up at 7 points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PicardVector {
    pub h: i64,
    pub e: [i64; 7],
}

impl PicardVector {
    pub const ZERO: PicardVector = PicardVector { h: 0, e: [0; 7] };

    /// The exceptional divisor `E_k`.
    pub fn exceptional(k: Label) -> Self {
        let mut e = [0; 7];
        e[k as usize - 1] = 1;
        PicardVector { h: 0, e }
    }

    /// `H − Σ_{i∈I} Eᵢ`, the strict transform of a line through `p_I`.
    pub fn strict_line(members: LabelSet) -> Self {
        let mut e = [0; 7];
        for i in members.iter() {
            e[i as usize - 1] = -1;
        }
        PicardVector { h: 1, e }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

/// The intersection form `h·h′ − Σ eᵢ·e′ᵢ`.
pub fn picard_pair(u: &PicardVector, v: &PicardVector) -> i64 {
    u.h * v.h - u.e.iter().zip(&v.e).map(|(a, b)| a * b).sum::<i64>()
}

fn pullback_side(lines: &[IncidenceLine], side: LabelSet) -> PicardVector {
    let other = side.complement();
    for line in lines {
        if line.members == side || line.members == other {
            return PicardVector::strict_line(line.members);
        }
    }
    for line in lines.iter().filter(|l| l.members.len() >= 3) {
        for s in [side, other] {
            if s.is_subset(line.members) && line.members.len() == s.len() + 1 {
                let k = line.members.difference(s).min().unwrap();
                return PicardVector::exceptional(k);
            }
        }
    }
    PicardVector::ZERO
}

/// Whether the points define an embedded blow-up: labels `1..=7` and no
/// conic through all of them.
pub fn check_embedding(c: &PointConfig) -> Result<()> {
    if c.labels() != LabelSet::FULL {
        return Err(Error::InvalidPoint(format!(
            "an embedded blow-up needs points labeled 1..7, got {}",
            c.labels()
        )));
    }
    if on_common_conic(c) {
        return Err(Error::CommonConic);
    }
    Ok(())
}

/// `F*δ` for the embedded blow-up at the configuration.
pub fn pullback_divisor(c: &PointConfig, d: DivisorClass) -> Result<PicardVector> {
    check_embedding(c)?;
    Ok(pullback_side(&line_arrangement(c), d.rep()))
}

/// The class of the embedded blow-up: its intersection number with `σ_{I,J,K}`
/// is `F*δ_I · F*δ_K`.
pub fn surface_class(c: &PointConfig) -> Result<CycleClass> {
    check_embedding(c)?;
    let lines = line_arrangement(c);
    let coords = ClassSpace::get()
        .reps()
        .iter()
        .map(|s| picard_pair(&pullback_side(&lines, s.i()), &pullback_side(&lines, s.k())))
        .collect();
    Ok(CycleClass::from_coords(coords))
}

/// A collection of parts on a ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypertree {
    pub ground: LabelSet,
    pub parts: Vec<LabelSet>,
}

impl Hypertree {
    /// `{145, 136, 235, 246}` on `{1..6}`.
    pub fn gamma0() -> Self {
        let parts = ["145", "136", "235", "246"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        Hypertree {
            ground: "123456".parse().unwrap(),
            parts,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypertreeCheck {
    pub valid: bool,
    pub irreducible: bool,
}

/// Evaluate the hypertree axioms; irreducible means every convexity
/// inequality is strict.
pub fn hypertree_check(t: &Hypertree) -> HypertreeCheck {
    let fail = HypertreeCheck {
        valid: false,
        irreducible: false,
    };
    let n = t.ground.len() as i64;
    let d = t.parts.len();
    if n < 3 || d == 0 || d > 16 {
        return fail;
    }
    if t.parts.iter().any(|p| p.len() < 3 || !p.is_subset(t.ground)) {
        return fail;
    }
    if t.ground.iter().any(|i| t.parts.iter().filter(|p| p.contains(i)).count() < 2) {
        return fail;
    }
    let excess = |p: &LabelSet| p.len() as i64 - 2;
    if n - 2 != t.parts.iter().map(excess).sum::<i64>() {
        return fail;
    }
    let mut strict = true;
    for mask in 1u32..(1 << d) - 1 {
        if mask.count_ones() < 2 {
            continue;
        }
        let chosen = || (0..d).filter(move |j| mask >> j & 1 == 1).map(|j| &t.parts[j]);
        let union = chosen().fold(LabelSet::EMPTY, |acc, p| acc.union(*p)).len() as i64;
        let bound: i64 = chosen().map(excess).sum();
        if union < bound {
            return fail;
        }
        strict &= union > bound;
    }
    HypertreeCheck {
        valid: true,
        irreducible: strict,
    }
}

/// Whether the points realize `t`: for every proper subset `S` with at
/// least three labels, `p_S` is collinear exactly when `S` lies in a part.
pub fn planar_realization_check(c: &PointConfig, t: &Hypertree) -> bool {
    if c.labels() != t.ground {
        return false;
    }
    t.ground
        .subsets()
        .filter(|s| s.len() >= 3 && *s != t.ground)
        .all(|s| c.is_collinear(s) == t.parts.iter().any(|p| s.is_subset(*p)))
}

/// The labels `y` for which dropping `p_y` leaves a planar realization of
/// an irreducible hypertree. The surface is special when there are at
/// least three.
pub fn special_labels(c: &PointConfig) -> Result<LabelSet> {
    check_embedding(c)?;
    let mut out = LabelSet::EMPTY;
    for y in c.labels().iter() {
        let Ok(rest) = c.without(y) else {
            continue;
        };
        let parts: Vec<LabelSet> = line_arrangement(&rest)
            .into_iter()
            .map(|l| l.members)
            .filter(|m| m.len() >= 3)
            .collect();
        let tree = Hypertree {
            ground: rest.labels(),
            parts,
        };
        if hypertree_check(&tree).irreducible && planar_realization_check(&rest, &tree) {
            out = out.with(y);
        }
    }
    Ok(out)
}

/// Built-in configurations.
pub mod fixtures {
    use super::*;

    /// Pairwise intersections of `x=0, y=0, z=0, x+y+z=0`, labeled so the
    /// lines are `145, 136, 235, 246`.
    pub const GAMMA0_POINTS: [[i64; 3]; 6] = [
        [0, 0, 1],
        [1, -1, 0],
        [1, 0, 0],
        [0, 1, -1],
        [0, 1, 0],
        [1, 0, -1],
    ];

    /// Seventh points of the three special surfaces over ℚ: the meeting
    /// points of the diagonals `p1p2 ∩ p5p6`, `p1p2 ∩ p3p4`, `p3p4 ∩ p5p6`.
    pub const SEVENTH_POINTS: [[i64; 3]; 3] = [[1, -1, -1], [1, -1, 1], [1, 1, -1]];

    pub fn gamma0_realization() -> PointConfig {
        PointConfig::from_ints(Field::Rational, &GAMMA0_POINTS).unwrap()
    }

    fn with_seventh(field: Field, p7: [i64; 3]) -> PointConfig {
        let mut pts = GAMMA0_POINTS.to_vec();
        pts.push(p7);
        PointConfig::from_ints(field, &pts).unwrap()
    }

    /// `which` is 1, 2 or 3.
    pub fn special(which: usize) -> PointConfig {
        with_seventh(Field::Rational, SEVENTH_POINTS[which - 1])
    }

    pub fn h1() -> PointConfig {
        special(1)
    }

    pub fn h2() -> PointConfig {
        special(2)
    }

    pub fn h3() -> PointConfig {
        special(3)
    }

    /// All seven points of ℙ²(F₂); `p7 = (1:1:1)` is where the three
    /// diagonals now meet.
    pub fn fano() -> PointConfig {
        with_seventh(Field::Prime(2), [1, 1, 1])
    }

    /// The subgroups listed as stabilizing `h1`.
    pub fn g1() -> Vec<Permutation> {
        ["id", "(34)(65)", "(47)(16)", "(37)(15)", "(156)(473)", "(165)(374)"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    pub fn g2() -> Vec<Permutation> {
        ["id", "(12)(56)", "(25)(16)", "(26)(15)"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    /// `(36)(45)`, carrying `h1` to `h2`.
    pub fn h1_to_h2() -> Permutation {
        "(36)(45)".parse().unwrap()
    }

    /// `(35)(56)(26)(24)(15)(67)`, carrying `h2` to `h3`.
    pub fn h2_to_h3() -> Permutation {
        "(35)(56)(26)(24)(15)(67)".parse().unwrap()
    }
}

/// Result of the S₇ orbit scan of a special surface class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub characteristic: u32,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    /// The stabilizer, sorted.
    pub stabilizer: Vec<Permutation>,
    /// Over ℚ: `G1` and `G2` both lie in the stabilizer.
    pub contains_listed_subgroups: Option<bool>,
    /// Over ℚ: `h2 = (36)(45) ⋆ h1` and `h3 = τ ⋆ h2`.
    pub relations_hold: Option<bool>,
    /// Orbit members pairwise non-proportional.
    pub distinct_rays: bool,
}

/// Orbit size and stabilizer of the built-in special surface in
/// characteristic 0 or 2.
pub fn classify_special_surfaces(characteristic: u32) -> Result<Classification> {
    let seed_config = match characteristic {
        0 => fixtures::h1(),
        2 => fixtures::fano(),
        p => {
            return Err(Error::InvalidField(format!(
                "no built-in special surface in characteristic {p}"
            )))
        }
    };
    let seed = surface_class(&seed_config)?;
    let images: Vec<(Permutation, CycleClass)> = Permutation::all()
        .into_par_iter()
        .map(|tau| {
            let img = seed.permuted(&tau);
            (tau, img)
        })
        .collect();
    let stabilizer: Vec<Permutation> = images
        .iter()
        .filter(|(_, img)| *img == seed)
        .map(|(tau, _)| *tau)
        .collect();
    let orbit: BTreeSet<Vec<i64>> = images.into_iter().map(|(_, img)| img.coords).collect();
    debug_assert_eq!(orbit.len() * stabilizer.len(), GROUP_ORDER);

    let (contains_listed_subgroups, relations_hold) = if characteristic == 0 {
        let stab: BTreeSet<_> = stabilizer.iter().copied().collect();
        let gens: Vec<_> = fixtures::g1().into_iter().chain(fixtures::g2()).collect();
        let contains = subgroup_closure(&gens).is_subset(&stab);
        let h2 = surface_class(&fixtures::h2())?;
        let h3 = surface_class(&fixtures::h3())?;
        let rel = seed.permuted(&fixtures::h1_to_h2()) == h2 && h2.permuted(&fixtures::h2_to_h3()) == h3;
        (Some(contains), Some(rel))
    } else {
        (None, None)
    };

    Ok(Classification {
        characteristic,
        orbit_size: orbit.len(),
        stabilizer_order: stabilizer.len(),
        stabilizer,
        contains_listed_subgroups,
        relations_hold,
        distinct_rays: pairwise_non_proportional(orbit.iter()),
    })
}

/// Distinct rays: after dividing by the gcd and fixing the sign of the
/// first nonzero entry, all vectors differ.
pub fn pairwise_non_proportional<'a>(vs: impl Iterator<Item = &'a Vec<i64>>) -> bool {
    let mut seen = BTreeSet::new();
    for v in vs {
        let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            return false;
        }
        let sign = v.iter().find(|x| **x != 0).map_or(1, |x| x.signum());
        let prim: Vec<i64> = v.iter().map(|x| x / g * sign).collect();
        if !seen.insert(prim) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::labels::enumerate_strata;
    use crate::linalg::rat;

    fn ls(s: &str) -> LabelSet {
        s.parse().unwrap()
    }

    fn pt(c: [i64; 3]) -> PlanePoint {
        PlanePoint::from_ints(Field::Rational, c).unwrap()
    }

    #[test]
    fn fields() {
        assert_eq!(Field::from_characteristic(0).unwrap(), Field::Rational);
        assert_eq!(Field::from_characteristic(251).unwrap(), Field::Prime(251));
        assert!(Field::from_characteristic(4).is_err());
        assert!(Field::from_characteristic(257).is_err());
        assert!(Field::from_characteristic(1).is_err());
        let f5 = Field::Prime(5);
        assert_eq!(f5.element(&Rational::new(1.into(), 2.into())).unwrap(), rat(3));
        assert_eq!(f5.element(&rat(-1)).unwrap(), rat(4));
        assert!(f5.element(&Rational::new(1.into(), 5.into())).is_err());
    }

    #[test]
    fn collinearity() {
        let q = Field::Rational;
        assert!(collinear(q, &pt([1, 0, 0]), &pt([0, 1, 0]), &pt([1, 1, 0])));
        assert!(!collinear(q, &pt([1, 0, 0]), &pt([0, 1, 0]), &pt([0, 0, 1])));
        let f2 = Field::Prime(2);
        let p = |c| PlanePoint::from_ints(f2, c).unwrap();
        assert!(collinear(f2, &p([1, 1, 0]), &p([0, 1, 1]), &p([1, 0, 1])));
    }

    #[test]
    fn degenerate_configs() {
        let q = Field::Rational;
        let dup = PointConfig::from_ints(q, &[[1, 0, 0], [0, 1, 0], [2, 0, 0]]);
        assert!(matches!(dup, Err(Error::PointsNotDistinct(_))));
        let line = PointConfig::from_ints(q, &[[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 2, 0]]);
        assert_eq!(line, Err(Error::AllCollinear));
        assert!(PlanePoint::from_ints(q, [0, 0, 0]).is_err());
        assert!(PlanePoint::from_ints(Field::Prime(3), [3, 6, 0]).is_err());
    }

    #[test]
    fn gamma0_realization_lines() {
        let c = gamma0_realization();
        let lines = line_arrangement(&c);
        assert_eq!(lines.len(), 7);
        let triples: Vec<_> = lines.iter().filter(|l| l.members.len() == 3).collect();
        assert_eq!(triples.len(), 4);
        assert_eq!(lines.iter().filter(|l| l.members.len() == 2).count(), 3);
        assert!(planar_realization_check(&c, &Hypertree::gamma0()));
    }

    #[test]
    fn generic_points() {
        let pts = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [1, 4, 9], [2, 3, 7]];
        let c = PointConfig::from_ints(Field::Rational, &pts).unwrap();
        assert_eq!(line_arrangement(&c).len(), 21);
        assert!(!on_common_conic(&c));
        assert_eq!(special_labels(&c).unwrap(), LabelSet::EMPTY);
        let six = c.without(7).unwrap();
        assert!(!planar_realization_check(&six, &Hypertree::gamma0()));
    }

    #[test]
    fn conics() {
        // 4 points on x=0 and 3 on y=0
        let pts = [[0, 1, 0], [0, 0, 1], [0, 1, 1], [0, 1, 2], [1, 0, 0], [1, 0, 1], [1, 0, 2]];
        let c = PointConfig::from_ints(Field::Rational, &pts).unwrap();
        assert!(on_common_conic(&c));
        assert_eq!(surface_class(&c), Err(Error::CommonConic));
        assert!(!on_common_conic(&h1()));
        assert!(!on_common_conic(&fano()));
    }

    #[test]
    fn fano_lines() {
        let lines = line_arrangement(&fano());
        assert_eq!(lines.len(), 7);
        assert!(lines.iter().all(|l| l.members.len() == 3));
    }

    #[test]
    fn hypertree_axioms() {
        let g = Hypertree::gamma0();
        assert_eq!(
            hypertree_check(&g),
            HypertreeCheck {
                valid: true,
                irreducible: true
            }
        );
        let split = Hypertree {
            ground: ls("123456"),
            parts: vec![ls("123"), ls("456")],
        };
        assert!(!hypertree_check(&split).valid);
        let mut short = Hypertree::gamma0();
        short.parts.pop();
        assert!(!hypertree_check(&short).valid);
    }

    #[test]
    fn realization_needs_right_labels() {
        let c = gamma0_realization();
        let g = Hypertree::gamma0();
        let mut good = 0;
        for tau in Permutation::all().into_iter().filter(|t| t.apply(7) == 7) {
            let relabeled = c.relabeled(&tau);
            let fixes = {
                let mut parts: Vec<_> = g.parts.iter().map(|p| tau.apply_set(*p)).collect();
                let mut orig = g.parts.clone();
                parts.sort();
                orig.sort();
                parts == orig
            };
            assert_eq!(planar_realization_check(&relabeled, &g), fixes, "{tau}");
            good += fixes as usize;
        }
        // symmetries of four general lines
        assert_eq!(good, 24);
    }

    #[test]
    fn picard_lattice() {
        let l = PicardVector::strict_line(ls("12"));
        assert_eq!(picard_pair(&l, &PicardVector::exceptional(1)), 1);
        assert_eq!(picard_pair(&l, &l), -1);
        assert_eq!(
            picard_pair(&PicardVector::exceptional(1), &PicardVector::exceptional(2)),
            0
        );
        let c = h1();
        for line in line_arrangement(&c) {
            let hat = PicardVector::strict_line(line.members);
            assert_eq!(picard_pair(&hat, &hat), 1 - line.members.len() as i64);
            for k in 1..=N {
                let meets = picard_pair(&hat, &PicardVector::exceptional(k)) == 1;
                assert_eq!(meets, line.members.contains(k));
            }
        }
    }

    #[test]
    fn pullbacks_on_h1() {
        let c = h1();
        let dv = |s: &str| DivisorClass::new(ls(s)).unwrap();
        assert_eq!(pullback_divisor(&c, dv("34")).unwrap(), PicardVector::strict_line(ls("34")));
        assert_eq!(pullback_divisor(&c, dv("145")).unwrap(), PicardVector::strict_line(ls("145")));
        assert_eq!(pullback_divisor(&c, dv("14")).unwrap(), PicardVector::exceptional(5));
        assert_eq!(pullback_divisor(&c, dv("23567")).unwrap(), PicardVector::exceptional(5));
        assert!(pullback_divisor(&c, dv("123")).unwrap().is_zero());
    }

    #[test]
    fn surface_class_is_well_defined() {
        let c = h1();
        let lines = line_arrangement(&c);
        let h = surface_class(&c).unwrap();
        assert!(!h.is_zero());
        let space = ClassSpace::get();
        for s in enumerate_strata() {
            let direct = picard_pair(&pullback_side(&lines, s.i()), &pullback_side(&lines, s.k()));
            assert_eq!(direct, h.coords[space.class_index(s)], "{s}");
        }
    }

    #[test]
    fn special_fixtures() {
        assert_eq!(special_labels(&h1()).unwrap(), ls("347"));
        for which in 1..=3 {
            assert_eq!(special_labels(&special(which)).unwrap().len(), 3);
        }
        assert_eq!(special_labels(&fano()).unwrap(), LabelSet::FULL);
    }

    #[test]
    fn relabeling_commutes_with_surface_class() {
        let tau: Permutation = "(1357)(24)".parse().unwrap();
        let c = h1();
        assert_eq!(
            surface_class(&c.relabeled(&tau)).unwrap(),
            surface_class(&c).unwrap().permuted(&tau)
        );
    }

    #[test]
    fn listed_relations() {
        let h1 = surface_class(&h1()).unwrap();
        let h2 = surface_class(&h2()).unwrap();
        let h3 = surface_class(&h3()).unwrap();
        assert_eq!(h1.permuted(&h1_to_h2()), h2);
        assert_eq!(h2.permuted(&h2_to_h3()), h3);
        for g in g1().iter().chain(&g2()) {
            assert_eq!(h1.permuted(g), h1, "{g}");
        }
    }

    #[test]
    fn proportionality_helper() {
        let a = vec![1, 2, 0];
        let b = vec![-2, -4, 0];
        let c = vec![1, 0, 0];
        assert!(!pairwise_non_proportional([&a, &b].into_iter()));
        assert!(pairwise_non_proportional([&a, &c].into_iter()));
    }
}
