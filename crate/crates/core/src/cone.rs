//! Membership in finitely generated cones of classes, decided exactly.
//!
//! Classes are compared through their coordinates `v[B]` at a fixed set `B`
//! of 127 representatives whose classes form a basis; on numerical classes
//! this is an isomorphism onto ℚ¹²⁷. Feasibility of `Σ λ_g g[B] = v[B]`,
//! `λ ≥ 0`, is decided by a phase-one simplex in integer arithmetic. When
//! it fails, the phase-one duals give a functional that is nonnegative on
//! every generator and negative on the target.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classes::{permute_coords, proportional, stratum_class, ClassSpace, CycleClass, CLASS_COUNT};
use crate::error::{Error, Result};
use crate::lifts::{enumerate_kv_lifts, kv_lift};
use crate::linalg::{integer_inverse, select_basis, Rational};
use crate::perm::Permutation;

/// Dimension of the space of numerical classes.
pub const BASIS_SIZE: usize = 127;

struct ReducedSpace {
    basis: Vec<usize>,
    /// `G[B,B]⁻¹ = inv / det`
    inv: Vec<Vec<BigInt>>,
    det: BigInt,
}

impl ReducedSpace {
    fn get() -> &'static ReducedSpace {
        static SPACE: OnceLock<ReducedSpace> = OnceLock::new();
        SPACE.get_or_init(|| {
            let gram = ClassSpace::get().gram();
            let basis = select_basis(gram);
            let block: Vec<Vec<BigInt>> = basis
                .iter()
                .map(|&r| basis.iter().map(|&c| BigInt::from(gram[r][c])).collect())
                .collect();
            let (inv, det) = integer_inverse(&block).expect("basis block is invertible");
            ReducedSpace { basis, inv, det }
        })
    }
}

/// Positions of the 127 representatives whose classes form the basis.
pub fn class_basis() -> &'static [usize] {
    &ReducedSpace::get().basis
}

/// Coordinates `c` with `v = Σ c_i σ_{rep B_i}`, or `None` when `v` is not
/// the intersection vector of any class.
pub fn reduce_to_basis(v: &CycleClass) -> Option<Vec<Rational>> {
    if v.coords.len() != CLASS_COUNT {
        return None;
    }
    let space = ReducedSpace::get();
    let gram = ClassSpace::get().gram();
    let num: Vec<BigInt> = space
        .inv
        .iter()
        .map(|row| row.iter().zip(&space.basis).map(|(x, &b)| x * v.coords[b]).sum())
        .collect();
    for (t, &vt) in v.coords.iter().enumerate() {
        let lhs: BigInt = num
            .iter()
            .zip(&space.basis)
            .filter(|(_, &b)| gram[b][t] != 0)
            .map(|(c, &b)| c * gram[b][t])
            .sum();
        if lhs != &space.det * vt {
            return None;
        }
    }
    Some(num.into_iter().map(|c| Rational::new(c, space.det.clone())).collect())
}

/// Which cone a [`ConeSpec`] describes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConeName {
    V2,
    V2KV,
    V2KVCT,
    Custom(String),
}

impl fmt::Display for ConeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeName::V2 => f.write_str("V2"),
            ConeName::V2KV => f.write_str("V2KV"),
            ConeName::V2KVCT => f.write_str("V2KVCT"),
            ConeName::Custom(s) => f.write_str(s),
        }
    }
}

impl std::str::FromStr for ConeName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "V2" => ConeName::V2,
            "V2KV" => ConeName::V2KV,
            "V2KVCT" => ConeName::V2KVCT,
            other => ConeName::Custom(other.to_string()),
        })
    }
}

/// A cone given by generators, each with a printable label.
#[derive(Clone, Debug)]
pub struct ConeSpec {
    pub name: ConeName,
    pub generators: Vec<CycleClass>,
    pub labels: Vec<String>,
    reduced: OnceLock<Vec<Vec<(usize, i64)>>>,
}

impl ConeSpec {
    pub fn custom(name: &str, generators: Vec<CycleClass>, labels: Vec<String>) -> Result<Self> {
        Self::build(ConeName::Custom(name.to_string()), generators, labels)
    }

    fn build(name: ConeName, generators: Vec<CycleClass>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != generators.len() {
            return Err(Error::DimensionMismatch("one label per generator".into()));
        }
        if let Some(i) = generators.iter().position(|g| g.coords.len() != CLASS_COUNT) {
            return Err(Error::DimensionMismatch(format!("generator {} has wrong length", labels[i])));
        }
        if let Some(i) = generators.iter().position(CycleClass::is_zero) {
            return Err(Error::InconsistentInput(format!("generator {} is zero", labels[i])));
        }
        Ok(ConeSpec {
            name,
            generators,
            labels,
            reduced: OnceLock::new(),
        })
    }

    /// The 420 stratum classes.
    pub fn v2() -> Self {
        let reps = ClassSpace::get().reps();
        let gens = reps.iter().map(|&s| stratum_class(s)).collect();
        let labels = reps.iter().map(|s| s.to_string()).collect();
        Self::build(ConeName::V2, gens, labels).expect("strata are valid generators")
    }

    /// V2 together with the 315 lifts of Keel–Vermeire divisors.
    pub fn v2kv() -> Self {
        let mut cone = Self::v2();
        for lift in enumerate_kv_lifts() {
            cone.generators.push(kv_lift(lift));
            cone.labels.push(format!("σKV_{{{lift}}}"));
        }
        cone.name = ConeName::V2KV;
        cone
    }

    /// V2KV together with the given surface classes.
    pub fn v2kvct(surfaces: Vec<CycleClass>) -> Result<Self> {
        let mut cone = Self::v2kv();
        for (k, s) in surfaces.into_iter().enumerate() {
            cone.generators.push(s);
            cone.labels.push(format!("surface_{}", k + 1));
        }
        Self::build(ConeName::V2KVCT, cone.generators, cone.labels)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The cone on every generator except `g` and its positive multiples.
    pub fn without(&self, g: usize) -> Self {
        let target = &self.generators[g];
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| {
                i != g
                    && !proportional(&self.generators[i], target)
                        .is_some_and(|r| r.is_positive())
            })
            .collect();
        ConeSpec {
            name: ConeName::Custom(format!("{}∖{{{}}}", self.name, self.labels[g])),
            generators: keep.iter().map(|&i| self.generators[i].clone()).collect(),
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            reduced: OnceLock::new(),
        }
    }

    fn reduced_columns(&self) -> &[Vec<(usize, i64)>] {
        self.reduced.get_or_init(|| {
            let basis = class_basis();
            self.generators
                .iter()
                .map(|g| {
                    basis
                        .iter()
                        .enumerate()
                        .filter(|(_, &b)| g.coords[b] != 0)
                        .map(|(row, &b)| (row, g.coords[b]))
                        .collect()
                })
                .collect()
        })
    }
}

/// A functional on raw 420-coordinates proving `target ∉ cone`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    #[serde(with = "crate::linalg::rational_serde::vec")]
    pub functional: Vec<Rational>,
    pub cone: String,
}

impl FarkasCertificate {
    /// The functional evaluated on the 127 basis classes.
    pub fn in_basis(&self) -> Vec<Rational> {
        let gram = ClassSpace::get().gram();
        class_basis()
            .iter()
            .map(|&b| {
                self.functional
                    .iter()
                    .zip(&gram[b])
                    .filter(|(_, &g)| g != 0)
                    .map(|(f, &g)| f * Rational::from_integer(g.into()))
                    .sum()
            })
            .collect()
    }

    /// The certificate for `τ ⋆ target` against `τ ⋆ cone`.
    pub fn permuted(&self, tau: &Permutation, cone: String) -> Self {
        FarkasCertificate {
            functional: permute_coords(&self.functional, tau),
            cone,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MembershipResult {
    /// Generator index ↦ positive coefficient.
    Member {
        #[serde(with = "crate::linalg::rational_serde::map")]
        coefficients: BTreeMap<usize, Rational>,
    },
    NonMember { certificate: FarkasCertificate },
}

impl MembershipResult {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipResult::Member { .. })
    }

    pub fn certificate(&self) -> Option<&FarkasCertificate> {
        match self {
            MembershipResult::NonMember { certificate } => Some(certificate),
            MembershipResult::Member { .. } => None,
        }
    }
}

/// Check `f·g ≥ 0` for every generator and `f·v < 0`, from scratch in raw
/// coordinates.
pub fn verify_certificate(v: &CycleClass, cone: &ConeSpec, cert: &FarkasCertificate) -> bool {
    if cert.functional.len() != CLASS_COUNT || v.coords.len() != CLASS_COUNT {
        return false;
    }
    // clear denominators so the checks are integer dot products
    let lcm = cert
        .functional
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let f: Vec<BigInt> = cert
        .functional
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let eval = |w: &[i64]| -> BigInt {
        f.iter()
            .zip(w)
            .filter(|(_, &x)| x != 0)
            .map(|(a, &x)| a * x)
            .sum()
    };
    eval(&v.coords).is_negative()
        && cone
            .generators
            .iter()
            .all(|g| g.coords.len() == CLASS_COUNT && !eval(&g.coords).is_negative())
}

enum PhaseOne {
    Feasible(Vec<(usize, Rational)>),
    /// Row functional `y` with `y·A_j ≥ 0` and `y·b < 0`.
    Infeasible(Vec<BigInt>),
}

/// Integer arithmetic for the simplex; `None` reports overflow.
trait PivotInt: Clone + Ord + Sized {
    fn from_i64(x: i64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    /// Exact division.
    fn div(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;

    fn is_zero(&self) -> bool {
        *self == Self::from_i64(0)
    }

    fn is_positive(&self) -> bool {
        *self > Self::from_i64(0)
    }
}

macro_rules! checked_pivot_int {
    ($t:ty) => {
        impl PivotInt for $t {
            fn from_i64(x: i64) -> Self {
                x as $t
            }
            fn add(&self, o: &Self) -> Option<Self> {
                self.checked_add(*o)
            }
            fn mul(&self, o: &Self) -> Option<Self> {
                self.checked_mul(*o)
            }
            fn sub(&self, o: &Self) -> Option<Self> {
                self.checked_sub(*o)
            }
            fn div(&self, o: &Self) -> Option<Self> {
                self.checked_div(*o)
            }
            fn to_big(&self) -> BigInt {
                BigInt::from(*self)
            }
        }
    };
}

checked_pivot_int!(i64);
checked_pivot_int!(i128);

impl PivotInt for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Phase-one simplex for `A x = b`, `x ≥ 0`, with one artificial per row
/// and Bland's rule. Fixed-width integers are tried first and BigInt takes
/// over if they overflow; both runs make the same pivots.
fn phase_one(columns: &[Vec<(usize, i64)>], b: &[i64]) -> Result<PhaseOne> {
    phase_one_in::<i64>(columns, b)
        .or_else(|| phase_one_in::<i128>(columns, b))
        .unwrap_or_else(|| phase_one_in::<BigInt>(columns, b).expect("BigInt does not overflow"))
}

/// The basis inverse is kept as an integer matrix over a common
/// denominator `d` (integer pivoting): each update divides exactly by the
/// previous pivot. Returns `None` on overflow.
fn phase_one_in<T: PivotInt>(columns: &[Vec<(usize, i64)>], b: &[i64]) -> Option<Result<PhaseOne>> {
    let m = b.len();
    let n = columns.len();
    // rows with b < 0 are negated so the artificial basis is feasible
    let sign: Vec<i64> = b.iter().map(|&x| if x < 0 { -1 } else { 1 }).collect();
    let cols: Vec<Vec<(usize, T)>> = columns
        .iter()
        .map(|c| c.iter().map(|&(r, a)| (r, T::from_i64(sign[r] * a))).collect())
        .collect();
    let zero = T::from_i64(0);
    let mut binv: Vec<Vec<T>> = (0..m)
        .map(|i| (0..m).map(|k| T::from_i64((i == k) as i64)).collect())
        .collect();
    let mut xb: Vec<T> = b.iter().map(|&x| T::from_i64(x.abs())).collect();
    let mut d = T::from_i64(1);
    let mut basis: Vec<usize> = (n..n + m).collect();

    let duals = |binv: &[Vec<T>], basis: &[usize]| -> Option<Vec<T>> {
        let mut pi = vec![zero.clone(); m];
        for (row, _) in basis.iter().enumerate().filter(|(_, &j)| j >= n) {
            for (p, x) in pi.iter_mut().zip(&binv[row]) {
                *p = p.add(x)?;
            }
        }
        Some(pi)
    };
    let dot = |v: &[T], col: &[(usize, T)]| -> Option<T> {
        col.iter().try_fold(zero.clone(), |acc, (r, a)| acc.add(&v[*r].mul(a)?))
    };

    loop {
        let pi = duals(&binv, &basis)?;
        // reduced cost of column j is c_j − π·a_j over the denominator d
        let mut entering = None;
        for (j, col) in cols.iter().enumerate() {
            if dot(&pi, col)?.is_positive() {
                entering = Some(j);
                break;
            }
        }
        let entering = entering.or_else(|| (0..m).find(|&k| pi[k] > d).map(|k| n + k));
        let Some(c) = entering else {
            break;
        };
        let alpha: Vec<T> = if c < n {
            binv.iter().map(|row| dot(row, &cols[c])).collect::<Option<_>>()?
        } else {
            binv.iter().map(|row| row[c - n].clone()).collect()
        };
        let mut leave: Option<usize> = None;
        for i in (0..m).filter(|&i| alpha[i].is_positive()) {
            leave = Some(match leave {
                None => i,
                Some(cur) => {
                    let lhs = xb[i].mul(&alpha[cur])?;
                    let rhs = xb[cur].mul(&alpha[i])?;
                    if lhs < rhs || (lhs == rhs && basis[i] < basis[cur]) {
                        i
                    } else {
                        cur
                    }
                }
            });
        }
        let Some(r) = leave else {
            return Some(Err(Error::Internal("phase one reported unbounded".into())));
        };
        let p = alpha[r].clone();
        let (pivot_row, pivot_x) = (binv[r].clone(), xb[r].clone());
        let same_scale = p == d;
        for i in (0..m).filter(|&i| i != r) {
            let a = &alpha[i];
            if same_scale && a.is_zero() {
                continue;
            }
            for (x, y) in binv[i].iter_mut().zip(&pivot_row) {
                let v = if a.is_zero() { p.mul(x)? } else { p.mul(x)?.sub(&a.mul(y)?)? };
                *x = v.div(&d)?;
            }
            let v = if a.is_zero() {
                p.mul(&xb[i])?
            } else {
                p.mul(&xb[i])?.sub(&a.mul(&pivot_x)?)?
            };
            xb[i] = v.div(&d)?;
        }
        d = p;
        basis[r] = c;
    }

    let d = d.to_big();
    let infeasible = basis.iter().zip(&xb).any(|(&j, x)| j >= n && !x.is_zero());
    if !infeasible {
        let x = basis
            .iter()
            .zip(&xb)
            .filter(|(&j, x)| j < n && !x.is_zero())
            .map(|(&j, x)| (j, Rational::new(x.to_big(), d.clone())))
            .collect();
        return Some(Ok(PhaseOne::Feasible(x)));
    }
    let pi = duals(&binv, &basis)?;
    let y: Vec<BigInt> = pi.iter().zip(&sign).map(|(p, &s)| -(p.to_big() * s)).collect();
    let g = y.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    Some(Ok(PhaseOne::Infeasible(y.into_iter().map(|x| x / &g).collect())))
}

/// Decide whether `v` is a nonnegative combination of the generators.
///
/// Coefficients are checked against `v` in all 420 coordinates and
/// certificates with [`verify_certificate`] before they are returned.
pub fn membership(v: &CycleClass, cone: &ConeSpec) -> Result<MembershipResult> {
    if reduce_to_basis(v).is_none() {
        return Err(Error::InconsistentInput(
            "target is not the intersection vector of a class".into(),
        ));
    }
    if v.is_zero() {
        return Ok(MembershipResult::Member {
            coefficients: BTreeMap::new(),
        });
    }
    let basis = class_basis();
    let b: Vec<i64> = basis.iter().map(|&i| v.coords[i]).collect();
    match phase_one(cone.reduced_columns(), &b)? {
        PhaseOne::Feasible(x) => {
            let mut sum = vec![Rational::zero(); CLASS_COUNT];
            for (j, lambda) in &x {
                for (s, &g) in sum.iter_mut().zip(&cone.generators[*j].coords) {
                    *s += lambda * Rational::from_integer(g.into());
                }
            }
            if sum.iter().zip(&v.coords).any(|(s, &t)| *s != Rational::from_integer(t.into())) {
                return Err(Error::Internal("simplex solution does not reproduce the target".into()));
            }
            Ok(MembershipResult::Member {
                coefficients: x.into_iter().collect(),
            })
        }
        PhaseOne::Infeasible(y) => {
            let mut functional = vec![Rational::zero(); CLASS_COUNT];
            for (&pos, yk) in basis.iter().zip(y) {
                functional[pos] = Rational::from_integer(yk);
            }
            let certificate = FarkasCertificate {
                functional,
                cone: cone.name.to_string(),
            };
            if !verify_certificate(v, cone, &certificate) {
                return Err(Error::Internal("Farkas certificate failed verification".into()));
            }
            Ok(MembershipResult::NonMember { certificate })
        }
    }
}

/// A certificate that generator `g` is not in the cone of the others, or
/// `None` when it is (so `g` is not extremal).
pub fn extremality_certificate(g: usize, cone: &ConeSpec) -> Result<Option<FarkasCertificate>> {
    let rest = cone.without(g);
    Ok(membership(&cone.generators[g], &rest)?.certificate().cloned())
}

/// Whether generator `g` spans an extremal ray of the cone.
pub fn extremal_in_cone(g: usize, cone: &ConeSpec) -> Result<bool> {
    Ok(extremality_certificate(g, cone)?.is_some())
}

/// Tally of a sweep: how many certificates came from a direct solve and
/// how many were carried over from another target by a relabeling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepStats {
    pub solved: usize,
    pub transported: usize,
}

/// For each target `t_k`, a verified certificate `t_k ∉ cone_k`, or `None`
/// when `t_k ∈ cone_k`.
///
/// After each direct solve, `τ ⋆ f` is tried on every target equal to
/// `τ ⋆ t_k`. A transported functional is kept only if it passes
/// [`verify_certificate`] against that target's own cone; otherwise the
/// target is solved directly.
fn orbit_sweep<'a, C>(targets: &[CycleClass], cone_for: C) -> Result<(Vec<Option<FarkasCertificate>>, SweepStats)>
where
    C: Fn(usize) -> std::borrow::Cow<'a, ConeSpec>,
{
    let mut by_coords: HashMap<&[i64], Vec<usize>> = HashMap::new();
    for (k, t) in targets.iter().enumerate() {
        by_coords.entry(t.coords.as_slice()).or_default().push(k);
    }
    let mut out: Vec<Option<Option<FarkasCertificate>>> = vec![None; targets.len()];
    let mut stats = SweepStats::default();
    let perms = Permutation::all();
    for k in 0..targets.len() {
        if out[k].is_some() {
            continue;
        }
        let cone = cone_for(k);
        let result = membership(&targets[k], &cone)?;
        stats.solved += 1;
        let Some(cert) = result.certificate().cloned() else {
            out[k] = Some(None);
            continue;
        };
        out[k] = Some(Some(cert.clone()));
        for tau in &perms {
            let image = targets[k].permuted(tau);
            let Some(hits) = by_coords.get(image.coords.as_slice()) else {
                continue;
            };
            for &h in hits {
                if out[h].is_some() {
                    continue;
                }
                let cone_h = cone_for(h);
                let moved = cert.permuted(tau, cone_h.name.to_string());
                if verify_certificate(&targets[h], &cone_h, &moved) {
                    out[h] = Some(Some(moved));
                    stats.transported += 1;
                }
            }
        }
    }
    Ok((out.into_iter().map(|x| x.expect("every target visited")).collect(), stats))
}

/// Certificates `t ∉ cone` for each target (`None` for members).
pub fn non_membership_sweep(
    targets: &[CycleClass],
    cone: &ConeSpec,
) -> Result<(Vec<Option<FarkasCertificate>>, SweepStats)> {
    orbit_sweep(targets, |_| std::borrow::Cow::Borrowed(cone))
}

/// Extremality of every generator, each backed by a verified certificate
/// against the cone of the remaining generators.
pub fn extremality_sweep(cone: &ConeSpec) -> Result<(Vec<Option<FarkasCertificate>>, SweepStats)> {
    orbit_sweep(&cone.generators, |g| std::borrow::Cow::Owned(cone.without(g)))
}
