//! Exact rational linear algebra.
//!
//! Rank and basis selection run fraction-free (Bareiss) over big integers;
//! signatures use symmetric rational elimination, so no rounding ever
//! happens anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// `"a/b"` in lowest terms with `b > 0`; integers get `b = 1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serde adapters writing rationals as `"a/b"` strings.
pub mod rational_serde {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(format_rational))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|x| parse_rational(x).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod map {
        use super::*;

        pub fn serialize<S: Serializer>(m: &BTreeMap<usize, Rational>, s: S) -> Result<S::Ok, S::Error> {
            s.collect_map(m.iter().map(|(k, v)| (k, format_rational(v))))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, Rational>, D::Error> {
            BTreeMap::<usize, String>::deserialize(d)?
                .into_iter()
                .map(|(k, v)| Ok((k, parse_rational(&v).map_err(D::Error::custom)?)))
                .collect()
        }
    }
}

/// A dense rectangular matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = rat(e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self[(r, c)] == self[(c, r)]))
    }

    /// Rows scaled by the lcm of their denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect()
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

/// Fraction-free elimination; returns the pivot columns in order.
///
/// Column `c` is a pivot exactly when it is independent of the earlier
/// columns, so the pivots are the greedy "first independent wins" subset.
fn bareiss_pivot_columns(mut a: Vec<Vec<BigInt>>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&p| !a[p][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in bottom.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let scaled = &pivot * &row[j];
                let v = if factor.is_zero() {
                    scaled
                } else {
                    scaled - &factor * &pivot_row[j]
                };
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    bareiss_pivot_columns(m.integer_rows()).len()
}

/// Indices of a maximal independent subset, chosen greedily in input order.
pub fn select_basis<V: AsRef<[i64]>>(vectors: &[V]) -> Vec<usize> {
    let Some(dim) = vectors.first().map(|v| v.as_ref().len()) else {
        return Vec::new();
    };
    // vectors become columns
    let cols: Vec<Vec<BigInt>> = (0..dim)
        .map(|r| vectors.iter().map(|v| BigInt::from(v.as_ref()[r])).collect())
        .collect();
    bareiss_pivot_columns(cols)
}

/// `(positives, negatives)` of a symmetric matrix, by congruence
/// diagonalization.
///
/// Pivots are taken at the first nonzero diagonal entry. When every
/// remaining diagonal entry vanishes but some off-diagonal `b` does not, the
/// block `[[0, b], [b, 0]]` is eliminated at once; it contributes one
/// positive and one negative square.
pub fn signature(m: &RatMatrix) -> Result<(usize, usize)> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg) = (0, 0);
    loop {
        if let Some(idx) = alive.iter().position(|&i| !a[i][i].is_zero()) {
            let p = alive.remove(idx);
            let d = a[p][p].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let col: Vec<(usize, Rational)> = alive
                .iter()
                .filter(|&&r| !a[r][p].is_zero())
                .map(|&r| (r, &a[r][p] / &d))
                .collect();
            let prow: Vec<(usize, Rational)> = alive
                .iter()
                .filter(|&&c| !a[p][c].is_zero())
                .map(|&c| (c, a[p][c].clone()))
                .collect();
            for (r, f) in &col {
                for (c, v) in &prow {
                    let delta = f * v;
                    a[*r][*c] -= delta;
                }
            }
            continue;
        }
        let block = alive.iter().enumerate().find_map(|(x, &i)| {
            alive[x + 1..]
                .iter()
                .find(|&&j| !a[i][j].is_zero())
                .map(|&j| (i, j))
        });
        let Some((i, j)) = block else {
            break;
        };
        alive.retain(|&r| r != i && r != j);
        pos += 1;
        neg += 1;
        let b = a[i][j].clone();
        // Schur complement: A_rc −= (A_ri A_jc + A_rj A_ic) / b
        let rows: Vec<(usize, Rational, Rational)> = alive
            .iter()
            .filter(|&&r| !a[r][i].is_zero() || !a[r][j].is_zero())
            .map(|&r| (r, &a[r][i] / &b, &a[r][j] / &b))
            .collect();
        for (r, fi, fj) in &rows {
            for (c, _, _) in &rows {
                let delta = fi * &a[j][*c] + fj * &a[i][*c];
                a[*r][*c] -= delta;
            }
        }
    }
    Ok((pos, neg))
}

/// Coordinates `c` with `Σ c_k basis[k] = v`, or `None` when `v` is outside
/// the span.
pub fn solve_coordinates<V: AsRef<[i64]>>(v: &[i64], basis: &[V]) -> Result<Option<Vec<Rational>>> {
    let dim = v.len();
    if basis.iter().any(|b| b.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch("basis and target lengths differ".into()));
    }
    let r = basis.len();
    // augmented system: dim rows, r unknowns + rhs
    let mut a: Vec<Vec<Rational>> = (0..dim)
        .map(|row| {
            basis
                .iter()
                .map(|b| rat(b.as_ref()[row]))
                .chain(std::iter::once(rat(v[row])))
                .collect()
        })
        .collect();
    let mut pivot_row = 0;
    for c in 0..r {
        let Some(p) = (pivot_row..dim).find(|&p| !a[p][c].is_zero()) else {
            return Err(Error::DependentBasis);
        };
        a.swap(pivot_row, p);
        let inv = a[pivot_row][c].recip();
        for x in a[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let prow = a[pivot_row].clone();
        for (row_idx, row) in a.iter_mut().enumerate() {
            if row_idx == pivot_row || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivot_row += 1;
    }
    if a[r..].iter().any(|row| !row[r].is_zero()) {
        return Ok(None);
    }
    Ok(Some((0..r).map(|k| a[k][r].clone()).collect()))
}

/// Integer Gauss–Jordan on `[a | I]`: returns `(n, d)` with `a⁻¹ = n / d`.
///
/// Every intermediate entry is a minor of `[a | I]`, so the divisions are
/// exact.
pub fn integer_inverse(a: &[Vec<BigInt>]) -> Result<(Vec<Vec<BigInt>>, BigInt)> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let mut t: Vec<Vec<BigInt>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut d = BigInt::one();
    for c in 0..n {
        let p = (c..n).find(|&p| !t[p][c].is_zero()).ok_or(Error::DependentBasis)?;
        t.swap(c, p);
        let pivot_row = t[c].clone();
        let pivot = pivot_row[c].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == c {
                continue;
            }
            let f = std::mem::take(&mut row[c]);
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c + 1) {
                let v = &pivot * &*x - &f * y;
                *x = if d.is_one() { v } else { v / &d };
            }
        }
        d = pivot;
    }
    let inv = t.into_iter().map(|r| r[n..].to_vec()).collect();
    Ok((inv, d))
}

pub fn inverse(m: &RatMatrix) -> Result<RatMatrix> {
    // row r of the integer matrix is row r of m times scale[r], so the
    // inverse picks up the same factor on column r
    let scale: Vec<BigInt> = (0..m.rows())
        .map(|r| m.row(r).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom())))
        .collect();
    let (num, d) = integer_inverse(&m.integer_rows())?;
    let rows = num
        .into_iter()
        .map(|r| {
            r.into_iter()
                .zip(&scale)
                .map(|(x, s)| Rational::new(x * s, d.clone()))
                .collect()
        })
        .collect();
    RatMatrix::from_rows(rows)
}
