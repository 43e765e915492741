//! Exact rational scalars, vectors and linear algebra.
//!
//! Everything combinatorial in the toolkit (weights, polytope vertices,
//! stabilizer algebras, critical values) is computed here without rounding.
//! Rationals serialize as canonical `"p/q"` strings with `q > 0`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Formats a rational as `"p/q"` in lowest terms with positive denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = |reason| Error::InvalidRational { literal: s.to_string(), reason };
    let s = s.trim();
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s).map_err(|_| err("not an integer"))?;
            Ok(Rational::from_integer(n))
        }
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err("bad numerator"))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err("bad denominator"))?;
            if q.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Exact conversion of a finite float to a rational (binary expansion, no rounding).
pub fn rational_from_float<F: Real>(x: F) -> Result<Rational> {
    let x = x.to_f64().ok_or(Error::NonFinite("float to rational"))?;
    BigRational::from_float(x).ok_or(Error::NonFinite("float to rational"))
}

/// `#[serde(with = ...)]` adapter writing a rational as `"p/q"`.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        r: &Rational,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = ...)]` adapter for sequences of rationals.
pub mod serde_rational_seq {
    use super::{format_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(
        values: &[Rational],
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_rational(v))?;
        }
        seq.end()
    }
}

/// A vector with exact rational entries; elements of the abelian algebra
/// and of its dual live here.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalVec {
    entries: Vec<Rational>,
}

impl RationalVec {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: vec![Rational::zero(); dim] }
    }

    /// Builds a vector from integer entries; handy in tests and samplers.
    pub fn from_integers(values: &[i64]) -> Self {
        Self { entries: values.iter().map(|&v| Rational::from_integer(v.into())).collect() }
    }

    /// Parses a vector of `"p/q"` literals.
    pub fn parse(parts: &[&str]) -> Result<Self> {
        Ok(Self { entries: parts.iter().map(|s| parse_rational(s)).collect::<Result<_>>()? })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Self) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self { entries: self.entries.iter().map(|e| e * factor).collect() }
    }

    pub fn to_floats<F: Real>(&self) -> Vec<F> {
        self.entries
            .iter()
            .map(|e| F::from_f64(e.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan))
            .collect()
    }

    /// Exact rationalization of float coordinates.
    pub fn from_floats<F: Real>(values: &[F]) -> Result<Self> {
        Ok(Self { entries: values.iter().map(|&v| rational_from_float(v)).collect::<Result<_>>()? })
    }

    /// Checks that this vector has the expected dimension.
    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch { expected, got: self.dim() });
        }
        Ok(())
    }
}

impl fmt::Debug for RationalVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RationalVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(e))?;
        }
        write!(f, ")")
    }
}

impl Add for &RationalVec {
    type Output = RationalVec;
    fn add(self, other: &RationalVec) -> RationalVec {
        debug_assert_eq!(self.dim(), other.dim());
        RationalVec::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVec {
    type Output = RationalVec;
    fn sub(self, other: &RationalVec) -> RationalVec {
        debug_assert_eq!(self.dim(), other.dim());
        RationalVec::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVec {
    type Output = RationalVec;
    fn neg(self) -> RationalVec {
        RationalVec::new(self.entries.iter().map(|e| -e).collect())
    }
}

impl Serialize for RationalVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for e in &self.entries {
            seq.serialize_element(&format_rational(e))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RationalVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct VecVisitor;
        impl<'de> Visitor<'de> for VecVisitor {
            type Value = RationalVec;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a sequence of \"p/q\" strings")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut entries = Vec::new();
                while let Some(s) = seq.next_element::<String>()? {
                    entries.push(parse_rational(&s).map_err(serde::de::Error::custom)?);
                }
                Ok(RationalVec::new(entries))
            }
        }
        deserializer.deserialize_seq(VecVisitor)
    }
}

// ---------------------------------------------------------------------------
// Exact linear algebra
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place. Returns the pivot column of each
/// nonzero row, in order.
pub fn row_reduce(rows: &mut Vec<RationalVec>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, RationalVec::dim);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (row..rows.len()).find(|&r| !rows[r].entries[col].is_zero()) else {
            continue;
        };
        rows.swap(row, pivot_row);
        let inv = rows[row].entries[col].recip();
        rows[row] = rows[row].scale(&inv);
        for r in 0..rows.len() {
            if r != row && !rows[r].entries[col].is_zero() {
                let factor = rows[r].entries[col].clone();
                let scaled = rows[row].scale(&factor);
                rows[r] = &rows[r] - &scaled;
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    rows.truncate(row);
    pivots
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[RationalVec]) -> usize {
    let mut rows: Vec<RationalVec> = vectors.iter().filter(|v| !v.is_zero()).cloned().collect();
    row_reduce(&mut rows);
    rows.len()
}

/// A maximal linearly independent subset, in input order.
pub fn independent_subset(vectors: &[RationalVec]) -> Vec<RationalVec> {
    let mut basis: Vec<RationalVec> = Vec::new();
    let mut reduced: Vec<RationalVec> = Vec::new();
    for v in vectors {
        let mut candidate = reduced.clone();
        candidate.push(v.clone());
        if rank_of_reduced(&mut candidate) > reduced.len() {
            basis.push(v.clone());
            reduced = candidate;
        }
    }
    basis
}

fn rank_of_reduced(rows: &mut Vec<RationalVec>) -> usize {
    row_reduce(rows);
    rows.len()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(v: &RationalVec, basis: &[RationalVec]) -> bool {
    if v.is_zero() {
        return true;
    }
    let mut rows: Vec<RationalVec> = basis.to_vec();
    row_reduce(&mut rows);
    let r = rows.len();
    rows.push(v.clone());
    row_reduce(&mut rows);
    rows.len() == r
}

/// Whether two lists of vectors span the same subspace.
pub fn spans_equal(a: &[RationalVec], b: &[RationalVec]) -> bool {
    a.iter().all(|v| in_span(v, b)) && b.iter().all(|v| in_span(v, a))
}

/// Basis of the kernel of the linear map whose rows are `rows`.
///
/// `dim` is the number of columns; the result consists of `dim - rank`
/// independent vectors, each annihilated by every row.
pub fn kernel_basis(rows: &[RationalVec], dim: usize) -> Vec<RationalVec> {
    let mut reduced: Vec<RationalVec> = rows.iter().filter(|v| !v.is_zero()).cloned().collect();
    let pivots = row_reduce(&mut reduced);
    let is_pivot: Vec<bool> = {
        let mut flags = vec![false; dim];
        for &p in &pivots {
            flags[p] = true;
        }
        flags
    };
    let mut basis = Vec::new();
    for free in 0..dim {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Rational::zero(); dim];
        v[free] = Rational::from_integer(1.into());
        for (row, &p) in reduced.iter().zip(&pivots) {
            v[p] = -row.entries[free].clone();
        }
        basis.push(RationalVec::new(v));
    }
    basis
}

/// Solves `sum_i x_i columns[i] = rhs` exactly. Returns `None` when the
/// system is inconsistent. For underdetermined systems the free variables
/// are set to zero.
pub fn solve_columns(columns: &[RationalVec], rhs: &RationalVec) -> Option<Vec<Rational>> {
    let nrows = rhs.dim();
    let ncols = columns.len();
    // Augmented matrix [columns | rhs], row-reduced.
    let mut rows: Vec<RationalVec> = (0..nrows)
        .map(|r| {
            let mut entries: Vec<Rational> =
                columns.iter().map(|c| c.entries[r].clone()).collect();
            entries.push(rhs.entries[r].clone());
            RationalVec::new(entries)
        })
        .collect();
    let pivots = row_reduce(&mut rows);
    if pivots.contains(&ncols) {
        return None; // pivot in the rhs column: inconsistent
    }
    let mut solution = vec![Rational::zero(); ncols];
    for (row, &p) in rows.iter().zip(&pivots) {
        solution[p] = row.entries[ncols].clone();
    }
    Some(solution)
}

/// Gram matrix solve: finds `w` with `(B^T B) w = rhs` for the given basis
/// vectors (rows of `B^T` are the basis). The Gram matrix is invertible
/// because the basis is linearly independent.
pub fn gram_solve(basis: &[RationalVec], rhs: &[Rational]) -> Vec<Rational> {
    let d = basis.len();
    debug_assert_eq!(rhs.len(), d);
    let gram_cols: Vec<RationalVec> = (0..d)
        .map(|j| RationalVec::new((0..d).map(|i| basis[i].dot(&basis[j])).collect()))
        .collect();
    solve_columns(&gram_cols, &RationalVec::new(rhs.to_vec()))
        .expect("gram matrix of an independent basis is invertible")
}

/// Absolute value of a rational as `f64`, for diagnostics.
pub fn rational_abs_f64(r: &Rational) -> f64 {
    r.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[i64]) -> RationalVec {
        RationalVec::from_integers(v)
    }

    #[test]
    fn parse_and_format_round_trip() {
        let r = parse_rational("6/4").unwrap();
        assert_eq!(format_rational(&r), "3/2");
        let r = parse_rational("-2/6").unwrap();
        assert_eq!(format_rational(&r), "-1/3");
        let r = parse_rational("5").unwrap();
        assert_eq!(format_rational(&r), "5/1");
        // negative denominators normalize to q > 0
        let r = parse_rational("1/-2").unwrap();
        assert_eq!(format_rational(&r), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn float_rationalization_is_exact() {
        let r = rational_from_float(0.5f64).unwrap();
        assert_eq!(r, Rational::new(1.into(), 2.into()));
        // 0.1 is not exactly representable; conversion keeps the binary value
        let r = rational_from_float(0.1f64).unwrap();
        assert_eq!(r.to_f64().unwrap(), 0.1);
        assert!(rational_from_float(f64::NAN).is_err());
    }

    #[test]
    fn kernel_of_difference_system() {
        // rows (1,0) -> kernel spanned by (0,1)
        let rows = vec![rv(&[1, 0])];
        let kernel = kernel_basis(&rows, 2);
        assert_eq!(kernel, vec![rv(&[0, 1])]);
        // rows spanning R^2 -> trivial kernel
        let rows = vec![rv(&[1, 0]), rv(&[0, 1])];
        assert!(kernel_basis(&rows, 2).is_empty());
        // no rows -> full kernel
        assert_eq!(kernel_basis(&[], 2).len(), 2);
    }

    #[test]
    fn kernel_vectors_annihilate_rows() {
        let rows = vec![rv(&[1, 2, 3]), rv(&[0, 1, 1])];
        let kernel = kernel_basis(&rows, 3);
        assert_eq!(kernel.len(), 1);
        for k in &kernel {
            for r in &rows {
                assert!(r.dot(k).is_zero());
            }
        }
    }

    #[test]
    fn span_membership() {
        let basis = vec![rv(&[1, 1, 0]), rv(&[0, 0, 1])];
        assert!(in_span(&rv(&[2, 2, 5]), &basis));
        assert!(!in_span(&rv(&[1, 0, 0]), &basis));
        assert!(in_span(&rv(&[0, 0, 0]), &basis));
    }

    #[test]
    fn solve_columns_consistent_and_not() {
        let cols = vec![rv(&[1, 0]), rv(&[1, 1])];
        let sol = solve_columns(&cols, &rv(&[3, 2])).unwrap();
        assert_eq!(sol, vec![Rational::from_integer(1.into()), Rational::from_integer(2.into())]);
        let cols = vec![rv(&[1, 1])];
        assert!(solve_columns(&cols, &rv(&[1, 2])).is_none());
    }

    #[test]
    fn independent_subset_picks_first_spanning_set() {
        let vs = vec![rv(&[1, 0]), rv(&[2, 0]), rv(&[1, 1])];
        let basis = independent_subset(&vs);
        assert_eq!(basis, vec![rv(&[1, 0]), rv(&[1, 1])]);
    }

    #[test]
    fn serde_uses_pq_strings() {
        let v = RationalVec::parse(&["1/2", "-3/1"]).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"["1/2","-3/1"]"#);
        let back: RationalVec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
