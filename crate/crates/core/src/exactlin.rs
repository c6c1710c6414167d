//! Exact linear algebra over the rationals and prime fields.
//!
//! Matrices are dense and row-major. Every entry is a [`Scalar`] tagged with
//! the field it lives in, and a [`Matrix`] refuses entries from a field other
//! than its own, so elimination never has to deal with mixed arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawField")]
pub enum FieldSpec {
    #[default]
    Rational,
    Prime { p: u64 },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawField {
    Rational,
    Prime { p: u64 },
}

impl TryFrom<RawField> for FieldSpec {
    type Error = Error;

    fn try_from(raw: RawField) -> Result<Self> {
        match raw {
            RawField::Rational => Ok(FieldSpec::Rational),
            RawField::Prime { p } => FieldSpec::prime(p),
        }
    }
}


fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k.saturating_mul(k) <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

impl FieldSpec {
    /// Prime field of characteristic `p`. Moduli are capped at 2^32 so that
    /// products fit comfortably in `u128` intermediate arithmetic.
    pub fn prime(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::Malformed(format!("{p} is not a supported prime modulus")));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime { p } => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime { p } => Scalar::Mod { value: 0, p },
        }
    }

    pub fn one(&self) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Rational(BigRational::one()),
            FieldSpec::Prime { p } => Scalar::Mod { value: 1 % p, p },
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime { p } => Scalar::Mod { value: v.rem_euclid(p as i64) as u64, p },
        }
    }

    /// Image of a rational number in this field; fails over `F_p` when `p`
    /// divides the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match *self {
            FieldSpec::Rational => Ok(Scalar::Rational(q.clone())),
            FieldSpec::Prime { p } => {
                let modulus = BigInt::from(p);
                let reduce = |n: &BigInt| n.mod_floor(&modulus).to_u64().unwrap_or(0);
                let den = reduce(q.denom());
                if den == 0 {
                    return Err(Error::Malformed(format!("{q} is not defined modulo {p}")));
                }
                let num = Scalar::Mod { value: reduce(q.numer()), p };
                Ok(&num * &Scalar::Mod { value: den, p }.inv())
            }
        }
    }

    /// Whether `s` is an element of this field.
    pub fn owns(&self, s: &Scalar) -> bool {
        matches!(
            (self, s),
            (FieldSpec::Rational, Scalar::Rational(_))
        ) || matches!((self, s), (FieldSpec::Prime { p }, Scalar::Mod { p: q, .. }) if p == q)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "QQ"),
            FieldSpec::Prime { p } => write!(f, "GF({p})"),
        }
    }
}

/// An exact field element. Rationals are kept in lowest terms with a positive
/// denominator; residues use the canonical representative in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, p: u64 },
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Mod { value, p } => Scalar::Mod { value: pow_mod(*value, p - 2, *p), p: *p },
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Mod { p, .. } => FieldSpec::Prime { p: *p },
        }
    }

    fn add_assign_ref(&mut self, rhs: &Scalar) {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
            (Scalar::Mod { value, p }, Scalar::Mod { value: w, p: q }) if p == q => {
                *value = ((*value as u128 + *w as u128) % *p as u128) as u64;
            }
            _ => panic!("mixed-field scalar arithmetic"),
        }
    }

    /// `self -= factor * other`, the elimination kernel.
    fn sub_mul_assign(&mut self, factor: &Scalar, other: &Scalar) {
        match (self, factor, other) {
            (Scalar::Rational(a), Scalar::Rational(f), Scalar::Rational(b)) => {
                if !b.is_zero() {
                    *a -= f * b;
                }
            }
            (Scalar::Mod { value, p }, Scalar::Mod { value: f, .. }, Scalar::Mod { value: b, .. }) => {
                let m = *p as u128;
                let prod = (*f as u128 * *b as u128) % m;
                *value = ((*value as u128 + m - prod) % m) as u64;
            }
            _ => panic!("mixed-field scalar arithmetic"),
        }
    }

    fn mul_assign_ref(&mut self, rhs: &Scalar) {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a *= b,
            (Scalar::Mod { value, p }, Scalar::Mod { value: w, p: q }) if p == q => {
                *value = ((*value as u128 * *w as u128) % *p as u128) as u64;
            }
            _ => panic!("mixed-field scalar arithmetic"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out.mul_assign_ref(rhs);
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Mod { value, p } => Scalar::Mod { value: (p - value) % p, p: *p },
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A total order used only to make canonical forms sortable.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) => (p, a).cmp(&(q, b)),
            (Scalar::Rational(_), Scalar::Mod { .. }) => Ordering::Less,
            (Scalar::Mod { .. }, Scalar::Rational(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Scalar {
    /// Sign-aware rendering helper: `(is_negative, magnitude)`. Residues are
    /// never negative.
    pub fn sign_split(&self) -> (bool, Scalar) {
        match self {
            Scalar::Rational(q) if q.is_negative() => (true, Scalar::Rational(-q)),
            _ => (false, self.clone()),
        }
    }
}

/// Dense row-major matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from scalars, rejecting entries from another field.
    pub fn from_scalars(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Malformed(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().position(|s| !field.owns(s)) {
            return Err(Error::Malformed(format!(
                "entry {bad} belongs to {} but the matrix is over {field}",
                entries[bad].field()
            )));
        }
        Ok(Matrix { field, rows, cols, entries })
    }

    pub fn from_i64(field: FieldSpec, rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "entry count mismatch");
        Matrix { field, rows, cols, entries: values.iter().map(|&v| field.from_i64(v)).collect() }
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Malformed(format!("row {r} has {} entries, expected {cols}", rows[r].len())));
        }
        Matrix::from_scalars(field, n, cols, rows.into_iter().flatten().collect())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(self.field.owns(&v), "scalar from a foreign field");
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix { field: self.field, rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::Malformed(format!("cannot multiply over {} and {}", self.field, other.field)));
        }
        if self.cols != other.rows {
            return Err(Error::Malformed(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        let prod = a * b;
                        out.entries[idx].add_assign_ref(&prod);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            e.mul_assign_ref(s);
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field || self.cols != other.cols {
            return Err(Error::Malformed("vstack of incompatible matrices".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`,
    /// adding to what is already there.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = block.get(r, c);
                if !v.is_zero() {
                    self.entries[(r0 + r) * self.cols + c0 + c].add_assign_ref(v);
                }
            }
        }
    }

    /// Keeps only the first `n` rows.
    pub fn truncate_rows(&mut self, n: usize) {
        self.rows = self.rows.min(n);
        self.entries.truncate(self.rows * self.cols);
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivot_cols = m.rref_in_place();
        Rref { rank: pivot_cols.len(), reduced: m, pivot_cols }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols = self.cols;
        for c in 0..cols {
            self.entries.swap(a * cols + c, b * cols + c);
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !self.entries[i * cols + c].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.entries[r * cols + c].inv();
            for k in c..cols {
                self.entries[r * cols + k].mul_assign_ref(&inv);
            }
            let (before, rest) = self.entries.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            for row in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
                if row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for k in c..cols {
                    row[k].sub_mul_assign(&factor, &pivot_row[k]);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        if self.rows > self.cols {
            self.transpose().rref().rank
        } else {
            self.rref().rank
        }
    }

    /// Null-space basis, one basis vector per column.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { reduced, pivot_cols, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.entries[f * free.len() + j] = self.field.one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                let v = reduced.get(r, f);
                if !v.is_zero() {
                    k.entries[pc * free.len() + j] = -v;
                }
            }
        }
        k
    }

    /// Row-space basis in reduced echelon form with zero rows dropped.
    pub fn row_space(&self) -> Matrix {
        let Rref { mut reduced, rank, .. } = self.rref();
        reduced.truncate_rows(rank);
        reduced
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Parses `"3"`, `"-2"` or `"a/b"` into a rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;
    const F2: FieldSpec = FieldSpec::Prime { p: 2 };

    #[test]
    fn identity_rref() {
        let r = Matrix::identity(Q, 2).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_cols, vec![0, 1]);
        assert_eq!(r.reduced, Matrix::identity(Q, 2));
    }

    #[test]
    fn all_ones_rank_one() {
        let m = Matrix::from_i64(Q, 2, 2, &[1, 1, 1, 1]);
        let r = m.rref();
        assert_eq!((r.rank, r.pivot_cols), (1, vec![0]));
        assert_eq!(Matrix::from_i64(F2, 2, 2, &[1, 1, 1, 1]).rref().rank, 1);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(Q, 3).rank(), 3);
        assert_eq!(Matrix::from_i64(Q, 2, 2, &[1, 2, 2, 4]).rank(), 1);
        assert_eq!(Matrix::from_i64(F2, 2, 2, &[1, 1, 1, 1]).rank(), 1);
        // characteristic matters here
        let m = Matrix::from_i64(Q, 2, 2, &[1, 1, 1, -1]);
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::from_i64(F2, 2, 2, &[1, 1, 1, -1]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::zeros(Q, 2, 3).kernel_basis().cols(), 3);
        assert_eq!(Matrix::identity(Q, 2).kernel_basis().cols(), 0);
        let k = Matrix::from_i64(Q, 1, 2, &[1, 1]).kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![Q.from_i64(-1), Q.from_i64(1)]);
    }

    #[test]
    fn mixed_field_entries_rejected() {
        let entries = vec![Q.one(), F2.one()];
        assert!(matches!(Matrix::from_scalars(Q, 1, 2, entries), Err(Error::Malformed(_))));
    }

    #[test]
    fn prime_field_validation() {
        assert!(FieldSpec::prime(7).is_ok());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(9).is_err());
        let f: FieldSpec = serde_json::from_str(r#"{"kind":"prime","p":3}"#).unwrap();
        assert_eq!(f, FieldSpec::Prime { p: 3 });
        assert!(serde_json::from_str::<FieldSpec>(r#"{"kind":"prime","p":4}"#).is_err());
        assert_eq!(serde_json::to_string(&FieldSpec::Rational).unwrap(), r#"{"kind":"rational"}"#);
    }

    #[test]
    fn rational_reduction_mod_p() {
        let half = parse_rational("1/2").unwrap();
        let f5 = FieldSpec::Prime { p: 5 };
        assert_eq!(f5.from_rational(&half).unwrap(), Scalar::Mod { value: 3, p: 5 });
        assert!(F2.from_rational(&half).is_err());
        assert_eq!(f5.from_i64(-1), Scalar::Mod { value: 4, p: 5 });
    }

    #[test]
    fn rationals_stay_normalized() {
        let m = Matrix::from_scalars(
            Q,
            2,
            2,
            vec![
                Scalar::Rational(parse_rational("2/4").unwrap()),
                Q.from_i64(3),
                Q.from_i64(3),
                Q.from_i64(18),
            ],
        )
        .unwrap();
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.reduced.get(0, 1), &Q.from_i64(6));
        assert_eq!(r.reduced.get(0, 0).to_string(), "1");
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("-3").unwrap(), BigRational::from_integer((-3).into()));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), BigRational::new(3.into(), 2.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
