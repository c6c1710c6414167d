//! Decomposition components: ideals spanned by linear forms and monomial
//! ideals generated by pure powers of the variables.
//!
//! Both classes are closed under sums and have a unique canonical form (the
//! reduced echelon basis of the span of the linear generators, or the map
//! variable -> exponent), so ideal equality is structural equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, Matrix, Scalar};

/// `K[x_1, ..., x_d]` with named variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AmbientRing {
    var_names: Vec<String>,
    field: FieldSpec,
}

impl AmbientRing {
    pub fn new(var_names: Vec<String>, field: FieldSpec) -> Result<Arc<Self>> {
        if var_names.is_empty() {
            return Err(Error::Malformed("the ambient ring needs at least one variable".into()));
        }
        for (i, name) in var_names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Malformed(format!("variable {i} has an empty name")));
            }
            if var_names[..i].contains(name) {
                return Err(Error::Malformed(format!("variable name {name:?} is repeated")));
            }
        }
        Ok(Arc::new(AmbientRing { var_names, field }))
    }

    /// `x1, ..., xd` over `field`.
    pub fn standard(d: usize, field: FieldSpec) -> Arc<Self> {
        AmbientRing::new((1..=d).map(|i| format!("x{i}")).collect(), field).expect("d >= 1")
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    pub fn monomial_to_string(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| if e == 1 { self.var_names[v].clone() } else { format!("{}^{e}", self.var_names[v]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Degree-`j` monomials in the variables flagged by `allowed`, in graded
/// lexicographic order with `x_1 > x_2 > ... > x_d`.
pub fn monomials_of_degree(allowed: &[bool], j: u32) -> Vec<Monomial> {
    fn go(allowed: &[bool], v: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if v == allowed.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        if !allowed[v] {
            go(allowed, v + 1, left, cur, out);
            return;
        }
        for e in (0..=left).rev() {
            cur[v] = e;
            go(allowed, v + 1, left - e, cur, out);
        }
        cur[v] = 0;
    }
    let mut out = Vec::new();
    go(allowed, 0, j, &mut vec![0; allowed.len()], &mut out);
    out
}

/// All degree-`j` monomials of a ring with `nvars` variables.
pub fn monomial_basis(nvars: usize, j: u32) -> Vec<Monomial> {
    monomials_of_degree(&vec![true; nvars], j)
}

fn index_of(basis: &[Monomial]) -> HashMap<&Monomial, usize> {
    basis.iter().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Ideal generated by linear forms, stored as the reduced echelon basis of
/// their span (one row per generator, one column per variable).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearIdeal {
    ring: Arc<AmbientRing>,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl LinearIdeal {
    pub fn new(ring: Arc<AmbientRing>, generators: &Matrix) -> Result<Self> {
        if generators.cols() != ring.nvars() {
            return Err(Error::Malformed(format!(
                "linear generators have {} coefficients, the ring has {} variables",
                generators.cols(),
                ring.nvars()
            )));
        }
        if generators.field() != ring.field() {
            return Err(Error::Malformed("generator coefficients are over the wrong field".into()));
        }
        let r = generators.rref();
        if r.rank == 0 {
            return Err(Error::Degenerate("linear component generates the zero ideal".into()));
        }
        let mut basis = r.reduced;
        basis.truncate_rows(r.rank);
        Ok(LinearIdeal { ring, basis, pivots: r.pivot_cols })
    }

    /// Ideal generated by the listed variables.
    pub fn of_variables(ring: Arc<AmbientRing>, vars: &[usize]) -> Result<Self> {
        let d = ring.nvars();
        let mut values = vec![0i64; vars.len() * d];
        for (r, &v) in vars.iter().enumerate() {
            if v >= d {
                return Err(Error::Malformed(format!("variable index {v} out of range")));
            }
            values[r * d + v] = 1;
        }
        let gens = Matrix::from_i64(ring.field(), vars.len(), d, &values);
        LinearIdeal::new(ring, &gens)
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn height(&self) -> usize {
        self.basis.rows()
    }

    pub fn quotient_dim(&self) -> usize {
        self.ring.nvars() - self.height()
    }

    fn free_mask(&self) -> Vec<bool> {
        let mut mask = vec![true; self.ring.nvars()];
        for &p in &self.pivots {
            mask[p] = false;
        }
        mask
    }

    fn sum(&self, other: &LinearIdeal) -> Result<LinearIdeal> {
        LinearIdeal::new(self.ring.clone(), &self.basis.vstack(&other.basis)?)
    }

    /// `other ⊆ self`.
    fn contains(&self, other: &LinearIdeal) -> bool {
        self.basis.vstack(&other.basis).map(|m| m.rank() == self.height()).unwrap_or(false)
    }

    /// Linear form that replaces variable `v` in normal forms: itself if `v`
    /// is free, `-sum_c B[r][c] x_c` over the free columns if `v` is the
    /// pivot of row `r`.
    fn substitution(&self, v: usize) -> Vec<(usize, Scalar)> {
        match self.pivots.iter().position(|&p| p == v) {
            None => vec![(v, self.ring.field().one())],
            Some(r) => (0..self.ring.nvars())
                .filter(|&c| c != v && !self.basis.get(r, c).is_zero())
                .map(|c| (c, -self.basis.get(r, c)))
                .collect(),
        }
    }

    /// Normal form of a monomial: every pivot variable is rewritten through
    /// its echelon row and the product is expanded.
    pub fn normal_form(&self, m: &Monomial) -> BTreeMap<Monomial, Scalar> {
        let d = self.ring.nvars();
        let field = self.ring.field();
        let subs: Vec<Vec<(usize, Scalar)>> = (0..d).map(|v| self.substitution(v)).collect();
        let mut poly: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        poly.insert(Monomial::one(d), field.one());
        for (v, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                let mut next: BTreeMap<Monomial, Scalar> = BTreeMap::new();
                for (mono, coeff) in &poly {
                    for (c, s) in &subs[v] {
                        let mut m2 = mono.clone();
                        m2.0[*c] += 1;
                        let term = coeff * s;
                        let slot = next.entry(m2).or_insert_with(|| field.zero());
                        *slot = &*slot + &term;
                    }
                }
                next.retain(|_, c| !c.is_zero());
                poly = next;
            }
        }
        poly
    }

    /// Degree-1 generators as readable linear forms.
    pub fn generator_strings(&self) -> Vec<String> {
        (0..self.basis.rows()).map(|r| linear_form_string(&self.ring, self.basis.row(r))).collect()
    }
}

fn linear_form_string(ring: &AmbientRing, coeffs: &[Scalar]) -> String {
    let mut out = String::new();
    for (v, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (neg, mag) = c.sign_split();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag}*"));
        }
        out.push_str(&ring.var_names()[v]);
    }
    out
}

/// Monomial ideal generated by pure powers `x_v^{e_v}`, `v` in the support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PurePowerIdeal {
    ring: Arc<AmbientRing>,
    exps: BTreeMap<usize, u32>,
}

impl PurePowerIdeal {
    pub fn new(ring: Arc<AmbientRing>, exps: BTreeMap<usize, u32>) -> Result<Self> {
        if exps.is_empty() {
            return Err(Error::Degenerate("pure-power component has empty support".into()));
        }
        for (&v, &e) in &exps {
            if v >= ring.nvars() {
                return Err(Error::Malformed(format!("variable index {v} out of range")));
            }
            if e == 0 {
                return Err(Error::Malformed(format!("exponent of {} must be at least 1", ring.var_names()[v])));
            }
        }
        Ok(PurePowerIdeal { ring, exps })
    }

    /// Squarefree ideal generated by the listed variables.
    pub fn of_variables(ring: Arc<AmbientRing>, vars: &[usize]) -> Result<Self> {
        PurePowerIdeal::new(ring, vars.iter().map(|&v| (v, 1)).collect())
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    pub fn exponents(&self) -> &BTreeMap<usize, u32> {
        &self.exps
    }

    pub fn support(&self) -> Vec<usize> {
        self.exps.keys().copied().collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.values().all(|&e| e == 1)
    }

    pub fn height(&self) -> usize {
        self.exps.len()
    }

    pub fn quotient_dim(&self) -> usize {
        self.ring.nvars() - self.exps.len()
    }

    fn sum(&self, other: &PurePowerIdeal) -> PurePowerIdeal {
        let mut exps = self.exps.clone();
        for (&v, &e) in &other.exps {
            exps.entry(v).and_modify(|x| *x = (*x).min(e)).or_insert(e);
        }
        PurePowerIdeal { ring: self.ring.clone(), exps }
    }

    /// `other ⊆ self`: every generator of `other` is a multiple of one of ours.
    fn contains(&self, other: &PurePowerIdeal) -> bool {
        other.exps.iter().all(|(v, &e)| self.exps.get(v).is_some_and(|&mine| mine <= e))
    }

    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        self.exps.iter().any(|(&v, &e)| m.0[v] >= e)
    }
}

/// A decomposition component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ideal {
    Linear(LinearIdeal),
    PurePower(PurePowerIdeal),
}

/// Serializable canonical form of an ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CanonicalForm {
    /// Echelon basis rows, entries rendered as integers or `a/b`.
    Linear { basis: Vec<Vec<String>> },
    /// Variable name -> exponent.
    Monomial { exponents: BTreeMap<String, u32> },
}

impl Ideal {
    pub fn ring(&self) -> &Arc<AmbientRing> {
        match self {
            Ideal::Linear(i) => i.ring(),
            Ideal::PurePower(i) => i.ring(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Ideal::Linear(_) => "linear",
            Ideal::PurePower(_) => "monomial",
        }
    }

    fn same_setting(&self, other: &Ideal) -> Result<()> {
        if self.ring() != other.ring() {
            return Err(Error::AmbientMismatch);
        }
        match (self, other) {
            (Ideal::Linear(_), Ideal::Linear(_)) | (Ideal::PurePower(_), Ideal::PurePower(_)) => Ok(()),
            _ => Err(Error::KindMismatch),
        }
    }

    /// Canonical form of `self + other`.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.same_setting(other)?;
        match (self, other) {
            (Ideal::Linear(a), Ideal::Linear(b)) => Ok(Ideal::Linear(a.sum(b)?)),
            (Ideal::PurePower(a), Ideal::PurePower(b)) => Ok(Ideal::PurePower(a.sum(b))),
            _ => unreachable!(),
        }
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ideal) -> Result<bool> {
        self.same_setting(other)?;
        Ok(match (self, other) {
            (Ideal::Linear(a), Ideal::Linear(b)) => a.contains(b),
            (Ideal::PurePower(a), Ideal::PurePower(b)) => a.contains(b),
            _ => unreachable!(),
        })
    }

    /// `d_p = dim A/I_p`.
    pub fn quotient_dim(&self) -> usize {
        match self {
            Ideal::Linear(i) => i.quotient_dim(),
            Ideal::PurePower(i) => i.quotient_dim(),
        }
    }

    /// `h_p`, the number of (independent) generators.
    pub fn height(&self) -> usize {
        match self {
            Ideal::Linear(i) => i.height(),
            Ideal::PurePower(i) => i.height(),
        }
    }

    /// Prime ideals here are exactly those generated by linear forms, which
    /// includes the squarefree pure-power ideals.
    pub fn is_prime(&self) -> bool {
        match self {
            Ideal::Linear(_) => true,
            Ideal::PurePower(i) => i.is_squarefree(),
        }
    }

    pub fn is_squarefree_monomial(&self) -> bool {
        matches!(self, Ideal::PurePower(i) if i.is_squarefree())
    }

    /// Standard monomials of degree `j` of `A/I`.
    pub fn quotient_degree_basis(&self, j: u32) -> Vec<Monomial> {
        match self {
            Ideal::Linear(i) => monomials_of_degree(&i.free_mask(), j),
            Ideal::PurePower(i) => monomial_basis(i.ring.nvars(), j)
                .into_iter()
                .filter(|m| !i.contains_monomial(m))
                .collect(),
        }
    }

    pub fn quotient_degree_dim(&self, j: u32) -> usize {
        match self {
            Ideal::Linear(i) => {
                let dp = i.quotient_dim();
                if dp == 0 {
                    usize::from(j == 0)
                } else {
                    binomial(j as usize + dp - 1, dp - 1)
                }
            }
            Ideal::PurePower(_) => self.quotient_degree_basis(j).len(),
        }
    }

    /// Matrix of the natural surjection `(A/small)_j -> (A/big)_j` in the
    /// standard-monomial bases; requires `small ⊆ big`.
    pub fn projection_matrix(small: &Ideal, big: &Ideal, j: u32) -> Result<Matrix> {
        if !big.contains(small)? {
            return Err(Error::NotContained { small: small.to_string(), big: big.to_string() });
        }
        let field = small.ring().field();
        let source = small.quotient_degree_basis(j);
        let target = big.quotient_degree_basis(j);
        let index = index_of(&target);
        let mut m = Matrix::zeros(field, target.len(), source.len());
        match big {
            Ideal::Linear(b) => {
                for (c, mono) in source.iter().enumerate() {
                    for (nf, coeff) in b.normal_form(mono) {
                        let r = index[&nf];
                        m.set(r, c, coeff);
                    }
                }
            }
            Ideal::PurePower(_) => {
                for (c, mono) in source.iter().enumerate() {
                    if let Some(&r) = index.get(mono) {
                        m.set(r, c, field.one());
                    }
                }
            }
        }
        Ok(m)
    }

    /// `I_j` as a subspace of the degree-`j` forms.
    pub fn degree_piece(&self, j: u32) -> Subspace {
        let ring = self.ring();
        let field = ring.field();
        let d = ring.nvars();
        let basis = monomial_basis(d, j);
        let n = basis.len();
        match self {
            Ideal::PurePower(i) => {
                let rows: Vec<usize> = (0..n).filter(|&k| i.contains_monomial(&basis[k])).collect();
                Subspace::coordinate(field, d, j, n, &rows)
            }
            Ideal::Linear(i) => {
                if j == 0 {
                    return Subspace::zero(field, d, j, n);
                }
                let index = index_of(&basis);
                let lower = monomial_basis(d, j - 1);
                let mut gens = Matrix::zeros(field, i.height() * lower.len(), n);
                let mut row = 0;
                for r in 0..i.height() {
                    for m in &lower {
                        for v in 0..d {
                            let c = i.basis.get(r, v);
                            if c.is_zero() {
                                continue;
                            }
                            let mut prod = m.clone();
                            prod.0[v] += 1;
                            gens.set(row, index[&prod], c.clone());
                        }
                        row += 1;
                    }
                }
                Subspace::spanned_by(d, j, gens)
            }
        }
    }

    /// Serializable canonical form.
    pub fn canonical_form(&self) -> CanonicalForm {
        match self {
            Ideal::Linear(i) => CanonicalForm::Linear {
                basis: (0..i.basis.rows())
                    .map(|r| i.basis.row(r).iter().map(|s| s.to_string()).collect())
                    .collect(),
            },
            Ideal::PurePower(i) => CanonicalForm::Monomial {
                exponents: i.exps.iter().map(|(&v, &e)| (i.ring.var_names()[v].clone(), e)).collect(),
            },
        }
    }

    /// Sort key: the echelon basis entries or the exponent map.
    fn canonical_key(&self) -> (u8, Vec<Scalar>, Vec<(usize, u32)>) {
        match self {
            Ideal::Linear(i) => {
                (0, (0..i.basis.rows()).flat_map(|r| i.basis.row(r).to_vec()).collect(), Vec::new())
            }
            Ideal::PurePower(i) => (1, Vec::new(), i.exps.iter().map(|(&v, &e)| (v, e)).collect()),
        }
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by height, then by canonical form.
impl Ord for Ideal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.height(), self.canonical_key()).cmp(&(other.height(), other.canonical_key()))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ideal::Linear(i) => write!(f, "({})", i.generator_strings().join(", ")),
            Ideal::PurePower(i) => {
                let gens: Vec<String> = i
                    .exps
                    .iter()
                    .map(|(&v, &e)| {
                        let name = &i.ring.var_names()[v];
                        if e == 1 {
                            name.clone()
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
                write!(f, "({})", gens.join(", "))
            }
        }
    }
}

/// A subspace of the degree-`j` forms, with columns following
/// [`monomial_basis`]. Monomial subspaces are kept as coordinate lists.
#[derive(Clone, Debug)]
pub struct Subspace {
    nvars: usize,
    degree: u32,
    field: FieldSpec,
    ambient: usize,
    span: Span,
}

#[derive(Clone, Debug)]
enum Span {
    /// Sorted monomial indices.
    Coordinates(Vec<usize>),
    /// Reduced echelon basis.
    Echelon(Matrix),
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars != other.nvars || self.degree != other.degree || self.field != other.field {
            return false;
        }
        match (&self.span, &other.span) {
            (Span::Coordinates(a), Span::Coordinates(b)) => a == b,
            _ => self.basis() == other.basis(),
        }
    }
}

impl Eq for Subspace {}

impl Subspace {
    fn zero(field: FieldSpec, nvars: usize, degree: u32, n: usize) -> Self {
        Subspace::coordinate(field, nvars, degree, n, &[])
    }

    fn coordinate(field: FieldSpec, nvars: usize, degree: u32, n: usize, coords: &[usize]) -> Self {
        Subspace { nvars, degree, field, ambient: n, span: Span::Coordinates(coords.to_vec()) }
    }

    /// Span of the rows of `gens`.
    pub fn spanned_by(nvars: usize, degree: u32, gens: Matrix) -> Self {
        Subspace { nvars, degree, field: gens.field(), ambient: gens.cols(), span: Span::Echelon(gens.row_space()) }
    }

    pub fn dim(&self) -> usize {
        match &self.span {
            Span::Coordinates(c) => c.len(),
            Span::Echelon(m) => m.rows(),
        }
    }

    /// Dimension of the space of all degree-`j` forms.
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Reduced echelon basis, one row per basis vector.
    pub fn basis(&self) -> Matrix {
        match &self.span {
            Span::Echelon(m) => m.clone(),
            Span::Coordinates(c) => {
                let mut m = Matrix::zeros(self.field, c.len(), self.ambient);
                for (r, &k) in c.iter().enumerate() {
                    m.set(r, k, self.field.one());
                }
                m
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn check(&self, other: &Subspace) {
        assert!(self.nvars == other.nvars && self.degree == other.degree, "subspaces of different spaces");
    }

    fn echelon(&self) -> std::borrow::Cow<'_, Matrix> {
        match &self.span {
            Span::Echelon(m) => std::borrow::Cow::Borrowed(m),
            Span::Coordinates(_) => std::borrow::Cow::Owned(self.basis()),
        }
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        self.check(other);
        if let (Span::Coordinates(a), Span::Coordinates(b)) = (&self.span, &other.span) {
            let mut c: Vec<usize> = a.iter().chain(b).copied().collect();
            c.sort_unstable();
            c.dedup();
            return Subspace::coordinate(self.field, self.nvars, self.degree, self.ambient, &c);
        }
        let stacked = self.echelon().vstack(&other.echelon()).expect("same shape");
        Subspace::spanned_by(self.nvars, self.degree, stacked)
    }

    /// Annihilator constraints: rows `c` with `c · v = 0` for all `v` here.
    fn constraints(&self) -> Matrix {
        if self.dim() == 0 {
            return Matrix::identity(self.field, self.ambient);
        }
        self.echelon().kernel_basis().transpose()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.check(other);
        if let (Span::Coordinates(a), Span::Coordinates(b)) = (&self.span, &other.span) {
            let c: Vec<usize> = a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect();
            return Subspace::coordinate(self.field, self.nvars, self.degree, self.ambient, &c);
        }
        let stacked = self.constraints().vstack(&other.constraints()).expect("same shape");
        let k = stacked.kernel_basis().transpose();
        Subspace::spanned_by(self.nvars, self.degree, k)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.check(other);
        if let (Span::Coordinates(a), Span::Coordinates(b)) = (&self.span, &other.span) {
            return b.iter().all(|x| a.binary_search(x).is_ok());
        }
        self.sum(other).dim() == self.dim()
    }
}

/// `(∩ I_k)_j`. Pure-power inputs are intersected monomial by monomial,
/// linear ones by subspace intersection.
pub fn intersect_degree_pieces(ideals: &[&Ideal], j: u32) -> Result<Subspace> {
    let first = ideals.first().ok_or_else(|| Error::Malformed("empty intersection".into()))?;
    for other in &ideals[1..] {
        first.same_setting(other)?;
    }
    if ideals.iter().all(|i| matches!(i, Ideal::PurePower(_))) {
        let ring = first.ring();
        let basis = monomial_basis(ring.nvars(), j);
        let coords: Vec<usize> = (0..basis.len())
            .filter(|&k| {
                ideals.iter().all(|i| match i {
                    Ideal::PurePower(p) => p.contains_monomial(&basis[k]),
                    Ideal::Linear(_) => unreachable!(),
                })
            })
            .collect();
        return Ok(Subspace::coordinate(ring.field(), ring.nvars(), j, basis.len(), &coords));
    }
    Ok(intersect_subspaces(ideals.iter().map(|i| i.degree_piece(j))))
}

/// Intersection by repeated subspace intersection, whatever the ideal kind.
pub fn intersect_subspaces(pieces: impl IntoIterator<Item = Subspace>) -> Subspace {
    pieces.into_iter().reduce(|a, b| a.intersect(&b)).expect("nonempty")
}

/// `(Σ I_k)_j`.
pub fn sum_degree_pieces(ideals: &[&Ideal], j: u32) -> Result<Subspace> {
    let first = ideals.first().ok_or_else(|| Error::Malformed("empty sum".into()))?;
    for other in &ideals[1..] {
        first.same_setting(other)?;
    }
    Ok(ideals.iter().map(|i| i.degree_piece(j)).reduce(|a, b| a.sum(&b)).expect("nonempty"))
}

/// `dim (A / ∩ I_k)_j`.
pub fn intersection_quotient_dim(ideals: &[&Ideal], j: u32) -> Result<usize> {
    let piece = intersect_degree_pieces(ideals, j)?;
    Ok(piece.ambient_dim() - piece.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    fn ring(names: &[&str]) -> Arc<AmbientRing> {
        AmbientRing::new(names.iter().map(|s| s.to_string()).collect(), Q).unwrap()
    }

    fn lin(r: &Arc<AmbientRing>, rows: &[&[i64]]) -> Ideal {
        let d = r.nvars();
        let flat: Vec<i64> = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Ideal::Linear(LinearIdeal::new(r.clone(), &Matrix::from_i64(Q, rows.len(), d, &flat)).unwrap())
    }

    fn pp(r: &Arc<AmbientRing>, exps: &[(usize, u32)]) -> Ideal {
        Ideal::PurePower(PurePowerIdeal::new(r.clone(), exps.iter().copied().collect()).unwrap())
    }

    #[test]
    fn linear_sums() {
        let r = AmbientRing::standard(6, Q);
        let a = Ideal::Linear(LinearIdeal::of_variables(r.clone(), &[0, 1]).unwrap());
        let b = Ideal::Linear(LinearIdeal::of_variables(r.clone(), &[2, 3]).unwrap());
        let ab = Ideal::Linear(LinearIdeal::of_variables(r.clone(), &[0, 1, 2, 3]).unwrap());
        assert_eq!(a.sum(&b).unwrap(), ab);
        assert_eq!(a.sum(&a).unwrap(), a);
        assert_eq!(a.quotient_dim(), 4);
        assert_eq!(a.height(), 2);
        let all = Ideal::Linear(LinearIdeal::of_variables(r, &[0, 1, 2, 3, 4, 5]).unwrap());
        assert_eq!(all.quotient_dim(), 0);
    }

    #[test]
    fn linear_equality_is_span_equality() {
        let r = ring(&["x", "y", "z"]);
        let sum = lin(&r, &[&[1, 0, 0], &[0, 1, 0]]).sum(&lin(&r, &[&[1, 0, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(sum, lin(&r, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_ne!(lin(&r, &[&[1, 0, 0]]), lin(&r, &[&[0, 1, 0]]));
        assert_eq!(lin(&r, &[&[1, 1, 0]]), lin(&r, &[&[2, 2, 0]]));
    }

    #[test]
    fn pure_power_sum_takes_min_exponent() {
        let r = ring(&["x", "y"]);
        let s = pp(&r, &[(0, 3)]).sum(&pp(&r, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(s, pp(&r, &[(0, 1), (1, 2)]));
        // brute-force membership up to degree 5: x^a y^b is in (x^3)+(x,y^2)
        // iff it is in (x^3) or in (x, y^2)
        for a in 0..=5u32 {
            for b in 0..=(5 - a) {
                let m = Monomial(vec![a, b]);
                let in_sum = a >= 3 || a >= 1 || b >= 2;
                let Ideal::PurePower(canon) = &s else { unreachable!() };
                assert_eq!(canon.contains_monomial(&m), in_sum, "{m:?}");
            }
        }
        let r3 = ring(&["x", "y", "z"]);
        let i = pp(&r3, &[(0, 2), (1, 3)]);
        assert_eq!((i.quotient_dim(), i.height()), (1, 2));
    }

    #[test]
    fn kind_and_ambient_mismatch() {
        let r = ring(&["x", "y"]);
        let other = ring(&["u", "v"]);
        assert_eq!(lin(&r, &[&[1, 0]]).sum(&pp(&r, &[(0, 1)])), Err(Error::KindMismatch));
        assert_eq!(lin(&r, &[&[1, 0]]).sum(&lin(&other, &[&[1, 0]])), Err(Error::AmbientMismatch));
    }

    #[test]
    fn quotient_bases() {
        let r = ring(&["x", "y"]);
        let x = lin(&r, &[&[1, 0]]);
        assert_eq!(x.quotient_degree_basis(2), vec![Monomial(vec![0, 2])]);
        let xy = lin(&r, &[&[1, 0], &[0, 1]]);
        assert_eq!(xy.quotient_degree_dim(0), 1);
        assert_eq!(xy.quotient_degree_basis(0), vec![Monomial(vec![0, 0])]);
        assert_eq!(xy.quotient_degree_dim(3), 0);
        // (x^2) in K[x,y] at degree 3: x^3, x^2y, xy^2, y^3 minus multiples of x^2
        let x2 = pp(&r, &[(0, 2)]);
        let brute: Vec<Monomial> =
            monomial_basis(2, 3).into_iter().filter(|m| m.0[0] < 2).collect();
        assert_eq!(x2.quotient_degree_basis(3), brute);
        assert_eq!(x2.quotient_degree_dim(3), 2);
    }

    #[test]
    fn linear_quotient_dim_formula() {
        let r = AmbientRing::standard(5, Q);
        for vars in [&[0usize][..], &[0, 2], &[1, 3, 4], &[0, 1, 2, 3, 4]] {
            let i = Ideal::Linear(LinearIdeal::of_variables(r.clone(), vars).unwrap());
            for j in 0..5 {
                assert_eq!(i.quotient_degree_dim(j), i.quotient_degree_basis(j).len());
            }
        }
    }

    #[test]
    fn projection_examples() {
        let r = ring(&["x", "y"]);
        let m = Ideal::projection_matrix(&lin(&r, &[&[1, 0]]), &lin(&r, &[&[1, 0], &[0, 1]]), 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 1));

        let r3 = ring(&["x", "y", "z"]);
        let small = lin(&r3, &[&[1, 0, -1], &[0, 1, 0]]);
        let big = lin(&r3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(Ideal::projection_matrix(&small, &big, 0).unwrap(), Matrix::identity(Q, 1));

        let line = lin(&r, &[&[1, -1]]);
        assert_eq!(line.quotient_degree_basis(1), vec![Monomial(vec![0, 1])]);
        let m = Ideal::projection_matrix(&line, &lin(&r, &[&[1, 0], &[0, 1]]), 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 1));

        assert!(matches!(
            Ideal::projection_matrix(&big, &small, 1),
            Err(Error::NotContained { .. })
        ));
    }

    #[test]
    fn projection_substitutes_pivots() {
        // (x - y) ⊂ K[x,y]: (A/0)... use (x - 2y) ⊆ (x - 2y) + nothing, and
        // (z) ⊆ (z, x - 2y) in K[x,y,z]: source basis at j=1 is {x, y}, x
        // reduces to 2y in the target
        let r = ring(&["x", "y", "z"]);
        let small = lin(&r, &[&[0, 0, 1]]);
        let big = lin(&r, &[&[0, 0, 1], &[1, -2, 0]]);
        let m = Ideal::projection_matrix(&small, &big, 1).unwrap();
        assert_eq!(m, Matrix::from_i64(Q, 1, 2, &[2, 1]));
        let m2 = Ideal::projection_matrix(&small, &big, 2).unwrap();
        // x^2 -> 4y^2, xy -> 2y^2, y^2 -> y^2
        assert_eq!(m2, Matrix::from_i64(Q, 1, 3, &[4, 2, 1]));
    }

    #[test]
    fn pure_power_projection() {
        let r = ring(&["x", "y"]);
        let small = pp(&r, &[(0, 3)]);
        let big = pp(&r, &[(0, 1), (1, 2)]);
        let m = Ideal::projection_matrix(&small, &big, 2).unwrap();
        // source: x^2, xy, y^2 ; target: nothing survives except ... x ∈ big,
        // y^2 ∈ big, so the target is empty in degree 2
        assert_eq!((m.rows(), m.cols()), (0, 3));
        let m1 = Ideal::projection_matrix(&small, &big, 1).unwrap();
        assert_eq!(m1, Matrix::from_i64(Q, 1, 2, &[0, 1]));
    }

    #[test]
    fn degree_piece_examples() {
        let r = ring(&["x", "y"]);
        let x = lin(&r, &[&[1, 0]]);
        let y = lin(&r, &[&[0, 1]]);
        let diag = lin(&r, &[&[1, -1]]);
        let lhs = x.sum(&y).unwrap().degree_piece(1).intersect(&diag.degree_piece(1));
        assert_eq!(lhs.dim(), 1);
        assert_eq!(lhs.basis(), Matrix::from_i64(Q, 1, 2, &[1, -1]));
        let rhs = intersect_degree_pieces(&[&x, &diag], 1)
            .unwrap()
            .sum(&intersect_degree_pieces(&[&y, &diag], 1).unwrap());
        assert_eq!(rhs.dim(), 0);
        for j in 0..4 {
            assert_eq!(intersect_degree_pieces(&[&x, &x], j).unwrap(), x.degree_piece(j));
        }
    }

    #[test]
    fn monomial_intersection_matches_subspace_route() {
        let r = ring(&["x", "y", "z"]);
        let a = pp(&r, &[(0, 2), (1, 1)]);
        let b = pp(&r, &[(1, 3), (2, 1)]);
        let c = pp(&r, &[(0, 1), (2, 2)]);
        for j in 0..6 {
            let fast = intersect_degree_pieces(&[&a, &b, &c], j).unwrap();
            let slow = intersect_subspaces([a.degree_piece(j), b.degree_piece(j), c.degree_piece(j)]);
            assert_eq!(fast, slow, "degree {j}");
            let count = monomial_basis(3, j)
                .iter()
                .filter(|m| [&a, &b, &c].iter().all(|i| match i {
                    Ideal::PurePower(p) => p.contains_monomial(m),
                    _ => false,
                }))
                .count();
            assert_eq!(fast.dim(), count);
        }
    }

    #[test]
    fn display_forms() {
        let r = ring(&["x", "y", "z"]);
        assert_eq!(lin(&r, &[&[1, 0, -1], &[0, 1, 0]]).to_string(), "(x - z, y)");
        assert_eq!(pp(&r, &[(0, 2), (2, 1)]).to_string(), "(x^2, z)");
        assert_eq!(lin(&r, &[&[2, 0, 1]]).to_string(), "(x + 1/2*z)");
    }
}
