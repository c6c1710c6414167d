//! Decomposition multiplicities read off the reduced homology of the open
//! upper intervals `(q, 1̂)`, and the invariants built from them.
//!
//! With `β̃_k(q)` the reduced Betti numbers of the order complex of `(q, 1̂)`:
//!
//! ```text
//! M_{i,q} = β̃_{i - d_q - 1}(q)      (local cohomology at the maximal ideal)
//! m_{j,q} = β̃_{h_q - j - 1}(q)      (local cohomology supported on I)
//! H(H^i; t) = Σ_p M_{i,p} (t - 1)^{-d_p}
//! reg = max { i - d_p : M_{i,p} != 0 }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::FieldSpec;
use crate::poset::Poset;
use crate::roos::{distributivity_check, limit_check, DistributivityVerdict, LimitReport};
use crate::scomplex::{reduced_betti, BettiVector};

/// Interval data of a single poset element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRow {
    pub element: usize,
    pub ideal: String,
    pub d: usize,
    pub h: usize,
    /// Rank of `(q, 1̂)`; `-1` when the interval is empty.
    pub rank: isize,
    pub betti: BettiVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalBettiTable {
    pub field: FieldSpec,
    pub rows: Vec<IntervalRow>,
}

impl IntervalBettiTable {
    pub fn row(&self, q: usize) -> &IntervalRow {
        &self.rows[q]
    }
}

pub fn interval_betti_table(poset: &Poset, field: FieldSpec) -> IntervalBettiTable {
    let order = poset.order();
    let rows = (0..poset.len())
        .map(|q| {
            let interval = poset.open_upper_interval(q).expect("index in range");
            IntervalRow {
                element: q,
                ideal: poset.element(q).to_string(),
                d: poset.quotient_dim(q),
                h: poset.height(q),
                rank: interval.rank(order),
                betti: reduced_betti(&interval.order_complex(order), field),
            }
        })
        .collect();
    IntervalBettiTable { field, rows }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Functor {
    /// Local cohomology at the irrelevant ideal, indexed by quotient dimension.
    Hochster,
    /// Local cohomology supported on the ideal, indexed by height.
    Terai,
}

impl std::str::FromStr for Functor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hochster" => Ok(Functor::Hochster),
            "terai" => Ok(Functor::Terai),
            other => Err(Error::Malformed(format!("unknown functor {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityEntry {
    pub i: i64,
    pub element: usize,
    pub ideal: String,
    pub multiplicity: usize,
}

/// Nonzero multiplicities, sorted by `(i, element)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub kind: Functor,
    pub field: FieldSpec,
    pub nvars: usize,
    pub entries: Vec<MultiplicityEntry>,
}

impl DecompositionReport {
    pub fn get(&self, i: i64, element: usize) -> usize {
        self.entries
            .iter()
            .find(|e| e.i == i && e.element == element)
            .map_or(0, |e| e.multiplicity)
    }

    /// Cohomological indices carrying a nonzero entry.
    pub fn indices(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self.entries.iter().map(|e| e.i).collect();
        out.dedup();
        out
    }
}

pub fn decomposition(table: &IntervalBettiTable, kind: Functor, nvars: usize) -> DecompositionReport {
    let mut entries = Vec::new();
    for row in &table.rows {
        for (k, b) in row.betti.iter() {
            let i = match kind {
                Functor::Hochster => k + row.d as isize + 1,
                Functor::Terai => row.h as isize - k - 1,
            };
            entries.push(MultiplicityEntry { i: i as i64, element: row.element, ideal: row.ideal.clone(), multiplicity: b });
        }
    }
    entries.sort_by_key(|e| (e.i, e.element));
    DecompositionReport { kind, field: table.field, nvars, entries }
}

/// `M_{i,q}`.
pub fn hochster_multiplicities(poset: &Poset, field: FieldSpec) -> DecompositionReport {
    decomposition(&interval_betti_table(poset, field), Functor::Hochster, poset.ring().nvars())
}

/// `m_{j,q}`.
pub fn terai_multiplicities(poset: &Poset, field: FieldSpec) -> DecompositionReport {
    decomposition(&interval_betti_table(poset, field), Functor::Terai, poset.ring().nvars())
}

/// `Σ_e c_e (t - 1)^{-e}` with zero coefficients omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries(pub BTreeMap<usize, u64>);

impl HilbertSeries {
    pub fn add(&mut self, e: usize, c: u64) {
        if c > 0 {
            *self.0.entry(e).or_insert(0) += c;
        }
    }

    pub fn coefficient(&self, e: usize) -> u64 {
        self.0.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(&e, &c)| match e {
                0 => c.to_string(),
                _ => format!("{c}*(t-1)^-{e}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Series of `H^i_m` from a Hochster report.
pub fn series_from_report(report: &DecompositionReport, table: &IntervalBettiTable, i: i64) -> HilbertSeries {
    let mut h = HilbertSeries::default();
    for e in report.entries.iter().filter(|e| e.i == i) {
        h.add(table.row(e.element).d, e.multiplicity as u64);
    }
    h
}

pub fn hilbert_series(poset: &Poset, field: FieldSpec, i: i64) -> HilbertSeries {
    let table = interval_betti_table(poset, field);
    let report = decomposition(&table, Functor::Hochster, poset.ring().nvars());
    series_from_report(&report, &table, i)
}

/// Binomial coefficient in `u128`; zero when `k > n`.
fn choose(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, t| acc * (n - t) as u128 / (t + 1) as u128)
}

/// Expansion in powers of `t^{-1}`, as pairs `(degree, coefficient)` for
/// degrees `0, -1, ..., -depth`. Uses `(t-1)^{-e} = Σ_{k>=e} C(k-1, e-1) t^{-k}`.
pub fn laurent_expansion(h: &HilbertSeries, depth: usize) -> Vec<(i64, u128)> {
    (0..=depth as u64)
        .map(|k| {
            let c = h
                .0
                .iter()
                .map(|(&e, &c)| {
                    let e = e as u64;
                    let b = match (e, k) {
                        (0, 0) => 1,
                        (0, _) | (_, 0) => 0,
                        _ => choose(k - 1, e - 1),
                    };
                    b * c as u128
                })
                .sum();
            (-(k as i64), c)
        })
        .collect()
}

/// `max { i - d_p : M_{i,p} != 0 }`.
pub fn regularity_from_report(report: &DecompositionReport, table: &IntervalBettiTable) -> Result<i64> {
    report
        .entries
        .iter()
        .map(|e| e.i - table.row(e.element).d as i64)
        .max()
        .ok_or_else(|| Error::Degenerate("every multiplicity vanishes".into()))
}

pub fn regularity(poset: &Poset, field: FieldSpec) -> Result<i64> {
    let table = interval_betti_table(poset, field);
    let report = decomposition(&table, Functor::Hochster, poset.ring().nvars());
    regularity_from_report(&report, &table)
}

/// A component of a characteristic cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleTerm {
    pub element: usize,
    pub ideal: String,
    pub multiplicity: usize,
}

pub type CycleList = Vec<CycleTerm>;

fn require_primes(poset: &Poset) -> Result<()> {
    match poset.component_ideals().into_iter().find(|c| !c.is_prime()) {
        Some(c) => Err(Error::NotPrime(c.to_string())),
        None => Ok(()),
    }
}

/// Conormal cycles `T*_{V(I_p)}` weighted by `m_{r,p}`. Each summand
/// `H^{h_p}_{I_p}(A)` is taken to be a simple D-module, so this needs prime
/// components.
pub fn characteristic_cycle(poset: &Poset, field: FieldSpec, r: i64) -> Result<CycleList> {
    require_primes(poset)?;
    Ok(terai_multiplicities(poset, field)
        .entries
        .into_iter()
        .filter(|e| e.i == r)
        .map(|e| CycleTerm { element: e.element, ideal: e.ideal, multiplicity: e.multiplicity })
        .collect())
}

/// `ℓ_D(H^r_I(A)) = Σ_p m_{r,p}`.
pub fn dmodule_length(poset: &Poset, field: FieldSpec, r: i64) -> Result<usize> {
    Ok(characteristic_cycle(poset, field, r)?.iter().map(|t| t.multiplicity).sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Containment {
    /// The larger ideal, `I_p ⊇ I_q`.
    pub p: usize,
    pub q: usize,
    pub larger: String,
    pub smaller: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesesReport {
    /// Quotients by linear primes and by pure-power ideals are Cohen–Macaulay,
    /// so this is `true` for every element.
    pub cohen_macaulay: Vec<bool>,
    pub containments: Vec<Containment>,
    pub distributivity: DistributivityVerdict,
    pub redundant_components: Vec<usize>,
}

pub fn hypotheses_report(poset: &Poset, max_degree: u32) -> Result<HypothesesReport> {
    let order = poset.order();
    let mut containments = Vec::new();
    for p in 0..poset.len() {
        for q in 0..poset.len() {
            if order.lt(p, q) {
                containments.push(Containment {
                    p,
                    q,
                    larger: poset.element(p).to_string(),
                    smaller: poset.element(q).to_string(),
                });
            }
        }
    }
    Ok(HypothesesReport {
        cohen_macaulay: vec![true; poset.len()],
        containments,
        distributivity: distributivity_check(poset, max_degree)?,
        redundant_components: poset.redundant_components().to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityFlags {
    pub max_degree: u32,
    /// `lim A/I_p ≅ A/I` in every tested degree.
    pub limit_isomorphic: bool,
    pub distributive: bool,
    /// Whether the regularity is that of `A/I` rather than of the limit.
    pub regularity_of_quotient: bool,
    pub redundant_components: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub i: i64,
    pub series: HilbertSeries,
}

/// Everything the `decompose` command reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullReport {
    pub kind: Functor,
    pub field: FieldSpec,
    pub nvars: usize,
    pub entries: Vec<MultiplicityEntry>,
    pub hilbert: Vec<SeriesEntry>,
    pub regularity: Option<i64>,
    pub validity_flags: ValidityFlags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dmodule: Option<DModuleReport>,
}

/// D-module length and characteristic cycle of `H^r_I(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DModuleReport {
    pub r: i64,
    pub length: usize,
    pub cycle: CycleList,
}

pub fn dmodule_report(poset: &Poset, field: FieldSpec, r: i64) -> Result<DModuleReport> {
    let cycle = characteristic_cycle(poset, field, r)?;
    Ok(DModuleReport { r, length: cycle.iter().map(|t| t.multiplicity).sum(), cycle })
}

pub fn full_report(poset: &Poset, field: FieldSpec, kind: Functor, max_degree: u32) -> Result<FullReport> {
    let table = interval_betti_table(poset, field);
    let nvars = poset.ring().nvars();
    let hochster = decomposition(&table, Functor::Hochster, nvars);
    let hilbert = hochster
        .indices()
        .into_iter()
        .map(|i| SeriesEntry { i, series: series_from_report(&hochster, &table, i) })
        .collect();
    let regularity = regularity_from_report(&hochster, &table).ok();
    let limit: LimitReport = limit_check(poset, max_degree)?;
    let entries = match kind {
        Functor::Hochster => hochster.entries,
        Functor::Terai => decomposition(&table, Functor::Terai, nvars).entries,
    };
    Ok(FullReport {
        kind,
        field,
        nvars,
        entries,
        hilbert,
        regularity,
        validity_flags: ValidityFlags {
            max_degree,
            limit_isomorphic: limit.isomorphic_to_degree,
            distributive: limit.distributivity.holds,
            regularity_of_quotient: limit.isomorphic_to_degree,
            redundant_components: poset.redundant_components().to_vec(),
        },
        dmodule: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Matrix;
    use crate::ideals::{AmbientRing, Ideal, LinearIdeal, PurePowerIdeal};

    const Q: FieldSpec = FieldSpec::Rational;

    fn monomial_poset(d: usize, supports: &[&[usize]]) -> Poset {
        let ring = AmbientRing::standard(d, Q);
        Poset::build(
            supports
                .iter()
                .map(|s| Ideal::PurePower(PurePowerIdeal::of_variables(ring.clone(), s).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    fn xyz_lines() -> Poset {
        let ring = AmbientRing::new(vec!["x".into(), "y".into(), "z".into()], Q).unwrap();
        let comp = |rows: &[i64]| {
            Ideal::Linear(LinearIdeal::new(ring.clone(), &Matrix::from_i64(Q, 2, 3, rows)).unwrap())
        };
        Poset::build(vec![comp(&[1, 0, 0, 0, 1, 0]), comp(&[1, 0, 0, 0, 0, 1])]).unwrap()
    }

    fn idx(poset: &Poset, name: &str) -> usize {
        (0..poset.len()).find(|&p| poset.element(p).to_string() == name).unwrap()
    }

    #[test]
    fn triangle_table() {
        let p = monomial_poset(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let t = interval_betti_table(&p, Q);
        for &c in p.components() {
            assert_eq!(t.row(c).betti, BettiVector::from_dims(-1, &[1]));
        }
        let bottom = (0..p.len()).find(|q| !p.components().contains(q)).unwrap();
        assert_eq!(t.row(bottom).betti, BettiVector::from_dims(0, &[2]));
    }

    #[test]
    fn single_element_table() {
        let p = monomial_poset(2, &[&[0]]);
        let t = interval_betti_table(&p, Q);
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.row(0).betti, BettiVector::from_dims(-1, &[1]));
    }

    #[test]
    fn pairs_bottom_interval_is_a_circle() {
        let p = monomial_poset(6, &[&[0, 1], &[2, 3], &[4, 5]]);
        let t = interval_betti_table(&p, Q);
        let bottom = idx(&p, "(x1, x2, x3, x4, x5, x6)");
        assert_eq!(t.row(bottom).betti, BettiVector::from_dims(1, &[1]));
    }

    #[test]
    fn hochster_for_x_yz() {
        let p = xyz_lines();
        let m = hochster_multiplicities(&p, Q);
        let (a, b, c) = (idx(&p, "(x, y)"), idx(&p, "(x, z)"), idx(&p, "(x, y, z)"));
        assert_eq!((m.get(1, a), m.get(1, b), m.get(1, c)), (1, 1, 1));
        assert_eq!(m.entries.iter().map(|e| e.multiplicity).sum::<usize>(), 3);
    }

    #[test]
    fn terai_and_length_for_x_yz() {
        let p = xyz_lines();
        let m = terai_multiplicities(&p, Q);
        let (a, b, c) = (idx(&p, "(x, y)"), idx(&p, "(x, z)"), idx(&p, "(x, y, z)"));
        assert_eq!((m.get(2, a), m.get(2, b), m.get(2, c)), (1, 1, 1));
        assert_eq!(m.entries.len(), 3);
        assert_eq!(dmodule_length(&p, Q, 2).unwrap(), 3);
        let cycle = characteristic_cycle(&p, Q, 2).unwrap();
        let mut names: Vec<&str> = cycle.iter().map(|t| t.ideal.as_str()).collect();
        names.sort_unstable();
        assert_eq!(names, ["(x, y)", "(x, y, z)", "(x, z)"]);
        assert_eq!(dmodule_length(&p, Q, 3).unwrap(), 0);
        assert!(characteristic_cycle(&p, Q, 0).unwrap().is_empty());
    }

    #[test]
    fn single_prime() {
        let p = monomial_poset(4, &[&[0, 1]]);
        let m = hochster_multiplicities(&p, Q);
        assert_eq!(m.entries.len(), 1);
        assert_eq!(m.get(2, 0), 1);
        assert_eq!(terai_multiplicities(&p, Q).get(2, 0), 1);
        assert_eq!(regularity(&p, Q).unwrap(), 0);
        assert_eq!(dmodule_length(&p, Q, 2).unwrap(), 1);
    }

    #[test]
    fn triangle_series_and_regularity() {
        let p = monomial_poset(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let m = hochster_multiplicities(&p, Q);
        for &c in p.components() {
            assert_eq!(m.get(1, c), 1);
        }
        let h = hilbert_series(&p, Q, 1);
        assert_eq!(h, HilbertSeries([(0, 2), (1, 3)].into_iter().collect()));
        assert!(hilbert_series(&p, Q, 0).is_zero());
        assert!(hilbert_series(&p, Q, 2).is_zero());
        assert_eq!(regularity(&p, Q).unwrap(), 1);
        assert_eq!(h.to_string(), "2 + 3*(t-1)^-1");
    }

    #[test]
    fn hyperplane_series() {
        let d = 4;
        let p = monomial_poset(d, &[&[0]]);
        let h = hilbert_series(&p, Q, d as i64 - 1);
        assert_eq!(h, HilbertSeries([(d - 1, 1)].into_iter().collect()));
    }

    #[test]
    fn disjoint_pairs() {
        let p = monomial_poset(4, &[&[0, 1], &[2, 3]]);
        let m = terai_multiplicities(&p, Q);
        let bottom = idx(&p, "(x1, x2, x3, x4)");
        // two isolated points: β̃_0 = 1, h = 4
        assert_eq!(m.get(3, bottom), 1);
        let reg = regularity(&p, Q).unwrap();
        assert!(reg <= 2);
        assert_eq!(reg, 1);
    }

    #[test]
    fn laurent() {
        let one = HilbertSeries([(1, 1)].into_iter().collect());
        assert_eq!(laurent_expansion(&one, 4), vec![(0, 0), (-1, 1), (-2, 1), (-3, 1), (-4, 1)]);
        let two = HilbertSeries([(2, 1)].into_iter().collect());
        let c: Vec<u128> = laurent_expansion(&two, 5).into_iter().map(|x| x.1).collect();
        assert_eq!(c, [0, 0, 1, 2, 3, 4]);
        let constant = HilbertSeries([(0, 7)].into_iter().collect());
        let c: Vec<u128> = laurent_expansion(&constant, 2).into_iter().map(|x| x.1).collect();
        assert_eq!(c, [7, 0, 0]);
        assert!(laurent_expansion(&HilbertSeries::default(), 3).iter().all(|x| x.1 == 0));
    }

    #[test]
    fn non_prime_components_are_refused() {
        let ring = AmbientRing::standard(2, Q);
        let sq = PurePowerIdeal::new(ring.clone(), [(0, 2)].into_iter().collect()).unwrap();
        let p = Poset::build(vec![Ideal::PurePower(sq), Ideal::PurePower(PurePowerIdeal::of_variables(ring, &[1]).unwrap())])
            .unwrap();
        assert!(matches!(dmodule_length(&p, Q, 1), Err(Error::NotPrime(_))));
        // the decomposition itself is still available
        assert!(!hochster_multiplicities(&p, Q).entries.is_empty());
    }

    #[test]
    fn hypotheses() {
        let p = monomial_poset(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let r = hypotheses_report(&p, 3).unwrap();
        assert!(r.distributivity.holds);
        assert_eq!(r.containments.len(), 3);
        assert!(r.redundant_components.is_empty());
        let single = monomial_poset(2, &[&[0]]);
        let r = hypotheses_report(&single, 3).unwrap();
        assert!(r.containments.is_empty() && r.distributivity.holds);
    }

    #[test]
    fn full_report_round_trips() {
        let p = xyz_lines();
        let r = full_report(&p, Q, Functor::Hochster, 3).unwrap();
        assert!(r.validity_flags.limit_isomorphic);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<FullReport>(&s).unwrap(), r);
    }
}
