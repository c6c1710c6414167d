//! Hochster's formula over the faces of a Stanley–Reisner complex, computed
//! without the poset: an independent check of the decomposition pipeline on
//! squarefree monomial input.
//!
//! ```text
//! H(H^i_m(K[Δ]); t) = Σ_{σ ∈ Δ} dim H̃^{i-|σ|-1}(lk σ) (t - 1)^{-|σ|}
//! ```

use serde::{Deserialize, Serialize};

use crate::decomp::{
    decomposition, interval_betti_table, laurent_expansion, regularity_from_report, series_from_report, Functor,
    HilbertSeries,
};
use crate::error::{Error, Result};
use crate::exactlin::FieldSpec;
use crate::poset::Poset;
use crate::scomplex::{reduced_betti, sr_complex, BettiVector, SimplicialComplex};

/// `(|σ|, β̃(lk σ))` for every face, the empty face included.
fn link_data(delta: &SimplicialComplex, field: FieldSpec) -> Vec<(usize, BettiVector)> {
    let top = delta.dim().unwrap_or(-1);
    let mut faces: Vec<Vec<usize>> = if delta.is_void() { Vec::new() } else { vec![Vec::new()] };
    for k in 0..=top {
        faces.extend(delta.faces(k));
    }
    faces
        .into_iter()
        .map(|s| {
            let lk = delta.link(&s).expect("face of delta");
            (s.len(), reduced_betti(&lk, field))
        })
        .collect()
}

fn series_from_links(data: &[(usize, BettiVector)], i: i64) -> HilbertSeries {
    let mut h = HilbertSeries::default();
    for (size, betti) in data {
        h.add(*size, betti.get((i - *size as i64 - 1) as isize) as u64);
    }
    h
}

pub fn link_hochster_series(delta: &SimplicialComplex, i: i64, field: FieldSpec) -> HilbertSeries {
    series_from_links(&link_data(delta, field), i)
}

/// `max { i - |σ| : H̃^{i-|σ|-1}(lk σ) != 0 }`, the regularity of `K[Δ]`.
pub fn oracle_regularity(delta: &SimplicialComplex, field: FieldSpec) -> Result<i64> {
    link_data(delta, field)
        .iter()
        .filter_map(|(_, betti)| betti.top())
        .map(|k| k as i64 + 1)
        .max()
        .ok_or_else(|| Error::Degenerate("the void complex has no faces".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub what: String,
    pub i: Option<i64>,
    pub poset_side: String,
    pub oracle_side: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub equal: bool,
    pub depth: usize,
    /// Cohomological indices compared, `0..=d`.
    pub indices: Vec<i64>,
    pub poset_regularity: Option<i64>,
    pub oracle_regularity: Option<i64>,
    pub first_mismatch: Option<Mismatch>,
}

/// Compares the poset-side series and regularity with the link formula for
/// every index `0..=d` and Laurent depth `depth`.
pub fn compare(poset: &Poset, field: FieldSpec, depth: usize) -> Result<OracleVerdict> {
    if let Some(bad) = poset.component_ideals().into_iter().find(|c| !c.is_squarefree_monomial()) {
        return Err(Error::NotSquarefree(bad.to_string()));
    }
    let d = poset.ring().nvars();
    let delta = sr_complex(&poset.component_ideals(), d)?;
    let links = link_data(&delta, field);
    let table = interval_betti_table(poset, field);
    let report = decomposition(&table, Functor::Hochster, d);

    let indices: Vec<i64> = (0..=d as i64).collect();
    let mut first_mismatch = None;
    for &i in &indices {
        let ours = series_from_report(&report, &table, i);
        let theirs = series_from_links(&links, i);
        if ours != theirs {
            first_mismatch = Some(Mismatch {
                what: "series".into(),
                i: Some(i),
                poset_side: ours.to_string(),
                oracle_side: theirs.to_string(),
            });
            break;
        }
        let (a, b) = (laurent_expansion(&ours, depth), laurent_expansion(&theirs, depth));
        if a != b {
            first_mismatch =
                Some(Mismatch { what: "laurent".into(), i: Some(i), poset_side: format!("{a:?}"), oracle_side: format!("{b:?}") });
            break;
        }
    }
    let poset_regularity = regularity_from_report(&report, &table).ok();
    let oracle_reg = oracle_regularity(&delta, field).ok();
    if first_mismatch.is_none() && poset_regularity != oracle_reg {
        first_mismatch = Some(Mismatch {
            what: "regularity".into(),
            i: None,
            poset_side: format!("{poset_regularity:?}"),
            oracle_side: format!("{oracle_reg:?}"),
        });
    }
    Ok(OracleVerdict {
        equal: first_mismatch.is_none(),
        depth,
        indices,
        poset_regularity,
        oracle_regularity: oracle_reg,
        first_mismatch,
    })
}
