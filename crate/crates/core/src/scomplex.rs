//! Finite simplicial complexes and their reduced homology over a field.
//!
//! Two degenerate complexes are distinguished: the void complex (no faces)
//! and the empty complex `{∅}`. Both carry the augmentation to the empty
//! face when computing reduced homology, so both have `β̃_{-1} = 1`; this is
//! the convention that makes an empty open interval contribute in degree -1.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, Matrix};
use crate::ideals::Ideal;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    /// Sorted facets, each a sorted vertex list; no facet contains another.
    facets: Vec<Vec<usize>>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

impl SimplicialComplex {
    /// The complex with no faces at all.
    pub fn void() -> Self {
        SimplicialComplex { facets: Vec::new() }
    }

    /// The complex whose only face is `∅`.
    pub fn empty() -> Self {
        SimplicialComplex { facets: vec![Vec::new()] }
    }

    /// Keeps the inclusion-maximal sets among `faces`.
    pub fn from_facets<I: IntoIterator<Item = Vec<usize>>>(faces: I) -> Self {
        let mut sets: Vec<Vec<usize>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        sets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for s in sets {
            if !facets.iter().any(|f| is_subset(&s, f)) {
                facets.push(s);
            }
        }
        facets.sort();
        SimplicialComplex { facets }
    }

    /// Full simplex on `vertices`.
    pub fn simplex(vertices: Vec<usize>) -> Self {
        SimplicialComplex::from_facets([vertices])
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn is_empty_complex(&self) -> bool {
        self.facets.len() == 1 && self.facets[0].is_empty()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.facets.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// `None` for the void complex, `-1` for `{∅}`.
    pub fn dim(&self) -> Option<isize> {
        self.facets.iter().map(|f| f.len() as isize - 1).max()
    }

    pub fn contains_face(&self, sigma: &[usize]) -> bool {
        let mut s = sigma.to_vec();
        s.sort_unstable();
        self.facets.iter().any(|f| is_subset(&s, f))
    }

    /// All faces of dimension `k` (`k = -1` gives `[∅]` unless void), sorted.
    pub fn faces(&self, k: isize) -> Vec<Vec<usize>> {
        if k < -1 {
            return Vec::new();
        }
        let size = (k + 1) as usize;
        let mut out = BTreeSet::new();
        for f in &self.facets {
            if f.len() >= size {
                for combo in combinations(f, size) {
                    out.insert(combo);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Face counts `f_0, f_1, ...` (the empty face is not counted).
    pub fn f_vector(&self) -> Vec<usize> {
        match self.dim() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.faces(k).len()).collect(),
        }
    }

    /// `lk(σ) = {τ : τ ∩ σ = ∅, τ ∪ σ ∈ Δ}`.
    pub fn link(&self, sigma: &[usize]) -> Result<SimplicialComplex> {
        let mut s = sigma.to_vec();
        s.sort_unstable();
        s.dedup();
        if !self.contains_face(&s) {
            return Err(Error::NotAFace(format!("{s:?}")));
        }
        let parts = self
            .facets
            .iter()
            .filter(|f| is_subset(&s, f))
            .map(|f| f.iter().copied().filter(|v| s.binary_search(v).is_err()).collect::<Vec<_>>());
        Ok(SimplicialComplex::from_facets(parts))
    }

    /// Cone with the given apex, which must not be a vertex already.
    pub fn cone(&self, apex: usize) -> SimplicialComplex {
        assert!(!self.vertices().contains(&apex), "apex already a vertex");
        if self.is_void() {
            return SimplicialComplex::void();
        }
        SimplicialComplex::from_facets(self.facets.iter().map(|f| {
            let mut g = f.clone();
            g.push(apex);
            g
        }))
    }
}

fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, size, 0, &mut Vec::with_capacity(size), &mut out);
    out
}

/// Reduced Betti numbers indexed from -1, zero entries omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector(pub BTreeMap<isize, usize>);

impl BettiVector {
    pub fn get(&self, i: isize) -> usize {
        self.0.get(&i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn from_dims(start: isize, dims: &[usize]) -> Self {
        BettiVector(
            dims.iter()
                .enumerate()
                .filter(|(_, &b)| b > 0)
                .map(|(k, &b)| (start + k as isize, b))
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = (isize, usize)> + '_ {
        self.0.iter().map(|(&k, &b)| (k, b))
    }

    /// Highest index with a nonzero entry.
    pub fn top(&self) -> Option<isize> {
        self.0.keys().next_back().copied()
    }
}

/// Augmented boundary `∂_k`: k-faces to (k-1)-faces. `∂_0` maps every vertex
/// to the empty face. Orientation follows sorted vertex order.
pub fn boundary_matrix(c: &SimplicialComplex, k: usize, field: FieldSpec) -> Matrix {
    let cols = c.faces(k as isize);
    let rows = if k == 0 { vec![Vec::new()] } else { c.faces(k as isize - 1) };
    boundary_between(&rows, &cols, field)
}

fn boundary_between(rows: &[Vec<usize>], cols: &[Vec<usize>], field: FieldSpec) -> Matrix {
    let index: BTreeMap<&Vec<usize>, usize> = rows.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut m = Matrix::zeros(field, rows.len(), cols.len());
    for (j, face) in cols.iter().enumerate() {
        for i in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(i);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            m.set(index[&sub], j, field.from_i64(sign));
        }
    }
    m
}

/// `β̃_i = dim H̃_i(c; field)`. Over a field these are also the reduced
/// cohomology dimensions.
pub fn reduced_betti(c: &SimplicialComplex, field: FieldSpec) -> BettiVector {
    let top = c.dim().unwrap_or(-1);
    // faces[k + 1] holds the k-faces, with the empty face always present
    let mut faces: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    for k in 0..=top {
        faces.push(c.faces(k));
    }
    // ranks[k + 1] = rank ∂_k for k = 0..=top
    let mut ranks = vec![0usize; faces.len() + 1];
    for k in 1..faces.len() {
        ranks[k] = boundary_between(&faces[k - 1], &faces[k], field).rank();
    }
    let dims: Vec<usize> = (0..faces.len()).map(|k| faces[k].len() - ranks[k] - ranks[k + 1]).collect();
    BettiVector::from_dims(-1, &dims)
}

/// Stanley–Reisner complex of an intersection of squarefree monomial primes
/// in `d` variables: the facets are the complements of the supports.
pub fn sr_complex(components: &[&Ideal], d: usize) -> Result<SimplicialComplex> {
    let mut facets = Vec::new();
    for c in components {
        let Ideal::PurePower(pp) = c else {
            return Err(Error::NotSquarefree(c.to_string()));
        };
        if !pp.is_squarefree() {
            return Err(Error::NotSquarefree(c.to_string()));
        }
        let support = pp.support();
        facets.push((0..d).filter(|v| !support.contains(v)).collect::<Vec<_>>());
    }
    if facets.is_empty() {
        return Err(Error::Malformed("no components".into()));
    }
    Ok(SimplicialComplex::from_facets(facets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::{AmbientRing, PurePowerIdeal};

    const Q: FieldSpec = FieldSpec::Rational;
    const F2: FieldSpec = FieldSpec::Prime { p: 2 };

    fn hollow_triangle() -> SimplicialComplex {
        SimplicialComplex::from_facets([vec![0, 1], vec![0, 2], vec![1, 2]])
    }

    #[test]
    fn betti_examples() {
        let points = SimplicialComplex::from_facets([vec![0], vec![1], vec![2]]);
        assert_eq!(reduced_betti(&points, Q), BettiVector::from_dims(0, &[2]));
        assert_eq!(reduced_betti(&SimplicialComplex::void(), Q).get(-1), 1);
        assert_eq!(reduced_betti(&SimplicialComplex::empty(), Q), BettiVector::from_dims(-1, &[1]));
        let h = reduced_betti(&hollow_triangle(), Q);
        assert_eq!((h.get(0), h.get(1)), (0, 1));
        assert!(reduced_betti(&SimplicialComplex::simplex(vec![0, 1, 2]), Q).is_zero());
    }

    #[test]
    fn projective_plane_depends_on_characteristic() {
        // six-vertex triangulation of RP^2
        let rp2 = SimplicialComplex::from_facets([
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 2, 4],
            vec![0, 3, 5],
            vec![0, 4, 5],
            vec![1, 2, 5],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![2, 3, 4],
            vec![2, 3, 5],
        ]);
        assert!(reduced_betti(&rp2, Q).is_zero());
        assert_eq!(reduced_betti(&rp2, F2), BettiVector::from_dims(1, &[1, 1]));
    }

    #[test]
    fn boundary_conventions() {
        let edge = SimplicialComplex::simplex(vec![0, 1]);
        assert_eq!(boundary_matrix(&edge, 1, Q), Matrix::from_i64(Q, 2, 1, &[-1, 1]));
        let two = SimplicialComplex::from_facets([vec![0], vec![1]]);
        assert_eq!(boundary_matrix(&two, 0, Q), Matrix::from_i64(Q, 1, 2, &[1, 1]));
        let full = SimplicialComplex::simplex(vec![0, 1, 2]);
        assert_eq!(boundary_matrix(&full, 1, Q).rank(), 2);
        assert_eq!(boundary_matrix(&full, 2, Q).rank(), 1);
        let dd = boundary_matrix(&full, 1, Q).mul(&boundary_matrix(&full, 2, Q)).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn links() {
        let lk = hollow_triangle().link(&[0]).unwrap();
        assert_eq!(lk.facets(), &[vec![1], vec![2]]);
        assert_eq!(hollow_triangle().link(&[]).unwrap(), hollow_triangle());
        let full = SimplicialComplex::simplex(vec![0, 1, 2]);
        assert_eq!(full.link(&[0, 1]).unwrap().facets(), &[vec![2]]);
        assert!(full.link(&[0, 1, 2]).unwrap().is_empty_complex());
        assert!(matches!(hollow_triangle().link(&[0, 1, 2]), Err(Error::NotAFace(_))));
    }

    #[test]
    fn void_and_empty_are_distinct() {
        assert_ne!(SimplicialComplex::void(), SimplicialComplex::empty());
        assert_eq!(SimplicialComplex::void().dim(), None);
        assert_eq!(SimplicialComplex::empty().dim(), Some(-1));
        assert!(SimplicialComplex::void().faces(-1).is_empty());
        assert_eq!(SimplicialComplex::empty().faces(-1), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn stanley_reisner() {
        let ring = AmbientRing::standard(3, Q);
        let comps: Vec<Ideal> = [[0, 1], [0, 2], [1, 2]]
            .iter()
            .map(|s| Ideal::PurePower(PurePowerIdeal::of_variables(ring.clone(), s).unwrap()))
            .collect();
        let refs: Vec<&Ideal> = comps.iter().collect();
        let delta = sr_complex(&refs, 3).unwrap();
        assert_eq!(delta.facets(), &[vec![0], vec![1], vec![2]]);

        let all = Ideal::PurePower(PurePowerIdeal::of_variables(ring.clone(), &[0, 1, 2]).unwrap());
        assert!(sr_complex(&[&all], 3).unwrap().is_empty_complex());

        let r2 = AmbientRing::standard(2, Q);
        let x1 = Ideal::PurePower(PurePowerIdeal::of_variables(r2.clone(), &[0]).unwrap());
        assert_eq!(sr_complex(&[&x1], 2).unwrap().facets(), &[vec![1]]);

        let sq = Ideal::PurePower(PurePowerIdeal::new(r2, [(0, 2)].into_iter().collect()).unwrap());
        assert!(matches!(sr_complex(&[&sq], 2), Err(Error::NotSquarefree(_))));
    }

    #[test]
    fn from_facets_drops_non_maximal() {
        let c = SimplicialComplex::from_facets([vec![1, 0], vec![0], vec![2, 1, 0], vec![3]]);
        assert_eq!(c.facets(), &[vec![0, 1, 2], vec![3]]);
    }
}
