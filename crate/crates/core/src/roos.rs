//! Roos complexes of finite-dimensional inverse and direct systems over a
//! finite poset, computed one graded piece at a time.
//!
//! For an inverse system `G` the cochain complex has `Roos^k = Π G(p_0)` over
//! chains `p_0 < ... < p_k`, and on the factor of a `(k+1)`-chain
//!
//! ```text
//! (d^k x)_{p_0..p_{k+1}} = G(p_0 -> p_1) x_{p_1..p_{k+1}} + Σ_{l>=1} (-1)^l x_{p_0..^p_l..p_{k+1}}
//! ```
//!
//! whose cohomology is `R^i lim`. The homological complex of a direct system
//! is dual and computes `L_i colim`. Spots above the rank of the poset are
//! empty because there are no longer chains.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, Matrix};
use crate::ideals::{intersect_degree_pieces, intersection_quotient_dim, Ideal, Subspace};
use crate::poset::{Order, Poset};
use crate::scomplex::BettiVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Maps go `V(q) -> V(p)` for `p <= q`.
    Inverse,
    /// Maps go `V(p) -> V(q)` for `p <= q`.
    Direct,
}

impl Direction {
    fn name(self) -> &'static str {
        match self {
            Direction::Inverse => "inverse",
            Direction::Direct => "direct",
        }
    }
}

/// One graded piece of a system of vector spaces over a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorSystem {
    order: Order,
    direction: Direction,
    field: FieldSpec,
    dims: Vec<usize>,
    /// Structural maps for every strict relation `p < q`, keyed `(p, q)`.
    maps: BTreeMap<(usize, usize), Matrix>,
}

impl VectorSystem {
    /// Validates shapes and functoriality.
    pub fn new(
        order: Order,
        direction: Direction,
        field: FieldSpec,
        dims: Vec<usize>,
        maps: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Self> {
        if dims.len() != order.len() {
            return Err(Error::Malformed(format!("{} dimensions for {} elements", dims.len(), order.len())));
        }
        let n = order.len();
        for p in 0..n {
            for q in 0..n {
                if !order.lt(p, q) {
                    continue;
                }
                let m = maps.get(&(p, q)).ok_or_else(|| Error::Malformed(format!("missing map for {p} < {q}")))?;
                let (rows, cols) = match direction {
                    Direction::Inverse => (dims[p], dims[q]),
                    Direction::Direct => (dims[q], dims[p]),
                };
                if (m.rows(), m.cols()) != (rows, cols) || m.field() != field {
                    return Err(Error::Malformed(format!("map for {p} < {q} has the wrong shape or field")));
                }
            }
        }
        let sys = VectorSystem { order, direction, field, dims, maps };
        sys.check_functorial()?;
        Ok(sys)
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Structural map for `p <= q` (identity when `p == q`).
    pub fn map(&self, p: usize, q: usize) -> Matrix {
        if p == q {
            return Matrix::identity(self.field, self.dims[p]);
        }
        self.maps[&(p, q)].clone()
    }

    fn check_functorial(&self) -> Result<()> {
        let n = self.order.len();
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    if !(self.order.lt(p, q) && self.order.lt(q, r)) {
                        continue;
                    }
                    let composed = match self.direction {
                        Direction::Inverse => self.maps[&(p, q)].mul(&self.maps[&(q, r)])?,
                        Direction::Direct => self.maps[&(q, r)].mul(&self.maps[&(p, q)])?,
                    };
                    if composed != self.maps[&(p, r)] {
                        return Err(Error::Malformed(format!("maps fail to compose along {p} < {q} < {r}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `n`-dimensional space at every element, identities along relations.
pub fn constant_system(order: &Order, n: usize, direction: Direction, field: FieldSpec) -> VectorSystem {
    let mut maps = BTreeMap::new();
    for p in 0..order.len() {
        for q in 0..order.len() {
            if order.lt(p, q) {
                maps.insert((p, q), Matrix::identity(field, n));
            }
        }
    }
    VectorSystem::new(order.clone(), direction, field, vec![n; order.len()], maps).expect("constant system")
}

/// Direct system with value `K^n` at `q` and zero elsewhere.
pub fn skyscraper_system(order: &Order, q: usize, n: usize, field: FieldSpec) -> Result<VectorSystem> {
    if q >= order.len() {
        return Err(Error::NoSuchElement(q));
    }
    let dims: Vec<usize> = (0..order.len()).map(|p| if p == q { n } else { 0 }).collect();
    let mut maps = BTreeMap::new();
    for a in 0..order.len() {
        for b in 0..order.len() {
            if order.lt(a, b) {
                maps.insert((a, b), Matrix::zeros(field, dims[b], dims[a]));
            }
        }
    }
    VectorSystem::new(order.clone(), Direction::Direct, field, dims, maps)
}

/// The inverse system `p -> (A/I_p)_j` for `j = 0..=jmax`, one piece per
/// degree.
pub fn quotient_system(poset: &Poset, jmax: u32) -> Result<Vec<VectorSystem>> {
    (0..=jmax).map(|j| quotient_system_at(poset, j)).collect()
}

pub fn quotient_system_at(poset: &Poset, j: u32) -> Result<VectorSystem> {
    let order = poset.order();
    let dims: Vec<usize> = poset.elements().iter().map(|e| e.quotient_degree_dim(j)).collect();
    let mut maps = BTreeMap::new();
    for p in 0..order.len() {
        for q in 0..order.len() {
            if order.lt(p, q) {
                // I_q ⊆ I_p, so A/I_q surjects onto A/I_p
                maps.insert((p, q), Ideal::projection_matrix(poset.element(q), poset.element(p), j)?);
            }
        }
    }
    VectorSystem::new(order.clone(), Direction::Inverse, poset.field(), dims, maps)
}

/// Spot `k`: one summand per chain, of dimension `V(p_0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoosSpot {
    pub chains: Vec<Vec<usize>>,
    pub summand_dims: Vec<usize>,
}

impl RoosSpot {
    pub fn dim(&self) -> usize {
        self.summand_dims.iter().sum()
    }

    fn offsets(&self) -> HashMap<&[usize], usize> {
        let mut acc = 0;
        let mut out = HashMap::new();
        for (c, &d) in self.chains.iter().zip(&self.summand_dims) {
            out.insert(c.as_slice(), acc);
            acc += d;
        }
        out
    }
}

/// A Roos (co)chain complex of one graded piece. For the cochain complex
/// `differentials[k]` is `d^k : Roos^k -> Roos^{k+1}`; for the chain complex
/// it is `d_{k+1} : Roos_{k+1} -> Roos_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoosComplexInstance {
    pub direction: Direction,
    pub spots: Vec<RoosSpot>,
    pub differentials: Vec<Matrix>,
}

impl RoosComplexInstance {
    /// `dim H^k` (cochain) or `dim H_k` (chain) for every spot.
    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(Matrix::rank).collect();
        (0..self.spots.len())
            .map(|k| {
                let out = ranks.get(k).copied().unwrap_or(0);
                let inc = if k == 0 { 0 } else { ranks[k - 1] };
                self.spots[k].dim() - out - inc
            })
            .collect()
    }

    /// `true` iff every composite of consecutive differentials vanishes.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| {
            let composite = match self.direction {
                Direction::Inverse => w[1].mul(&w[0]),
                Direction::Direct => w[0].mul(&w[1]),
            };
            composite.map(|m| m.is_zero()).unwrap_or(false)
        })
    }
}

fn spots_of(order: &Order, dims: &[usize]) -> Vec<RoosSpot> {
    let mut spots = Vec::new();
    for k in 0.. {
        let chains = order.chains(k);
        if chains.is_empty() {
            break;
        }
        let summand_dims = chains.iter().map(|c| dims[c[0]]).collect();
        spots.push(RoosSpot { chains, summand_dims });
    }
    spots
}

/// Cohomological Roos complex of an inverse system.
pub fn roos_cochain(v: &VectorSystem) -> Result<RoosComplexInstance> {
    if v.direction != Direction::Inverse {
        return Err(Error::DirectionMismatch { expected: "inverse", found: v.direction.name() });
    }
    let spots = spots_of(&v.order, &v.dims);
    let mut differentials = Vec::new();
    for k in 0..spots.len().saturating_sub(1) {
        let (src, dst) = (&spots[k], &spots[k + 1]);
        let src_off = src.offsets();
        let mut d = Matrix::zeros(v.field, dst.dim(), src.dim());
        let mut row = 0;
        for (chain, &rd) in dst.chains.iter().zip(&dst.summand_dims) {
            if rd > 0 {
                let tail = &chain[1..];
                let block = v.map(chain[0], chain[1]);
                d.add_block(row, src_off[tail], &block);
                for l in 1..chain.len() {
                    let mut face = chain.clone();
                    face.remove(l);
                    let sign = if l % 2 == 0 { 1 } else { -1 };
                    let id = Matrix::identity(v.field, rd).scale(&v.field.from_i64(sign));
                    d.add_block(row, src_off[face.as_slice()], &id);
                }
            }
            row += rd;
        }
        differentials.push(d);
    }
    Ok(RoosComplexInstance { direction: Direction::Inverse, spots, differentials })
}

/// Homological Roos complex of a direct system.
pub fn roos_chain(v: &VectorSystem) -> Result<RoosComplexInstance> {
    if v.direction != Direction::Direct {
        return Err(Error::DirectionMismatch { expected: "direct", found: v.direction.name() });
    }
    let spots = spots_of(&v.order, &v.dims);
    let mut differentials = Vec::new();
    for k in 1..spots.len() {
        let (src, dst) = (&spots[k], &spots[k - 1]);
        let dst_off = dst.offsets();
        let mut d = Matrix::zeros(v.field, dst.dim(), src.dim());
        let mut col = 0;
        for (chain, &cd) in src.chains.iter().zip(&src.summand_dims) {
            if cd > 0 {
                let tail = &chain[1..];
                d.add_block(dst_off[tail], col, &v.map(chain[0], chain[1]));
                for l in 1..chain.len() {
                    let mut face = chain.clone();
                    face.remove(l);
                    let sign = if l % 2 == 0 { 1 } else { -1 };
                    let id = Matrix::identity(v.field, cd).scale(&v.field.from_i64(sign));
                    d.add_block(dst_off[face.as_slice()], col, &id);
                }
            }
            col += cd;
        }
        differentials.push(d);
    }
    Ok(RoosComplexInstance { direction: Direction::Direct, spots, differentials })
}

/// `[dim R^i lim]` for `i = 0..=rank(P)`.
pub fn derived_lim_dims(v: &VectorSystem) -> Result<Vec<usize>> {
    let mut dims = roos_cochain(v)?.homology_dims();
    dims.resize((v.order.rank() + 1).max(1) as usize, 0);
    Ok(dims)
}

/// `[dim L_i colim]` for `i = 0..=rank(P)`.
pub fn derived_colim_dims(v: &VectorSystem) -> Result<Vec<usize>> {
    let mut dims = roos_chain(v)?.homology_dims();
    dims.resize((v.order.rank() + 1).max(1) as usize, 0);
    Ok(dims)
}

/// Reduced cohomology of the order complex from the Roos complex of the
/// constant system `K`, coaugmented by the diagonal `K -> Roos^0`.
pub fn reduced_cohomology_via_roos(order: &Order, field: FieldSpec) -> BettiVector {
    let sys = constant_system(order, 1, Direction::Inverse, field);
    let roos = roos_cochain(&sys).expect("inverse system");
    let n0 = roos.spots.first().map_or(0, RoosSpot::dim);
    let coaug = Matrix::from_i64(field, n0, 1, &vec![1; n0]);
    let mut ranks = vec![coaug.rank()];
    ranks.extend(roos.differentials.iter().map(Matrix::rank));
    // position 0 is the coaugmentation spot K in degree -1
    let mut spot_dims = vec![1];
    spot_dims.extend(roos.spots.iter().map(RoosSpot::dim));
    let dims: Vec<usize> = (0..spot_dims.len())
        .map(|k| {
            let out = ranks.get(k).copied().unwrap_or(0);
            let inc = if k == 0 { 0 } else { ranks[k - 1] };
            spot_dims[k] - out - inc
        })
        .collect();
    BettiVector::from_dims(-1, &dims)
}

/// One row of the degree table of [`limit_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub j: u32,
    pub dim_quotient: usize,
    pub dim_lim: usize,
    pub defect: usize,
    /// `[dim R^1 lim, dim R^2 lim, ...]` up to the rank of the poset.
    pub higher: Vec<usize>,
}

/// A triple `(p, q, r)` with `((I_p + I_q) ∩ I_r)_j ≠ (I_p ∩ I_r)_j + (I_q ∩ I_r)_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributivityWitness {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub ideals: [String; 3],
    pub degree: u32,
    /// `dim ((I_p + I_q) ∩ I_r)_j`.
    pub lhs_dim: usize,
    /// `dim ((I_p ∩ I_r) + (I_q ∩ I_r))_j`.
    pub rhs_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributivityVerdict {
    pub holds: bool,
    pub max_degree: u32,
    pub witness: Option<DistributivityWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitReport {
    pub max_degree: u32,
    pub degrees: Vec<DegreeRow>,
    /// No defect and no higher derived limits in any tested degree.
    pub isomorphic_to_degree: bool,
    pub distributivity: DistributivityVerdict,
}

/// Degree-wise distributivity test over all triples of poset elements. The
/// components come first, in input order, so that the earliest witness is
/// phrased in terms of the components when possible.
pub fn distributivity_check(poset: &Poset, max_degree: u32) -> Result<DistributivityVerdict> {
    let mut candidates: Vec<usize> = poset.components().to_vec();
    candidates.extend((0..poset.len()).filter(|p| !poset.components().contains(p)));
    for j in 0..=max_degree {
        let mut pieces: HashMap<usize, Subspace> = HashMap::new();
        let mut piece = |p: usize| pieces.entry(p).or_insert_with(|| poset.element(p).degree_piece(j)).clone();
        for (a_pos, &a) in candidates.iter().enumerate() {
            for &b in &candidates[a_pos + 1..] {
                let sum = poset.element(a).sum(poset.element(b))?;
                let sum_idx = poset.index_of(&sum).expect("sum-closed");
                for &r in &candidates {
                    if r == a || r == b {
                        continue;
                    }
                    let (ia, ib, ir) = (poset.element(a), poset.element(b), poset.element(r));
                    let lhs = piece(sum_idx).intersect(&piece(r));
                    let rhs = intersect_degree_pieces(&[ia, ir], j)?.sum(&intersect_degree_pieces(&[ib, ir], j)?);
                    if lhs.dim() != rhs.dim() {
                        return Ok(DistributivityVerdict {
                            holds: false,
                            max_degree,
                            witness: Some(DistributivityWitness {
                                p: a,
                                q: b,
                                r,
                                ideals: [ia.to_string(), ib.to_string(), ir.to_string()],
                                degree: j,
                                lhs_dim: lhs.dim(),
                                rhs_dim: rhs.dim(),
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(DistributivityVerdict { holds: true, max_degree, witness: None })
}

/// Compares `A/I` with `lim A/I_p` degree by degree up to `max_degree`.
pub fn limit_check(poset: &Poset, max_degree: u32) -> Result<LimitReport> {
    let comps = poset.component_ideals();
    let mut degrees = Vec::new();
    for j in 0..=max_degree {
        let dim_quotient = intersection_quotient_dim(&comps, j)?;
        let dims = derived_lim_dims(&quotient_system_at(poset, j)?)?;
        let dim_lim = dims[0];
        // A/I embeds into the limit
        debug_assert!(dim_lim >= dim_quotient);
        degrees.push(DegreeRow {
            j,
            dim_quotient,
            dim_lim,
            defect: dim_lim.saturating_sub(dim_quotient),
            higher: dims[1..].to_vec(),
        });
    }
    let isomorphic_to_degree = degrees.iter().all(|r| r.defect == 0 && r.higher.iter().all(|&h| h == 0));
    Ok(LimitReport { max_degree, degrees, isomorphic_to_degree, distributivity: distributivity_check(poset, max_degree)? })
}
