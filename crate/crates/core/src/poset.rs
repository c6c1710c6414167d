//! Finite posets: an abstract [`Order`] on `0..n`, and the [`Poset`] of all
//! distinct sums of a list of components ordered by reverse inclusion.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::FieldSpec;
use crate::ideals::{AmbientRing, CanonicalForm, Ideal};
use crate::scomplex::SimplicialComplex;

/// A strict partial order on `0..n`, stored as a dense relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    n: usize,
    less: Vec<bool>,
}

impl Order {
    /// Transitive closure of the given strict relations; rejects cycles.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut less = vec![false; n * n];
        for &(p, q) in pairs {
            if p >= n || q >= n {
                return Err(Error::NoSuchElement(p.max(q)));
            }
            less[p * n + q] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if less[i * n + k] {
                    for j in 0..n {
                        if less[k * n + j] {
                            less[i * n + j] = true;
                        }
                    }
                }
            }
        }
        if (0..n).any(|i| less[i * n + i]) {
            return Err(Error::Malformed("relation has a cycle".into()));
        }
        Ok(Order { n, less })
    }

    pub fn antichain(n: usize) -> Self {
        Order { n, less: vec![false; n * n] }
    }

    /// `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Order::from_relations(n, &pairs).expect("acyclic")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn lt(&self, p: usize, q: usize) -> bool {
        self.less[p * self.n + q]
    }

    pub fn le(&self, p: usize, q: usize) -> bool {
        p == q || self.lt(p, q)
    }

    /// `{p : q < p}`.
    pub fn strictly_above(&self, q: usize) -> Vec<usize> {
        (0..self.n).filter(|&p| self.lt(q, p)).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&p| self.strictly_above(p).is_empty()).collect()
    }

    /// Cover relations `(p, q)`: `p < q` with nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for p in 0..self.n {
            for q in 0..self.n {
                if self.lt(p, q) && !(0..self.n).any(|z| self.lt(p, z) && self.lt(z, q)) {
                    edges.push((p, q));
                }
            }
        }
        edges
    }

    /// Chains `p_0 < ... < p_k` with all entries in `members`, in
    /// lexicographic order of indices.
    pub fn chains_within(&self, members: &[usize], k: usize) -> Vec<Vec<usize>> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k + 1);
        fn extend(order: &Order, members: &[usize], k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k + 1 {
                out.push(cur.clone());
                return;
            }
            for &q in members {
                if cur.last().is_none_or(|&p| order.lt(p, q)) {
                    cur.push(q);
                    extend(order, members, k, cur, out);
                    cur.pop();
                }
            }
        }
        extend(self, &sorted, k, &mut cur, &mut out);
        out
    }

    pub fn chains(&self, k: usize) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.n).collect();
        self.chains_within(&all, k)
    }

    fn longest_chain_from(&self, members: &[usize], p: usize, memo: &mut HashMap<usize, usize>) -> usize {
        if let Some(&v) = memo.get(&p) {
            return v;
        }
        let best = members
            .iter()
            .filter(|&&q| self.lt(p, q))
            .map(|&q| self.longest_chain_from(members, q, memo))
            .max()
            .unwrap_or(0)
            + 1;
        memo.insert(p, best);
        best
    }

    /// Length of the longest chain within `members`, counted in edges;
    /// `-1` when `members` is empty.
    pub fn rank_within(&self, members: &[usize]) -> isize {
        let mut memo = HashMap::new();
        members.iter().map(|&p| self.longest_chain_from(members, p, &mut memo) as isize).max().unwrap_or(0) - 1
    }

    /// Rank of the poset: the longest chain counted in elements, minus one.
    /// Equals the dimension of the order complex.
    pub fn rank(&self) -> isize {
        let all: Vec<usize> = (0..self.n).collect();
        self.rank_within(&all)
    }

    /// `max_p #{q : q >= p} - 1`, the literal upper-set count. Always at
    /// least [`Order::rank`], equal to it when every upper set is a chain.
    pub fn upper_set_bound(&self) -> isize {
        (0..self.n).map(|p| self.strictly_above(p).len() as isize + 1).max().unwrap_or(0) - 1
    }

    /// Order complex of the subposet on `members`: its faces are the chains,
    /// its vertices keep their labels from this order. An empty `members`
    /// yields the complex `{∅}`.
    pub fn order_complex_within(&self, members: &[usize]) -> SimplicialComplex {
        let member_set: BTreeSet<usize> = members.iter().copied().collect();
        let mut facets = Vec::new();
        // maximal chains: start at minimal members, follow covers within members
        let covers_within = |p: usize| -> Vec<usize> {
            member_set
                .iter()
                .copied()
                .filter(|&q| self.lt(p, q) && !member_set.iter().any(|&z| self.lt(p, z) && self.lt(z, q)))
                .collect()
        };
        fn walk(
            p: usize,
            covers: &dyn Fn(usize) -> Vec<usize>,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            cur.push(p);
            let next = covers(p);
            if next.is_empty() {
                out.push(cur.clone());
            }
            for q in next {
                walk(q, covers, cur, out);
            }
            cur.pop();
        }
        for &p in &member_set {
            if !member_set.iter().any(|&z| self.lt(z, p)) {
                walk(p, &covers_within, &mut Vec::new(), &mut facets);
            }
        }
        if facets.is_empty() {
            return SimplicialComplex::empty();
        }
        SimplicialComplex::from_facets(facets)
    }

    pub fn order_complex(&self) -> SimplicialComplex {
        let all: Vec<usize> = (0..self.n).collect();
        self.order_complex_within(&all)
    }

    /// Open interval `(q, 1̂)`: everything strictly above `q`.
    pub fn open_upper_interval(&self, q: usize) -> Result<Interval> {
        if q >= self.n {
            return Err(Error::NoSuchElement(q));
        }
        Ok(Interval { base: q, members: self.strictly_above(q) })
    }
}

/// The open interval `(q, 1̂)` of a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub base: usize,
    pub members: Vec<usize>,
}

impl Interval {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn order_complex(&self, order: &Order) -> SimplicialComplex {
        order.order_complex_within(&self.members)
    }

    pub fn rank(&self, order: &Order) -> isize {
        order.rank_within(&self.members)
    }
}

/// The poset of all distinct sums of the components, ordered by reverse
/// inclusion (`p <= q` iff `I_p ⊇ I_q`). The components are maximal unless
/// one of them contains another.
#[derive(Clone, Debug)]
pub struct Poset {
    ring: Arc<AmbientRing>,
    elements: Vec<Ideal>,
    order: Order,
    components: Vec<usize>,
    redundant: Vec<usize>,
}

impl Poset {
    pub fn build(components: Vec<Ideal>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::Malformed("no components given".into()))?;
        let ring = first.ring().clone();
        for c in &components[1..] {
            // surfaces kind and ambient mismatches
            first.sum(c)?;
        }
        let mut seen = BTreeSet::new();
        let mut dups: Vec<String> = Vec::new();
        for c in &components {
            if !seen.insert(c.clone()) && !dups.contains(&c.to_string()) {
                dups.push(c.to_string());
            }
        }
        if !dups.is_empty() {
            return Err(Error::DuplicateComponents(dups));
        }

        let mut closed: BTreeSet<Ideal> = seen;
        let mut frontier: Vec<Ideal> = closed.iter().cloned().collect();
        while !frontier.is_empty() {
            let snapshot: Vec<Ideal> = closed.iter().cloned().collect();
            let mut next = Vec::new();
            for a in &frontier {
                for b in &snapshot {
                    let s = a.sum(b)?;
                    if !closed.contains(&s) {
                        closed.insert(s.clone());
                        next.push(s);
                    }
                }
            }
            frontier = next;
        }

        let elements: Vec<Ideal> = closed.into_iter().collect();
        let n = elements.len();
        let mut pairs = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if p != q && elements[p].contains(&elements[q])? {
                    pairs.push((p, q));
                }
            }
        }
        let order = Order::from_relations(n, &pairs)?;
        let position = |c: &Ideal| elements.iter().position(|e| e == c).expect("component is an element");
        let component_ids: Vec<usize> = components.iter().map(position).collect();
        let redundant = component_ids
            .iter()
            .copied()
            .filter(|&a| component_ids.iter().any(|&b| b != a && order.lt(a, b)))
            .collect();
        Ok(Poset { ring, elements, order, components: component_ids, redundant })
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Ideal] {
        &self.elements
    }

    pub fn element(&self, p: usize) -> &Ideal {
        &self.elements[p]
    }

    /// Element indices of the input components, in input order.
    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn component_ideals(&self) -> Vec<&Ideal> {
        self.components.iter().map(|&c| &self.elements[c]).collect()
    }

    /// Components containing another component.
    pub fn redundant_components(&self) -> &[usize] {
        &self.redundant
    }

    pub fn index_of(&self, ideal: &Ideal) -> Option<usize> {
        self.elements.iter().position(|e| e == ideal)
    }

    pub fn quotient_dim(&self, p: usize) -> usize {
        self.elements[p].quotient_dim()
    }

    pub fn height(&self, p: usize) -> usize {
        self.elements[p].height()
    }

    pub fn open_upper_interval(&self, q: usize) -> Result<Interval> {
        self.order.open_upper_interval(q)
    }

    pub fn rank(&self) -> isize {
        self.order.rank()
    }

    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        self.order.hasse_edges()
    }

    pub fn order_complex(&self) -> SimplicialComplex {
        self.order.order_complex()
    }

    pub fn is_squarefree_monomial(&self) -> bool {
        self.elements.iter().all(Ideal::is_squarefree_monomial)
    }

    pub fn to_json(&self) -> PosetJson {
        let kind = self.elements[0].kind_name().to_string();
        PosetJson {
            field: self.field(),
            variables: self.ring.var_names().to_vec(),
            kind,
            elements: self
                .elements
                .iter()
                .enumerate()
                .map(|(i, e)| ElementJson {
                    index: i,
                    ideal: e.to_string(),
                    canonical: e.canonical_form(),
                    d: e.quotient_dim(),
                    h: e.height(),
                    component: self.components.contains(&i),
                })
                .collect(),
            covers: self.hasse_edges().into_iter().map(|(p, q)| [p, q]).collect(),
            components: self.components.clone(),
            redundant: self.redundant.clone(),
            rank: self.rank(),
        }
    }
}

/// JSON payload of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub field: FieldSpec,
    pub variables: Vec<String>,
    pub kind: String,
    pub elements: Vec<ElementJson>,
    /// Cover pairs `[p, q]` with `p < q`.
    pub covers: Vec<[usize; 2]>,
    pub components: Vec<usize>,
    pub redundant: Vec<usize>,
    pub rank: isize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub index: usize,
    pub ideal: String,
    pub canonical: CanonicalForm,
    pub d: usize,
    pub h: usize,
    pub component: bool,
}
