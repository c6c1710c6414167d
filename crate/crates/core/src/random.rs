//! Seedable generators of random test inputs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::poset::Order;
use crate::scomplex::SimplicialComplex;

/// A random partial order on `n` elements: a random DAG compatible with a
/// shuffled linear order, then transitively closed.
pub fn random_order<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Order {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[a], perm[b]));
            }
        }
    }
    Order::from_relations(n, &pairs).expect("acyclic by construction")
}

/// A random nonempty complex on at most `nverts` vertices, given by up to
/// `max_facets` random faces.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, nverts: usize, max_facets: usize) -> SimplicialComplex {
    let count = rng.gen_range(1..=max_facets.max(1));
    SimplicialComplex::from_facets((0..count).map(|_| random_subset(rng, nverts)))
}

fn random_subset<R: Rng + ?Sized>(rng: &mut R, nverts: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..nverts).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Supports of the minimal primes of a random squarefree monomial ideal in
/// `nvars` variables: between 1 and `max_components` nonempty subsets,
/// none containing another.
pub fn random_squarefree_supports<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    max_components: usize,
) -> Vec<Vec<usize>> {
    let target = rng.gen_range(1..=max_components.max(1));
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    for _ in 0..target * 8 {
        if chosen.len() == target {
            break;
        }
        let s = random_subset(rng, nvars);
        let comparable = chosen.iter().any(|c| is_subset(c, &s) || is_subset(&s, c));
        if !comparable {
            chosen.push(s);
        }
    }
    chosen
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}
