//! Clique complexes of simple graphs.
//!
//! Every complete subgraph `K_{k+1}` of the host graph is a `k`-simplex. The
//! complex stores them stratified by dimension, each stratum in lexicographic
//! order of vertex positions, and assigns global indices dimension-major. That
//! global order is the row/column order of every matrix built downstream.

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// A clique, stored as strictly ascending vertex positions. The ascending
/// order is the canonical orientation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// The codimension-1 face with the `i`-th vertex removed.
    pub fn face(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }
}

#[derive(Clone, Debug)]
pub struct CliqueComplex {
    host: SimpleGraph,
    strata: Vec<Vec<Simplex>>,
    offsets: Vec<usize>,
}

/// Enumerates all cliques of `g` up to dimension `max_dim` (unbounded when `None`).
///
/// Stratum `k + 1` is grown from stratum `k` by appending a common neighbour
/// larger than the current maximum vertex, so each clique is produced once.
pub fn build_complex(g: &SimpleGraph, max_dim: Option<usize>) -> CliqueComplex {
    let mut strata: Vec<Vec<Simplex>> = Vec::new();
    if g.order() > 0 {
        strata.push((0..g.order()).map(|i| Simplex(vec![i])).collect());
    }
    while let Some(last) = strata.last() {
        if max_dim.is_some_and(|m| strata.len() > m) {
            break;
        }
        let mut next = Vec::new();
        for s in last {
            let top = *s.0.last().expect("simplices are nonempty");
            for &w in g.neighbors(top).iter().filter(|&&w| w > top) {
                if s.0.iter().all(|&u| g.is_adjacent(u, w)) {
                    let mut v = s.0.clone();
                    v.push(w);
                    next.push(Simplex(v));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        strata.push(next);
    }
    let mut offsets = Vec::with_capacity(strata.len() + 1);
    let mut acc = 0;
    offsets.push(0);
    for s in &strata {
        acc += s.len();
        offsets.push(acc);
    }
    CliqueComplex { host: g.clone(), strata, offsets }
}

impl CliqueComplex {
    pub fn host(&self) -> &SimpleGraph {
        &self.host
    }

    /// Number of nonempty strata; the top dimension is `strata_count() - 1`.
    pub fn strata_count(&self) -> usize {
        self.strata.len()
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.strata.len().checked_sub(1)
    }

    pub fn stratum(&self, k: usize) -> &[Simplex] {
        self.strata.get(k).map_or(&[], Vec::as_slice)
    }

    /// `v_k`, the number of `k`-simplices.
    pub fn count(&self, k: usize) -> usize {
        self.stratum(k).len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    /// Total number of simplices `v`.
    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Global index of the first simplex of stratum `k`.
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k.min(self.strata.len())]
    }

    pub fn global_index(&self, k: usize, rank: usize) -> usize {
        self.offset(k) + rank
    }

    /// Inverse of [`global_index`](Self::global_index): `(dimension, rank)`.
    pub fn locate(&self, index: usize) -> (usize, usize) {
        let k = self.offsets.partition_point(|&o| o <= index) - 1;
        (k, index - self.offsets[k])
    }

    pub fn simplex(&self, index: usize) -> &Simplex {
        let (k, r) = self.locate(index);
        &self.strata[k][r]
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.strata.iter().flatten()
    }

    /// Rank of a vertex set inside its stratum.
    pub fn rank_of(&self, vertices: &[usize]) -> Option<usize> {
        let k = vertices.len().checked_sub(1)?;
        self.strata.get(k)?.binary_search_by(|s| s.0.as_slice().cmp(vertices)).ok()
    }

    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        let r = self.rank_of(vertices)?;
        Some(self.global_index(vertices.len() - 1, r))
    }

    /// Parity `(-1)^dim` of every simplex in global order.
    pub fn parities(&self) -> Vec<i64> {
        self.strata
            .iter()
            .enumerate()
            .flat_map(|(k, s)| std::iter::repeat(if k % 2 == 0 { 1 } else { -1 }).take(s.len()))
            .collect()
    }

    /// Coefficients `(v_0, v_1, ...)` of the clique polynomial `v(x) = Σ v_k x^k`.
    pub fn clique_polynomial(&self) -> Vec<usize> {
        self.counts()
    }

    /// Euler characteristic `v(-1) = Σ (-1)^k v_k`.
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.counts())
    }

    /// Vertex identifiers of a simplex, for display.
    pub fn simplex_ids(&self, index: usize) -> Vec<u32> {
        self.simplex(index).0.iter().map(|&i| self.host.id(i)).collect()
    }

    /// Number of `k`-simplices containing vertex `x`, for `k = 0..`.
    pub fn star_counts(&self, x: usize) -> Vec<usize> {
        self.strata.iter().map(|s| s.iter().filter(|t| t.contains(x)).count()).collect()
    }
}

pub fn alternating_sum(values: &[usize]) -> i64 {
    values
        .iter()
        .enumerate()
        .map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
        .sum()
}

/// Per-simplex sign flips relative to the canonical ascending orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    flips: Vec<i8>,
}

impl Orientation {
    pub fn canonical(c: &CliqueComplex) -> Self {
        Self { flips: vec![1; c.len()] }
    }

    /// Canonical orientation with the simplices at `indices` reversed.
    pub fn with_flips(c: &CliqueComplex, indices: &[usize]) -> Result<Self> {
        let mut o = Self::canonical(c);
        for &i in indices {
            if i >= c.len() {
                return Err(Error::Index { index: i, dim: c.dimension().unwrap_or(0) });
            }
            o.flips[i] = -o.flips[i];
        }
        Ok(o)
    }

    pub fn from_signs(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Argument("orientation signs must be +1 or -1".into()));
        }
        Ok(Self { flips: signs })
    }

    pub fn sign(&self, index: usize) -> i64 {
        self.flips[index] as i64
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }
}

/// The simplex graph: one vertex per simplex (identifier = global index),
/// edges joining each simplex to its codimension-1 faces.
pub fn simplex_graph(c: &CliqueComplex) -> SimpleGraph {
    let mut edges = Vec::new();
    for k in 1..c.strata_count() {
        for (r, s) in c.stratum(k).iter().enumerate() {
            let y = c.global_index(k, r) as u32;
            for i in 0..=k {
                let x = c.index_of(s.face(i).vertices()).expect("complex is face closed");
                edges.push((x as u32, y));
            }
        }
    }
    SimpleGraph::new((0..c.len() as u32).collect(), edges).expect("incidence edges are simple")
}

fn simplex_id_sets(g: &SimpleGraph) -> BTreeSet<Vec<u32>> {
    let c = build_complex(g, None);
    (0..c.len())
        .map(|i| {
            let mut ids = c.simplex_ids(i);
            ids.sort_unstable();
            ids
        })
        .collect()
}

/// Fraction of simplices of the complete graph on the shared vertex set that
/// belong to exactly one of `g`, `h`.
pub fn simplex_distance(g: &SimpleGraph, h: &SimpleGraph) -> Result<Ratio<i64>> {
    let mut a: Vec<u32> = g.ids().to_vec();
    let mut b: Vec<u32> = h.ids().to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Err(Error::Incomparable("vertex sets differ".into()));
    }
    let n = a.len();
    if n == 0 {
        return Ok(Ratio::from_integer(0));
    }
    if n > 62 {
        return Err(Error::Capacity { what: "vertices for simplex distance", size: n, limit: 62 });
    }
    let total = (1i64 << n) - 1;
    let diff = simplex_id_sets(g).symmetric_difference(&simplex_id_sets(h)).count() as i64;
    Ok(Ratio::new(diff, total))
}
