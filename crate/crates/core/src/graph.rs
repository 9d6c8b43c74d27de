//! Finite simple graphs and the edge-list text format.
//!
//! Vertices carry user-facing `u32` identifiers but every algorithm in the
//! crate works with vertex *positions* `0..n`. The position order is fixed at
//! construction and is the order used for canonical simplex orientation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    ids: Vec<u32>,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Builds a graph from an ordered vertex list and edges given by identifier.
    pub fn new(vertices: Vec<u32>, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut pos = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if pos.insert(v, i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex {v}")));
            }
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            let i = *pos.get(&a).ok_or(Error::UnknownVertex(a))?;
            let j = *pos.get(&b).ok_or(Error::UnknownVertex(b))?;
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::InvalidGraph(format!("duplicate edge {a}-{b}")));
            }
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { ids: vertices, adj })
    }

    /// Graph on positions `0..n` with identifiers equal to the positions.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            (0..n as u32).collect(),
            edges.iter().map(|&(a, b)| (a as u32, b as u32)),
        )
    }

    pub fn empty() -> Self {
        Self { ids: Vec::new(), adj: Vec::new() }
    }

    pub fn order(&self) -> usize {
        self.ids.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> u32 {
        self.ids[i]
    }

    pub fn position(&self, id: u32) -> Result<usize> {
        self.ids.iter().position(|&v| v == id).ok_or(Error::UnknownVertex(id))
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    /// Edges as position pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for (i, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    /// Induced subgraph on the given positions, keeping identifiers and the
    /// relative order of `keep` (which must be ascending and duplicate free).
    pub fn induced(&self, keep: &[usize]) -> SimpleGraph {
        let mut map = vec![usize::MAX; self.order()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let adj = keep
            .iter()
            .map(|&old| {
                self.adj[old].iter().filter_map(|&j| (map[j] != usize::MAX).then_some(map[j])).collect()
            })
            .collect();
        SimpleGraph { ids: keep.iter().map(|&i| self.ids[i]).collect(), adj }
    }

    pub fn without_vertex(&self, i: usize) -> SimpleGraph {
        let keep: Vec<usize> = (0..self.order()).filter(|&j| j != i).collect();
        self.induced(&keep)
    }

    /// Breadth-first distances from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.order()];
        let mut count = 0;
        for s in 0..self.order() {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.order() > 0 && self.component_count() == 1
    }

    /// Renders the graph in the edge-list format accepted by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{} {}", self.ids[i], self.ids[j]);
        }
        for i in (0..self.order()).filter(|&i| self.adj[i].is_empty()) {
            let _ = writeln!(out, "{}", self.ids[i]);
        }
        out
    }
}

/// Parses the edge-list format: one edge `u v` per line, a lone `v` declares an
/// isolated vertex, blank lines and `#` comments are skipped. Vertices are
/// ordered by ascending identifier.
pub fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
    let mut vertices = BTreeSet::new();
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse = |tok: &str| {
            tok.parse::<u32>().map_err(|_| Error::Parse {
                line,
                message: format!("expected a nonnegative integer vertex id, found `{tok}`"),
            })
        };
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.as_slice() {
            [v] => {
                vertices.insert(parse(v)?);
            }
            [a, b] => {
                let (a, b) = (parse(a)?, parse(b)?);
                if a == b {
                    return Err(Error::Parse { line, message: format!("self-loop at vertex {a}") });
                }
                if !seen.insert((a.min(b), a.max(b))) {
                    return Err(Error::Parse { line, message: format!("duplicate edge {a} {b}") });
                }
                vertices.insert(a);
                vertices.insert(b);
                edges.push((a, b));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `u v` or `v`, found {} fields", tokens.len()),
                })
            }
        }
    }
    SimpleGraph::new(vertices.into_iter().collect(), edges)
}

/// Standard graph families used across tests and examples. Identifiers are `0..n`.
pub mod families {
    use super::SimpleGraph;

    fn build(n: usize, edges: Vec<(usize, usize)>) -> SimpleGraph {
        SimpleGraph::from_edges(n, &edges).expect("family edges are valid")
    }

    pub fn complete(n: usize) -> SimpleGraph {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        build(n, edges)
    }

    pub fn cycle(n: usize) -> SimpleGraph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        build(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn path(n: usize) -> SimpleGraph {
        build(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    /// Star with one hub (vertex 0) and `n - 1` leaves.
    pub fn star(n: usize) -> SimpleGraph {
        build(n, (1..n).map(|i| (0, i)).collect())
    }

    pub fn octahedron() -> SimpleGraph {
        let edges = (0..6)
            .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
            // antipodal pairs (i, i + 3) are the only non-edges
            .filter(|&(i, j)| j != i + 3)
            .collect();
        build(6, edges)
    }

    pub fn icosahedron() -> SimpleGraph {
        // top 0, upper ring 1..=5, lower ring 6..=10, bottom 11
        let mut edges = Vec::new();
        for i in 0..5 {
            let up = 1 + i;
            let up_next = 1 + (i + 1) % 5;
            let lo = 6 + i;
            let lo_next = 6 + (i + 1) % 5;
            edges.push((0, up));
            edges.push((up, up_next));
            edges.push((up, lo));
            edges.push((up_next, lo));
            edges.push((lo, lo_next));
            edges.push((lo, 11));
        }
        build(12, edges)
    }

    /// Truncated cube: 24 vertices, 8 triangles joined by the cube's 12 edges.
    pub fn truncated_cube() -> SimpleGraph {
        // corner c has triangle vertices 3c, 3c+1, 3c+2; slot a points along axis a.
        let mut edges = Vec::new();
        for c in 0..8usize {
            let t = 3 * c;
            edges.extend([(t, t + 1), (t + 1, t + 2), (t, t + 2)]);
            for axis in 0..3 {
                let other = c ^ (1 << axis);
                if other > c {
                    edges.push((t + axis, 3 * other + axis));
                }
            }
        }
        build(24, edges)
    }
}
