//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's algorithms beyond graph construction.

#![allow(dead_code)]

use diracgraph::graph::families;
use diracgraph::SimpleGraph;
use itertools::Itertools;
use nalgebra::DMatrix;
use num_rational::Ratio;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = Ratio<i64>;

/// `det(x·I − A)` by Faddeev–LeVerrier, coefficients by ascending power.
pub fn charpoly_faddeev(a: &DMatrix<i64>) -> Vec<i128> {
    let n = a.nrows();
    let a: DMatrix<i128> = a.map(|x| x as i128);
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut m = DMatrix::<i128>::zeros(n, n);
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut next = &a * &m;
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        m = next;
        let am = &a * &m;
        let tr: i128 = (0..n).map(|i| am[(i, i)]).sum();
        assert_eq!(tr % k as i128, 0, "Faddeev–LeVerrier division must be exact");
        coeffs[n - k] = -tr / k as i128;
    }
    coeffs
}

/// Pseudo-determinant and rank of a symmetric integer matrix from its
/// characteristic polynomial.
pub fn pseudo_det_from_charpoly(p: &[i128]) -> (i128, usize) {
    let low = p.iter().position(|&c| c != 0).unwrap();
    let rank = p.len() - 1 - low;
    let sign = if rank % 2 == 0 { 1 } else { -1 };
    (sign * p[low], rank)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Spanning trees by checking every `(n−1)`-subset of edges for acyclicity.
pub fn brute_force_trees(g: &SimpleGraph) -> u128 {
    let n = g.order();
    if n <= 1 {
        return 1;
    }
    let edges = g.edges();
    let mut count = 0;
    for subset in edges.iter().combinations(n - 1) {
        let mut parent: Vec<usize> = (0..n).collect();
        let mut ok = true;
        for &&(a, b) in &subset {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                ok = false;
                break;
            }
            parent[ra] = rb;
        }
        if ok {
            count += 1;
        }
    }
    count
}

/// Complete subgraphs of `g` by size, including the empty one at index 0.
pub fn clique_counts(g: &SimpleGraph) -> Vec<usize> {
    let n = g.order();
    let mut counts = vec![0usize; n + 1];
    for mask in 0u32..(1 << n) {
        let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if vs.iter().tuple_combinations().all(|(&a, &b)| g.is_adjacent(a, b)) {
            counts[vs.len()] += 1;
        }
    }
    while counts.len() > 1 && *counts.last().unwrap() == 0 {
        counts.pop();
    }
    counts
}

/// `χ = Σ_k (−1)^k v_k` over nonempty cliques.
pub fn euler_characteristic(g: &SimpleGraph) -> i64 {
    clique_counts(g).iter().enumerate().skip(1).map(|(s, &c)| if s % 2 == 1 { c as i64 } else { -(c as i64) }).sum()
}

/// `K(x) = Σ_k (−1)^k V_{k−1}(x)/(k+1)`, `V_{k−1}` the `k`-cliques of the unit sphere.
pub fn curvature(g: &SimpleGraph, x: usize) -> Q {
    let sphere = g.induced(g.neighbors(x));
    clique_counts(&sphere)
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let term = Q::new(c as i64, k as i64 + 1);
            if k % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `i_f(x) = 1 − χ(S⁻(x))` where `rank` gives the position of each vertex.
pub fn morse_index(g: &SimpleGraph, rank: &[usize], x: usize) -> i64 {
    let lower: Vec<usize> = g.neighbors(x).iter().copied().filter(|&y| rank[y] < rank[x]).collect();
    1 - euler_characteristic(&g.induced(&lower))
}

/// Average index over all orderings via `itertools` permutations.
pub fn index_expectation(g: &SimpleGraph, x: usize) -> Q {
    let n = g.order();
    let mut total = 0i64;
    let mut count = 0i64;
    for order in (0..n).permutations(n) {
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        total += morse_index(g, &rank, x);
        count += 1;
    }
    Q::new(total, count)
}

pub fn erdos_renyi(n: usize, p: f64, rng: &mut ChaCha8Rng) -> SimpleGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    SimpleGraph::from_edges(n, &edges).unwrap()
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
    SimpleGraph::from_edges(n, edges).unwrap()
}

/// Ten connected graphs on at most six vertices.
pub fn subsuite() -> Vec<(&'static str, SimpleGraph)> {
    vec![
        ("K3", families::complete(3)),
        ("P4", families::path(4)),
        ("C4", families::cycle(4)),
        ("C4+chord", graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])),
        ("K4", families::complete(4)),
        ("star5", families::star(5)),
        ("C5", families::cycle(5)),
        ("house", graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 4)])),
        ("wheel6", graph(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])),
        ("octahedron", families::octahedron()),
    ]
}

/// `|⟨u, v⟩| / (‖u‖·‖v‖)`.
pub fn alignment(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    dot.abs() / (nu * nv)
}

pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}
