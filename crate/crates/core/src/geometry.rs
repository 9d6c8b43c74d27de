//! Local geometry of graphs: unit spheres, curvature, Poincaré–Hopf indices,
//! inductive dimension and greedy homotopy contraction. Everything here is
//! exact rational arithmetic.

use std::collections::HashMap;

use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{build_complex, CliqueComplex};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::hodge::Hodge;
use crate::operators::{dirac, laplacian};
use crate::Orientation;

pub type Rational = Ratio<i64>;

/// Largest vertex count for exact index expectation (all orderings are enumerated).
pub const EXACT_EXPECTATION_LIMIT: usize = 9;

/// Default number of random orderings in Monte Carlo mode.
pub const DEFAULT_SAMPLES: usize = 10_000;

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn check_vertex(g: &SimpleGraph, x: usize) -> Result<()> {
    if x >= g.order() {
        return Err(Error::UnknownVertex(x as u32));
    }
    Ok(())
}

/// Induced subgraph on the neighbours of `x` (position).
pub fn unit_sphere(g: &SimpleGraph, x: usize) -> Result<SimpleGraph> {
    check_vertex(g, x)?;
    Ok(g.induced(g.neighbors(x)))
}

/// Euler characteristic of the clique complex; zero for the empty graph.
pub fn euler_characteristic(g: &SimpleGraph) -> i64 {
    build_complex(g, None).euler_characteristic()
}

/// `K(x) = Σ_{k≥0} (-1)^k V_{k-1}(x)/(k+1)` where `V_{k-1}(x)` counts the
/// `k`-simplices containing `x` (`V_{-1} = 1`).
pub fn curvature(c: &CliqueComplex, x: usize) -> Result<Rational> {
    check_vertex(c.host(), x)?;
    Ok(c.star_counts(x)
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let term = Rational::new(n as i64, k as i64 + 1);
            if k % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum())
}

pub fn curvatures(c: &CliqueComplex) -> Vec<Rational> {
    (0..c.host().order()).map(|x| curvature(c, x).expect("valid vertex")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorseData {
    pub values: Vec<f64>,
    pub indices: Vec<i64>,
    /// Vertices whose lower sphere is not contractible (by greedy reduction) or whose index is nonzero.
    pub critical: Vec<usize>,
}

impl MorseData {
    pub fn index_sum(&self) -> i64 {
        self.indices.iter().sum()
    }
}

fn lower_sphere(g: &SimpleGraph, f: &[f64], x: usize) -> SimpleGraph {
    let lower: Vec<usize> = g.neighbors(x).iter().copied().filter(|&y| f[y] < f[x]).collect();
    g.induced(&lower)
}

fn check_injective(g: &SimpleGraph, f: &[f64]) -> Result<()> {
    if f.len() != g.order() {
        return Err(Error::Shape(format!("{} function values for {} vertices", f.len(), g.order())));
    }
    if f.iter().any(|v| v.is_nan()) {
        return Err(Error::NotInjective);
    }
    let mut sorted = f.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotInjective);
    }
    Ok(())
}

/// Indices `i_f(x) = 1 - χ(S⁻(x))` of an injective vertex function.
pub fn poincare_hopf(g: &SimpleGraph, f: &[f64]) -> Result<MorseData> {
    check_injective(g, f)?;
    let mut indices = Vec::with_capacity(g.order());
    let mut critical = Vec::new();
    for x in 0..g.order() {
        let s = lower_sphere(g, f, x);
        let index = 1 - euler_characteristic(&s);
        if index != 0 || contract(&s).contractible != Contractibility::Contractible {
            critical.push(x);
        }
        indices.push(index);
    }
    Ok(MorseData { values: f.to_vec(), indices, critical })
}

/// A random injective vertex function: a uniformly shuffled ranking `0..n`.
pub fn random_morse_function(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut f = vec![0.0; n];
    for (r, &v) in order.iter().enumerate() {
        f[v] = r as f64;
    }
    f
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExpectationMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Expectation {
    Exact(Rational),
    Estimate { mean: f64, std_error: f64, samples: usize },
}

/// Average of `i_f(x)` over vertex orderings.
///
/// Only the relative order of `f` matters for `S⁻(x)`, so the exact mode
/// averages over all `n!` orderings of the vertices.
pub fn index_expectation(g: &SimpleGraph, x: usize, mode: ExpectationMode) -> Result<Expectation> {
    check_vertex(g, x)?;
    let nbrs = g.neighbors(x).to_vec();
    // i_f(x) depends only on which neighbours precede x
    let mut memo: HashMap<Vec<usize>, i64> = HashMap::new();
    let mut index_of = |before: &[usize]| -> i64 {
        *memo.entry(before.to_vec()).or_insert_with(|| 1 - euler_characteristic(&g.induced(before)))
    };
    let n = g.order();
    match mode {
        ExpectationMode::Exact => {
            if n > EXACT_EXPECTATION_LIMIT {
                return Err(Error::Capacity {
                    what: "vertices for exact index expectation",
                    size: n,
                    limit: EXACT_EXPECTATION_LIMIT,
                });
            }
            let mut total = 0i64;
            let mut count = 0i64;
            for_each_permutation(n, |rank| {
                let before: Vec<usize> =
                    nbrs.iter().copied().filter(|&y| rank[y] < rank[x]).collect();
                total += index_of(&before);
                count += 1;
            });
            Ok(Expectation::Exact(Rational::new(total, count)))
        }
        ExpectationMode::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::Argument("Monte Carlo needs at least 2 samples".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order: Vec<usize> = (0..n).collect();
            let mut rank = vec![0usize; n];
            let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
            for _ in 0..samples {
                order.shuffle(&mut rng);
                for (r, &v) in order.iter().enumerate() {
                    rank[v] = r;
                }
                let before: Vec<usize> =
                    nbrs.iter().copied().filter(|&y| rank[y] < rank[x]).collect();
                let i = index_of(&before) as f64;
                sum += i;
                sum_sq += i * i;
            }
            let m = samples as f64;
            let mean = sum / m;
            let var = ((sum_sq - m * mean * mean) / (m - 1.0)).max(0.0);
            Ok(Expectation::Estimate { mean, std_error: (var / m).sqrt(), samples })
        }
    }
}

/// Calls `visit(rank)` for every permutation of `0..n`, where `rank[v]` is the
/// position of vertex `v` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Inductive dimension `dim(G) = (1/|V|) Σ_x (1 + dim S(x))`, `dim(∅) = -1`.
pub fn dimension(g: &SimpleGraph) -> Rational {
    let all: Vec<usize> = (0..g.order()).collect();
    let mut memo = HashMap::new();
    dimension_of(g, &all, &mut memo)
}

fn dimension_of(g: &SimpleGraph, set: &[usize], memo: &mut HashMap<Vec<usize>, Rational>) -> Rational {
    if set.is_empty() {
        return -Rational::one();
    }
    if let Some(d) = memo.get(set) {
        return *d;
    }
    let mut total = Rational::zero();
    for &x in set {
        let sphere: Vec<usize> = set.iter().copied().filter(|&y| g.is_adjacent(x, y)).collect();
        total += Rational::one() + dimension_of(g, &sphere, memo);
    }
    let d = total / Rational::from_integer(set.len() as i64);
    memo.insert(set.to_vec(), d);
    d
}

/// Whether every unit sphere is geometric of dimension `k - 1` with Euler
/// characteristic `1 + (-1)^(k-1)`. For `k = 1` this means every sphere is
/// exactly two isolated vertices.
pub fn is_geometric(g: &SimpleGraph, k: usize) -> bool {
    if k == 0 || g.order() == 0 {
        return false;
    }
    (0..g.order()).all(|x| {
        let s = g.induced(g.neighbors(x));
        if k == 1 {
            return s.order() == 2 && s.size() == 0;
        }
        let want = if (k - 1) % 2 == 0 { 2 } else { 0 };
        euler_characteristic(&s) == want && is_geometric(&s, k - 1)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Contractibility {
    Contractible,
    NotContractible,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Contraction {
    pub reduced: SimpleGraph,
    /// Identifiers of the removed vertices, in removal order.
    pub steps: Vec<u32>,
    pub contractible: Contractibility,
}

/// Greedy homotopy reduction: repeatedly delete the first vertex whose unit
/// sphere is itself greedily contractible. Success means contractible; on
/// failure non-contractibility is certified only by cohomology (`b_0 > 1` or
/// some `b_k > 0`, `k ≥ 1`), otherwise the answer is `Unknown`.
pub fn contract(g: &SimpleGraph) -> Contraction {
    let mut memo = HashMap::new();
    let mut current = g.clone();
    let mut steps = Vec::new();
    while current.order() > 1 {
        let removable = (0..current.order())
            .find(|&x| greedy_contractible(&current.induced(current.neighbors(x)), &mut memo));
        match removable {
            Some(x) => {
                steps.push(current.id(x));
                current = current.without_vertex(x);
            }
            None => break,
        }
    }
    let contractible = if current.order() == 1 {
        Contractibility::Contractible
    } else if cohomology_obstructs(g) {
        Contractibility::NotContractible
    } else {
        Contractibility::Unknown
    };
    Contraction { reduced: current, steps, contractible }
}

fn greedy_contractible(g: &SimpleGraph, memo: &mut HashMap<Vec<u32>, bool>) -> bool {
    match g.order() {
        0 => return false,
        1 => return true,
        _ => {}
    }
    let key = g.ids().to_vec();
    // identifiers are unique in the ambient graph, so the id set identifies the induced subgraph
    if let Some(&b) = memo.get(&key) {
        return b;
    }
    let result = (0..g.order()).any(|x| {
        greedy_contractible(&g.induced(g.neighbors(x)), memo)
            && greedy_contractible(&g.without_vertex(x), memo)
    });
    memo.insert(key, result);
    result
}

/// Betti numbers of the clique complex of `g`.
pub fn betti_numbers(g: &SimpleGraph) -> Vec<usize> {
    let c = build_complex(g, None);
    if c.is_empty() {
        return Vec::new();
    }
    let d = dirac(&c, &Orientation::canonical(&c));
    let lb = laplacian(&d).expect("d squares to zero");
    Hodge::new(&d, &lb).betti_numbers()
}

fn cohomology_obstructs(g: &SimpleGraph) -> bool {
    let b = betti_numbers(g);
    b.is_empty() || b[0] != 1 || b[1..].iter().any(|&x| x > 0)
}
