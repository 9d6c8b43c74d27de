//! Graph automorphisms acting on the clique complex and its cohomology.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::CliqueComplex;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::hodge::Hodge;

/// Largest graph whose automorphisms are enumerated.
pub const MAX_AUTOMORPHISM_VERTICES: usize = 10;

/// A vertex permutation, stored as the image of each vertex position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphMap {
    image: Vec<usize>,
}

impl GraphMap {
    pub fn identity(n: usize) -> Self {
        Self { image: (0..n).collect() }
    }

    /// Checks that `image` is a permutation preserving adjacency both ways.
    pub fn automorphism(g: &SimpleGraph, image: Vec<usize>) -> Result<Self> {
        let n = g.order();
        if image.len() != n {
            return Err(Error::Shape(format!("map of length {} on {n} vertices", image.len())));
        }
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidGraph("vertex map is not a permutation".into()));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if g.is_adjacent(i, j) != g.is_adjacent(image[i], image[j]) {
                    return Err(Error::InvalidGraph(format!(
                        "map breaks adjacency of vertices {} and {}",
                        g.id(i),
                        g.id(j)
                    )));
                }
            }
        }
        Ok(Self { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GraphMap) -> GraphMap {
        GraphMap { image: other.image.iter().map(|&v| self.image[v]).collect() }
    }

    pub fn inverse(&self) -> GraphMap {
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        GraphMap { image: inv }
    }

    pub fn power(&self, n: usize) -> GraphMap {
        (0..n).fold(GraphMap::identity(self.len()), |acc, _| self.compose(&acc))
    }

    /// Smallest `n ≥ 1` with `selfⁿ = id`.
    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut n = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            n += 1;
        }
        n
    }

    /// Image as vertex ids, one entry per vertex in id order.
    pub fn to_ids(&self, g: &SimpleGraph) -> Vec<u32> {
        self.image.iter().map(|&v| g.id(v)).collect()
    }
}

/// All automorphisms in lexicographic order of their image arrays.
pub fn automorphisms(g: &SimpleGraph) -> Result<Vec<GraphMap>> {
    let n = g.order();
    if n > MAX_AUTOMORPHISM_VERTICES {
        return Err(Error::Capacity { what: "automorphism enumeration", size: n, limit: MAX_AUTOMORPHISM_VERTICES });
    }
    let signature: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&u| g.degree(u)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    let candidates: Vec<Vec<usize>> =
        (0..n).map(|v| (0..n).filter(|&w| signature[w] == signature[v]).collect()).collect();
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(g, &candidates, 0, &mut image, &mut used, &mut out);
    Ok(out)
}

fn extend(
    g: &SimpleGraph,
    candidates: &[Vec<usize>],
    v: usize,
    image: &mut [usize],
    used: &mut [bool],
    out: &mut Vec<GraphMap>,
) {
    if v == image.len() {
        out.push(GraphMap { image: image.to_vec() });
        return;
    }
    for &w in &candidates[v] {
        if used[w] || (0..v).any(|u| g.is_adjacent(u, v) != g.is_adjacent(image[u], w)) {
            continue;
        }
        image[v] = w;
        used[w] = true;
        extend(g, candidates, v + 1, image, used, out);
        used[w] = false;
    }
    image[v] = usize::MAX;
}

/// Signature of the permutation sorting `values` (distinct entries).
fn sorting_sign(values: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] > values[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The image simplex of global index `x` and the sign of `T|x`.
pub fn simplex_image(c: &CliqueComplex, t: &GraphMap, x: usize) -> Result<(usize, i64)> {
    let mapped: Vec<usize> = c.simplex(x).vertices().iter().map(|&v| t.apply(v)).collect();
    let mut sorted = mapped.clone();
    sorted.sort_unstable();
    let y = c
        .index_of(&sorted)
        .ok_or_else(|| Error::InvalidGraph("vertex map does not send cliques to cliques".into()))?;
    Ok((y, sorting_sign(&mapped)))
}

/// Signed permutation matrix of `(T*f)(x) = sign(T|x)·f(T(x))` on `k`-cochains.
pub fn pullback(c: &CliqueComplex, t: &GraphMap, k: usize) -> Result<DMatrix<f64>> {
    if t.len() != c.host().order() {
        return Err(Error::Shape(format!("map of length {} on {} vertices", t.len(), c.host().order())));
    }
    let n = c.count(k);
    let off = c.offset(k);
    let mut p = DMatrix::zeros(n, n);
    for rank in 0..n {
        let (y, s) = simplex_image(c, t, off + rank)?;
        p[(rank, y - off)] = s as f64;
    }
    Ok(p)
}

/// `T_k = Hᵀ·P·H` in the orthonormal harmonic basis `H` of degree `k`.
pub fn induced_cohomology_map(c: &CliqueComplex, h: &Hodge, t: &GraphMap, k: usize) -> Result<DMatrix<f64>> {
    if k >= c.strata_count() {
        return Ok(DMatrix::zeros(0, 0));
    }
    let basis = h.harmonic_matrix(k);
    let p = pullback(c, t, k)?;
    Ok(basis.transpose() * p * basis)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedSimplex {
    pub simplex: Vec<u32>,
    pub dim: usize,
    pub index: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LefschetzReport {
    pub map: Vec<u32>,
    pub traces: Vec<f64>,
    pub lefschetz: i64,
    #[serde(rename = "fixedSimplices")]
    pub fixed: Vec<FixedSimplex>,
    #[serde(rename = "indexSum")]
    pub index_sum: i64,
}

impl LefschetzReport {
    /// `L(T) = Σ i_T(x)`.
    pub fn holds(&self) -> bool {
        self.lefschetz == self.index_sum
    }

    /// Largest distance of a trace from the nearest integer.
    pub fn trace_defect(&self) -> f64 {
        self.traces.iter().map(|t| (t - t.round()).abs()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

/// Traces of the induced maps, the Lefschetz number and the fixed simplices
/// with indices `(−1)^dim·sign(T|x)`.
pub fn lefschetz(c: &CliqueComplex, h: &Hodge, t: &GraphMap) -> Result<LefschetzReport> {
    let mut traces = Vec::with_capacity(c.strata_count());
    let mut alternating = 0.0;
    for k in 0..c.strata_count() {
        let tr = induced_cohomology_map(c, h, t, k)?.trace();
        alternating += if k % 2 == 0 { tr } else { -tr };
        traces.push(tr);
    }
    let mut fixed = Vec::new();
    for x in 0..c.len() {
        let (y, s) = simplex_image(c, t, x)?;
        if y == x {
            let dim = c.simplex(x).dim();
            let index = if dim % 2 == 0 { s } else { -s };
            fixed.push(FixedSimplex { simplex: c.simplex_ids(x), dim, index });
        }
    }
    let index_sum = fixed.iter().map(|f| f.index).sum();
    Ok(LefschetzReport {
        map: t.to_ids(c.host()),
        traces,
        lefschetz: alternating.round() as i64,
        fixed,
        index_sum,
    })
}

/// `exp(Σ_{n ≤ N} L(Tⁿ) zⁿ/n)`, truncated at order `terms`.
pub fn lefschetz_zeta(c: &CliqueComplex, h: &Hodge, t: &GraphMap, z: Complex64, terms: usize) -> Result<Complex64> {
    if terms == 0 {
        return Err(Error::Argument("zeta truncation order must be at least 1".into()));
    }
    if z.norm() >= 1.0 {
        return Err(Error::Argument(format!("zeta series needs |z| < 1, got |z| = {}", z.norm())));
    }
    let period = t.order();
    let mut numbers = Vec::with_capacity(period);
    let mut p = GraphMap::identity(t.len());
    for _ in 0..period {
        p = t.compose(&p);
        numbers.push(lefschetz(c, h, &p)?.lefschetz as f64);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    for n in 1..=terms {
        zn *= z;
        sum += zn * (numbers[(n - 1) % period] / n as f64);
    }
    Ok(sum.exp())
}

/// Automorphism list plus per-map Lefschetz data, and the product of all
/// `ζ_T(z)` when `z` is given.
pub fn lefschetz_report_json(c: &CliqueComplex, h: &Hodge, z: Option<(Complex64, usize)>) -> Result<Value> {
    let g = c.host();
    let maps = automorphisms(g)?;
    let mut reports = Vec::with_capacity(maps.len());
    let mut product = Complex64::new(1.0, 0.0);
    for t in &maps {
        let mut r = lefschetz(c, h, t)?.to_json();
        if let Some((z, terms)) = z {
            let zeta = lefschetz_zeta(c, h, t, z, terms)?;
            product *= zeta;
            r["zeta"] = json!({"re": zeta.re, "im": zeta.im});
        }
        reports.push(r);
    }
    let mut out = json!({
        "vertices": g.ids(),
        "automorphismCount": maps.len(),
        "automorphisms": reports,
    });
    if z.is_some() {
        out["zetaProduct"] = json!({"re": product.re, "im": product.im});
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, Orientation};
    use crate::graph::families;
    use crate::operators::{dirac, laplacian};

    fn hodge(c: &CliqueComplex) -> Hodge {
        let d = dirac(c, &Orientation::canonical(c));
        Hodge::new(&d, &laplacian(&d).unwrap())
    }

    fn reflection5() -> GraphMap {
        // fixes vertex 0, swaps 1↔4 and 2↔3; fixes the edge {2,3}
        GraphMap { image: vec![0, 4, 3, 2, 1] }
    }

    #[test]
    fn group_sizes() {
        assert_eq!(automorphisms(&families::cycle(5)).unwrap().len(), 10);
        assert_eq!(automorphisms(&families::complete(4)).unwrap().len(), 24);
        assert_eq!(automorphisms(&families::path(3)).unwrap().len(), 2);
        assert_eq!(automorphisms(&families::octahedron()).unwrap().len(), 48);
        assert!(matches!(automorphisms(&families::cycle(11)), Err(Error::Capacity { .. })));
    }

    #[test]
    fn enumeration_is_sorted_and_closed() {
        let maps = automorphisms(&families::cycle(6)).unwrap();
        assert!(maps.windows(2).all(|w| w[0] < w[1]));
        assert!(maps[0].is_identity());
        for a in &maps {
            assert!(maps.contains(&a.inverse()));
            for b in &maps {
                assert!(maps.binary_search(&a.compose(b)).is_ok());
            }
        }
    }

    #[test]
    fn rejects_non_automorphisms() {
        let g = families::path(3);
        assert!(GraphMap::automorphism(&g, vec![1, 0, 2]).is_err());
        assert!(GraphMap::automorphism(&g, vec![0, 0, 2]).is_err());
        assert!(GraphMap::automorphism(&g, vec![2, 1, 0]).is_ok());
    }

    #[test]
    fn c5_reflection_and_rotation() {
        let g = families::cycle(5);
        let c = build_complex(&g, None);
        let h = hodge(&c);
        let r = reflection5();
        let t1 = induced_cohomology_map(&c, &h, &r, 1).unwrap();
        assert!((t1[(0, 0)] + 1.0).abs() < 1e-10);
        let rep = lefschetz(&c, &h, &r).unwrap();
        assert_eq!(rep.lefschetz, 2);
        assert_eq!(rep.fixed.len(), 2);
        assert_eq!(rep.fixed[0], FixedSimplex { simplex: vec![0], dim: 0, index: 1 });
        assert_eq!(rep.fixed[1], FixedSimplex { simplex: vec![2, 3], dim: 1, index: 1 });

        let rot = GraphMap { image: vec![1, 2, 3, 4, 0] };
        let t1 = induced_cohomology_map(&c, &h, &rot, 1).unwrap();
        assert!((t1[(0, 0)] - 1.0).abs() < 1e-10);
        let rep = lefschetz(&c, &h, &rot).unwrap();
        assert_eq!(rep.lefschetz, 0);
        assert!(rep.fixed.is_empty());
    }

    #[test]
    fn identity_gives_euler_characteristic() {
        for g in [families::octahedron(), families::cycle(4), families::complete(4), families::star(5)] {
            let c = build_complex(&g, None);
            let h = hodge(&c);
            let rep = lefschetz(&c, &h, &GraphMap::identity(g.order())).unwrap();
            assert_eq!(rep.lefschetz, c.euler_characteristic());
            assert_eq!(rep.fixed.len(), c.len());
            assert!(rep.fixed.iter().all(|f| f.index == if f.dim % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn induced_maps_are_contravariant() {
        let g = families::octahedron();
        let c = build_complex(&g, None);
        let h = hodge(&c);
        let maps = automorphisms(&g).unwrap();
        for (a, b) in [(3, 17), (5, 40), (11, 29)] {
            let (t, s) = (&maps[a], &maps[b]);
            let lhs = induced_cohomology_map(&c, &h, &t.compose(s), 2).unwrap();
            let rhs = induced_cohomology_map(&c, &h, s, 2).unwrap() * induced_cohomology_map(&c, &h, t, 2).unwrap();
            assert!((lhs - rhs).abs().max() < 1e-8);
        }
    }

    #[test]
    fn zeta_series() {
        let k1 = families::complete(1);
        let c = build_complex(&k1, None);
        let h = hodge(&c);
        let z = lefschetz_zeta(&c, &h, &GraphMap::identity(1), Complex64::new(0.5, 0.0), 40).unwrap();
        assert!((z.re - 2.0).abs() < 1e-6 && z.im.abs() < 1e-12);

        let g = families::cycle(5);
        let c = build_complex(&g, None);
        let h = hodge(&c);
        let z = lefschetz_zeta(&c, &h, &reflection5(), Complex64::new(0.3, 0.0), 40).unwrap();
        assert!((z.re - 13.0 / 7.0).abs() < 1e-6);
        let one = lefschetz_zeta(&c, &h, &reflection5(), Complex64::new(0.0, 0.0), 5).unwrap();
        assert_eq!(one, Complex64::new(1.0, 0.0));
        assert!(lefschetz_zeta(&c, &h, &reflection5(), Complex64::new(1.0, 0.0), 5).is_err());
    }
}
