//! Spectral invariants: pseudo-determinants, matrix-tree counts, the
//! Cauchy–Binet minor expansion, the Dirac zeta function, analytic torsion,
//! the Lidskii spectral distance and magnitude.

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::complex::{build_complex, CliqueComplex, Orientation};
use crate::error::{Error, Result};
use crate::exact;
use crate::graph::{families, SimpleGraph};
use crate::linalg::{SymEigen, DEFAULT_KERNEL_TOL};
use crate::operators::{dirac, DiracMatrix, LaplacianBlocks};

/// Product of the eigenvalues of a symmetric matrix lying outside the kernel
/// threshold. The empty product is 1.
pub fn pseudo_det(m: &DMatrix<f64>) -> f64 {
    SymEigen::new(m).pseudo_det(DEFAULT_KERNEL_TOL)
}

fn count_trees_of_laplacian(l0: &DMatrix<i64>, n: usize) -> Result<u128> {
    // exact pseudo-determinant avoids float rounding for large counts
    let (pdet, rank) = exact::pseudo_det_symmetric(l0)?;
    if rank + 1 != n {
        return Err(Error::Disconnected);
    }
    Ok((pdet / n as i128) as u128)
}

fn scalar_laplacian(g: &SimpleGraph) -> DMatrix<i64> {
    DMatrix::from_fn(g.order(), g.order(), |i, j| {
        if i == j {
            g.degree(i) as i64
        } else if g.is_adjacent(i, j) {
            -1
        } else {
            0
        }
    })
}

/// Number of spanning trees, `Det(L_0)/n`.
pub fn kirchhoff_trees(g: &SimpleGraph) -> Result<u128> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    count_trees_of_laplacian(&scalar_laplacian(g), g.order())
}

/// Spanning trees of the simplex graph, `Det(B - |D|)/v` with `B` the
/// simplex-graph degree matrix.
pub fn simplex_graph_trees(c: &CliqueComplex) -> Result<u128> {
    let d = dirac(c, &Orientation::canonical(c));
    let abs = d.abs();
    let v = c.len();
    let m = DMatrix::from_fn(v, v, |i, j| {
        if i == j {
            abs.row(i).sum()
        } else {
            -abs[(i, j)]
        }
    });
    if v == 0 {
        return Err(Error::Disconnected);
    }
    count_trees_of_laplacian(&m, v)
}

fn submatrix(m: &DMatrix<i64>, rows: &[usize], cols: &[usize]) -> DMatrix<i64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// `Σ_P det(F_P)·det(G_P)` over all `k × k` row/column selections `P`.
///
/// This equals the `k`-th elementary symmetric function of the eigenvalues of
/// `FᵀG`, i.e. `(-1)^k` times the coefficient of `x^{m-k}` in `det(x·I − FᵀG)`.
/// Minor enumeration is combinatorial; keep `n, m ≤ 6`.
pub fn cauchy_binet_coeffs(f: &DMatrix<i64>, g: &DMatrix<i64>, k: usize) -> Result<i128> {
    if f.shape() != g.shape() {
        return Err(Error::Shape(format!("F is {:?} but G is {:?}", f.shape(), g.shape())));
    }
    let (n, m) = f.shape();
    if k > n.min(m) {
        return Err(Error::Shape(format!("k = {k} exceeds min({n}, {m})")));
    }
    let mut total = 0i128;
    for rows in (0..n).combinations(k) {
        for cols in (0..m).combinations(k) {
            let a = exact::det(&submatrix(f, &rows, &cols))?;
            if a == 0 {
                continue;
            }
            let b = exact::det(&submatrix(g, &rows, &cols))?;
            total = a.checked_mul(b).and_then(|p| total.checked_add(p)).ok_or(Error::Overflow)?;
        }
    }
    Ok(total)
}

/// `Σ_P det²(A_P)` over all `k × k` minors, the right side of the Pythagoras
/// identity `Det²(A) = Σ_P det²(A_P)` at `k = rank(A)`.
pub fn minor_square_sum(a: &DMatrix<i64>, k: usize) -> Result<i128> {
    cauchy_binet_coeffs(a, a, k)
}

/// Branch used for `λ^{-s}`: principal logarithm, so a negative eigenvalue
/// contributes `e^{-iπs}|λ|^{-s}`. Paired with `+|λ|` it yields the factor
/// `(1 + e^{-iπs})`, which makes `ζ(-n) = tr(Dⁿ)` and vanishes at odd `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaBranch {
    Principal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaEvaluation {
    pub s: Complex64,
    pub value: Complex64,
    pub branch: ZetaBranch,
}

fn power_neg_s(lambda: f64, s: Complex64) -> Complex64 {
    let log = Complex64::new(lambda.abs().ln(), if lambda < 0.0 { std::f64::consts::PI } else { 0.0 });
    (-s * log).exp()
}

/// `ζ(s) = Σ_{λ≠0} λ^{-s}` over the eigenvalues of a symmetric matrix.
pub fn zeta_of_spectrum(values: &[f64], s: Complex64) -> Complex64 {
    values.iter().map(|&l| power_neg_s(l, s)).sum()
}

pub fn dirac_zeta(d: &DiracMatrix, s: Complex64) -> ZetaEvaluation {
    let e = SymEigen::new(&d.to_f64());
    let value = zeta_of_spectrum(&e.nonzero_values(DEFAULT_KERNEL_TOL), s);
    ZetaEvaluation { s, value, branch: ZetaBranch::Principal }
}

/// `ζ'(s)` of the Dirac spectrum in closed form, `-Σ log(λ)·λ^{-s}`.
pub fn dirac_zeta_derivative(d: &DiracMatrix, s: Complex64) -> Complex64 {
    let e = SymEigen::new(&d.to_f64());
    e.nonzero_values(DEFAULT_KERNEL_TOL)
        .iter()
        .map(|&l| {
            let log = Complex64::new(l.abs().ln(), if l < 0.0 { std::f64::consts::PI } else { 0.0 });
            -log * power_neg_s(l, s)
        })
        .sum()
}

/// `η(s) = Σ_p (-1)^p ζ_p(s)` with `ζ_p` the zeta function of `L_p`.
pub fn eta(lb: &LaplacianBlocks, s: Complex64) -> Complex64 {
    lb.blocks
        .iter()
        .enumerate()
        .map(|(p, block)| {
            let e = SymEigen::new(&crate::linalg::to_f64(block));
            let z = zeta_of_spectrum(&e.nonzero_values(DEFAULT_KERNEL_TOL), s);
            if p % 2 == 0 {
                z
            } else {
                -z
            }
        })
        .sum()
}

/// Ratio of the products of nonzero eigenvalues over even and odd strata.
/// Computed through logarithms to avoid overflow on larger complexes.
pub fn analytic_torsion(lb: &LaplacianBlocks) -> f64 {
    let log_sum: f64 = lb
        .blocks
        .iter()
        .enumerate()
        .map(|(p, block)| {
            let e = SymEigen::new(&crate::linalg::to_f64(block));
            let s: f64 = e.nonzero_values(DEFAULT_KERNEL_TOL).iter().map(|l| l.ln()).sum();
            if p % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .sum();
    log_sum.exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralDistanceReport {
    /// `(1/n) Σ |α_j − β_j|` over sorted eigenvalues.
    pub distance: f64,
    /// `(1/n) Σ_{ij} |A − B|_{ij}`.
    pub bound: f64,
}

pub fn spectral_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<SpectralDistanceReport> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::Shape(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(SpectralDistanceReport { distance: 0.0, bound: 0.0 });
    }
    let ea = SymEigen::new(a);
    let eb = SymEigen::new(b);
    let distance =
        ea.values.iter().zip(&eb.values).map(|(x, y)| (x - y).abs()).sum::<f64>() / n as f64;
    let bound = (a - b).iter().map(|x| x.abs()).sum::<f64>() / n as f64;
    Ok(SpectralDistanceReport { distance, bound })
}

/// The Dirac matrix of `g` placed inside the simplex indexing of the complete
/// graph on the same vertices; simplices absent from `g` get zero rows and columns.
pub fn aligned_dirac(g: &SimpleGraph) -> DMatrix<i64> {
    let full = build_complex(&families::complete(g.order()), None);
    let own = build_complex(g, None);
    let d = dirac(&own, &Orientation::canonical(&own));
    let map: Vec<usize> = (0..own.len())
        .map(|i| full.index_of(own.simplex(i).vertices()).expect("cliques of g are cliques of K_n"))
        .collect();
    let mut out = DMatrix::zeros(full.len(), full.len());
    for i in 0..own.len() {
        for j in 0..own.len() {
            out[(map[i], map[j])] = d.entries[(i, j)];
        }
    }
    out
}

/// Maximum number of nonzero entries in any column of the given matrices.
pub fn max_column_support(matrices: &[&DMatrix<i64>]) -> usize {
    matrices
        .iter()
        .flat_map(|m| m.column_iter().map(|c| c.iter().filter(|&&x| x != 0).count()))
        .max()
        .unwrap_or(0)
}

/// Magnitude `Σ_{ij} (Z⁻¹)_{ij}` with `Z_{ij} = e^{-dist(i,j)}`.
pub fn magnitude(g: &SimpleGraph) -> Result<f64> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.order();
    let mut z = DMatrix::zeros(n, n);
    for i in 0..n {
        for (j, d) in g.bfs_distances(i).into_iter().enumerate() {
            z[(i, j)] = (-(d.ok_or(Error::Disconnected)? as f64)).exp();
        }
    }
    let sv = z.singular_values();
    let (max, min) = sv.iter().fold((0.0f64, f64::INFINITY), |(a, b), &s| (a.max(s), b.min(s)));
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !condition.is_finite() || condition > 1e12 {
        return Err(Error::Singular { condition });
    }
    let inv = z.try_inverse().ok_or(Error::Singular { condition })?;
    Ok(inv.sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::operators::laplacian;

    fn example_dirac() -> DiracMatrix {
        let c = build_complex(&parse_edge_list(crate::fixtures::EXAMPLE_EDGES).unwrap(), None);
        dirac(&c, &Orientation::canonical(&c))
    }

    fn lb_of(g: &SimpleGraph) -> LaplacianBlocks {
        let c = build_complex(g, None);
        laplacian(&dirac(&c, &Orientation::canonical(&c))).unwrap()
    }

    /// Counts spanning trees by testing every (n-1)-edge subset for acyclicity.
    fn brute_force_trees(g: &SimpleGraph) -> u128 {
        let edges = g.edges();
        let n = g.order();
        edges
            .iter()
            .combinations(n - 1)
            .filter(|subset| {
                let mut parent: Vec<usize> = (0..n).collect();
                fn find(p: &mut [usize], x: usize) -> usize {
                    if p[x] != x {
                        let r = find(p, p[x]);
                        p[x] = r;
                    }
                    p[x]
                }
                subset.iter().all(|&&(a, b)| {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                    ra != rb
                })
            })
            .count() as u128
    }

    #[test]
    fn pseudo_determinants() {
        assert!((pseudo_det(&example_dirac().to_f64()) - 1624.0).abs() < 1624.0 * 1e-6);
        assert_eq!(pseudo_det(&DMatrix::zeros(3, 3)), 1.0);
        let l0 = crate::linalg::to_f64(&lb_of(&families::cycle(3)).blocks[0]);
        assert!((pseudo_det(&l0) - 9.0).abs() < 1e-9);
    }

    #[test]
    fn spanning_tree_counts() {
        assert_eq!(kirchhoff_trees(&families::cycle(3)).unwrap(), 3);
        assert_eq!(kirchhoff_trees(&families::complete(4)).unwrap(), 16);
        assert_eq!(kirchhoff_trees(&families::path(6)).unwrap(), 1);
        assert_eq!(kirchhoff_trees(&families::star(5)).unwrap(), 1);
        let g = parse_edge_list(crate::fixtures::EXAMPLE_EDGES).unwrap();
        assert_eq!(kirchhoff_trees(&g).unwrap(), brute_force_trees(&g));
        let two = SimpleGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(kirchhoff_trees(&two), Err(Error::Disconnected));
    }

    #[test]
    fn simplex_graph_spanning_trees() {
        use crate::complex::simplex_graph;
        let k2 = build_complex(&families::complete(2), None);
        assert_eq!(simplex_graph_trees(&k2).unwrap(), 1);
        let c4 = build_complex(&families::cycle(4), None);
        assert_eq!(simplex_graph_trees(&c4).unwrap(), 8);
        let k3 = build_complex(&families::complete(3), None);
        let brute = brute_force_trees(&simplex_graph(&k3));
        assert_eq!(simplex_graph_trees(&k3).unwrap(), brute);
        assert_eq!(brute, 50);
    }

    #[test]
    fn cauchy_binet_small_cases() {
        let i2 = DMatrix::<i64>::identity(2, 2);
        assert_eq!(cauchy_binet_coeffs(&i2, &i2, 2).unwrap(), 1);
        assert_eq!(cauchy_binet_coeffs(&i2, &i2, 0).unwrap(), 1);
        let ones = DMatrix::<i64>::from_element(2, 2, 1);
        assert_eq!(minor_square_sum(&ones, 1).unwrap(), 4);
        assert!(cauchy_binet_coeffs(&i2, &DMatrix::identity(3, 2), 1).is_err());
        assert!(cauchy_binet_coeffs(&i2, &i2, 3).is_err());
    }

    #[test]
    fn cauchy_binet_matches_characteristic_polynomial() {
        let f = DMatrix::from_row_slice(3, 2, &[1, -2, 3, 0, -1, 2]);
        let g = DMatrix::from_row_slice(3, 2, &[2, 1, -1, 3, 0, -2]);
        let p = exact::charpoly(&(f.transpose() * &g)).unwrap();
        for k in 0..=2 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(cauchy_binet_coeffs(&f, &g, k).unwrap(), sign * p[2 - k]);
        }
    }

    #[test]
    fn zeta_values_on_example() {
        let d = example_dirac();
        let z2 = dirac_zeta(&d, Complex64::new(-2.0, 0.0)).value;
        assert!((z2.re - 48.0).abs() < 1e-8 && z2.im.abs() < 1e-8);
        let z1 = dirac_zeta(&d, Complex64::new(-1.0, 0.0)).value;
        assert!(z1.norm() < 1e-8);
        let z3 = dirac_zeta(&d, Complex64::new(-3.0, 0.0)).value;
        assert!(z3.norm() < 1e-8);
        let z4 = dirac_zeta(&d, Complex64::new(-4.0, 0.0)).value;
        let l = d.to_f64() * d.to_f64();
        assert!((z4.re - (&l * &l).trace()).abs() < 1e-7);
    }

    #[test]
    fn regularised_determinant_from_zeta_derivative() {
        let d = example_dirac();
        let h = 1e-5;
        let fd = (dirac_zeta(&d, Complex64::new(h, 0.0)).value
            - dirac_zeta(&d, Complex64::new(-h, 0.0)).value)
            / (2.0 * h);
        let det = (-fd).exp();
        assert!((det.re - 1624.0).abs() < 1624.0 * 1e-4);
        assert!(det.im.abs() < 1624.0 * 1e-4);
        let exact = (-dirac_zeta_derivative(&d, Complex64::new(0.0, 0.0))).exp();
        assert!((exact.re - 1624.0).abs() < 1e-6);
    }

    #[test]
    fn eta_vanishes() {
        for g in [parse_edge_list(crate::fixtures::EXAMPLE_EDGES).unwrap(), families::complete(5)] {
            let lb = lb_of(&g);
            for s in [1.0, 2.0] {
                assert!(eta(&lb, Complex64::new(s, 0.0)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn torsion_is_one() {
        for g in [
            parse_edge_list(crate::fixtures::EXAMPLE_EDGES).unwrap(),
            families::cycle(4),
            families::complete(5),
        ] {
            assert!((analytic_torsion(&lb_of(&g)) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn spectral_distance_trivial_cases() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let r = spectral_distance(&a, &a).unwrap();
        assert_eq!((r.distance, r.bound), (0.0, 0.0));
        let eps = 0.25;
        let b = &a + DMatrix::identity(2, 2) * eps;
        let r = spectral_distance(&a, &b).unwrap();
        assert!((r.distance - eps).abs() < 1e-12 && (r.bound - eps).abs() < 1e-12);
        assert!(spectral_distance(&a, &DMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn aligned_dirac_embeds_into_complete_indexing() {
        let c4 = families::cycle(4);
        let a = aligned_dirac(&c4);
        assert_eq!(a.shape(), (15, 15));
        assert_eq!(a.iter().filter(|&&x| x != 0).count(), 16);
        assert_eq!(aligned_dirac(&families::complete(4)), {
            let c = build_complex(&families::complete(4), None);
            dirac(&c, &Orientation::canonical(&c)).entries
        });
    }

    #[test]
    fn magnitudes() {
        assert!((magnitude(&families::complete(1)).unwrap() - 1.0).abs() < 1e-12);
        let e = (-1.0f64).exp();
        for n in 2..7 {
            let expect = n as f64 / (1.0 + (n as f64 - 1.0) * e);
            assert!((magnitude(&families::complete(n)).unwrap() - expect).abs() < 1e-10);
        }
        assert!(magnitude(&families::star(5)).unwrap() > magnitude(&families::complete(5)).unwrap());
        let two = SimpleGraph::from_edges(2, &[]).unwrap();
        assert_eq!(magnitude(&two), Err(Error::Disconnected));
    }
}
