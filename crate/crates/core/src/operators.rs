//! Exterior derivative, Dirac operator `D = d + d*` and the Laplace–Beltrami
//! operator `L = D²`, all assembled in exact integer arithmetic.

use nalgebra::DMatrix;

use crate::complex::{CliqueComplex, Orientation};
use crate::error::{Error, Result};
use crate::linalg::to_f64;

/// Signed incidence matrix `d_k` from `k`-simplices to `(k+1)`-simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorDerivative {
    pub k: usize,
    /// `v_{k+1} × v_k` entries in `{-1, 0, 1}`.
    pub entries: DMatrix<i64>,
}

/// Builds `d_k`. Entry `(y, x)` is `o(y)·o(x)·(-1)^i` when `x` is `y` with its
/// `i`-th vertex removed.
pub fn exterior_derivative(c: &CliqueComplex, o: &Orientation, k: usize) -> Result<ExteriorDerivative> {
    let top = c.dimension().unwrap_or(0);
    if c.is_empty() || k >= top {
        return Err(Error::Degree { k, top });
    }
    let mut m = DMatrix::<i64>::zeros(c.count(k + 1), c.count(k));
    for (r, y) in c.stratum(k + 1).iter().enumerate() {
        let gy = c.global_index(k + 1, r);
        for i in 0..=k + 1 {
            let face = y.face(i);
            let col = c.rank_of(face.vertices()).expect("complex is face closed");
            let gx = c.global_index(k, col);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            m[(r, col)] = o.sign(gy) * o.sign(gx) * sign;
        }
    }
    Ok(ExteriorDerivative { k, entries: m })
}

/// The symmetric `v × v` Dirac matrix in global simplex order.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracMatrix {
    pub entries: DMatrix<i64>,
    counts: Vec<usize>,
}

pub fn dirac(c: &CliqueComplex, o: &Orientation) -> DiracMatrix {
    let v = c.len();
    let mut m = DMatrix::<i64>::zeros(v, v);
    for k in 0..c.strata_count().saturating_sub(1) {
        let d = exterior_derivative(c, o, k).expect("k below top dimension");
        let (row0, col0) = (c.offset(k + 1), c.offset(k));
        for r in 0..d.entries.nrows() {
            for s in 0..d.entries.ncols() {
                let x = d.entries[(r, s)];
                if x != 0 {
                    m[(row0 + r, col0 + s)] = x;
                    m[(col0 + s, row0 + r)] = x;
                }
            }
        }
    }
    DiracMatrix { entries: m, counts: c.counts() }
}

impl DiracMatrix {
    /// Wraps an arbitrary symmetric matrix with a stratum layout.
    pub fn from_parts(entries: DMatrix<i64>, counts: Vec<usize>) -> Result<Self> {
        let v: usize = counts.iter().sum();
        if entries.shape() != (v, v) {
            return Err(Error::Shape(format!("{:?} matrix for {} simplices", entries.shape(), v)));
        }
        if entries != entries.transpose() {
            return Err(Error::Argument("Dirac matrix must be symmetric".into()));
        }
        Ok(Self { entries, counts })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// The exterior derivative `d`, the strictly lower block-triangular part.
    pub fn lower(&self) -> DMatrix<i64> {
        let stratum = self.stratum_of_each();
        DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            if stratum[r] > stratum[c] {
                self.entries[(r, c)]
            } else {
                0
            }
        })
    }

    /// Dimension of the simplex behind each row.
    pub fn stratum_of_each(&self) -> Vec<usize> {
        self.counts.iter().enumerate().flat_map(|(k, &n)| std::iter::repeat(k).take(n)).collect()
    }

    pub fn abs(&self) -> DMatrix<i64> {
        self.entries.map(i64::abs)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        to_f64(&self.entries)
    }

    pub fn parity(&self) -> Parity {
        Parity {
            diagonal: self
                .stratum_of_each()
                .into_iter()
                .map(|k| if k % 2 == 0 { 1 } else { -1 })
                .collect(),
        }
    }
}

/// `L = D²` and its diagonal blocks `L_k`. Block traces satisfy `tr L_0 = 2v_1` and
/// `tr L_p = (p+2)v_{p+1} + (p+1)v_p` for `p ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianBlocks {
    pub full: DMatrix<i64>,
    pub blocks: Vec<DMatrix<i64>>,
    offsets: Vec<usize>,
}

/// Squares `D` and splits the result by stratum. A nonzero entry between two
/// different strata means `d ∘ d ≠ 0` and is reported as a consistency error.
pub fn laplacian(d: &DiracMatrix) -> Result<LaplacianBlocks> {
    let full = &d.entries * &d.entries;
    let stratum = d.stratum_of_each();
    for r in 0..full.nrows() {
        for c in 0..full.ncols() {
            if stratum[r] != stratum[c] && full[(r, c)] != 0 {
                return Err(Error::Consistency(format!(
                    "L has a nonzero entry between strata {} and {}",
                    stratum[r], stratum[c]
                )));
            }
        }
    }
    let mut offsets = vec![0];
    for &n in d.counts() {
        offsets.push(offsets.last().unwrap() + n);
    }
    let blocks = d
        .counts()
        .iter()
        .enumerate()
        .map(|(k, &n)| full.view((offsets[k], offsets[k]), (n, n)).into_owned())
        .collect();
    Ok(LaplacianBlocks { full, blocks, offsets })
}

impl LaplacianBlocks {
    pub fn dim(&self) -> usize {
        self.full.nrows()
    }

    pub fn degree_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, k: usize) -> Option<&DMatrix<i64>> {
        self.blocks.get(k)
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k.min(self.blocks.len())]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        to_f64(&self.full)
    }
}

/// Diagonal parity operator `P`: `+1` on even-dimensional simplices, `-1` on odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parity {
    pub diagonal: Vec<i64>,
}

impl Parity {
    pub fn matrix(&self) -> DMatrix<i64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.diagonal.clone()))
    }
}

/// Number of `(p+1)`-simplices containing the `p`-simplex at global index `x`,
/// read from the diagonal of `L_p`.
pub fn simplex_degree(lb: &LaplacianBlocks, p: usize, x: usize) -> Result<i64> {
    let block = lb.block(p).ok_or(Error::Index { index: x, dim: p })?;
    let start = lb.offset(p);
    if x < start || x >= start + block.nrows() {
        return Err(Error::Index { index: x, dim: p });
    }
    let diag = block[(x - start, x - start)];
    Ok(if p == 0 { diag } else { diag - (p as i64 + 1) })
}

/// `(|D|^k)_{xy}`: the number of length-`k` walks from `x` to `y` in the simplex graph.
pub fn path_count(d: &DiracMatrix, x: usize, y: usize, k: usize) -> Result<u128> {
    let n = d.dim();
    if x >= n || y >= n {
        return Err(Error::Index { index: x.max(y), dim: 0 });
    }
    let abs = d.abs();
    let mut row = vec![0u128; n];
    row[x] = 1;
    for _ in 0..k {
        let mut next = vec![0u128; n];
        for (i, &ri) in row.iter().enumerate().filter(|(_, &r)| r != 0) {
            for (j, slot) in next.iter_mut().enumerate() {
                if abs[(i, j)] != 0 {
                    *slot = slot.checked_add(ri).ok_or(Error::Overflow)?;
                }
            }
        }
        row = next;
    }
    Ok(row[y])
}

/// Dense integer matrix as whitespace-separated rows.
pub fn matrix_to_text(m: &DMatrix<i64>) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| m[(r, c)].to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Dense integer matrix as a JSON array of row arrays.
pub fn matrix_to_json(m: &DMatrix<i64>) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| serde_json::Value::from(m[(r, c)])).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::graph::{families, parse_edge_list};

    fn example() -> CliqueComplex {
        build_complex(&parse_edge_list(crate::fixtures::EXAMPLE_EDGES).unwrap(), None)
    }

    #[test]
    fn single_edge_gradient() {
        let c = build_complex(&families::complete(2), None);
        let d0 = exterior_derivative(&c, &Orientation::canonical(&c), 0).unwrap();
        assert_eq!(d0.entries, DMatrix::from_row_slice(1, 2, &[-1, 1]));
        assert!(exterior_derivative(&c, &Orientation::canonical(&c), 1).is_err());
    }

    #[test]
    fn derivative_rows_have_k_plus_two_entries() {
        let c = build_complex(&families::complete(5), None);
        let o = Orientation::canonical(&c);
        for k in 0..4 {
            let d = exterior_derivative(&c, &o, k).unwrap();
            for r in 0..d.entries.nrows() {
                assert_eq!(d.entries.row(r).iter().filter(|&&x| x != 0).count(), k + 2);
            }
        }
    }

    #[test]
    fn d_squared_vanishes_under_any_orientation() {
        let c = build_complex(&families::complete(5), None);
        let o = Orientation::with_flips(&c, &[0, 6, 12, 20, 27, 30]).unwrap();
        for k in 0..3 {
            let a = exterior_derivative(&c, &o, k).unwrap().entries;
            let b = exterior_derivative(&c, &o, k + 1).unwrap().entries;
            assert_eq!(&b * &a, DMatrix::zeros(b.nrows(), a.ncols()));
        }
    }

    #[test]
    fn single_vertex_dirac_is_zero() {
        let c = build_complex(&families::complete(1), None);
        let d = dirac(&c, &Orientation::canonical(&c));
        assert_eq!(d.entries, DMatrix::zeros(1, 1));
    }

    #[test]
    fn example_laplacian_blocks() {
        let c = example();
        let d = dirac(&c, &Orientation::canonical(&c));
        let lb = laplacian(&d).unwrap();
        assert_eq!(lb.blocks[2], DMatrix::from_row_slice(2, 2, &[3, 1, 1, 3]));
        assert_eq!(lb.counts(), vec![7, 9, 2]);
        let trace = |m: &DMatrix<i64>| m.trace();
        assert_eq!(trace(&lb.blocks[0]), 18);
        assert_eq!(trace(&lb.blocks[1]), 24);
        assert_eq!(trace(&lb.blocks[2]), 6);
    }

    #[test]
    fn cycle_scalar_laplacian_is_circulant() {
        let g = families::cycle(4);
        let c = build_complex(&g, None);
        let lb = laplacian(&dirac(&c, &Orientation::canonical(&c))).unwrap();
        let expected = DMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                2
            } else if g.is_adjacent(i, j) {
                -1
            } else {
                0
            }
        });
        assert_eq!(lb.blocks[0], expected);
    }

    #[test]
    fn orientation_flip_conjugates_laplacian() {
        let c = example();
        let flips = [3, 9, 16];
        let flipped = Orientation::with_flips(&c, &flips).unwrap();
        let a = laplacian(&dirac(&c, &Orientation::canonical(&c))).unwrap();
        let b = laplacian(&dirac(&c, &flipped)).unwrap();
        let s = DMatrix::from_fn(c.len(), c.len(), |i, j| {
            if i != j {
                0
            } else if flips.contains(&i) {
                -1
            } else {
                1
            }
        });
        assert_eq!(b.full, &s * &a.full * &s);
        assert_eq!(a.full.diagonal(), b.full.diagonal());
        assert_eq!(a.full.abs(), b.full.abs());
        // flipping a single triangle changes the sign of the shared-edge entry of L_2
        assert_eq!(b.blocks[2], DMatrix::from_row_slice(2, 2, &[3, -1, -1, 3]));
        // flipping both triangles leaves L_2 alone
        let both = Orientation::with_flips(&c, &[16, 17]).unwrap();
        assert_eq!(laplacian(&dirac(&c, &both)).unwrap().blocks[2], a.blocks[2]);
    }

    #[test]
    fn laplacian_rejects_broken_dirac() {
        // a 2-path whose "Dirac" links vertex 0 to both other vertices
        let m = DMatrix::from_row_slice(3, 3, &[0, 1, 0, 1, 0, 1, 0, 1, 0]);
        let d = DiracMatrix::from_parts(m, vec![1, 1, 1]).unwrap();
        assert!(matches!(laplacian(&d), Err(Error::Consistency(_))));
    }

    #[test]
    fn simplex_degrees() {
        let c = example();
        let lb = laplacian(&dirac(&c, &Orientation::canonical(&c))).unwrap();
        assert_eq!(simplex_degree(&lb, 2, 16).unwrap(), 0);
        assert_eq!(simplex_degree(&lb, 2, 17).unwrap(), 0);
        assert!(simplex_degree(&lb, 2, 3).is_err());

        let c4 = build_complex(&families::cycle(4), None);
        let lb4 = laplacian(&dirac(&c4, &Orientation::canonical(&c4))).unwrap();
        assert!((0..4).all(|x| simplex_degree(&lb4, 0, x).unwrap() == 2));

        let k3 = build_complex(&families::complete(3), None);
        let lb3 = laplacian(&dirac(&k3, &Orientation::canonical(&k3))).unwrap();
        assert!((3..6).all(|x| simplex_degree(&lb3, 1, x).unwrap() == 1));
    }

    #[test]
    fn path_counts() {
        let c = build_complex(&families::complete(2), None);
        let d = dirac(&c, &Orientation::canonical(&c));
        assert_eq!(path_count(&d, 0, 0, 0).unwrap(), 1);
        assert_eq!(path_count(&d, 0, 1, 0).unwrap(), 0);
        assert_eq!(path_count(&d, 0, 0, 2).unwrap(), 1);
        assert_eq!(path_count(&d, 0, 1, 2).unwrap(), 1);
    }

    #[test]
    fn closed_paths_split_evenly_between_parities() {
        let c = example();
        let d = dirac(&c, &Orientation::canonical(&c));
        let parity = d.parity().diagonal;
        for k in 1..=4 {
            let (mut even, mut odd) = (0u128, 0u128);
            for x in 0..d.dim() {
                let n = path_count(&d, x, x, 2 * k).unwrap();
                if parity[x] > 0 {
                    even += n;
                } else {
                    odd += n;
                }
            }
            assert_eq!(even, odd, "k = {k}");
        }
    }

    #[test]
    fn matrix_exports() {
        let m = DMatrix::from_row_slice(2, 2, &[0, -1, -1, 0]);
        assert_eq!(matrix_to_text(&m), "0 -1\n-1 0\n");
        assert_eq!(matrix_to_json(&m).to_string(), "[[0,-1],[-1,0]]");
    }
}
