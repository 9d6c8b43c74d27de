//! Floating-point helpers around symmetric eigendecomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Default relative kernel threshold.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-9;

pub fn to_f64(m: &DMatrix<i64>) -> DMatrix<f64> {
    m.map(|x| x as f64)
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted ascending
/// and eigenvectors as the matching columns.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl SymEigen {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        if n == 0 {
            return Self { values: Vec::new(), vectors: DMatrix::zeros(0, 0) };
        }
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Self { values, vectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Absolute cutoff below which `|λ|` counts as zero: `tol·max(1, max|λ|)`.
    pub fn threshold(&self, tol: f64) -> f64 {
        tol * self.values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self, i: usize, tol: f64) -> bool {
        self.values[i].abs() < self.threshold(tol)
    }

    pub fn kernel_dim(&self, tol: f64) -> usize {
        (0..self.dim()).filter(|&i| self.is_zero(i, tol)).count()
    }

    /// Orthonormal basis of the kernel as matrix columns.
    pub fn kernel_basis(&self, tol: f64) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = (0..self.dim())
            .filter(|&i| self.is_zero(i, tol))
            .map(|i| self.vectors.column(i).into_owned())
            .collect();
        if cols.is_empty() {
            DMatrix::zeros(self.dim(), 0)
        } else {
            DMatrix::from_columns(&cols)
        }
    }

    /// `V · diag(f(λ)) · Vᵀ`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let n = self.dim();
        let scaled = DMatrix::from_fn(n, n, |r, c| self.vectors[(r, c)] * f(self.values[c]));
        &scaled * self.vectors.transpose()
    }

    /// Product of eigenvalues whose magnitude exceeds the kernel threshold.
    pub fn pseudo_det(&self, tol: f64) -> f64 {
        (0..self.dim()).filter(|&i| !self.is_zero(i, tol)).map(|i| self.values[i]).product()
    }

    pub fn nonzero_values(&self, tol: f64) -> Vec<f64> {
        (0..self.dim()).filter(|&i| !self.is_zero(i, tol)).map(|i| self.values[i]).collect()
    }
}

/// Maximum absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, &x| a.max(x.abs()))
}
