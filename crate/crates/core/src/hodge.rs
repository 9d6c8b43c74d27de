//! Hodge theory on the clique complex: Betti numbers as kernel dimensions of
//! the blocks `L_k`, harmonic representatives, the orthogonal Hodge splitting
//! and the heat kernel.

use nalgebra::{DMatrix, DVector};
use serde_json::json;

use crate::complex::CliqueComplex;
use crate::error::{Error, Result};
use crate::linalg::{to_f64, SymEigen, DEFAULT_KERNEL_TOL};
use crate::operators::{DiracMatrix, LaplacianBlocks, Parity};

/// A real function on the `k`-simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    pub degree: usize,
    pub values: DVector<f64>,
}

impl Cochain {
    pub fn new(degree: usize, values: DVector<f64>) -> Self {
        Self { degree, values }
    }

    pub fn zeros(degree: usize, len: usize) -> Self {
        Self { degree, values: DVector::zeros(len) }
    }

    pub fn norm(&self) -> f64 {
        self.values.norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub kernel_dim: usize,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HodgeDecomposition {
    pub exact: Cochain,
    pub coexact: Cochain,
    pub harmonic: Cochain,
}

/// Per-degree eigendecompositions and incidence blocks, computed once and
/// reused by every Hodge-theoretic query.
#[derive(Clone, Debug)]
pub struct Hodge {
    /// `d_k` as floats, `v_{k+1} × v_k`; one entry per degree (the top one has zero rows).
    derivatives: Vec<DMatrix<f64>>,
    eigen: Vec<SymEigen>,
    laplacians: Vec<DMatrix<f64>>,
    tol: f64,
}

impl Hodge {
    pub fn new(d: &DiracMatrix, lb: &LaplacianBlocks) -> Self {
        Self::with_tolerance(d, lb, DEFAULT_KERNEL_TOL)
    }

    pub fn with_tolerance(d: &DiracMatrix, lb: &LaplacianBlocks, tol: f64) -> Self {
        let counts = d.counts().to_vec();
        let mut offsets = vec![0];
        for &n in &counts {
            offsets.push(offsets.last().unwrap() + n);
        }
        let full = d.to_f64();
        let derivatives = (0..counts.len())
            .map(|k| {
                let rows = counts.get(k + 1).copied().unwrap_or(0);
                if rows == 0 {
                    DMatrix::zeros(0, counts[k])
                } else {
                    full.view((offsets[k + 1], offsets[k]), (rows, counts[k])).into_owned()
                }
            })
            .collect();
        let laplacians: Vec<DMatrix<f64>> = lb.blocks.iter().map(to_f64).collect();
        let eigen = laplacians.iter().map(SymEigen::new).collect();
        Self { derivatives, eigen, laplacians, tol }
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn degree_count(&self) -> usize {
        self.eigen.len()
    }

    pub fn derivative(&self, k: usize) -> Option<&DMatrix<f64>> {
        self.derivatives.get(k)
    }

    pub fn laplacian_block(&self, k: usize) -> Option<&DMatrix<f64>> {
        self.laplacians.get(k)
    }

    pub fn eigen(&self, k: usize) -> Option<&SymEigen> {
        self.eigen.get(k)
    }

    /// `b_k = dim ker L_k`; zero beyond the top dimension.
    pub fn betti(&self, k: usize) -> usize {
        self.eigen.get(k).map_or(0, |e| e.kernel_dim(self.tol))
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..self.degree_count()).map(|k| self.betti(k)).collect()
    }

    pub fn spectral_summary(&self, k: usize) -> SpectralSummary {
        match self.eigen.get(k) {
            Some(e) => SpectralSummary {
                eigenvalues: e.values.clone(),
                kernel_dim: e.kernel_dim(self.tol),
                tolerance: self.tol,
            },
            None => SpectralSummary { eigenvalues: Vec::new(), kernel_dim: 0, tolerance: self.tol },
        }
    }

    /// Orthonormal basis of the harmonic `k`-forms, as matrix columns.
    pub fn harmonic_matrix(&self, k: usize) -> DMatrix<f64> {
        self.eigen.get(k).map_or_else(|| DMatrix::zeros(0, 0), |e| e.kernel_basis(self.tol))
    }

    pub fn harmonic_basis(&self, k: usize) -> Vec<Cochain> {
        let m = self.harmonic_matrix(k);
        m.column_iter().map(|c| Cochain::new(k, c.into_owned())).collect()
    }

    /// Orthogonal projection onto `ker L_k`.
    pub fn harmonic_projection(&self, f: &Cochain) -> Result<Cochain> {
        self.check(f)?;
        let h = self.harmonic_matrix(f.degree);
        Ok(Cochain::new(f.degree, &h * (h.transpose() * &f.values)))
    }

    fn check(&self, f: &Cochain) -> Result<()> {
        let Some(e) = self.eigen.get(f.degree) else {
            return Err(Error::Degree { k: f.degree, top: self.degree_count().saturating_sub(1) });
        };
        if e.dim() != f.values.len() {
            return Err(Error::Shape(format!(
                "{}-cochain of length {} (expected {})",
                f.degree,
                f.values.len(),
                e.dim()
            )));
        }
        Ok(())
    }

    /// Applies `d_k`. The top degree maps to the empty vector.
    pub fn apply_d(&self, f: &Cochain) -> Result<Cochain> {
        self.check(f)?;
        Ok(Cochain::new(f.degree + 1, &self.derivatives[f.degree] * &f.values))
    }

    /// Applies `d*_{k-1}`, mapping `k`-cochains to `(k-1)`-cochains.
    pub fn apply_codiff(&self, f: &Cochain) -> Result<Cochain> {
        self.check(f)?;
        if f.degree == 0 {
            return Ok(Cochain::zeros(0, 0));
        }
        Ok(Cochain::new(f.degree - 1, self.derivatives[f.degree - 1].transpose() * &f.values))
    }

    /// Splits `f = du + d*v + h` into mutually orthogonal parts.
    pub fn decompose(&self, f: &Cochain) -> Result<HodgeDecomposition> {
        self.check(f)?;
        let k = f.degree;
        let n = f.values.len();
        let project_range = |a: &DMatrix<f64>| -> DVector<f64> {
            // projection onto the column space of `a` via the eigenvectors of a·aᵀ
            if a.ncols() == 0 || a.nrows() == 0 {
                return DVector::zeros(n);
            }
            let e = SymEigen::new(&(a * a.transpose()));
            let thr = e.threshold(self.tol);
            let mut out = DVector::zeros(n);
            for i in (0..e.dim()).filter(|&i| e.values[i].abs() >= thr) {
                let v = e.vectors.column(i);
                out += v * v.dot(&f.values);
            }
            out
        };
        let exact = if k == 0 { DVector::zeros(n) } else { project_range(&self.derivatives[k - 1]) };
        let coexact = project_range(&self.derivatives[k].transpose());
        let harmonic = self.harmonic_projection(f)?.values;
        Ok(HodgeDecomposition {
            exact: Cochain::new(k, exact),
            coexact: Cochain::new(k, coexact),
            harmonic: Cochain::new(k, harmonic),
        })
    }

    /// `e^{-tL}` as a full block-diagonal `v × v` matrix.
    pub fn heat_kernel(&self, t: f64) -> Result<DMatrix<f64>> {
        if t < 0.0 {
            return Err(Error::Argument(format!("heat kernel needs t >= 0, got {t}")));
        }
        Ok(self.block_function(|l| (-t * l).exp()))
    }

    /// Applies a function to each `L_k` spectrally and assembles the blocks.
    pub fn block_function(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let v: usize = self.eigen.iter().map(SymEigen::dim).sum();
        let mut out = DMatrix::zeros(v, v);
        let mut off = 0;
        for e in &self.eigen {
            let n = e.dim();
            out.view_mut((off, off), (n, n)).copy_from(&e.apply_fn(&f));
            off += n;
        }
        out
    }

    /// Orthogonal projection onto the full harmonic space `ker L`.
    pub fn kernel_projection(&self) -> DMatrix<f64> {
        let v: usize = self.eigen.iter().map(SymEigen::dim).sum();
        let mut out = DMatrix::zeros(v, v);
        let mut off = 0;
        for k in 0..self.degree_count() {
            let h = self.harmonic_matrix(k);
            let n = h.nrows();
            out.view_mut((off, off), (n, n)).copy_from(&(&h * h.transpose()));
            off += n;
        }
        out
    }

    /// `p(-1) = Σ (-1)^k b_k`.
    pub fn cohomological_euler(&self) -> i64 {
        crate::complex::alternating_sum(&self.betti_numbers())
    }
}

/// `str(M) = Σ_i P_ii M_ii`.
pub fn super_trace(m: &DMatrix<f64>, p: &Parity) -> Result<f64> {
    if m.nrows() != m.ncols() || m.nrows() != p.diagonal.len() {
        return Err(Error::Shape(format!(
            "super trace of {:?} matrix with parity of size {}",
            m.shape(),
            p.diagonal.len()
        )));
    }
    Ok(p.diagonal.iter().enumerate().map(|(i, &s)| s as f64 * m[(i, i)]).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerPoincare {
    pub chi_combinatorial: i64,
    pub chi_cohomological: i64,
}

impl EulerPoincare {
    pub fn holds(&self) -> bool {
        self.chi_combinatorial == self.chi_cohomological
    }
}

/// Compares `v(-1)` with `p(-1)`.
pub fn euler_poincare_check(c: &CliqueComplex, h: &Hodge) -> EulerPoincare {
    EulerPoincare {
        chi_combinatorial: c.euler_characteristic(),
        chi_cohomological: h.cohomological_euler(),
    }
}

/// `{"v", "betti", "chi", "spectrumByDegree"}` report.
pub fn cohomology_report(c: &CliqueComplex, h: &Hodge) -> serde_json::Value {
    let spectra: serde_json::Map<String, serde_json::Value> = (0..h.degree_count())
        .map(|k| (k.to_string(), json!(h.spectral_summary(k).eigenvalues)))
        .collect();
    json!({
        "v": c.counts(),
        "betti": h.betti_numbers(),
        "chi": c.euler_characteristic(),
        "spectrumByDegree": spectra,
    })
}
