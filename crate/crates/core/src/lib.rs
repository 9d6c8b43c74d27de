//! Dirac operators of finite simple graphs.
//!
//! A graph's cliques form a simplicial complex. Its signed incidence matrices
//! assemble into the Dirac operator `D = d + d*`, whose square `L = D²` is the
//! block-diagonal Laplace–Beltrami operator. This crate builds these operators
//! exactly and layers on cohomology, curvature, spectral invariants,
//! automorphism fixed-point theory, discrete evolution equations and the
//! isospectral Lax deformation of `D`.

pub mod complex;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod geometry;
pub mod graph;
pub mod hodge;
pub mod linalg;
pub mod morphisms;
pub mod operators;
pub mod report;
pub mod spectra;

pub use complex::{build_complex, CliqueComplex, Orientation, Simplex};
pub use error::{Error, Result};
pub use graph::{parse_edge_list, SimpleGraph};
pub use operators::{dirac, laplacian, DiracMatrix, LaplacianBlocks};
