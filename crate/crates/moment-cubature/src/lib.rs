//! Cubature formulas from truncated complex moment data.

mod dd;
pub mod cli;
pub mod cubature;
pub mod dilation;
pub mod error;
pub mod fixtures;
pub mod hessenberg;
pub mod linalg;
pub mod moments;
pub mod ortho;
pub mod report;

pub use cubature::{match_atoms, normal_quadrature, verify_exactness, Contract, Cubature};
pub use error::{Error, Result};
pub use moments::{gram_matrix, moments_from_atoms, AtomicMeasure, MomentTable};
