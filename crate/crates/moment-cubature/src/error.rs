//! Error type shared across the crate, with the exit-code mapping used by the
//! command-line interface.

use thiserror::Error;

/// Everything that can go wrong between reading moment data and emitting a
/// verified cubature.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("duplicate moment entry for index pair ({j},{k})")]
    DuplicateEntry { j: usize, k: usize },

    #[error(
        "moment entries ({j},{k}) and ({k},{j}) disagree under conjugation by {deviation:.3e} \
         (tolerance {tolerance:.3e})"
    )]
    SymmetryViolation { j: usize, k: usize, deviation: f64, tolerance: f64 },

    #[error("no value given for index pair ({j},{k}) or its conjugate partner")]
    MissingEntry { j: usize, k: usize },

    #[error("index pair ({j},{k}) exceeds the declared max total degree {max_total_degree}")]
    IndexBeyondDegree { j: usize, k: usize, max_total_degree: usize },

    #[error("s00 must be real and strictly positive, got {value:.6e}")]
    NonpositiveMass { value: f64 },

    #[error("atomic measure must contain at least one atom")]
    EmptyMeasure,

    #[error("atom {index} has nonpositive weight {weight:.6e}")]
    NonpositiveWeight { index: usize, weight: f64 },

    #[error(
        "operation needs moments up to total degree {needed}, table only reaches {available}"
    )]
    InsufficientDegree { needed: usize, available: usize },

    #[error(
        "Gram matrix is not positive semidefinite: pivot {pivot:.3e} at degree {degree} \
         falls below -{tolerance:.3e}"
    )]
    NonPsdGram { degree: usize, pivot: f64, tolerance: f64 },

    #[error(
        "functional degenerates at degree {degree}: pivot {pivot:.3e} below threshold \
         {threshold:.3e}"
    )]
    Degenerate { degree: usize, pivot: f64, threshold: f64 },

    #[error(
        "normality certificate failed: defect {defect:.3e}, lambda_minus {lambda_minus:.3e}, \
         tolerance {tolerance:.3e}"
    )]
    CertificateFailed { defect: f64, lambda_minus: f64, tolerance: f64 },

    #[error(
        "spectral factor is not diagonal enough: off-diagonal residual {residual:.3e} exceeds \
         {tolerance:.3e}"
    )]
    SpectralResidual { residual: f64, tolerance: f64 },

    #[error("subspace span is degenerate: Gram pivot {pivot:.3e} at row {index}")]
    DegenerateSpan { index: usize, pivot: f64 },

    #[error("matrix norm {norm:.6} exceeds 1 beyond tolerance; scale the input first")]
    NormExceedsOne { norm: f64 },

    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },

    #[error(
        "could not place {count} atoms with pairwise separation {separation:.3e} in the disk \
         of radius {disk_radius:.3e}"
    )]
    SeparationUnachievable { count: usize, separation: f64, disk_radius: f64 },

    #[error("cubature contract is {found}, expected {expected}")]
    ContractMismatch { expected: String, found: String },

    #[error("report contains a non-finite numeric field: {field}")]
    NonFiniteReport { field: String },
}

impl Error {
    /// Process exit code: 1 for mathematical certificate or verification
    /// failures, 2 for usage and input errors, 3 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::Degenerate { .. }
            | Error::CertificateFailed { .. }
            | Error::SpectralResidual { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
