//! Machine-readable pipeline reports. Every numeric field is validated
//! finite before serialization so that a written report always re-reads to
//! the same values.

use serde::{Deserialize, Serialize};

use crate::cubature::PairResidual;
use crate::error::{Error, Result};

/// The tolerances a command actually ran with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSet {
    pub rank_tol: f64,
    pub normal_tol: f64,
    pub weight_tol: f64,
    pub exactness_tol: f64,
}

/// Scalar diagnostics of the degree-d compression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSummary {
    pub m_norm: f64,
    pub defect: f64,
    pub lambda_minus: f64,
    /// Theoretical floor for lambda_minus: minus the squared defect.
    pub defect_sq_bound: f64,
    /// Residual of the block congruence onto diag(I, commutator).
    pub congruence_residual: f64,
}

/// The four equivalent certificate conditions plus the overall verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub passed: bool,
    pub commutator_small: bool,
    pub det_nonnegative: bool,
    pub defect_small: bool,
    pub subspace_invariant: bool,
}

/// Shape of an emitted cubature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubatureSummary {
    pub kind: String,
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    pub node_count: usize,
    pub total_mass: f64,
}

/// Exactness verification outcome with the full residual grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactnessSummary {
    pub pass: bool,
    pub max_residual: f64,
    pub threshold: f64,
    pub residuals: Vec<PairResidual>,
}

/// Everything a pipeline command reports on standard output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    /// Human-readable description of the moment input.
    pub input: String,
    pub table_degree: usize,
    pub d: usize,
    pub tolerances: ToleranceSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cubature: Option<CubatureSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exactness: Option<ExactnessSummary>,
}

fn ensure_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteReport { field: field.to_string() })
    }
}

impl PipelineReport {
    /// Rejects the report if any numeric field is NaN or infinite.
    pub fn validate(&self) -> Result<()> {
        ensure_finite("tolerances.rank_tol", self.tolerances.rank_tol)?;
        ensure_finite("tolerances.normal_tol", self.tolerances.normal_tol)?;
        ensure_finite("tolerances.weight_tol", self.tolerances.weight_tol)?;
        ensure_finite("tolerances.exactness_tol", self.tolerances.exactness_tol)?;
        if let Some(diag) = &self.diagnostics {
            ensure_finite("diagnostics.m_norm", diag.m_norm)?;
            ensure_finite("diagnostics.defect", diag.defect)?;
            ensure_finite("diagnostics.lambda_minus", diag.lambda_minus)?;
            ensure_finite("diagnostics.defect_sq_bound", diag.defect_sq_bound)?;
            ensure_finite("diagnostics.congruence_residual", diag.congruence_residual)?;
        }
        if let Some(cub) = &self.cubature {
            if let Some(radius) = cub.radius {
                ensure_finite("cubature.radius", radius)?;
            }
            ensure_finite("cubature.total_mass", cub.total_mass)?;
        }
        if let Some(ex) = &self.exactness {
            ensure_finite("exactness.max_residual", ex.max_residual)?;
            ensure_finite("exactness.threshold", ex.threshold)?;
            for entry in &ex.residuals {
                ensure_finite("exactness.residuals", entry.residual)?;
            }
        }
        Ok(())
    }

    /// Validated pretty-printed JSON.
    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
