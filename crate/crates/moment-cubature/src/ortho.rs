//! Orthonormal polynomial bases for the bilinear form induced by a moment
//! table.
//!
//! The basis P_0, ..., P_d comes out of a Cholesky elimination on the Gram
//! matrix of the monomials, which keeps every leading coefficient positive.
//! Pivots are accumulated in double-double arithmetic: the downstream
//! normality certificate compares the final pivot against thresholds near the
//! f64 noise floor, and a plain f64 elimination loses exactly those digits.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dd::{Dd, DdC};
use crate::error::{Error, Result};
use crate::moments::MomentTable;

/// Relative rank cutoff separating genuine moment degeneracy from roundoff.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Orthonormal polynomials P_0, ..., P_degree for the moment inner product.
#[derive(Debug, Clone)]
pub struct OrthoBasis {
    pub degree: usize,
    /// Lower-triangular; row j holds the monomial coefficients of P_j.
    pub coeffs: DMatrix<Complex64>,
    /// Leading coefficients; `leading[j] == coeffs[(j, j)].re > 0`.
    pub leading: Vec<f64>,
}

/// Where and how badly strict positivity first failed.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyReport {
    pub first_degenerate_degree: usize,
    pub pivot: f64,
    pub threshold: f64,
}

/// Result of an orthonormalization attempt. Degeneracy is ordinary output,
/// not an error: it is the signature of a finitely supported functional.
#[derive(Debug, Clone)]
pub enum OrthoOutcome {
    Basis(OrthoBasis),
    Degenerate(DegeneracyReport),
}

impl OrthoOutcome {
    /// Unwraps the basis, mapping degeneracy onto the error channel for
    /// callers that cannot proceed without one.
    pub fn into_basis(self) -> Result<OrthoBasis> {
        match self {
            OrthoOutcome::Basis(b) => Ok(b),
            OrthoOutcome::Degenerate(r) => Err(Error::Degenerate {
                degree: r.first_degenerate_degree,
                pivot: r.pivot,
                threshold: r.threshold,
            }),
        }
    }
}

/// Gram matrix of the monomials 1, z, ..., z^m promoted to double-double.
fn dd_gram(table: &MomentTable, m: usize) -> Vec<Vec<DdC>> {
    (0..=m)
        .map(|j| {
            (0..=m)
                .map(|k| {
                    let s = table.get(j, k);
                    if j == k {
                        // Diagonal Gram entries are squared norms; the table
                        // admits imaginary parts only up to the symmetry
                        // tolerance, dropped here.
                        DdC::from_real(Dd::from_f64(s.re))
                    } else {
                        DdC::from_c64(s)
                    }
                })
                .collect()
        })
        .collect()
}

/// Outcome of the double-double Cholesky elimination G = L L*.
pub(crate) struct DdCholesky {
    /// Strictly lower-triangular part; `low[j]` holds L[j][0..j].
    pub(crate) low: Vec<Vec<DdC>>,
    /// Diagonal of L.
    pub(crate) diag: Vec<Dd>,
    /// Diagonal remainders p_j = L[j][j]^2 before the square root.
    pub(crate) pivots: Vec<f64>,
}

pub(crate) enum DdCholOutcome {
    Full(DdCholesky),
    /// Elimination stopped at this column; `partial` covers the preceding
    /// columns, which all had pivots above the cutoff.
    Stopped {
        partial: DdCholesky,
        column: usize,
        pivot: f64,
    },
}

/// Row-by-row elimination with a positivity cutoff. A pivot below `-neg_tol`
/// is a hard error (the form is not PSD); a pivot in `[-neg_tol, cutoff]`
/// stops the elimination at that row.
pub(crate) fn dd_cholesky(g: &[Vec<DdC>], cutoff: f64, neg_tol: f64) -> Result<DdCholOutcome> {
    let n = g.len();
    let mut low: Vec<Vec<DdC>> = Vec::with_capacity(n);
    let mut diag: Vec<Dd> = Vec::with_capacity(n);
    let mut pivots: Vec<f64> = Vec::with_capacity(n);

    for j in 0..n {
        let mut row: Vec<DdC> = Vec::with_capacity(j);
        for k in 0..j {
            let mut acc = g[j][k];
            for m in 0..k {
                acc = acc.sub(row[m].mul_conj(low[k][m]));
            }
            row.push(acc.div_real(diag[k]));
        }
        let mut p = g[j][j].re;
        for entry in &row {
            p = p.sub(entry.norm_sqr());
        }
        let pivot = p.to_f64();
        if pivot < -neg_tol {
            return Err(Error::NonPsdGram { degree: j, pivot, tolerance: neg_tol });
        }
        low.push(row);
        pivots.push(pivot);
        if pivot <= cutoff {
            return Ok(DdCholOutcome::Stopped {
                partial: DdCholesky { low, diag, pivots },
                column: j,
                pivot,
            });
        }
        diag.push(p.sqrt());
    }
    Ok(DdCholOutcome::Full(DdCholesky { low, diag, pivots }))
}

/// Inverse of the lower-triangular factor, rows solved by forward
/// substitution; row j of the result holds the coefficients of P_j.
pub(crate) fn dd_lower_inverse(chol: &DdCholesky) -> Vec<Vec<DdC>> {
    let n = chol.diag.len();
    let mut c: Vec<Vec<DdC>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = vec![DdC::ZERO; j + 1];
        for k in 0..=j {
            let mut acc = if j == k {
                DdC::from_real(Dd::from_f64(1.0))
            } else {
                DdC::ZERO
            };
            for m in k..j {
                acc = acc.sub(chol.low[j][m].mul(c[m][k]));
            }
            row[k] = acc.div_real(chol.diag[j]);
        }
        c.push(row);
    }
    c
}

/// Builds the orthonormal basis through degree `d`, or reports the first
/// degree at which the moment form stops being strictly positive.
///
/// Pivots below `rank_tol * s00` are treated as degenerate; pivots below
/// `-rank_tol * s00` reject the table outright. The elimination and the
/// triangular inverse both run in double-double before rounding once at the
/// end, so the returned coefficients are the correctly rounded basis; no
/// f64 re-orthogonalization can improve on them.
pub fn orthonormalize(table: &MomentTable, d: usize, rank_tol: f64) -> Result<OrthoOutcome> {
    if 2 * d > table.max_total_degree() {
        return Err(Error::InsufficientDegree {
            needed: 2 * d,
            available: table.max_total_degree(),
        });
    }
    if !(rank_tol > 0.0) {
        return Err(Error::InvalidParameter {
            what: format!("rank_tol must be positive, got {rank_tol}"),
        });
    }
    let threshold = rank_tol * table.s00();
    let g = dd_gram(table, d);
    let chol = match dd_cholesky(&g, threshold, threshold)? {
        DdCholOutcome::Full(c) => c,
        DdCholOutcome::Stopped { column, pivot, .. } => {
            return Ok(OrthoOutcome::Degenerate(DegeneracyReport {
                first_degenerate_degree: column,
                pivot,
                threshold,
            }));
        }
    };
    let inv = dd_lower_inverse(&chol);
    let n = d + 1;
    let mut coeffs = DMatrix::<Complex64>::zeros(n, n);
    let mut leading = Vec::with_capacity(n);
    for (j, row) in inv.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            coeffs[(j, k)] = v.to_c64();
        }
        // The diagonal of the inverse is real and positive by construction.
        leading.push(coeffs[(j, j)].re);
    }
    Ok(OrthoOutcome::Basis(OrthoBasis { degree: d, coeffs, leading }))
}

/// Coordinates of the constant function 1 in the basis {P_j}: the expansion
/// has ⟨1, P_0⟩ = sqrt(s00) and no higher components.
pub fn cyclic_vector_coords(basis: &OrthoBasis, table: &MomentTable) -> DVector<Complex64> {
    let mut e = DVector::zeros(basis.degree + 1);
    e[0] = Complex64::new(table.s00().sqrt(), 0.0);
    e
}

/// Evaluates P_j at a point by Horner's rule on row j of the basis.
pub fn evaluate(basis: &OrthoBasis, j: usize, z: Complex64) -> Complex64 {
    assert!(j <= basis.degree, "polynomial index {j} beyond degree {}", basis.degree);
    let mut acc = basis.coeffs[(j, j)];
    for m in (0..j).rev() {
        acc = acc * z + basis.coeffs[(j, m)];
    }
    acc
}

/// Norm of the component of z P_d orthogonal to the degree-d polynomials,
/// computed from moments alone.
///
/// The squared norm equals the degree-(d+1) Cholesky remainder scaled by the
/// leading coefficient, so it stays meaningful exactly where degree-(d+1)
/// orthonormalization degenerates. The remainder is kept in double-double
/// until the final square root: certificates compare this number against
/// thresholds close to the f64 noise floor.
pub fn defect_from_moments(table: &MomentTable, d: usize, rank_tol: f64) -> Result<f64> {
    if 2 * (d + 1) > table.max_total_degree() {
        return Err(Error::InsufficientDegree {
            needed: 2 * (d + 1),
            available: table.max_total_degree(),
        });
    }
    let threshold = rank_tol * table.s00();
    let g = dd_gram(table, d + 1);
    let (chol, last_pivot) = match dd_cholesky(&g, threshold, threshold)? {
        DdCholOutcome::Full(c) => {
            let p = *c.pivots.last().expect("nonempty elimination");
            (c, p)
        }
        DdCholOutcome::Stopped { partial, column, pivot } => {
            if column <= d {
                return Err(Error::Degenerate { degree: column, pivot, threshold });
            }
            (partial, pivot)
        }
    };
    let remainder = last_pivot.max(0.0);
    Ok(remainder.sqrt() / chol.diag[d].to_f64())
}
