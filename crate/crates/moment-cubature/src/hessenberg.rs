//! The compressed multiplication operator in the orthonormal basis: its
//! Hessenberg matrix, the defect entry below the last row, the self-commutator
//! with its rank-one correction, and the block form behind the normality
//! certificate.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dd::DdC;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, max_abs, operator_norm};
use crate::moments::MomentTable;
use crate::ortho::{
    dd_cholesky, dd_lower_inverse, defect_from_moments, DdCholOutcome, OrthoBasis,
    DEFAULT_RANK_TOL,
};

/// Relative tolerance separating a numerically normal compression from a
/// genuinely non-normal one.
pub const DEFAULT_NORMAL_TOL: f64 = 1e-8;

/// The multiplication operator compressed to degree-d polynomials, written
/// in the orthonormal basis.
#[derive(Debug, Clone)]
pub struct HessenbergData {
    pub d: usize,
    /// (d+1) x (d+1); entry (j, k) is the P_j-component of z P_k.
    pub matrix: DMatrix<Complex64>,
    /// Norm of the part of z P_d outside the degree-d polynomials; the
    /// entry the truncation cuts off.
    pub defect: f64,
}

/// The four equivalent formulations of the normality certificate, each
/// evaluated on its own numerical witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateConditions {
    /// Self-commutator vanishes in max norm.
    pub commutator_small: bool,
    /// Smallest commutator eigenvalue is nonnegative, the determinant test.
    pub det_nonnegative: bool,
    /// The defect entry vanishes.
    pub defect_small: bool,
    /// Multiplication at the next level leaves degree-d polynomials
    /// invariant; witnessed by the same defect scalar.
    pub subspace_invariant: bool,
}

impl CertificateConditions {
    pub fn all_agree(&self) -> bool {
        let c = self.commutator_small;
        c == self.det_nonnegative && c == self.defect_small && c == self.subspace_invariant
    }
}

/// Everything the normality certificate measures.
#[derive(Debug, Clone)]
pub struct CommutatorReport {
    /// Hermitian self-commutator M*M - MM*.
    pub commutator: DMatrix<Complex64>,
    /// Its smallest eigenvalue.
    pub lambda_minus: f64,
    /// Theoretical floor for `lambda_minus`: minus the squared defect.
    pub defect_sq_bound: f64,
    pub is_normal: bool,
    pub certificate_det: bool,
    pub equivalences: CertificateConditions,
    /// Operator norm of the compression, the scale every threshold is
    /// relative to.
    pub m_norm: f64,
    pub normal_tol: f64,
}

/// sigma_M block matrix with the residual of its congruence reduction.
#[derive(Debug, Clone)]
pub struct SigmaForm {
    /// 2(d+1) x 2(d+1) Hermitian block matrix [[I, M*], [M, M*M]].
    pub matrix: DMatrix<Complex64>,
    /// Max-norm deviation of E sigma E* from diag(I, [M*, M]).
    pub congruence_residual: f64,
}

/// Compression of multiplication to the span of caller-supplied polynomials.
#[derive(Debug, Clone)]
pub struct SubspaceCompression {
    /// Matrix of the compression in the orthonormalized span.
    pub matrix: DMatrix<Complex64>,
    /// Cholesky remainders of the span's Gram matrix.
    pub pivots: Vec<f64>,
    /// Max-norm deviation of the orthonormalized Gram from the identity.
    pub ortho_residual: f64,
    /// Max norm of matrix + matrix*; zero for a skew-symmetric compression.
    pub skew_residual: f64,
}

/// Builds the Hessenberg matrix of the compressed multiplier at degree `d`
/// together with its defect entry.
pub fn build_hessenberg(
    table: &MomentTable,
    basis: &OrthoBasis,
    d: usize,
) -> Result<HessenbergData> {
    if basis.degree < d {
        return Err(Error::InvalidParameter {
            what: format!("basis degree {} below requested degree {d}", basis.degree),
        });
    }
    if table.max_total_degree() < 2 * d + 2 {
        return Err(Error::InsufficientDegree {
            needed: 2 * d + 2,
            available: table.max_total_degree(),
        });
    }
    let n = d + 1;
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let mut acc = Complex64::ZERO;
            for m in 0..=k {
                let cm = basis.coeffs[(k, m)];
                if cm == Complex64::ZERO {
                    continue;
                }
                for nn in 0..=j {
                    let cn = basis.coeffs[(j, nn)];
                    if cn == Complex64::ZERO {
                        continue;
                    }
                    acc += cm * cn.conj() * table.get(m + 1, nn);
                }
            }
            matrix[(j, k)] = acc;
        }
    }
    let defect = defect_from_moments(table, d, DEFAULT_RANK_TOL)?;
    Ok(HessenbergData { d, matrix, defect })
}

/// Evaluates the self-commutator certificate at relative tolerance
/// `normal_tol`.
///
/// Commutator and eigenvalue witnesses are compared against
/// `normal_tol * m_norm^2`, the defect witness against `normal_tol * m_norm`;
/// the two scales make the four conditions agree on both normal and
/// non-normal inputs.
pub fn self_commutator(h: &HessenbergData, normal_tol: f64) -> CommutatorReport {
    let m = &h.matrix;
    let raw = m.adjoint() * m - m * m.adjoint();
    let n = m.nrows();
    let commutator = DMatrix::from_fn(n, n, |i, j| 0.5 * (raw[(i, j)] + raw[(j, i)].conj()));
    let (eigs, _) = hermitian_eig(&commutator);
    let lambda_minus = eigs.first().copied().unwrap_or(0.0);
    let m_norm = operator_norm(m);
    let quad_scale = normal_tol * m_norm * m_norm;
    let lin_scale = normal_tol * m_norm;

    let is_normal = max_abs(&commutator) <= quad_scale;
    let certificate_det = lambda_minus >= -quad_scale;
    let defect_small = h.defect <= lin_scale;
    let equivalences = CertificateConditions {
        commutator_small: is_normal,
        det_nonnegative: certificate_det,
        defect_small,
        subspace_invariant: defect_small,
    };
    CommutatorReport {
        commutator,
        lambda_minus,
        defect_sq_bound: -h.defect * h.defect,
        is_normal,
        certificate_det,
        equivalences,
        m_norm,
        normal_tol,
    }
}

/// Assembles sigma_M = [[I, M*], [M, M*M]] and verifies its congruence
/// reduction to diag(I, [M*, M]).
pub fn sigma_form(h: &HessenbergData) -> SigmaForm {
    let m = &h.matrix;
    let n = m.nrows();
    let mut sigma = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    let madj = m.adjoint();
    let mam = &madj * m;
    for i in 0..n {
        sigma[(i, i)] = Complex64::ONE;
        for j in 0..n {
            sigma[(i, n + j)] = madj[(i, j)];
            sigma[(n + i, j)] = m[(i, j)];
            sigma[(n + i, n + j)] = mam[(i, j)];
        }
    }

    // E = [[I, 0], [-M, I]]; E sigma E* should be diag(I, [M*, M]).
    let mut e = DMatrix::<Complex64>::identity(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            e[(n + i, j)] = -m[(i, j)];
        }
    }
    let reduced = &e * &sigma * e.adjoint();
    let commutator = &mam - m * &madj;
    let mut residual = 0.0f64;
    for i in 0..2 * n {
        for j in 0..2 * n {
            let expect = if i < n && j < n {
                if i == j { Complex64::ONE } else { Complex64::ZERO }
            } else if i >= n && j >= n {
                commutator[(i - n, j - n)]
            } else {
                Complex64::ZERO
            };
            residual = residual.max((reduced[(i, j)] - expect).norm());
        }
    }
    SigmaForm { matrix: sigma, congruence_residual: residual }
}

/// The rank-one correction K: defect squared in the last diagonal slot,
/// zeros elsewhere. [M*, M] + K is positive semidefinite.
pub fn normalizing_perturbation(h: &HessenbergData) -> DMatrix<Complex64> {
    let n = h.matrix.nrows();
    let mut k = DMatrix::<Complex64>::zeros(n, n);
    k[(n - 1, n - 1)] = Complex64::new(h.defect * h.defect, 0.0);
    k
}

/// Inner product of two monomial-coefficient polynomials in the moment form,
/// with the first argument optionally shifted by one power of z.
fn span_inner(table: &MomentTable, p: &[Complex64], q: &[Complex64], shift: usize) -> DdC {
    let mut acc = DdC::ZERO;
    for (m, pm) in p.iter().enumerate() {
        if *pm == Complex64::ZERO {
            continue;
        }
        for (n, qn) in q.iter().enumerate() {
            if *qn == Complex64::ZERO {
                continue;
            }
            let s = DdC::from_c64(table.get(m + shift, n));
            acc = acc.add(DdC::from_c64(pm * qn.conj()).mul(s));
        }
    }
    acc
}

/// Compresses multiplication by z to the span of the given polynomials,
/// orthonormalizing the span in the moment inner product first.
///
/// `span` holds one polynomial per row as monomial coefficients, constant
/// term first. Rows must be linearly independent over the form: a Gram pivot
/// at or below `rank_tol * s00` reports the offending row.
pub fn compress_to_subspace(
    table: &MomentTable,
    span: &[Vec<Complex64>],
    rank_tol: f64,
) -> Result<SubspaceCompression> {
    if span.is_empty() {
        return Err(Error::InvalidParameter { what: "empty span".into() });
    }
    let deg = |p: &[Complex64]| {
        p.iter().rposition(|c| *c != Complex64::ZERO).unwrap_or(0)
    };
    let max_deg = span.iter().map(|p| deg(p)).max().unwrap_or(0);
    for p in span {
        let needed = deg(p) + 1 + max_deg;
        if needed > table.max_total_degree() {
            return Err(Error::InsufficientDegree {
                needed,
                available: table.max_total_degree(),
            });
        }
    }

    let n = span.len();
    let gram: Vec<Vec<DdC>> = (0..n)
        .map(|i| (0..n).map(|j| span_inner(table, &span[i], &span[j], 0)).collect())
        .collect();
    let threshold = rank_tol * table.s00();
    let chol = match dd_cholesky(&gram, threshold, threshold)? {
        DdCholOutcome::Full(c) => c,
        DdCholOutcome::Stopped { column, pivot, .. } => {
            return Err(Error::DegenerateSpan { index: column, pivot });
        }
    };
    let coeffs: Vec<Vec<Complex64>> = dd_lower_inverse(&chol)
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.to_c64()).collect())
        .collect();

    // B[k][l] = <z v_k, v_l>; the compression in the orthonormalized span is
    // A[i][j] = sum_{k,l} C[j][k] conj(C[i][l]) B[k][l].
    let b: Vec<Vec<Complex64>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|l| span_inner(table, &span[k], &span[l], 1).to_c64())
                .collect()
        })
        .collect();
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::ZERO;
            for (k, cjk) in coeffs[j].iter().enumerate() {
                for (l, cil) in coeffs[i].iter().enumerate() {
                    acc += cjk * cil.conj() * b[k][l];
                }
            }
            matrix[(i, j)] = acc;
        }
    }

    // Orthonormality of the produced basis, measured back through the Gram.
    let mut ortho_residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::ZERO;
            for (k, cik) in coeffs[i].iter().enumerate() {
                for (l, cjl) in coeffs[j].iter().enumerate() {
                    acc += cik * cjl.conj() * gram[k][l].to_c64();
                }
            }
            let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
            ortho_residual = ortho_residual.max((acc - expect).norm());
        }
    }
    let skew_residual = max_abs(&(&matrix + matrix.adjoint()));
    Ok(SubspaceCompression {
        matrix,
        pivots: chol.pivots,
        ortho_residual,
        skew_residual,
    })
}
