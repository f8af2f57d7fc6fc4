//! Finite unitary power dilation of a contraction and the harmonic cubature
//! extracted from its spectrum.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cubature::{merge_and_prune, Contract, Cubature};
use crate::error::{Error, Result};
use crate::hessenberg::build_hessenberg;
use crate::linalg::{normal_eig, spectral_residual};
use crate::moments::MomentTable;
use crate::ortho::{orthonormalize, OrthoOutcome, DEFAULT_RANK_TOL};

pub use crate::linalg::{defect_sqrt, operator_norm};

/// Max-norm unitarity residual every dilation output must satisfy.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Off-diagonal residual allowed when diagonalizing the dilation unitary.
const SPECTRAL_TOL: f64 = 1e-8;

/// Positivity slack for the defect operators I - T*T and I - TT*; covers the
/// admitted norm overshoot of 1e-10 plus eigensolver noise.
const DEFECT_PSD_TOL: f64 = 1e-9;

/// A relative operator norm below this marks the functional as concentrated
/// at the origin.
const RADIUS_UNDERFLOW: f64 = 1e-14;

/// An N-step unitary power dilation together with the embedding of the
/// compressed space and the scale it was built at.
#[derive(Debug, Clone)]
pub struct DilationResult {
    /// Unitary of size n(N+1) whose first-block compressions of U^k equal
    /// T^k for 0 <= k <= N.
    pub unitary: DMatrix<Complex64>,
    /// Rows of the dilation space carrying the original space.
    pub embed: Vec<usize>,
    /// Scale of the contraction the caller dilated; the pipeline stores
    /// R = norm of the compression here, a bare dilation records 1.
    pub radius: f64,
}

/// Builds the N-step rotation dilation of a contraction.
///
/// Block layout: T in the top-left corner, the two defect square roots and
/// -T* closing the first and last block columns, and an identity delay line
/// in between. Compressions of U^k to the first block reproduce T^k for all
/// k up to the step count.
pub fn unitary_power_dilation(t: &DMatrix<Complex64>, steps: usize) -> Result<DilationResult> {
    if steps < 1 {
        return Err(Error::InvalidParameter {
            what: format!("dilation needs at least one step, got {steps}"),
        });
    }
    let n = t.nrows();
    if n == 0 || t.ncols() != n {
        return Err(Error::InvalidParameter {
            what: format!("contraction must be square and nonempty, got {}x{}", n, t.ncols()),
        });
    }
    let norm = operator_norm(t);
    if norm > 1.0 + 1e-10 {
        return Err(Error::NormExceedsOne { norm });
    }

    let id = DMatrix::<Complex64>::identity(n, n);
    let defect_right = defect_sqrt(&(&id - t.adjoint() * t), DEFECT_PSD_TOL)?;
    let defect_left = defect_sqrt(&(&id - t * t.adjoint()), DEFECT_PSD_TOL)?;

    let big = n * (steps + 1);
    let mut unitary = DMatrix::<Complex64>::zeros(big, big);
    let mut put = |row_block: usize, col_block: usize, block: &DMatrix<Complex64>| {
        for i in 0..n {
            for j in 0..n {
                unitary[(row_block * n + i, col_block * n + j)] = block[(i, j)];
            }
        }
    };
    put(0, 0, t);
    put(0, steps, &defect_left);
    put(1, 0, &defect_right);
    put(1, steps, &(-t.adjoint()));
    for k in 2..=steps {
        put(k, k - 1, &id);
    }

    // One polar polish step. A defect square root with near-zero eigenvalues
    // is only sqrt(eps) accurate, which leaks into the intertwining identity
    // the block columns rely on; multiplying by (3I - U*U) / 2 squares that
    // residual away and leaves an exactly unitary assembly unchanged.
    let gram = unitary.adjoint() * &unitary;
    let mut correction = DMatrix::<Complex64>::identity(big, big) * Complex64::new(3.0, 0.0);
    correction -= &gram;
    let unitary = (&unitary * correction).map(|z| z * 0.5);

    Ok(DilationResult { unitary, embed: (0..n).collect(), radius: 1.0 })
}

/// Max-norm deviation of U*U from the identity.
pub fn unitarity_residual(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::ZERO };
            worst = worst.max((gram[(i, j)] - target).norm());
        }
    }
    worst
}

/// Harmonic-exact cubature at degree `d`: nodes on the circle of radius
/// R = norm of the degree-d compression, reproducing L(z^m) for m <= d.
///
/// The compression is scaled to a contraction, dilated in d steps (one step
/// when d = 0), and the spectrum of the dilation unitary supplies nodes and
/// weights through the embedded cyclic vector. Weights below
/// `weight_tol * s00` are dropped and the rest rescaled to total mass s00.
pub fn harmonic_cubature(table: &MomentTable, d: usize, weight_tol: f64) -> Result<Cubature> {
    let needed = 2 * d + 2;
    if needed > table.max_total_degree() {
        return Err(Error::InsufficientDegree {
            needed,
            available: table.max_total_degree(),
        });
    }
    let s00 = table.s00();
    let trivial = || {
        Cubature::new(vec![Complex64::ZERO], vec![s00], Contract::Harmonic { d, radius: 0.0 })
    };

    let basis = match orthonormalize(table, d, DEFAULT_RANK_TOL)? {
        OrthoOutcome::Basis(basis) => basis,
        OrthoOutcome::Degenerate(report) => {
            // A vanishing second moment means all mass sits at the origin;
            // the one-node cubature is exact for every degree.
            if table.get(1, 1).re <= 1e-28 * s00 {
                return trivial();
            }
            return Err(Error::Degenerate {
                degree: report.first_degenerate_degree,
                pivot: report.pivot,
                threshold: report.threshold,
            });
        }
    };

    let h = build_hessenberg(table, &basis, d)?;
    let radius = operator_norm(&h.matrix);
    let spread = (table.get(1, 1).re / s00).max(0.0).sqrt();
    if radius <= RADIUS_UNDERFLOW * spread || radius == 0.0 {
        return trivial();
    }

    let t = h.matrix.map(|v| v / radius);
    let steps = d.max(1);
    let dilation = unitary_power_dilation(&t, steps)?;

    let (lambda, f) = normal_eig(&dilation.unitary, 1.0);
    let residual = spectral_residual(&dilation.unitary, &lambda, &f);
    if residual > SPECTRAL_TOL {
        return Err(Error::SpectralResidual { residual, tolerance: SPECTRAL_TOL });
    }

    // Snap eigenvalues of the unitary onto the circle of radius R, then pool
    // coinciding nodes; the cyclic vector is sqrt(s00) on the first
    // coordinate of the embedded block.
    let snapped: Vec<Complex64> = lambda
        .iter()
        .map(|l| {
            let m = l.norm();
            if m == 0.0 { Complex64::ZERO } else { l * (radius / m) }
        })
        .collect();
    let raw: Vec<f64> = (0..lambda.len()).map(|k| s00 * f[(0, k)].norm_sqr()).collect();
    let (mut nodes, mut weights) =
        merge_and_prune(&snapped, &raw, 1e-9 * radius, weight_tol * s00);
    for z in nodes.iter_mut() {
        let m = z.norm();
        if m > 0.0 {
            *z *= radius / m;
        }
    }
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        let fix = s00 / total;
        for w in weights.iter_mut() {
            *w *= fix;
        }
    }
    Cubature::new(nodes, weights, Contract::Harmonic { d, radius })
}
