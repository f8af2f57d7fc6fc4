//! Dense complex linear algebra for small matrices: Hermitian eigensolver,
//! spectral decomposition of normal matrices, operator norm.
//!
//! Everything here is a two-sided Jacobi scheme. Rotations are exactly
//! unitary, so eigenvector matrices stay orthonormal to machine precision
//! regardless of conditioning, and the whole pipeline is deterministic.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigendecomposition A = V diag(w) V* of a Hermitian matrix, eigenvalues
/// ascending, V unitary. The input is symmetrized first, so tiny Hermitian
/// violations from roundoff are tolerated.
pub fn hermitian_eig(a: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "hermitian_eig needs a square matrix");
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    // Symmetrized working copy.
    let mut m = DMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let mut v = DMatrix::<Complex64>::identity(n, n);

    let fro: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if fro == 0.0 {
        return (vec![0.0; n], v);
    }
    let stop = 1e-15 * fro;
    let skip = 1e-30 * fro;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        let off = (2.0 * off).sqrt();
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = m[(p, q)];
                let r = b.norm();
                if r <= skip {
                    continue;
                }
                // Complex rotation in the (p,q) plane: a phase turn makes the
                // coupling real, then a real Jacobi angle zeroes it.
                let phase = b / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = {
                    let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                // Columns of the embedded rotation G: G[p][p] = c,
                // G[q][p] = -s conj(phase), G[p][q] = s phase, G[q][q] = c.
                let g_pp = Complex64::new(c, 0.0);
                let g_qp = -s * phase.conj();
                let g_pq = s * phase;
                let g_qq = Complex64::new(c, 0.0);

                // m <- G* m G, applied as column then row updates.
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * g_pp + miq * g_qp;
                    m[(i, q)] = mip * g_pq + miq * g_qq;
                }
                for i in 0..n {
                    let mpi = m[(p, i)];
                    let mqi = m[(q, i)];
                    m[(p, i)] = g_pp.conj() * mpi + g_qp.conj() * mqi;
                    m[(q, i)] = g_pq.conj() * mpi + g_qq.conj() * mqi;
                }
                m[(p, q)] = Complex64::ZERO;
                m[(q, p)] = Complex64::ZERO;
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * g_pp + viq * g_qp;
                    v[(i, q)] = vip * g_pq + viq * g_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let w: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let vs = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (w, vs)
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let (w, _) = hermitian_eig(&gram);
    w.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Spectral decomposition A = F diag(lambda) F* of a normal matrix.
///
/// The Hermitian and skew parts of a normal matrix commute, so one orthonormal
/// basis diagonalizes both: the Hermitian part is diagonalized first, its
/// eigenvalues are grouped into clusters separated by more than `1e-6 * scale`,
/// and the skew part is rediagonalized inside each cluster. A final polish
/// pass sweeps two-sided rotations over F* A F, each turn taken from
/// whichever of the two parts has the wider gap in the (p, q) plane, which
/// removes the coupling that first-pass clustering leaves across
/// near-threshold eigenvalue splits. `scale` should be a norm estimate of
/// `a`; callers must check `spectral_residual` against their own tolerance,
/// since a far-from-normal input leaves the returned diagonalization inexact.
pub fn normal_eig(
    a: &DMatrix<Complex64>,
    scale: f64,
) -> (Vec<Complex64>, DMatrix<Complex64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "normal_eig needs a square matrix");
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let h1 = DMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let h2 = DMatrix::from_fn(n, n, |i, j| {
        let d = a[(i, j)] - a[(j, i)].conj();
        Complex64::new(0.5 * d.im, -0.5 * d.re)
    });

    let (w1, mut f) = hermitian_eig(&h1);
    let gap = 1e-6 * scale.max(f64::MIN_POSITIVE);

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && w1[end] - w1[end - 1] <= gap {
            end += 1;
        }
        if end - start > 1 {
            let cols = f.columns(start, end - start).into_owned();
            let block = cols.adjoint() * &h2 * &cols;
            let (_, wb) = hermitian_eig(&block);
            let rotated = cols * wb;
            f.columns_mut(start, end - start).copy_from(&rotated);
        }
        start = end;
    }

    let mut t = f.adjoint() * a * &f;
    let fro: f64 = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if fro > 0.0 {
        let stop = 1e-15 * fro;
        let mut prev = f64::INFINITY;
        for _sweep in 0..30 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in 0..n {
                    if p != q {
                        off = off.max(t[(p, q)].norm());
                    }
                }
            }
            if off <= stop || off >= prev {
                break;
            }
            prev = off;
            for p in 0..n {
                for q in p + 1..n {
                    let bpq = t[(p, q)];
                    let bqp = t[(q, p)];
                    if bpq.norm().max(bqp.norm()) <= stop {
                        continue;
                    }
                    // Hermitian and skew components of the 2x2 block; the
                    // rotation must come from a component whose own gap
                    // separates the pair, or it stalls on a degenerate one.
                    let h_pq = 0.5 * (bpq + bqp.conj());
                    let s_pq = {
                        let d = bpq - bqp.conj();
                        Complex64::new(0.5 * d.im, -0.5 * d.re)
                    };
                    let gap_h = (t[(q, q)].re - t[(p, p)].re).hypot(2.0 * h_pq.norm());
                    let gap_s = (t[(q, q)].im - t[(p, p)].im).hypot(2.0 * s_pq.norm());
                    let (app, aqq, b) = if gap_h >= gap_s {
                        (t[(p, p)].re, t[(q, q)].re, h_pq)
                    } else {
                        (t[(p, p)].im, t[(q, q)].im, s_pq)
                    };
                    let r = b.norm();
                    if r == 0.0 {
                        continue;
                    }
                    let phase = b / r;
                    let tau = (aqq - app) / (2.0 * r);
                    let tj = {
                        let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                        sgn / (tau.abs() + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + tj * tj).sqrt();
                    let s = c * tj;
                    let g_pp = Complex64::new(c, 0.0);
                    let g_qp = -s * phase.conj();
                    let g_pq = s * phase;
                    let g_qq = Complex64::new(c, 0.0);
                    for i in 0..n {
                        let tip = t[(i, p)];
                        let tiq = t[(i, q)];
                        t[(i, p)] = tip * g_pp + tiq * g_qp;
                        t[(i, q)] = tip * g_pq + tiq * g_qq;
                    }
                    for i in 0..n {
                        let tpi = t[(p, i)];
                        let tqi = t[(q, i)];
                        t[(p, i)] = g_pp.conj() * tpi + g_qp.conj() * tqi;
                        t[(q, i)] = g_pq.conj() * tpi + g_qq.conj() * tqi;
                    }
                    for i in 0..n {
                        let fip = f[(i, p)];
                        let fiq = f[(i, q)];
                        f[(i, p)] = fip * g_pp + fiq * g_qp;
                        f[(i, q)] = fip * g_pq + fiq * g_qq;
                    }
                }
            }
        }
    }

    let lambda: Vec<Complex64> = (0..n).map(|j| t[(j, j)]).collect();
    (lambda, f)
}

/// Largest modulus of an off-diagonal entry of F* A F minus diag(lambda);
/// the certificate that `normal_eig` actually diagonalized `a`.
pub fn spectral_residual(
    a: &DMatrix<Complex64>,
    lambda: &[Complex64],
    f: &DMatrix<Complex64>,
) -> f64 {
    let n = a.nrows();
    let mut t = f.adjoint() * a * f;
    for j in 0..n {
        t[(j, j)] -= lambda[j];
    }
    t.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian principal square root with clamping of slightly negative
/// eigenvalues. Fails when an eigenvalue sits below `-tol`.
pub fn defect_sqrt(a: &DMatrix<Complex64>, tol: f64) -> Result<DMatrix<Complex64>> {
    let (w, v) = hermitian_eig(a);
    if let Some(&min) = w.first() {
        if min < -tol {
            return Err(Error::NonPsdGram { degree: 0, pivot: min, tolerance: tol });
        }
    }
    let n = a.nrows();
    let sqrt_w = DVector::from_iterator(n, w.iter().map(|&x| x.max(0.0).sqrt()));
    let mut scaled = v.clone();
    for j in 0..n {
        let s = Complex64::new(sqrt_w[j], 0.0);
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    Ok(&scaled * v.adjoint())
}

/// Max entry modulus; the cheap norm for residual reporting.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
