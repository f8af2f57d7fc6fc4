//! Cubature formulas: extraction from certified-normal compressions,
//! exactness verification against a moment table, and comparison with
//! reference atomic measures.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hessenberg::{self_commutator, HessenbergData, SubspaceCompression};
use crate::linalg::{normal_eig, operator_norm, spectral_residual};
use crate::moments::MomentTable;
use crate::ortho::{cyclic_vector_coords, OrthoBasis};

/// Weights below this fraction of the total mass are dropped as spurious.
pub const DEFAULT_WEIGHT_TOL: f64 = 1e-12;

/// Relative exactness tolerance for verification reports.
pub const DEFAULT_EXACTNESS_TOL: f64 = 1e-7;

/// Nodes closer than this fraction of the operator norm are one atom.
const MERGE_TOL: f64 = 1e-9;

/// The exactness class a cubature claims.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Contract {
    /// Exact for L(p q̄) with deg p, deg q ≤ d+1 and deg p + deg q ≤ 2d+1.
    Gaussian { d: usize },
    /// Exact for harmonic polynomials of degree ≤ d; nodes on the circle of
    /// this radius.
    Harmonic { d: usize, radius: f64 },
}

impl Contract {
    pub fn degree(&self) -> usize {
        match self {
            Contract::Gaussian { d } | Contract::Harmonic { d, .. } => *d,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Contract::Gaussian { .. } => "gaussian",
            Contract::Harmonic { .. } => "harmonic",
        }
    }
}

/// A positive combination of point evaluations with a claimed exactness
/// contract.
#[derive(Debug, Clone)]
pub struct Cubature {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub contract: Contract,
}

#[derive(Serialize, Deserialize)]
struct NodeEntry {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct CubatureFile {
    contract: Contract,
    nodes: Vec<NodeEntry>,
    weights: Vec<f64>,
}

impl Cubature {
    /// Validates counts, positivity, finiteness, and the Gaussian node bound.
    pub fn new(nodes: Vec<Complex64>, weights: Vec<f64>, contract: Contract) -> Result<Cubature> {
        if nodes.len() != weights.len() {
            return Err(Error::InvalidParameter {
                what: format!("{} nodes against {} weights", nodes.len(), weights.len()),
            });
        }
        if nodes.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        for (i, (z, w)) in nodes.iter().zip(&weights).enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() || !w.is_finite() {
                return Err(Error::InvalidParameter {
                    what: format!("non-finite node or weight at index {i}"),
                });
            }
            if *w <= 0.0 {
                return Err(Error::NonpositiveWeight { index: i, weight: *w });
            }
        }
        if let Contract::Gaussian { d } = contract {
            if nodes.len() > d + 1 {
                return Err(Error::InvalidParameter {
                    what: format!(
                        "gaussian contract at degree {d} admits at most {} nodes, file has {}",
                        d + 1,
                        nodes.len()
                    ),
                });
            }
        }
        Ok(Cubature { nodes, weights, contract })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn load(path: &Path) -> Result<Cubature> {
        let file = File::open(path)?;
        let parsed: CubatureFile = serde_json::from_reader(BufReader::new(file))?;
        let nodes = parsed.nodes.iter().map(|n| Complex64::new(n.re, n.im)).collect();
        Cubature::new(nodes, parsed.weights, parsed.contract)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path)?;
        let out = CubatureFile {
            contract: self.contract,
            nodes: self.nodes.iter().map(|z| NodeEntry { re: z.re, im: z.im }).collect(),
            weights: self.weights.clone(),
        };
        let mut writer = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut writer, &out)?;
        Ok(())
    }
}

/// Residual of one monomial pair in an exactness check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairResidual {
    pub j: usize,
    pub k: usize,
    pub residual: f64,
}

/// Result of verifying a cubature against a moment table.
#[derive(Debug, Clone)]
pub struct ExactnessReport {
    pub residuals: Vec<PairResidual>,
    pub max_residual: f64,
    /// Absolute threshold the maximum was compared against.
    pub threshold: f64,
    pub pass: bool,
}

/// Quadrature induced on a compressed subspace: spectrum of the compression
/// with weights taken against the subspace's first generator.
#[derive(Debug, Clone)]
pub struct InducedQuadrature {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub spectral_residual: f64,
}

/// Merges eigenvalue clusters closer than `tol` into single weighted nodes
/// and drops weights below `weight_floor`.
pub(crate) fn merge_and_prune(
    lambda: &[Complex64],
    raw_weights: &[f64],
    tol: f64,
    weight_floor: f64,
) -> (Vec<Complex64>, Vec<f64>) {
    let n = lambda.len();
    let mut used = vec![false; n];
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for i in 0..n {
        if used[i] {
            continue;
        }
        // Chain-merge: the cluster absorbs every eigenvalue within `tol` of
        // any current member.
        let mut members = vec![i];
        used[i] = true;
        let mut cursor = 0;
        while cursor < members.len() {
            let base = lambda[members[cursor]];
            for (j, flag) in used.iter_mut().enumerate() {
                if !*flag && (lambda[j] - base).norm() <= tol {
                    *flag = true;
                    members.push(j);
                }
            }
            cursor += 1;
        }
        let total: f64 = members.iter().map(|&m| raw_weights[m]).sum();
        let node = if total > 0.0 {
            members
                .iter()
                .map(|&m| lambda[m] * Complex64::new(raw_weights[m] / total, 0.0))
                .sum()
        } else {
            let inv = 1.0 / members.len() as f64;
            members.iter().map(|&m| lambda[m] * Complex64::new(inv, 0.0)).sum()
        };
        if total >= weight_floor {
            nodes.push(node);
            weights.push(total);
        }
    }
    (nodes, weights)
}

fn quadrature_from_normal_matrix(
    matrix: &DMatrix<Complex64>,
    residual_tol: f64,
    scale: f64,
) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let (lambda, f) = normal_eig(matrix, scale);
    let residual = spectral_residual(matrix, &lambda, &f);
    if residual > residual_tol {
        return Err(Error::SpectralResidual { residual, tolerance: residual_tol });
    }
    // Raw weight of eigenvector f_k against a unit mass loaded on the first
    // coordinate; callers rescale.
    let raw: Vec<f64> = (0..lambda.len()).map(|k| f[(0, k)].norm_sqr()).collect();
    Ok((lambda, raw))
}

/// Extracts the Gaussian-type quadrature from a certified-normal Hessenberg
/// compression.
///
/// The certificate gate is the commutator condition of `self_commutator`;
/// `normal_quadrature_unchecked` skips the gate for callers that force the
/// construction on a failed certificate.
pub fn normal_quadrature(
    h: &HessenbergData,
    basis: &OrthoBasis,
    table: &MomentTable,
    normal_tol: f64,
    weight_tol: f64,
) -> Result<Cubature> {
    let report = self_commutator(h, normal_tol);
    if !report.is_normal {
        return Err(Error::CertificateFailed {
            defect: h.defect,
            lambda_minus: report.lambda_minus,
            tolerance: normal_tol * report.m_norm * report.m_norm,
        });
    }
    normal_quadrature_unchecked(h, basis, table, normal_tol, weight_tol)
}

/// The construction behind `normal_quadrature`, without the certificate gate.
/// The spectral-diagonalization residual is still asserted.
pub fn normal_quadrature_unchecked(
    h: &HessenbergData,
    basis: &OrthoBasis,
    table: &MomentTable,
    normal_tol: f64,
    weight_tol: f64,
) -> Result<Cubature> {
    let m_norm = operator_norm(&h.matrix);
    let residual_tol = normal_tol * m_norm.max(1e-300);
    let (lambda, raw) = quadrature_from_normal_matrix(&h.matrix, residual_tol, m_norm)?;
    // e = (sqrt(s00), 0, ..., 0), so |<e, f_k>|^2 = s00 |f_k[0]|^2.
    let e = cyclic_vector_coords(basis, table);
    let s00 = e[0].re * e[0].re;
    let scaled: Vec<f64> = raw.iter().map(|r| r * s00).collect();
    let (nodes, weights) =
        merge_and_prune(&lambda, &scaled, MERGE_TOL * m_norm, weight_tol * s00);
    Cubature::new(nodes, weights, Contract::Gaussian { d: h.d })
}

/// Spectrum-based quadrature for a subspace compression. Weights are taken
/// against the first span generator (coordinates (sqrt(pivot_0), 0, ..., 0)
/// in the orthonormalized span); they are reported, not certified.
pub fn subspace_quadrature(
    comp: &SubspaceCompression,
    weight_tol: f64,
) -> Result<InducedQuadrature> {
    let m_norm = operator_norm(&comp.matrix);
    let (lambda, f) = normal_eig(&comp.matrix, m_norm);
    let residual = spectral_residual(&comp.matrix, &lambda, &f);
    let generator_mass = comp.pivots.first().copied().unwrap_or(0.0);
    let raw: Vec<f64> = (0..lambda.len())
        .map(|k| generator_mass * f[(0, k)].norm_sqr())
        .collect();
    let (nodes, weights) = merge_and_prune(
        &lambda,
        &raw,
        MERGE_TOL * m_norm.max(1e-300),
        weight_tol * generator_mass,
    );
    Ok(InducedQuadrature { nodes, weights, spectral_residual: residual })
}

/// Verifies a cubature's exactness claim against a moment table.
///
/// The Gaussian grid runs over monomial pairs (j, k) with j, k ≤ d+1 and
/// j + k ≤ 2d+1; the excluded corner (d+1, d+1) is outside the contract.
/// The harmonic grid runs over the pairs (m, 0) and (0, m) for m ≤ d. The
/// pass threshold is `tol * (1 + max |s|)`.
pub fn verify_exactness(c: &Cubature, table: &MomentTable, tol: f64) -> Result<ExactnessReport> {
    let pairs: Vec<(usize, usize)> = match c.contract {
        Contract::Gaussian { d } => {
            let needed = 2 * d + 1;
            if needed > table.max_total_degree() {
                return Err(Error::InsufficientDegree {
                    needed,
                    available: table.max_total_degree(),
                });
            }
            let mut grid = Vec::new();
            for j in 0..=d + 1 {
                for k in 0..=d + 1 {
                    if j + k <= 2 * d + 1 {
                        grid.push((j, k));
                    }
                }
            }
            grid
        }
        Contract::Harmonic { d, .. } => {
            if d > table.max_total_degree() {
                return Err(Error::InsufficientDegree {
                    needed: d,
                    available: table.max_total_degree(),
                });
            }
            let mut grid = vec![(0, 0)];
            for m in 1..=d {
                grid.push((m, 0));
                grid.push((0, m));
            }
            grid
        }
    };

    let mut residuals = Vec::with_capacity(pairs.len());
    let mut max_residual = 0.0f64;
    for (j, k) in pairs {
        let mut q = Complex64::ZERO;
        for (z, w) in c.nodes.iter().zip(&c.weights) {
            q += Complex64::new(*w, 0.0) * z.powu(j as u32) * z.conj().powu(k as u32);
        }
        let residual = (q - table.get(j, k)).norm();
        max_residual = max_residual.max(residual);
        residuals.push(PairResidual { j, k, residual });
    }
    let threshold = tol * (1.0 + table.max_modulus());
    Ok(ExactnessReport { residuals, max_residual, threshold, pass: max_residual <= threshold })
}

/// Distance between a cubature and a reference atomic measure: minimum over
/// node bijections of (max node distance + max weight discrepancy).
/// Count mismatch is infinite distance, not an error.
pub fn match_atoms(c: &Cubature, reference: &crate::moments::AtomicMeasure) -> f64 {
    let n = c.nodes.len();
    if n != reference.len() {
        return f64::INFINITY;
    }
    let ref_atoms = reference.atoms();
    let cost = |i: usize, j: usize| -> (f64, f64) {
        let (z, w) = ref_atoms[j];
        ((c.nodes[i] - z).norm(), (c.weights[i] - w).abs())
    };

    // Greedy assignment for the initial bound.
    let mut used = vec![false; n];
    let mut greedy = (0.0f64, 0.0f64);
    for i in 0..n {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for j in 0..n {
            if !used[j] {
                let (dz, _) = cost(i, j);
                if dz < best_d {
                    best_d = dz;
                    best = j;
                }
            }
        }
        used[best] = true;
        let (dz, dw) = cost(i, best);
        greedy = (greedy.0.max(dz), greedy.1.max(dw));
    }
    let mut best = greedy.0 + greedy.1;
    if n > 12 {
        return best;
    }

    // Exhaustive refinement with pruning; the greedy bound makes the search
    // collapse immediately on near-exact matches.
    fn descend(
        i: usize,
        n: usize,
        used: &mut [bool],
        max_dz: f64,
        max_dw: f64,
        best: &mut f64,
        cost: &dyn Fn(usize, usize) -> (f64, f64),
    ) {
        if max_dz + max_dw >= *best {
            return;
        }
        if i == n {
            *best = max_dz + max_dw;
            return;
        }
        for j in 0..n {
            if used[j] {
                continue;
            }
            let (dz, dw) = cost(i, j);
            used[j] = true;
            descend(i + 1, n, used, max_dz.max(dz), max_dw.max(dw), best, cost);
            used[j] = false;
        }
    }
    let mut fresh = vec![false; n];
    descend(0, n, &mut fresh, 0.0, 0.0, &mut best, &cost);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessenberg::{build_hessenberg, compress_to_subspace, DEFAULT_NORMAL_TOL};
    use crate::moments::{moments_from_atoms, AtomicMeasure, MomentTable};
    use crate::ortho::{orthonormalize, DEFAULT_RANK_TOL};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle_table(max_degree: usize) -> MomentTable {
        let mut entries = Vec::new();
        for j in 0..=max_degree {
            for k in 0..=max_degree - j {
                let v = if j == k { 1.0 } else { 0.0 };
                entries.push((j, k, c(v, 0.0)));
            }
        }
        MomentTable::from_entries(max_degree, &entries).unwrap()
    }

    fn ngon_table(n: usize, max_degree: usize) -> MomentTable {
        let mut entries = Vec::new();
        for j in 0..=max_degree {
            for k in 0..=max_degree - j {
                let v = if j % n == k % n { 1.0 } else { 0.0 };
                entries.push((j, k, c(v, 0.0)));
            }
        }
        MomentTable::from_entries(max_degree, &entries).unwrap()
    }

    fn basis_of(table: &MomentTable, d: usize) -> OrthoBasis {
        orthonormalize(table, d, DEFAULT_RANK_TOL)
            .unwrap()
            .into_basis()
            .unwrap()
    }

    fn quadrature_pipeline(table: &MomentTable, d: usize) -> Result<Cubature> {
        let basis = basis_of(table, d);
        let h = build_hessenberg(table, &basis, d).unwrap();
        normal_quadrature(&h, &basis, table, DEFAULT_NORMAL_TOL, DEFAULT_WEIGHT_TOL)
    }

    #[test]
    fn single_atom_recovers_point_mass() {
        let measure = AtomicMeasure::new(vec![(c(0.3, -0.4), 2.5)]).unwrap();
        let table = moments_from_atoms(&measure, 2);
        let cub = quadrature_pipeline(&table, 0).unwrap();
        assert_eq!(cub.len(), 1);
        assert!((cub.nodes[0] - c(0.3, -0.4)).norm() < 1e-14);
        assert!((cub.weights[0] - 2.5).abs() < 1e-14);
        assert!(match_atoms(&cub, &measure) < 1e-13);
    }

    #[test]
    fn ngon_quadrature_hits_roots_of_unity() {
        let table = ngon_table(5, 10);
        let cub = quadrature_pipeline(&table, 4).unwrap();
        assert_eq!(cub.len(), 5);
        let roots = AtomicMeasure::new(
            (0..5)
                .map(|k| {
                    let theta = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                    (c(theta.cos(), theta.sin()), 0.2)
                })
                .collect(),
        )
        .unwrap();
        assert!(match_atoms(&cub, &roots) < 1e-9);
        assert!((cub.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip_reproduces_atoms_and_moments() {
        let measure = AtomicMeasure::new(vec![
            (c(0.7, 0.0), 1.0),
            (c(0.0, 0.7), 0.8),
            (c(-0.6, 0.1), 1.3),
            (c(0.1, -0.65), 0.6),
        ])
        .unwrap();
        let table = moments_from_atoms(&measure, 8);
        let cub = quadrature_pipeline(&table, 3).unwrap();
        assert_eq!(cub.len(), 4);
        assert!(match_atoms(&cub, &measure) < 1e-6);

        let m_norm = measure
            .atoms()
            .iter()
            .map(|(z, _)| z.norm())
            .fold(0.0, f64::max);
        for z in &cub.nodes {
            assert!(z.norm() <= m_norm + 1e-8);
        }

        let report = verify_exactness(&cub, &table, DEFAULT_EXACTNESS_TOL).unwrap();
        assert!(report.pass);
        assert!(report.max_residual < 1e-9);
        let mass = report
            .residuals
            .iter()
            .find(|p| p.j == 0 && p.k == 0)
            .unwrap();
        assert!(mass.residual < 1e-12);
    }

    #[test]
    fn certificate_gate_rejects_arclength_measure() {
        let table = circle_table(8);
        let basis = basis_of(&table, 3);
        let h = build_hessenberg(&table, &basis, 3).unwrap();
        let err = normal_quadrature(&h, &basis, &table, DEFAULT_NORMAL_TOL, DEFAULT_WEIGHT_TOL)
            .unwrap_err();
        match err {
            Error::CertificateFailed { defect, .. } => {
                assert!((defect - 1.0).abs() < 1e-10);
            }
            other => panic!("expected CertificateFailed, got {other:?}"),
        }
        // Forcing past the gate still cannot diagonalize a Jordan block.
        let forced =
            normal_quadrature_unchecked(&h, &basis, &table, DEFAULT_NORMAL_TOL, DEFAULT_WEIGHT_TOL);
        assert!(matches!(forced, Err(Error::SpectralResidual { .. })));
    }

    #[test]
    fn false_gaussian_claim_fails_verification() {
        let cub = Cubature::new(vec![c(0.0, 0.0)], vec![1.0], Contract::Gaussian { d: 1 }).unwrap();
        let table = circle_table(3);
        let report = verify_exactness(&cub, &table, DEFAULT_EXACTNESS_TOL).unwrap();
        assert!(!report.pass);
        let corner = report
            .residuals
            .iter()
            .find(|p| p.j == 1 && p.k == 1)
            .unwrap();
        assert!((corner.residual - 1.0).abs() < 1e-15);
    }

    #[test]
    fn harmonic_grid_checks_only_pure_powers() {
        let roots: Vec<Complex64> = (0..3)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                c(theta.cos(), theta.sin())
            })
            .collect();
        let weights = vec![1.0 / 3.0; 3];
        let table = circle_table(6);

        let good = Cubature::new(
            roots.clone(),
            weights.clone(),
            Contract::Harmonic { d: 2, radius: 1.0 },
        )
        .unwrap();
        assert!(verify_exactness(&good, &table, DEFAULT_EXACTNESS_TOL).unwrap().pass);

        // At degree 3 the grid reaches z^3, which the cube roots sum to one
        // instead of zero.
        let overdrawn =
            Cubature::new(roots, weights, Contract::Harmonic { d: 3, radius: 1.0 }).unwrap();
        let report = verify_exactness(&overdrawn, &table, DEFAULT_EXACTNESS_TOL).unwrap();
        assert!(!report.pass);
        assert!((report.max_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn match_atoms_is_permutation_invariant() {
        let reference = AtomicMeasure::new(vec![
            (c(0.5, 0.2), 1.0),
            (c(-0.4, 0.1), 0.5),
            (c(0.0, -0.6), 0.8),
        ])
        .unwrap();
        let cub = Cubature::new(
            vec![c(0.0, -0.6), c(0.5, 0.2), c(-0.4, 0.1)],
            vec![0.8, 1.0, 0.5],
            Contract::Gaussian { d: 2 },
        )
        .unwrap();
        assert!(match_atoms(&cub, &reference) < 1e-15);

        let shifted = Cubature::new(
            vec![c(0.0, -0.6 + 1e-7), c(0.5, 0.2), c(-0.4, 0.1)],
            vec![0.8, 1.0, 0.5 + 2e-8],
            Contract::Gaussian { d: 2 },
        )
        .unwrap();
        let dist = match_atoms(&shifted, &reference);
        assert!(dist > 1e-8 && dist < 2e-7);

        let short = Cubature::new(
            vec![c(0.5, 0.2)],
            vec![1.0],
            Contract::Gaussian { d: 2 },
        )
        .unwrap();
        assert!(match_atoms(&short, &reference).is_infinite());
    }

    #[test]
    fn greedy_mismatch_is_repaired_by_search() {
        // Greedy pairs the first node with the closer reference atom, forcing
        // the second node onto the far one; the optimal bijection swaps them.
        let reference = AtomicMeasure::new(vec![
            (c(0.0, 0.0), 1.0),
            (c(0.1, 0.0), 1.0),
        ])
        .unwrap();
        let cub = Cubature::new(
            vec![c(0.09, 0.0), c(0.2, 0.0)],
            vec![1.0, 1.0],
            Contract::Gaussian { d: 1 },
        )
        .unwrap();
        let dist = match_atoms(&cub, &reference);
        assert!((dist - 0.1).abs() < 1e-12, "distance {dist}");
    }

    #[test]
    fn json_schema_and_round_trip() {
        let cub = Cubature::new(
            vec![c(0.25, -0.5), c(-0.125, 0.0625)],
            vec![0.75, 1.5],
            Contract::Harmonic { d: 1, radius: 0.5590169943749475 },
        )
        .unwrap();
        let path = std::env::temp_dir().join(format!("cubature_rt_{}.json", std::process::id()));
        cub.save(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["contract"]["kind"], "harmonic");
        assert_eq!(value["contract"]["d"], 1);
        assert_eq!(value["nodes"][0]["re"], 0.25);
        assert_eq!(value["nodes"][1]["im"], 0.0625);
        assert_eq!(value["weights"][1], 1.5);

        let back = Cubature::load(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(back.contract, cub.contract);
        assert_eq!(back.nodes, cub.nodes);
        assert_eq!(back.weights, cub.weights);
    }

    #[test]
    fn construction_rejects_malformed_data() {
        let bad_weight = Cubature::new(
            vec![c(0.1, 0.0)],
            vec![-0.5],
            Contract::Gaussian { d: 0 },
        );
        assert!(matches!(bad_weight, Err(Error::NonpositiveWeight { index: 0, .. })));

        let overfull = Cubature::new(
            vec![c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0)],
            vec![1.0, 1.0, 1.0],
            Contract::Gaussian { d: 1 },
        );
        assert!(matches!(overfull, Err(Error::InvalidParameter { .. })));

        let ragged = Cubature::new(
            vec![c(0.1, 0.0)],
            vec![1.0, 2.0],
            Contract::Gaussian { d: 1 },
        );
        assert!(matches!(ragged, Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn subspace_quadrature_on_monomial_span_recovers_atoms() {
        let measure = AtomicMeasure::new(vec![
            (c(0.6, 0.1), 1.0),
            (c(-0.2, 0.5), 0.7),
            (c(0.1, -0.55), 1.2),
        ])
        .unwrap();
        let table = moments_from_atoms(&measure, 6);
        let span = vec![
            vec![c(1.0, 0.0)],
            vec![Complex64::ZERO, c(1.0, 0.0)],
            vec![Complex64::ZERO, Complex64::ZERO, c(1.0, 0.0)],
        ];
        let comp = compress_to_subspace(&table, &span, DEFAULT_RANK_TOL).unwrap();
        let quad = subspace_quadrature(&comp, DEFAULT_WEIGHT_TOL).unwrap();
        assert!(quad.spectral_residual < 1e-10);
        assert_eq!(quad.nodes.len(), 3);
        // The span's first generator is the constant one, so the induced
        // weights coincide with the atom weights.
        let as_cub = Cubature::new(
            quad.nodes.clone(),
            quad.weights.clone(),
            Contract::Gaussian { d: 2 },
        )
        .unwrap();
        assert!(match_atoms(&as_cub, &measure) < 1e-8);
    }

    #[test]
    fn merge_pools_clusters_and_drops_dust() {
        let lambda = vec![c(1.0, 0.0), c(1.0, 1e-12), c(-1.0, 0.0), c(0.4, 0.4)];
        let raw = vec![0.3, 0.2, 0.5, 1e-15];
        let (nodes, weights) = merge_and_prune(&lambda, &raw, 1e-9, 1e-12);
        assert_eq!(nodes.len(), 2);
        assert!((weights[0] - 0.5).abs() < 1e-15);
        assert!((weights[1] - 0.5).abs() < 1e-15);
        assert!((nodes[0] - c(1.0, 0.4e-12)).norm() < 1e-13);
        assert!((nodes[1] - c(-1.0, 0.0)).norm() == 0.0);
    }
}
