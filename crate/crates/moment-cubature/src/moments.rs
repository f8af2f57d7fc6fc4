//! Truncated moment tables: the values s_{jk} = L(z^j zbar^k) of a positive
//! functional on bivariate polynomials, stored for all j + k <= D.
//!
//! Tables are Hermitian-completed on construction, so s_{kj} == conj(s_{jk})
//! holds machine-exactly afterwards and diagonal entries are exactly real.

use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::{Dd, DdC};
use crate::error::{Error, Result};

/// Relative tolerance for conjugate-symmetry validation of loaded tables.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Hermitian-symmetric table of moments s_{jk} for j + k <= max_total_degree.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    max_total_degree: usize,
    /// Dense storage ordered by total degree t, then by k within each t:
    /// (t,0), (t-1,1), ..., (0,t).
    values: Vec<Complex64>,
}

fn slot(j: usize, k: usize) -> usize {
    let t = j + k;
    t * (t + 1) / 2 + k
}

impl MomentTable {
    /// Builds a table from explicit entries, completing missing conjugate
    /// partners and validating symmetry, coverage, and positivity of s00.
    ///
    /// When both (j,k) and (k,j) are given they must agree under conjugation
    /// within `SYMMETRY_TOL` relative to the largest entry modulus; the value
    /// stored is the representative with j >= k.
    pub fn from_entries(
        max_total_degree: usize,
        entries: &[(usize, usize, Complex64)],
    ) -> Result<Self> {
        let n = (max_total_degree + 1) * (max_total_degree + 2) / 2;
        let mut given: Vec<Option<Complex64>> = vec![None; n];
        let mut scale = 0.0f64;
        for &(j, k, v) in entries {
            if j + k > max_total_degree {
                return Err(Error::IndexBeyondDegree { j, k, max_total_degree });
            }
            let s = slot(j, k);
            if given[s].is_some() {
                return Err(Error::DuplicateEntry { j, k });
            }
            given[s] = Some(v);
            scale = scale.max(v.norm());
        }
        let tol = SYMMETRY_TOL * scale;

        let mut values = vec![Complex64::ZERO; n];
        for hi in 0..=max_total_degree {
            for lo in 0..=hi.min(max_total_degree - hi) {
                let rep = given[slot(hi, lo)];
                let alt = given[slot(lo, hi)];
                let value = match (rep, alt) {
                    (Some(r), Some(a)) => {
                        let deviation = (r - a.conj()).norm();
                        if deviation > tol {
                            return Err(Error::SymmetryViolation {
                                j: hi,
                                k: lo,
                                deviation,
                                tolerance: tol,
                            });
                        }
                        r
                    }
                    (Some(r), None) => r,
                    (None, Some(a)) => a.conj(),
                    (None, None) => return Err(Error::MissingEntry { j: hi, k: lo }),
                };
                if hi == lo {
                    if value.im.abs() > tol {
                        return Err(Error::SymmetryViolation {
                            j: hi,
                            k: lo,
                            deviation: value.im.abs(),
                            tolerance: tol,
                        });
                    }
                    values[slot(hi, lo)] = Complex64::new(value.re, 0.0);
                } else {
                    values[slot(hi, lo)] = value;
                    values[slot(lo, hi)] = value.conj();
                }
            }
        }

        let s00 = values[slot(0, 0)];
        if s00.re <= 0.0 {
            return Err(Error::NonpositiveMass { value: s00.re });
        }
        Ok(MomentTable { max_total_degree, values })
    }

    pub fn max_total_degree(&self) -> usize {
        self.max_total_degree
    }

    /// The moment s_{jk}. Panics if j + k exceeds the table degree; public
    /// operations validate degrees before indexing.
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        assert!(
            j + k <= self.max_total_degree,
            "moment index ({j},{k}) beyond table degree {}",
            self.max_total_degree
        );
        self.values[slot(j, k)]
    }

    pub fn s00(&self) -> f64 {
        self.values[slot(0, 0)].re
    }

    /// Largest entry modulus; the scale for relative residual checks.
    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Reads the JSON interchange format and validates the table.
    pub fn load(reader: impl Read) -> Result<Self> {
        let file: MomentFile = serde_json::from_reader(reader)?;
        let entries: Vec<(usize, usize, Complex64)> = file
            .moments
            .iter()
            .map(|e| (e.j, e.k, Complex64::new(e.re, e.im)))
            .collect();
        MomentTable::from_entries(file.max_total_degree, &entries)
    }

    /// Writes the JSON interchange format, storing one representative per
    /// conjugate pair (the one with j >= k).
    pub fn save(&self, writer: impl Write) -> Result<()> {
        let mut moments = Vec::new();
        for t in 0..=self.max_total_degree {
            for k in 0..=t {
                let j = t - k;
                if j < k {
                    continue;
                }
                let v = self.values[slot(j, k)];
                moments.push(MomentEntry { j, k, re: v.re, im: v.im });
            }
        }
        let file = MomentFile { max_total_degree: self.max_total_degree, moments };
        serde_json::to_writer_pretty(writer, &file)?;
        Ok(())
    }

    /// Sum table of two moment tables over the same degree.
    pub fn add(&self, other: &MomentTable) -> Result<MomentTable> {
        if self.max_total_degree != other.max_total_degree {
            return Err(Error::InvalidParameter {
                what: format!(
                    "cannot add tables of degrees {} and {}",
                    self.max_total_degree, other.max_total_degree
                ),
            });
        }
        let values: Vec<Complex64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(MomentTable { max_total_degree: self.max_total_degree, values })
    }
}

#[derive(Serialize, Deserialize)]
struct MomentFile {
    max_total_degree: usize,
    moments: Vec<MomentEntry>,
}

#[derive(Serialize, Deserialize)]
struct MomentEntry {
    j: usize,
    k: usize,
    re: f64,
    im: f64,
}

/// Finitely many point masses c_m at nodes a_m, all weights strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<(Complex64, f64)>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        for (index, &(_, weight)) in atoms.iter().enumerate() {
            if weight <= 0.0 {
                return Err(Error::NonpositiveWeight { index, weight });
            }
        }
        Ok(AtomicMeasure { atoms })
    }

    pub fn atoms(&self) -> &[(Complex64, f64)] {
        &self.atoms
    }

    /// Atom count; never zero by construction.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn load(reader: impl Read) -> Result<Self> {
        let file: AtomFile = serde_json::from_reader(reader)?;
        AtomicMeasure::new(
            file.atoms
                .iter()
                .map(|a| (Complex64::new(a.re, a.im), a.weight))
                .collect(),
        )
    }

    pub fn save(&self, writer: impl Write) -> Result<()> {
        let file = AtomFile {
            atoms: self
                .atoms
                .iter()
                .map(|&(node, weight)| AtomEntry { re: node.re, im: node.im, weight })
                .collect(),
        };
        serde_json::to_writer_pretty(writer, &file)?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct AtomFile {
    atoms: Vec<AtomEntry>,
}

#[derive(Serialize, Deserialize)]
struct AtomEntry {
    re: f64,
    im: f64,
    weight: f64,
}

/// Moments of an atomic measure: s_{jk} = sum_m c_m a_m^j conj(a_m)^k for all
/// j + k <= max_total_degree. This is the brute-force reference against which
/// every reconstruction is judged.
pub fn moments_from_atoms(measure: &AtomicMeasure, max_total_degree: usize) -> MomentTable {
    let d = max_total_degree;
    let n = (d + 1) * (d + 2) / 2;
    // Only representatives j >= k are accumulated; the mirror entries are
    // filled by exact conjugation afterwards, keeping Hermitian symmetry
    // machine-exact. Accumulation runs in double-double and rounds once at
    // the end: the defect certificate downstream resolves Gram remainders at
    // the f64 noise floor, and a table accumulated in plain f64 buries them.
    let mut acc = vec![DdC::ZERO; n];
    for &(node, weight) in measure.atoms() {
        let z = DdC::from_c64(node);
        let mut powers = Vec::with_capacity(d + 1);
        let mut p = DdC::from_real(Dd::from_f64(1.0));
        for _ in 0..=d {
            powers.push(p);
            p = p.mul(z);
        }
        for j in 0..=d {
            for k in 0..=(d - j).min(j) {
                let term = powers[j].mul_conj(powers[k]).mul_f64(weight);
                acc[slot(j, k)] = acc[slot(j, k)].add(term);
            }
        }
    }
    let mut values = vec![Complex64::ZERO; n];
    for j in 0..=d {
        for k in 0..=(d - j).min(j) {
            values[slot(j, k)] = acc[slot(j, k)].to_c64();
        }
    }
    for j in 0..=d / 2 {
        // The diagonal sums are real up to double-double roundoff; pinned.
        values[slot(j, j)].im = 0.0;
    }
    for j in 1..=d {
        for k in 0..=(d - j).min(j - 1) {
            values[slot(k, j)] = values[slot(j, k)].conj();
        }
    }
    MomentTable { max_total_degree: d, values }
}

/// Gram matrix of the monomials 1, z, ..., z^d in the L-inner product
/// <p,q> = L(p conj(q)): the (j,k) entry is s_{jk}, the matrix against which
/// basis coefficient rows C satisfy C G C* = I.
pub fn gram_matrix(table: &MomentTable, d: usize) -> Result<DMatrix<Complex64>> {
    if 2 * d > table.max_total_degree {
        return Err(Error::InsufficientDegree {
            needed: 2 * d,
            available: table.max_total_degree,
        });
    }
    Ok(DMatrix::from_fn(d + 1, d + 1, |j, k| table.get(j, k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn smallest_valid_table() {
        let t = MomentTable::from_entries(0, &[(0, 0, c(1.0, 0.0))]).unwrap();
        assert_eq!(t.get(0, 0), c(1.0, 0.0));
        assert_eq!(t.max_total_degree(), 0);
    }

    #[test]
    fn hermitian_completion_fills_the_missing_partner() {
        let t = MomentTable::from_entries(
            1,
            &[(0, 0, c(1.0, 0.0)), (1, 0, c(2.0, 1.0))],
        )
        .unwrap();
        assert_eq!(t.get(0, 1), c(2.0, -1.0));
        assert_eq!(t.get(1, 0), c(2.0, 1.0));
    }

    #[test]
    fn conjugate_mismatch_is_rejected() {
        let err = MomentTable::from_entries(
            1,
            &[(0, 0, c(1.0, 0.0)), (1, 0, c(2.0, 1.0)), (0, 1, c(2.0, 1.0))],
        )
        .unwrap_err();
        assert!(matches!(err, Error::SymmetryViolation { j: 1, k: 0, .. }));
    }

    #[test]
    fn duplicate_entries_are_rejected() {
        let err = MomentTable::from_entries(
            1,
            &[(0, 0, c(1.0, 0.0)), (1, 0, c(2.0, 1.0)), (1, 0, c(2.0, 1.0))],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateEntry { j: 1, k: 0 }));
    }

    #[test]
    fn missing_pair_is_rejected() {
        let err =
            MomentTable::from_entries(1, &[(0, 0, c(1.0, 0.0))]).unwrap_err();
        assert!(matches!(err, Error::MissingEntry { j: 1, k: 0 }));
    }

    #[test]
    fn nonpositive_mass_is_rejected() {
        let err = MomentTable::from_entries(0, &[(0, 0, c(0.0, 0.0))]).unwrap_err();
        assert!(matches!(err, Error::NonpositiveMass { .. }));
    }

    #[test]
    fn single_atom_moments_match_direct_evaluation() {
        let m = AtomicMeasure::new(vec![(c(2.0, 1.0), 3.0)]).unwrap();
        let t = moments_from_atoms(&m, 2);
        assert_eq!(t.get(0, 0), c(3.0, 0.0));
        assert_eq!(t.get(1, 0), c(6.0, 3.0));
        assert_eq!(t.get(1, 1), c(15.0, 0.0));
        assert_eq!(t.get(0, 1), c(6.0, -3.0));
    }

    #[test]
    fn fourth_roots_of_unity_concentrate_on_the_mod_four_diagonal() {
        let atoms: Vec<(Complex64, f64)> = (0..4)
            .map(|i| {
                let th = std::f64::consts::FRAC_PI_2 * i as f64;
                (Complex64::from_polar(1.0, th), 0.25)
            })
            .collect();
        let m = AtomicMeasure::new(atoms).unwrap();
        let t = moments_from_atoms(&m, 4);
        for j in 0..=4usize {
            for k in 0..=4 - j {
                let expect = if j % 4 == k % 4 { 1.0 } else { 0.0 };
                assert!(
                    (t.get(j, k) - c(expect, 0.0)).norm() < 1e-14,
                    "s[{j}][{k}] = {}",
                    t.get(j, k)
                );
            }
        }
    }

    #[test]
    fn empty_measure_is_rejected() {
        assert!(matches!(AtomicMeasure::new(vec![]), Err(Error::EmptyMeasure)));
    }

    #[test]
    fn gram_of_single_atom_at_zero() {
        let m = AtomicMeasure::new(vec![(c(0.0, 0.0), 1.0)]).unwrap();
        let t = moments_from_atoms(&m, 2);
        let g = gram_matrix(&t, 1).unwrap();
        assert_eq!(g[(0, 0)], c(1.0, 0.0));
        assert_eq!(g[(0, 1)], c(0.0, 0.0));
        assert_eq!(g[(1, 0)], c(0.0, 0.0));
        assert_eq!(g[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn gram_degree_zero_is_the_mass() {
        let t = MomentTable::from_entries(0, &[(0, 0, c(4.0, 0.0))]).unwrap();
        let g = gram_matrix(&t, 0).unwrap();
        assert_eq!(g[(0, 0)], c(4.0, 0.0));
    }

    #[test]
    fn gram_degree_overflow_is_an_error() {
        let t = MomentTable::from_entries(0, &[(0, 0, c(1.0, 0.0))]).unwrap();
        assert!(matches!(
            gram_matrix(&t, 1),
            Err(Error::InsufficientDegree { needed: 2, available: 0 })
        ));
    }

    #[test]
    fn moments_are_additive_in_the_measure() {
        let a = AtomicMeasure::new(vec![(c(0.5, 0.25), 0.7)]).unwrap();
        let b = AtomicMeasure::new(vec![(c(-0.3, 0.9), 0.4), (c(0.1, -0.2), 1.1)]).unwrap();
        let joint = AtomicMeasure::new(
            a.atoms().iter().chain(b.atoms()).copied().collect(),
        )
        .unwrap();
        let sum = moments_from_atoms(&a, 4).add(&moments_from_atoms(&b, 4)).unwrap();
        let direct = moments_from_atoms(&joint, 4);
        for j in 0..=4usize {
            for k in 0..=4 - j {
                assert!((sum.get(j, k) - direct.get(j, k)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn json_round_trip_preserves_the_table() {
        let m = AtomicMeasure::new(vec![(c(0.4, -0.7), 0.9), (c(-0.2, 0.3), 0.5)]).unwrap();
        let t = moments_from_atoms(&m, 5);
        let mut buf = Vec::new();
        t.save(&mut buf).unwrap();
        let back = MomentTable::load(buf.as_slice()).unwrap();
        assert_eq!(t, back);
    }
}
