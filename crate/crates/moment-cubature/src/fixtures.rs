//! Closed-form example moment tables and the randomized atomic oracle used
//! as ground truth throughout the test suites.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{moments_from_atoms, AtomicMeasure, MomentTable};

/// Placement attempts per atom before separation is declared unachievable.
const PLACEMENT_ATTEMPTS: usize = 1000;

/// The named moment-data generators addressable from the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixtureKind {
    CircleArclength,
    Ngon { n: usize },
    Dirichlet { a: f64 },
    RandomAtoms { count: usize, seed: u64, disk_radius: f64 },
}

/// A fixture choice together with the table degree to generate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub kind: FixtureKind,
    pub degree: usize,
}

impl FixtureSpec {
    /// Builds the moment table; atomic fixtures also return their atoms so
    /// callers can keep the oracle next to the table.
    pub fn build(&self) -> Result<(MomentTable, Option<AtomicMeasure>)> {
        match self.kind {
            FixtureKind::CircleArclength => Ok((circle_arclength(self.degree), None)),
            FixtureKind::Ngon { n } => Ok((ngon(n, self.degree)?, None)),
            FixtureKind::Dirichlet { a } => Ok((dirichlet_interval(a, self.degree)?, None)),
            FixtureKind::RandomAtoms { count, seed, disk_radius } => {
                let measure = random_atoms(count, seed, disk_radius)?;
                let table = moments_from_atoms(&measure, self.degree);
                Ok((table, Some(measure)))
            }
        }
    }
}

/// Arc-length moments on the unit circle: s_jk = 1 exactly when j = k.
pub fn circle_arclength(max_degree: usize) -> MomentTable {
    let mut entries = Vec::new();
    for j in 0..=max_degree {
        for k in 0..=max_degree - j {
            let v = if j == k { 1.0 } else { 0.0 };
            entries.push((j, k, Complex64::new(v, 0.0)));
        }
    }
    MomentTable::from_entries(max_degree, &entries).expect("diagonal table is valid")
}

/// Uniform unit mass on the vertices of the regular n-gon inscribed in the
/// unit circle: s_jk = 1 exactly when j = k modulo n. The congruence keeps
/// every entry an exact integer.
pub fn ngon(n: usize, max_degree: usize) -> Result<MomentTable> {
    if n < 3 {
        return Err(Error::InvalidParameter {
            what: format!("n-gon needs at least 3 vertices, got {n}"),
        });
    }
    let mut entries = Vec::new();
    for j in 0..=max_degree {
        for k in 0..=max_degree - j {
            let v = if j % n == k % n { 1.0 } else { 0.0 };
            entries.push((j, k, Complex64::new(v, 0.0)));
        }
    }
    Ok(MomentTable::from_entries(max_degree, &entries).expect("congruence table is valid"))
}

/// Monomial integral over [-a, a]: zero for odd or negative powers.
fn interval_integral(a: f64, m: isize) -> f64 {
    if m < 0 || m % 2 != 0 {
        0.0
    } else {
        2.0 * a.powi(m as i32 + 1) / (m as f64 + 1.0)
    }
}

/// Moments of the Dirichlet inner product on [-a, a]: the bilinear form
/// pairing both values and first derivatives. s_jk = I(j+k) + jk I(j+k-2)
/// with I the monomial interval integral; the table is real and symmetric.
pub fn dirichlet_interval(a: f64, max_degree: usize) -> Result<MomentTable> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter {
            what: format!("interval half-length must be positive and finite, got {a}"),
        });
    }
    let mut entries = Vec::new();
    for j in 0..=max_degree {
        for k in 0..=max_degree - j {
            let m = (j + k) as isize;
            let v = interval_integral(a, m)
                + (j as f64) * (k as f64) * interval_integral(a, m - 2);
            entries.push((j, k, Complex64::new(v, 0.0)));
        }
    }
    Ok(MomentTable::from_entries(max_degree, &entries).expect("dirichlet table is valid"))
}

/// Deterministic atomic oracle: `count` atoms in the disk of the given
/// radius with pairwise separation at least disk_radius / (10 count) and
/// weights in [0.1, 1].
pub fn random_atoms(count: usize, seed: u64, disk_radius: f64) -> Result<AtomicMeasure> {
    if count < 1 {
        return Err(Error::InvalidParameter {
            what: "atom count must be at least 1".into(),
        });
    }
    if !(disk_radius > 0.0) || !disk_radius.is_finite() {
        return Err(Error::InvalidParameter {
            what: format!("disk radius must be positive and finite, got {disk_radius}"),
        });
    }
    let separation = disk_radius / (10.0 * count as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut atoms: Vec<(Complex64, f64)> = Vec::with_capacity(count);
    'next_atom: for _ in 0..count {
        for _ in 0..PLACEMENT_ATTEMPTS {
            // Area-uniform draw in the disk.
            let r = disk_radius * rng.gen::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.gen::<f64>();
            let z = Complex64::from_polar(r, theta);
            if atoms.iter().all(|(existing, _)| (z - existing).norm() >= separation) {
                let weight = rng.gen_range(0.1..=1.0);
                atoms.push((z, weight));
                continue 'next_atom;
            }
        }
        return Err(Error::SeparationUnachievable { count, separation, disk_radius });
    }
    AtomicMeasure::new(atoms)
}

/// Coefficient rows spanning the even polynomials vanishing at both ends of
/// [-a, a]: row m encodes (z^2 - a^2) z^{2m}.
pub fn dirichlet_even_span(a: f64, len: usize) -> Vec<Vec<Complex64>> {
    (0..len)
        .map(|m| {
            let mut row = vec![Complex64::ZERO; 2 * m + 3];
            row[2 * m] = Complex64::new(-a * a, 0.0);
            row[2 * m + 2] = Complex64::new(1.0, 0.0);
            row
        })
        .collect()
}

/// Coefficient rows spanning the odd polynomials vanishing at both ends of
/// [-a, a]: row m encodes (z^2 - a^2) z^{2m+1}.
pub fn dirichlet_odd_span(a: f64, len: usize) -> Vec<Vec<Complex64>> {
    (0..len)
        .map(|m| {
            let mut row = vec![Complex64::ZERO; 2 * m + 4];
            row[2 * m + 1] = Complex64::new(-a * a, 0.0);
            row[2 * m + 3] = Complex64::new(1.0, 0.0);
            row
        })
        .collect()
}
