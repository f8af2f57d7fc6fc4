//! The file formats end to end: write a moment table and an atom sidecar to
//! disk, reload both, build a cubature, store it, and check the stored rule
//! against the stored moments. Everything the command line does is these
//! five calls.

use std::fs::File;

use moment_cubature::cubature::{verify_exactness, Cubature, DEFAULT_WEIGHT_TOL};
use moment_cubature::dilation::harmonic_cubature;
use moment_cubature::fixtures::random_atoms;
use moment_cubature::moments::{moments_from_atoms, AtomicMeasure, MomentTable};

fn main() {
    let dir = std::env::temp_dir().join("moment-cubature-example");
    std::fs::create_dir_all(&dir).expect("temp dir");

    let measure = random_atoms(5, 9, 1.0).expect("atoms fit in the disk");
    let table = moments_from_atoms(&measure, 8);

    let moments_path = dir.join("moments.json");
    let atoms_path = dir.join("moments.atoms.json");
    table.save(File::create(&moments_path).expect("create")).expect("serialize");
    measure.save(File::create(&atoms_path).expect("create")).expect("serialize");
    println!("wrote {}", moments_path.display());
    println!("wrote {}", atoms_path.display());

    let table = MomentTable::load(File::open(&moments_path).expect("open")).expect("parse");
    let measure = AtomicMeasure::load(File::open(&atoms_path).expect("open")).expect("parse");
    println!(
        "reloaded table of degree {} and {} atoms",
        table.max_total_degree(),
        measure.len(),
    );

    let cub = harmonic_cubature(&table, 3, DEFAULT_WEIGHT_TOL).expect("construction");
    let cubature_path = dir.join("cubature.json");
    cub.save(&cubature_path).expect("serialize");
    println!("wrote {} ({} nodes)", cubature_path.display(), cub.len());

    let cub = Cubature::load(&cubature_path).expect("parse");
    let ex = verify_exactness(&cub, &table, 1e-7).expect("grid fits");
    println!(
        "stored rule vs stored moments: residual {:.3e}, pass: {}",
        ex.max_residual, ex.pass,
    );
}
