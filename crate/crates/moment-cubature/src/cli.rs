//! Command-line pipeline over the library: fixture generation, normality
//! diagnosis, cubature construction, and exactness verification. Reports go
//! to standard output as JSON; human status lines go to standard error.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cubature::{
    normal_quadrature_unchecked, verify_exactness, Contract, Cubature, ExactnessReport,
    DEFAULT_EXACTNESS_TOL, DEFAULT_WEIGHT_TOL,
};
use crate::dilation::harmonic_cubature;
use crate::error::{Error, Result};
use crate::fixtures::{FixtureKind, FixtureSpec};
use crate::hessenberg::{
    build_hessenberg, self_commutator, sigma_form, CommutatorReport, DEFAULT_NORMAL_TOL,
};
use crate::moments::MomentTable;
use crate::ortho::{orthonormalize, DEFAULT_RANK_TOL};
use crate::report::{
    CertificateSummary, CubatureSummary, DiagnosticsSummary, ExactnessSummary, PipelineReport,
    ToleranceSet,
};

#[derive(Parser)]
#[command(
    name = "moment-cubature",
    version,
    about = "Cubature construction and certification from truncated complex moment data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named example moment table as JSON
    Fixture(FixtureArgs),
    /// Report the normality certificate of the compressed multiplier
    Diagnose(DiagnoseArgs),
    /// Construct a Gaussian-type or harmonic cubature and verify it
    Quadrature(QuadratureArgs),
    /// Check a cubature file against a moment table
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FixtureArgs {
    /// One of: circle, ngon, dirichlet, atoms
    name: String,
    /// Max total degree of the generated table
    #[arg(long)]
    degree: usize,
    /// Output path for the moment JSON
    #[arg(long)]
    out: PathBuf,
    /// Vertex count (ngon only)
    #[arg(long)]
    n: Option<usize>,
    /// Interval half-length (dirichlet only)
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Atom count (atoms only)
    #[arg(long)]
    count: Option<usize>,
    /// Seed governing all randomness (atoms only)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Disk radius for atom placement (atoms only)
    #[arg(long, default_value_t = 1.0)]
    disk_radius: f64,
}

#[derive(Args)]
struct DiagnoseArgs {
    /// Moment table JSON
    #[arg(long)]
    moments: PathBuf,
    /// Compression degree
    #[arg(long)]
    d: usize,
    /// Relative certificate tolerance
    #[arg(long, default_value_t = DEFAULT_NORMAL_TOL)]
    normal_tol: f64,
    /// Relative Gram pivot cutoff
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Gaussian,
    Harmonic,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Gaussian => "gaussian",
            Mode::Harmonic => "harmonic",
        }
    }
}

#[derive(Args)]
struct QuadratureArgs {
    /// Moment table JSON
    #[arg(long)]
    moments: PathBuf,
    /// Construction degree
    #[arg(long)]
    d: usize,
    /// Which construction to run
    #[arg(long, value_enum)]
    mode: Mode,
    /// Output path for the cubature JSON
    #[arg(long)]
    out: PathBuf,
    /// Emit the gaussian cubature even when the certificate fails
    #[arg(long)]
    force: bool,
    /// Relative certificate tolerance
    #[arg(long, default_value_t = DEFAULT_NORMAL_TOL)]
    normal_tol: f64,
    /// Relative Gram pivot cutoff
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    /// Relative weight pruning threshold
    #[arg(long, default_value_t = DEFAULT_WEIGHT_TOL)]
    weight_tol: f64,
    /// Relative exactness tolerance for the embedded verification
    #[arg(long, default_value_t = DEFAULT_EXACTNESS_TOL)]
    exactness_tol: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Moment table JSON
    #[arg(long)]
    moments: PathBuf,
    /// Cubature JSON to check
    #[arg(long)]
    cubature: PathBuf,
    /// Fail (exit 2) unless the cubature claims this contract kind
    #[arg(long, value_enum)]
    expect_kind: Option<Mode>,
    /// Relative exactness tolerance
    #[arg(long, default_value_t = DEFAULT_EXACTNESS_TOL)]
    exactness_tol: f64,
}

/// Parses arguments, dispatches, and maps errors onto the exit-code
/// contract: 0 pass, 1 certificate or verification failure, 2 usage, 3 I/O.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Fixture(args) => cmd_fixture(args),
        Command::Diagnose(args) => cmd_diagnose(args),
        Command::Quadrature(args) => cmd_quadrature(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn load_table(path: &PathBuf) -> Result<MomentTable> {
    MomentTable::load(BufReader::new(File::open(path)?))
}

fn certificate_summary(report: &CommutatorReport) -> CertificateSummary {
    CertificateSummary {
        passed: report.is_normal,
        commutator_small: report.equivalences.commutator_small,
        det_nonnegative: report.equivalences.det_nonnegative,
        defect_small: report.equivalences.defect_small,
        subspace_invariant: report.equivalences.subspace_invariant,
    }
}

fn cubature_summary(cub: &Cubature) -> CubatureSummary {
    let radius = match cub.contract {
        Contract::Harmonic { radius, .. } => Some(radius),
        Contract::Gaussian { .. } => None,
    };
    CubatureSummary {
        kind: cub.contract.kind_name().to_string(),
        d: cub.contract.degree(),
        radius,
        node_count: cub.len(),
        total_mass: cub.total_mass(),
    }
}

fn exactness_summary(report: &ExactnessReport) -> ExactnessSummary {
    ExactnessSummary {
        pass: report.pass,
        max_residual: report.max_residual,
        threshold: report.threshold,
        residuals: report.residuals.clone(),
    }
}

fn cmd_fixture(args: FixtureArgs) -> Result<i32> {
    let kind = match args.name.as_str() {
        "circle" => FixtureKind::CircleArclength,
        "ngon" => FixtureKind::Ngon {
            n: args.n.ok_or_else(|| Error::InvalidParameter {
                what: "fixture ngon needs --n".into(),
            })?,
        },
        "dirichlet" => FixtureKind::Dirichlet { a: args.a },
        "atoms" => FixtureKind::RandomAtoms {
            count: args.count.ok_or_else(|| Error::InvalidParameter {
                what: "fixture atoms needs --count".into(),
            })?,
            seed: args.seed,
            disk_radius: args.disk_radius,
        },
        other => {
            return Err(Error::InvalidParameter {
                what: format!("unknown fixture '{other}' (circle, ngon, dirichlet, atoms)"),
            })
        }
    };
    let (table, atoms) = FixtureSpec { kind, degree: args.degree }.build()?;
    table.save(BufWriter::new(File::create(&args.out)?))?;
    if let Some(measure) = atoms {
        let sidecar = args.out.with_extension("atoms.json");
        measure.save(BufWriter::new(File::create(&sidecar)?))?;
        eprintln!("wrote {} and {}", args.out.display(), sidecar.display());
    } else {
        eprintln!("wrote {}", args.out.display());
    }
    Ok(0)
}

fn cmd_diagnose(args: DiagnoseArgs) -> Result<i32> {
    let table = load_table(&args.moments)?;
    let basis = orthonormalize(&table, args.d, args.rank_tol)?.into_basis()?;
    let h = build_hessenberg(&table, &basis, args.d)?;
    let commutator = self_commutator(&h, args.normal_tol);
    let sigma = sigma_form(&h);
    let report = PipelineReport {
        input: args.moments.display().to_string(),
        table_degree: table.max_total_degree(),
        d: args.d,
        tolerances: ToleranceSet {
            rank_tol: args.rank_tol,
            normal_tol: args.normal_tol,
            weight_tol: DEFAULT_WEIGHT_TOL,
            exactness_tol: DEFAULT_EXACTNESS_TOL,
        },
        diagnostics: Some(DiagnosticsSummary {
            m_norm: commutator.m_norm,
            defect: h.defect,
            lambda_minus: commutator.lambda_minus,
            defect_sq_bound: commutator.defect_sq_bound,
            congruence_residual: sigma.congruence_residual,
        }),
        certificate: Some(certificate_summary(&commutator)),
        cubature: None,
        exactness: None,
    };
    println!("{}", report.to_json()?);
    Ok(if commutator.is_normal { 0 } else { 1 })
}

fn cmd_quadrature(args: QuadratureArgs) -> Result<i32> {
    let table = load_table(&args.moments)?;
    let tolerances = ToleranceSet {
        rank_tol: args.rank_tol,
        normal_tol: args.normal_tol,
        weight_tol: args.weight_tol,
        exactness_tol: args.exactness_tol,
    };
    let mut report = PipelineReport {
        input: args.moments.display().to_string(),
        table_degree: table.max_total_degree(),
        d: args.d,
        tolerances,
        diagnostics: None,
        certificate: None,
        cubature: None,
        exactness: None,
    };
    match args.mode {
        Mode::Gaussian => {
            let basis = orthonormalize(&table, args.d, args.rank_tol)?.into_basis()?;
            let h = build_hessenberg(&table, &basis, args.d)?;
            let commutator = self_commutator(&h, args.normal_tol);
            let sigma = sigma_form(&h);
            report.diagnostics = Some(DiagnosticsSummary {
                m_norm: commutator.m_norm,
                defect: h.defect,
                lambda_minus: commutator.lambda_minus,
                defect_sq_bound: commutator.defect_sq_bound,
                congruence_residual: sigma.congruence_residual,
            });
            report.certificate = Some(certificate_summary(&commutator));
            if !commutator.is_normal && !args.force {
                println!("{}", report.to_json()?);
                eprintln!(
                    "certificate failed (lambda_minus {:.3e}); no cubature written, \
                     rerun with --force to emit anyway",
                    commutator.lambda_minus
                );
                return Ok(1);
            }
            let cub =
                normal_quadrature_unchecked(&h, &basis, &table, args.normal_tol, args.weight_tol)?;
            let exactness = verify_exactness(&cub, &table, args.exactness_tol)?;
            cub.save(&args.out)?;
            eprintln!("wrote {}", args.out.display());
            report.cubature = Some(cubature_summary(&cub));
            report.exactness = Some(exactness_summary(&exactness));
            println!("{}", report.to_json()?);
            Ok(if commutator.is_normal && exactness.pass { 0 } else { 1 })
        }
        Mode::Harmonic => {
            let cub = harmonic_cubature(&table, args.d, args.weight_tol)?;
            let exactness = verify_exactness(&cub, &table, args.exactness_tol)?;
            cub.save(&args.out)?;
            eprintln!("wrote {}", args.out.display());
            report.cubature = Some(cubature_summary(&cub));
            report.exactness = Some(exactness_summary(&exactness));
            println!("{}", report.to_json()?);
            Ok(if exactness.pass { 0 } else { 1 })
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let table = load_table(&args.moments)?;
    let cub = Cubature::load(&args.cubature)?;
    if let Some(expected) = args.expect_kind {
        let found = cub.contract.kind_name();
        if expected.name() != found {
            return Err(Error::ContractMismatch {
                expected: expected.name().to_string(),
                found: found.to_string(),
            });
        }
    }
    let exactness = verify_exactness(&cub, &table, args.exactness_tol)?;
    let report = PipelineReport {
        input: args.moments.display().to_string(),
        table_degree: table.max_total_degree(),
        d: cub.contract.degree(),
        tolerances: ToleranceSet {
            rank_tol: DEFAULT_RANK_TOL,
            normal_tol: DEFAULT_NORMAL_TOL,
            weight_tol: DEFAULT_WEIGHT_TOL,
            exactness_tol: args.exactness_tol,
        },
        diagnostics: None,
        certificate: None,
        cubature: Some(cubature_summary(&cub)),
        exactness: Some(exactness_summary(&exactness)),
    };
    println!("{}", report.to_json()?);
    Ok(if exactness.pass { 0 } else { 1 })
}
