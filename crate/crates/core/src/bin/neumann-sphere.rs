use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use neumann_sphere::fem::{CapSpec, DomainSpec};
use neumann_sphere::radial::RadialDensity;
use neumann_sphere::verify::{self, ExperimentConfig, Report};
use neumann_sphere::{Error, Result, Tolerances};

#[derive(Parser)]
#[command(name = "neumann-sphere", version, about = "Neumann eigenvalues on spherical domains and densities")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Dimension n of S^n.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Icosphere level of the fine FEM mesh.
    #[arg(long, global = true, default_value_t = 5)]
    level: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random trials (default depends on the command).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Lattice size of the fold-pair searches.
    #[arg(long, global = true, default_value_t = 32)]
    resolution: usize,
    /// Directory for CSV, JSON and SVG outputs.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file overriding any subset of the tolerances.
    #[arg(long, global = true)]
    tol_file: Option<PathBuf>,
}

#[derive(Args)]
struct DomainArgs {
    /// Domain JSON file.
    #[arg(long, conflicts_with = "cap")]
    domain: Option<PathBuf>,
    /// Cap as "x,y,z,r"; repeat for a union.
    #[arg(long)]
    cap: Vec<String>,
    /// Use the complement of the union.
    #[arg(long)]
    complement: bool,
}

#[derive(Subcommand)]
enum Command {
    /// mu_1 of a geodesic ball by shooting.
    BallEig {
        #[arg(long, conflicts_with = "area")]
        r: Option<f64>,
        #[arg(long)]
        area: Option<f64>,
    },
    /// Spectrum of a radial density (default rho_pl).
    DensityEig {
        #[arg(long)]
        density: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        degree_max: usize,
        /// Compare against the weighted FEM solver.
        #[arg(long)]
        fem_check: bool,
    },
    /// FEM spectrum of a cap-union domain.
    FemEig {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Fold pair, test functions and Rayleigh quotients on a domain.
    FoldDemo {
        #[command(flatten)]
        domain: DomainArgs,
        /// Also run the zero census of the ball-pair field.
        #[arg(long)]
        census: bool,
    },
    VerifyThm12,
    VerifyCor13,
    VerifyHarmonic,
    ReproduceCounterexample {
        #[arg(long)]
        fem_check: bool,
    },
    /// mu_1 of caps across (0, 4 pi); asserts nothing.
    ExploreQ2 {
        #[arg(long, default_value_t = 24)]
        points: usize,
    },
}

fn parse_cap(s: &str) -> Result<CapSpec> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|e| Error::Domain(format!("cap {s:?}: {e}")))?;
    let [x, y, z, r] = v[..] else {
        return Err(Error::Domain(format!("cap {s:?} needs four numbers x,y,z,r")));
    };
    let n = (x * x + y * y + z * z).sqrt();
    CapSpec::new([x / n, y / n, z / n], r)
}

fn domain(d: &DomainArgs) -> Result<DomainSpec> {
    let spec = match &d.domain {
        Some(p) => DomainSpec::from_json_file(p)?,
        None if d.cap.is_empty() => DomainSpec::cap([0.0, 0.0, 1.0], 1.0)?,
        None => DomainSpec::union_of(d.cap.iter().map(|s| parse_cap(s)).collect::<Result<_>>()?),
    };
    Ok(if d.complement { spec.complemented() } else { spec })
}

fn run(cli: Cli) -> Result<Report> {
    let c = &cli.common;
    let trials = |dflt: usize| c.trials.unwrap_or(dflt);
    let tol = match &c.tol_file {
        Some(p) => Tolerances::from_json_file(p)?,
        None => Tolerances::default(),
    };
    let mut cfg = ExperimentConfig { n: c.n, level: c.level, resolution: c.resolution, seed: c.seed, trials: 0, out: c.out.clone(), tol };
    match &cli.command {
        Command::VerifyThm12 => cfg.trials = trials(25),
        Command::VerifyCor13 => cfg.trials = trials(15),
        Command::VerifyHarmonic => {
            cfg.trials = trials(10);
            cfg.n = 3;
        }
        _ => cfg.trials = trials(1),
    }
    cfg.validate()?;
    match cli.command {
        Command::BallEig { r, area } => verify::cmd_ball_eig(&cfg, r, area),
        Command::DensityEig { density, k, degree_max, fem_check } => {
            let rho = match density {
                Some(p) => RadialDensity::from_json_file(p)?,
                None => RadialDensity::rho_pl(),
            };
            verify::cmd_density_eig(&cfg, &rho, k, degree_max, fem_check)
        }
        Command::FemEig { domain: d, k } => verify::cmd_fem_eig(&cfg, &domain(&d)?, k),
        Command::FoldDemo { domain: d, census } => verify::cmd_fold_demo(&cfg, &domain(&d)?, census),
        Command::VerifyThm12 => verify::cmd_verify_thm12(&cfg),
        Command::VerifyCor13 => verify::cmd_verify_cor13(&cfg),
        Command::VerifyHarmonic => verify::cmd_verify_harmonic(&cfg),
        Command::ReproduceCounterexample { fem_check } => verify::cmd_reproduce_counterexample(&cfg, fem_check),
        Command::ExploreQ2 { points } => verify::cmd_explore_q2(&cfg, points),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(rep) => {
            for n in &rep.notes {
                println!("{n}");
            }
            for r in &rep.records {
                println!("{}", r.summary());
            }
            for p in &rep.outputs {
                println!("wrote {}", p.display());
            }
            let failed = rep.records.iter().filter(|r| !r.passed()).count();
            println!("{}: {} record(s), {failed} failed", rep.command, rep.records.len());
            if rep.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
