//! `copu` — coherence and purity of qubit channels.
//!
//! Exit codes: 0 success, 2 input error, 3 completely-positive violation
//! verdict (analyze), 4 verification failure.

use clap::{Parser, Subcommand};
use copu_cli::{boundary, csvio, report, svg, verify};
use copu_core::chanspec::ChannelSpecDoc;
use copu_core::explore::sample_family;
use copu_core::families::Family;
use copu_core::mat::Tolerance;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "copu",
    version,
    about = "Coherence-purity analysis of qubit channels via the Choi matrix"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for all randomized commands (env: COPU_SEED)
    #[arg(long, global = true, env = "COPU_SEED", default_value_t = 42)]
    seed: u64,

    /// Worker threads; changes wall time only, never output bytes
    /// (env: COPU_JOBS)
    #[arg(long, global = true, env = "COPU_JOBS")]
    jobs: Option<usize>,

    /// Positive-semidefinite / trace-preservation tolerance
    /// (env: COPU_TOL)
    #[arg(long, global = true, env = "COPU_TOL", default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a channel-spec JSON document
    Analyze {
        /// Path to the channel-spec file
        spec: PathBuf,
        /// Emit the report as JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Draw coherence-purity samples from a channel family
    Sample {
        /// Family name (e.g. unital_random, io, cmc, amplitude_damping)
        #[arg(long)]
        family: String,
        /// Number of samples
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the coherence boundary curve of a family
    Boundary {
        /// Family name (decoherence, depolarizing, amplitude_damping,
        /// phase_flip, gio, unital_random, homogenization)
        #[arg(long)]
        family: String,
        /// Purity bins along the curve
        #[arg(long, default_value_t = 64)]
        bins: usize,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Homogenization decay time T1
        #[arg(long, default_value_t = 1.0)]
        t1: f64,
        /// Homogenization decoherence time T2
        #[arg(long, default_value_t = 2.0)]
        t2: f64,
        /// Homogenization fixed-point purity ω
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
    },
    /// Run a verification suite ("all" or a suite name; see --list)
    Verify {
        /// Suite name, or "all"
        #[arg(default_value = "all")]
        suite: String,
        /// List suite names and exit
        #[arg(long)]
        list: bool,
    },
    /// Plot sample/boundary CSV files into an SVG
    Plot {
        /// Input CSV files (outputs of sample or boundary)
        inputs: Vec<PathBuf>,
        /// Output SVG path
        #[arg(long)]
        out: PathBuf,
    },
}

const EXIT_INPUT: u8 = 2;
const EXIT_NOT_CP: u8 = 3;
const EXIT_VERIFY: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let tol = Tolerance::with_eps(cli.tol).map_err(anyhow::Error::new)?;
    let jobs = cli.jobs.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });

    match cli.command {
        Command::Analyze { spec, json } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", spec.display()))?;
            let doc = ChannelSpecDoc::parse(&text)?;
            let out = report::analyze(&doc, &tol)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json)?);
            } else {
                print!("{}", out.text);
            }
            Ok(if out.completely_positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NOT_CP)
            })
        }
        Command::Sample { family, n, out } => {
            let family: Family = family
                .parse()
                .map_err(|e| anyhow::anyhow!("{e}; known families: {}", family_list()))?;
            let set = sample_family(family, n, cli.seed, jobs, &tol)?;
            let csv = csvio::samples_to_csv(&set.samples);
            emit(out.as_deref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Boundary {
            family,
            bins,
            out,
            t1,
            t2,
            omega,
        } => {
            let family: Family = family
                .parse()
                .map_err(|e| anyhow::anyhow!("{e}; known families: {}", family_list()))?;
            let curve = if family == Family::Homogenization {
                boundary::homogenization_trajectory(t1, t2, omega, bins.max(2), &tol)?
            } else {
                boundary::boundary(family, bins, jobs)?
            };
            emit(out.as_deref(), &csvio::curve_to_csv(&curve))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, list } => {
            if list {
                for name in verify::suite_names() {
                    println!("{name}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let ctx = verify::VerifyCtx {
                seed: cli.seed,
                jobs,
                tol,
            };
            let Some(suites) = verify::run(&suite, &ctx) else {
                anyhow::bail!(
                    "unknown suite {suite:?}; available: all, {}",
                    verify::suite_names().join(", ")
                );
            };
            let (_, failed, _) = verify::print_report(&suites);
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            })
        }
        Command::Plot { inputs, out } => {
            if inputs.is_empty() {
                anyhow::bail!("plot needs at least one input CSV");
            }
            let mut series = Vec::new();
            for path in &inputs {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
                let stem = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                series.push(csvio::parse_csv(&text, &stem)?);
            }
            csvio::write_atomic(&out, &svg::render(&series))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit(out: Option<&std::path::Path>, contents: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => csvio::write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn family_list() -> String {
    Family::all()
        .iter()
        .map(|f| f.name())
        .collect::<Vec<_>>()
        .join(", ")
}
