use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spherica::builtin::BuiltinPair;
use spherica::gelfand::{compute_spherical_functions, is_gelfand_pair, GelfandPair, SphericalTable};
use spherica::io::{
    spherical_table_csv, Basis, FunctionFile, GroupFile, MultiplierFile, SpectralFile, SphericalTableFile,
};
use spherica::schatten::{spectral_report, DEFAULT_P_GRID};
use spherica::transform::{inverse_sft, transform};
use spherica::verify::{run_suite, SuiteOptions, DEFAULT_TOL, DEFAULT_TRIALS};
use spherica::{build_operator, Convention, Error, GroupOptions};

#[derive(Parser)]
#[command(name = "spherica", version, about = "Spherical harmonic analysis on finite Gelfand pairs")]
struct Cli {
    /// Largest group order to enumerate.
    #[arg(long, global = true, env = "SPHERICA_MAX_ORDER")]
    max_order: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArgs {
    /// Group file (JSON with degree, group_generators, subgroup_generators).
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    group: Option<PathBuf>,

    /// Built-in pair: sym:n, dih:n, cyc:n or full:n.
    #[arg(long)]
    builtin: Option<String>,

    /// Seed for the spherical-function solver.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Plancherel,
    Counting,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Plancherel => Convention::Plancherel,
            ConventionArg::Counting => Convention::Counting,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the pair is a Gelfand pair.
    Check {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Compute the spherical functions.
    Spherical {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spherical Fourier transform of a function file, or its inverse.
    Transform {
        #[command(flatten)]
        pair: PairArgs,
        /// Function file, or a spectral file with --inverse.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "plancherel")]
        convention: ConventionArg,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a multiplier to a function.
    Apply {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        multiplier: PathBuf,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Singular values, Schatten norms, operator norms and trace of a multiplier.
    Schatten {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        multiplier: PathBuf,
        /// Overrides the convention stored in the multiplier file.
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        /// Comma-separated Schatten exponents; `inf` for the operator norm.
        #[arg(long, value_delimiter = ',', value_parser = parse_exponent)]
        p_grid: Option<Vec<f64>>,
        /// Sampled `p:q` operator norms to estimate.
        #[arg(long, value_delimiter = ',', value_parser = parse_exponent_pair)]
        sampled: Vec<(f64, f64)>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Run the theorem suite.
    Verify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    let p = match s.trim() {
        "inf" | "infinity" | "∞" => f64::INFINITY,
        t => t.parse::<f64>().map_err(|e| e.to_string())?,
    };
    if p.is_nan() || p < 1.0 {
        return Err(format!("exponent must be ≥ 1, got {s}"));
    }
    Ok(p)
}

fn parse_exponent_pair(s: &str) -> Result<(f64, f64), String> {
    let (p, q) = s.split_once(':').ok_or_else(|| format!("expected p:q, got {s}"))?;
    Ok((parse_exponent(p)?, parse_exponent(q)?))
}

/// Exit status 1 for mathematical failures, 2 for bad input.
enum Failure {
    Math(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotGelfandPair { .. }
            | Error::DegenerateSpectrum { .. }
            | Error::SpectralInconsistency(_)
            | Error::KernelMismatch(_) => Failure::Math(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

impl PairArgs {
    fn name(&self) -> String {
        match (&self.builtin, &self.group) {
            (Some(b), _) => b.clone(),
            (None, Some(p)) => p.display().to_string(),
            (None, None) => String::new(),
        }
    }

    fn load(&self, options: &GroupOptions) -> Result<GelfandPair, Failure> {
        let file = match (&self.builtin, &self.group) {
            (Some(spec), _) => spec.parse::<BuiltinPair>()?.group_file(),
            (None, Some(path)) => GroupFile::parse(&read(path)?)?,
            (None, None) => return Err(Failure::Input("no pair given".into())),
        };
        Ok(file.build(options)?)
    }

    fn table(&self, options: &GroupOptions) -> Result<SphericalTable, Failure> {
        Ok(compute_spherical_functions(&self.load(options)?, self.seed, 1e-6)?)
    }
}

#[derive(Serialize)]
struct CheckOutput {
    order: usize,
    subgroup_order: usize,
    double_cosets: usize,
    gelfand: bool,
    defect: f64,
}

fn run(cli: Cli) -> Outcome {
    let mut options = GroupOptions::default();
    if let Some(cap) = cli.max_order {
        options.max_order = cap;
    }
    match cli.command {
        Command::Check { pair } => {
            let p = pair.load(&options)?;
            let verdict = is_gelfand_pair(&p);
            print!(
                "{}",
                json(&CheckOutput {
                    order: p.group().order(),
                    subgroup_order: p.subgroup().len(),
                    double_cosets: p.num_cosets(),
                    gelfand: verdict.commutative,
                    defect: verdict.defect,
                })
            );
            Ok(if verdict.commutative {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Spherical { pair, format, out } => {
            let table = pair.table(&options)?;
            let text = match format {
                Format::Json => json(&SphericalTableFile::from(&table)),
                Format::Csv => spherical_table_csv(&table)?,
            };
            emit(&text, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Transform {
            pair,
            input,
            convention,
            inverse,
            out,
        } => {
            let table = pair.table(&options)?;
            let bytes = read(&input)?;
            let text = if inverse {
                let file = SpectralFile::parse(&bytes)?;
                let f = inverse_sft(&file.vector()?, &table)?;
                json(&FunctionFile::from_function(&f, table.pair(), Basis::Coset)?)
            } else {
                let (f, _) = FunctionFile::parse(&bytes)?.resolve(table.pair())?;
                let conv = Convention::from(convention);
                json(&SpectralFile::new(conv, &transform(&f, &table, conv)?))
            };
            emit(&text, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Apply {
            pair,
            multiplier,
            function,
            out,
        } => {
            let table = pair.table(&options)?;
            let m = MultiplierFile::parse(&read(&multiplier)?)?;
            let (f, basis) = FunctionFile::parse(&read(&function)?)?.resolve(table.pair())?;
            let op = build_operator(&m.multiplier()?, &table, m.convention)?;
            let image = op.apply(&f)?;
            emit(&json(&FunctionFile::from_function(&image, table.pair(), basis)?), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Schatten {
            pair,
            multiplier,
            convention,
            p_grid,
            sampled,
            trials,
        } => {
            let table = pair.table(&options)?;
            let file = MultiplierFile::parse(&read(&multiplier)?)?;
            let conv = convention.map_or(file.convention, Convention::from);
            let op = build_operator(&file.multiplier()?, &table, conv)?;
            let grid = p_grid.unwrap_or_else(|| DEFAULT_P_GRID.to_vec());
            let report = spectral_report(&op, &grid, &sampled, trials, pair.seed)?;
            print!("{}", json(&report));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            pair,
            trials,
            tol,
            out,
        } => {
            let table = pair.table(&options)?;
            let report = run_suite(
                &table,
                &SuiteOptions {
                    name: pair.name(),
                    trials,
                    seed: pair.seed,
                    tol,
                },
            );
            emit(&json(&report), out.as_deref())?;
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("{} ({}) failed: worst {:e}", c.id, c.theorem, c.worst);
            }
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
