//! Command-line driver for the bialgebra library: structure-constant tables, the seeded
//! verification suites and residual checks of field configurations.

mod field_check;
mod report;
mod table;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bialgebra::blade::Basis;
use bialgebra::field::{FieldConfig, FieldConfigJson};
use bialgebra::metric::{Metric, MetricJson};
use bialgebra::table::ProductTable;
use bialgebra::verify::Suite;
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use report::RunReport;

const DEFAULT_SEED: u64 = 0;
const MAX_TABLE_DIM: usize = 8;

#[derive(Parser)]
#[command(
    name = "bialgebra",
    version,
    about = "Clifford and exterior algebra tables, identity suites and field-model checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every structure constant of the Clifford product for a metric.
    MulTable {
        /// Metric JSON: {"dim": n, "g_upper": [[..]]} or with "g_lower".
        #[arg(long)]
        metric: PathBuf,
        #[arg(long, value_enum, default_value_t = BasisArg::Grassmann)]
        basis: BasisArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded identity suite and emit a JSON report.
    Verify {
        /// One of algebra, hodge, spin, manifold, field, dirac.
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of random draws; defaults to the suite's own size.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add the wall time to the report (makes it nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate the residuals of a field configuration at seeded points of its chart.
    FieldCheck {
        /// Field configuration JSON.
        #[arg(long, required_unless_present = "example", conflicts_with = "example")]
        config: Option<PathBuf>,
        /// Use a bundled configuration instead of a file.
        #[arg(long, value_enum)]
        example: Option<Example>,
        /// Number of sample points.
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Grassmann,
    Clifford,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    /// A flat non-abelian connection on Minkowski space with a vacuum wave form.
    FlatConnection,
    /// The same with the sign of one potential flipped; the Yang-Mills equation fails.
    SignFlip,
    /// All fields zero except `H = dx^4`.
    Vacuum,
}

impl Example {
    fn json(self) -> &'static str {
        match self {
            Example::FlatConnection => include_str!("../data/flat_connection.json"),
            Example::SignFlip => include_str!("../data/flat_connection_sign_flip.json"),
            Example::Vacuum => include_str!("../data/vacuum.json"),
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<bialgebra::error::Error> for Failure {
    fn from(e: bialgebra::error::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, Failure> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| Failure::Usage(format!("{what}: at `{}`: {}", e.path(), e.inner())))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(report: &RunReport, out: Option<&Path>) -> Result<bool, Failure> {
    write(out, &report.to_json())?;
    eprintln!("{}", report.summary());
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::MulTable {
            metric,
            basis,
            format,
            out,
        } => {
            let json: MetricJson = parse_json(&read(&metric)?, "metric")?;
            let metric =
                Metric::from_json(&json).map_err(|e| Failure::Usage(format!("metric: {e}")))?;
            if metric.dim() > MAX_TABLE_DIM {
                return Err(Failure::Usage(format!(
                    "tables are limited to n <= {MAX_TABLE_DIM}, got {}",
                    metric.dim()
                )));
            }
            let basis = match basis {
                BasisArg::Grassmann => Basis::Grassmann,
                BasisArg::Clifford => Basis::Clifford,
            };
            let t = table::structure_constants(&ProductTable::new(&metric)?, basis)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&t).expect("table serializes") + "\n",
                Format::Csv => table::to_csv(&t).map_err(|e| Failure::Runtime(e.to_string()))?,
            };
            write(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Verify {
            suite,
            seed,
            count,
            out,
            timing,
        } => {
            let start = Instant::now();
            let cases = suite.run(seed, count.unwrap_or_else(|| suite.default_count()))?;
            let report = RunReport::new(suite.name(), seed, cases, timing.then(|| start.elapsed()));
            emit(&report, out.as_deref())
        }
        Command::FieldCheck {
            config,
            example,
            points,
            seed,
            tolerance,
            out,
            timing,
        } => {
            let start = Instant::now();
            let text = match (config, example) {
                (Some(path), _) => read(&path)?,
                (None, Some(e)) => e.json().to_string(),
                (None, None) => return Err(Failure::Usage("need --config or --example".into())),
            };
            let json: FieldConfigJson = parse_json(&text, "config")?;
            let cfg = FieldConfig::from_json(&json)
                .map_err(|e| Failure::Usage(format!("config: {e}")))?;
            if points == 0 {
                return Err(Failure::Usage("--points must be positive".into()));
            }
            let pts = field_check::sample_points(&cfg, seed, points);
            let cases = field_check::check(&cfg, &pts, tolerance)?;
            let report =
                RunReport::new("field_check", seed, cases, timing.then(|| start.elapsed()));
            emit(&report, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
