use clap::Parser;
use gaplab::{parse_mode, parse_rat, render, run, Format, Scenario, ScenarioConfig, UsageError};
use gaplab_core::Rat;
use std::path::PathBuf;
use std::process::ExitCode;

/// Run one verification scenario and print its report to stdout.
///
/// Exit status: 0 when every check passes, 1 when at least one check
/// fails, 2 for a usage error (reported on stderr, naming the field).
#[derive(Parser)]
#[command(name = "gaplab", version)]
struct Cli {
    /// Scenario: sublinear-checks, pathology, soc, hilbert, kretschmer,
    /// kretschmer-gap, unbounded, or discontinuity.
    #[arg(long)]
    scenario: String,

    /// Budget bound of the continuum program (rational).
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    alpha: Option<Rat>,

    /// Left endpoint parameter of the indicator right-hand side (rational).
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    delta: Option<Rat>,

    /// Right endpoint parameter(s), comma separated (rationals).
    #[arg(long, value_delimiter = ',', value_parser = parse_rat, allow_hyphen_values = true)]
    gamma: Option<Vec<Rat>>,

    /// Grid resolution (number of cells), or brute-force nodes per axis.
    #[arg(long)]
    cells: Option<usize>,

    /// Primal discretization mode: exact or sampled.
    #[arg(long)]
    mode: Option<String>,

    /// Halving depth of the height stack.
    #[arg(long)]
    levels: Option<u32>,

    /// Height-stack scale (rational).
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    eps: Option<Rat>,

    /// Left endpoint of the stacking window (rational).
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    eta0: Option<Rat>,

    /// Right endpoint of the stacking window (rational).
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    eta1: Option<Rat>,

    /// Truncation order of the sequence-space model.
    #[arg(long)]
    trunc: Option<u32>,

    /// Depth of the lower-semicontinuity witness.
    #[arg(long)]
    witness_m: Option<u32>,

    /// Numeric tolerance for floating-backed checks.
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,

    /// Seed for every randomized sampler.
    #[arg(long)]
    seed: Option<u64>,

    /// Output format: json or csv.
    #[arg(long, default_value = "json")]
    format: String,

    /// CSV file holding a grid-function right-hand side.
    #[arg(long)]
    b_file: Option<PathBuf>,
}

fn configure(cli: Cli) -> Result<ScenarioConfig, UsageError> {
    let scenario = Scenario::parse(&cli.scenario)?;
    let format = Format::parse(&cli.format)?;
    let mode = cli.mode.as_deref().map(parse_mode).transpose()?;
    let mut cfg = ScenarioConfig::new(scenario);
    cfg.alpha = cli.alpha;
    cfg.delta = cli.delta;
    cfg.gamma = cli.gamma;
    cfg.cells = cli.cells;
    cfg.mode = mode;
    cfg.levels = cli.levels;
    cfg.eps = cli.eps;
    cfg.eta0 = cli.eta0;
    cfg.eta1 = cli.eta1;
    cfg.trunc = cli.trunc;
    cfg.witness_m = cli.witness_m;
    cfg.tol = cli.tol;
    cfg.seed = cli.seed;
    cfg.format = format;
    cfg.b_file = cli.b_file;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = configure(cli).and_then(|cfg| run(&cfg).map(|r| (r, cfg.format)));
    match report {
        Ok((report, format)) => {
            print!("{}", render(&report, format));
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
    }
}
