//! `secwz`: command-line front end for the secure source coding toolkit.
//!
//! Exit codes: 0 success, 2 bad input (flags, files, parameter ranges),
//! 3 domain invariant violated (alphabet mismatch, cardinality caps,
//! degenerate parameters), 4 resource guard.

mod config;

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{Flags, Format};
use secwz::binary::{self, build_source, fig4_scheme, BecBscParams, BinaryScheme};
use secwz::ordering::{classify_bec_bsc, classify_source, LessNoisyGrid};
use secwz::region::{evaluate_scheme, sweep_boundary, SearchConfig};
use secwz::simulator::{Rates, SimConfig, Simulator};
use secwz::{AuxScheme, SecureSource};

#[derive(Parser)]
#[command(name = "secwz", version, about = "Rate-distortion-equivocation tools for secure source coding with side information")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Evaluate (R, D, Delta) of a scheme on a source
    Eval,
    /// Search the region boundary over a distortion grid
    Sweep,
    /// Erasure/symmetric example: summary table or equivocation curve
    Binary,
    /// Order Bob's and Eve's side information
    Classify,
    /// Monte-Carlo run of the binning scheme with exact equivocation
    Simulate,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(secwz::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        use secwz::Error::*;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(InvalidArgument(_) | InvalidPmf { .. } | Parse(_)) => 2,
            CliError::Core(AlphabetMismatch(_) | Cardinality { .. } | Degenerate(_)) => 3,
            CliError::Core(ResourceLimit(_)) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<secwz::Error> for CliError {
    fn from(e: secwz::Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Main output goes to `--out` when given, else stdout.
fn emit(f: &Flags, body: &str) -> Result<()> {
    match &f.out {
        Some(path) => write(path, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn binary_params(f: &Flags) -> Result<BecBscParams> {
    match (f.p, f.eps) {
        (Some(p), Some(eps)) => Ok(BecBscParams::new(p, eps)?),
        _ => Err(usage("the binary model needs both --p and --eps")),
    }
}

fn load_source(f: &Flags) -> Result<SecureSource> {
    match &f.source {
        Some(path) => {
            let text = read(path)?;
            SecureSource::from_toml(&text).map_err(|e| in_file(path, e))
        }
        None => Ok(build_source(&binary_params(f)?)),
    }
}

/// Input-class errors get the file name prefixed; others keep their class.
fn in_file(path: &Path, e: secwz::Error) -> CliError {
    match e {
        secwz::Error::InvalidArgument(_) | secwz::Error::InvalidPmf { .. } | secwz::Error::Parse(_) => {
            usage(format!("{}: {e}", path.display()))
        }
        other => CliError::Core(other),
    }
}

fn load_scheme(f: &Flags, default: Option<(f64, f64)>) -> Result<AuxScheme> {
    if let Some(path) = &f.scheme {
        let text = read(path)?;
        return AuxScheme::from_toml(&text).map_err(|e| in_file(path, e));
    }
    let (alpha, beta) = match (f.alpha, f.beta, default) {
        (Some(a), Some(b), _) => (a, b),
        (a, b, Some((da, db))) => (a.unwrap_or(da), b.unwrap_or(db)),
        _ => return Err(usage("need --scheme, or --alpha and --beta")),
    };
    Ok(fig4_scheme(&BinaryScheme::new(alpha, beta)?))
}

fn cmd_eval(f: &Flags) -> Result<()> {
    let source = load_source(f)?;
    let scheme = load_scheme(f, None)?;
    let t = evaluate_scheme(&source, &scheme)?;
    let body = match f.format.unwrap_or(Format::Text) {
        Format::Text => format!("R={:.6} D={:.6} Delta={:.6}\n", t.rate, t.distortion, t.equivocation),
        Format::Csv => format!("R,D,Delta\n{:.6},{:.6},{:.6}\n", t.rate, t.distortion, t.equivocation),
        Format::Json => format!("{}\n", json!({"R": t.rate, "D": t.distortion, "Delta": t.equivocation})),
    };
    emit(f, &body)
}

fn cmd_sweep(f: &Flags) -> Result<()> {
    let source = load_source(f)?;
    let points = f.grid.unwrap_or(21);
    if points == 0 {
        return Err(usage("--grid must be at least 1"));
    }
    let top = source.zero_rate_distortion();
    let grid: Vec<f64> = if points == 1 {
        vec![top]
    } else {
        (0..points).map(|i| top * i as f64 / (points - 1) as f64).collect()
    };
    let cfg = SearchConfig { rate_budget: f.rate_budget, seed: f.seed.unwrap_or(0), ..Default::default() };
    let curve = sweep_boundary(&source, &grid, &cfg)?;
    for d in &curve.infeasible {
        eprintln!("note: no scheme within the rate budget at D={d:.6}");
    }
    if let Some(path) = &f.schemes_out {
        write(path, &curve.schemes_toml())?;
    }
    let body = match f.format.unwrap_or(Format::Csv) {
        Format::Csv | Format::Text => curve.to_csv(),
        Format::Json => {
            let rows: Vec<_> = curve
                .points
                .iter()
                .map(|p| {
                    json!({"D": p.target_distortion, "R": p.tuple.rate, "Delta": p.tuple.equivocation,
                           "distortion": p.tuple.distortion, "scheme_id": p.scheme_id})
                })
                .collect();
            format!("{}\n", json!({"points": rows, "infeasible": curve.infeasible}))
        }
    };
    emit(f, &body)
}

fn cmd_binary(f: &Flags) -> Result<()> {
    let params = binary_params(f)?;
    if f.curve {
        let grid = binary::curve_grid(&params, f.grid.unwrap_or(200));
        let curve = binary::sweep_fig5(&params, &grid)?;
        let body = match f.format.unwrap_or(Format::Csv) {
            Format::Csv | Format::Text => binary::curve_csv(&curve),
            Format::Json => {
                let rows: Vec<_> = curve
                    .iter()
                    .map(|c| {
                        json!({"D": c.d, "delta_general": c.delta_general, "delta_wz": c.delta_wz,
                               "alpha": c.alpha, "beta_opt": c.beta_opt})
                    })
                    .collect();
                format!(
                    "{}\n",
                    json!({"curve": rows, "wyner_ziv_threshold": binary::wyner_ziv_threshold(&curve)})
                )
            }
        };
        return emit(f, &body);
    }
    let table = binary::table1(&params, f.rate_budget.unwrap_or(0.8))?;
    let body = match f.format.unwrap_or(Format::Text) {
        Format::Text => table.to_text(),
        Format::Csv => table.to_csv(),
        Format::Json => {
            let cols: Vec<_> = table
                .columns
                .iter()
                .map(|c| {
                    json!({"column": c.label, "R": c.tuple.rate, "D": c.tuple.distortion,
                           "Delta": c.tuple.equivocation, "alpha": c.alpha, "beta": c.beta})
                })
                .collect();
            format!("{}\n", json!({ "columns": cols }))
        }
    };
    emit(f, &body)
}

fn cmd_classify(f: &Flags) -> Result<()> {
    let verdict = if f.source.is_some() {
        let grid = LessNoisyGrid {
            resolution: f.grid.unwrap_or(LessNoisyGrid::default().resolution),
            seed: f.seed.unwrap_or(0),
            ..Default::default()
        };
        classify_source(&load_source(f)?, &grid)?
    } else {
        classify_bec_bsc(&binary_params(f)?)
    };
    let body = match f.format.unwrap_or(Format::Text) {
        Format::Text | Format::Csv => format!("{verdict}\n"),
        Format::Json => {
            let mut map = serde_json::Map::new();
            for kv in verdict.to_string().split(' ') {
                let (k, v) = kv.split_once('=').expect("key=value record");
                map.insert(k.to_string(), json!(v));
            }
            format!("{}\n", serde_json::Value::Object(map))
        }
    };
    emit(f, &body)
}

fn cmd_simulate(f: &Flags) -> Result<()> {
    let source = load_source(f)?;
    let scheme = load_scheme(f, Some((0.031, 0.05)))?;
    let slack = f.slack.unwrap_or(SimConfig::DEFAULT_SLACK);
    let rates = Rates::from_scheme(&source, &scheme, slack)?;
    let mut cfg = SimConfig::new(f.n.unwrap_or(12), rates, f.trials.unwrap_or(500), f.seed.unwrap_or(0));
    cfg.typ_tol = f.typ_tol.unwrap_or(SimConfig::DEFAULT_TYP_TOL);
    let summary = Simulator::new(&source, &scheme, cfg)?.run_trials()?;
    let csv = summary.to_csv();
    let format = f.format.unwrap_or(Format::Text);
    match &f.out {
        Some(path) => write(path, &csv)?,
        None if format == Format::Csv => print!("{csv}"),
        None => {}
    }
    match format {
        Format::Text => {
            let r = summary.rates;
            let mut s = String::new();
            let _ = writeln!(s, "n={} trials={} S1={:.6} R1={:.6} S2={:.6} R2={:.6}", summary.n, summary.trials, r.s1, r.r1, r.s2, r.r2);
            let _ = writeln!(s, "mean_distortion={:.6}", summary.mean_distortion);
            let _ = writeln!(s, "encode_failure_rate={:.6}", summary.encode_failure_rate);
            let _ = writeln!(s, "decode_failure_rate={:.6}", summary.decode_failure_rate);
            let _ = writeln!(s, "failure_rate={:.6}", summary.failure_rate);
            let _ = writeln!(s, "mean_equivocation={:.6}", summary.mean_equivocation);
            print!("{s}");
        }
        Format::Json => println!("{}", serde_json::to_string(&summary).expect("plain data")),
        Format::Csv => {}
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let flags = cli.flags.merged().map_err(usage)?;
    match cli.command {
        Command::Eval => cmd_eval(&flags),
        Command::Sweep => cmd_sweep(&flags),
        Command::Binary => cmd_binary(&flags),
        Command::Classify => cmd_classify(&flags),
        Command::Simulate => cmd_simulate(&flags),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
