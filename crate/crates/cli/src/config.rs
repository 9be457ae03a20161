//! Flag/config-file merge. Every long flag has a config key of the same
//! name with dashes as underscores; a flag given on the command line wins.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file with defaults for any of the flags below
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Crossover probability of Eve's BSC (binary model)
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Erasure probability of Bob's BEC (binary model)
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Grid size: distortion points (sweep, binary --curve) or lattice resolution (classify)
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Rate budget: absolute for sweep, fraction of the lossless rate for binary
    #[arg(long = "rate-budget", global = true)]
    pub rate_budget: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Blocklength (simulate)
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Write the main output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Source file (TOML); replaces --p/--eps
    #[arg(long, global = true)]
    pub source: Option<PathBuf>,
    /// Scheme file (TOML); replaces --alpha/--beta
    #[arg(long, global = true)]
    pub scheme: Option<PathBuf>,
    /// Test-channel crossover of the two-parameter binary scheme
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Auxiliary-channel crossover of the two-parameter binary scheme
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Rate slack in bits above each coding constraint (simulate)
    #[arg(long, global = true)]
    pub slack: Option<f64>,
    /// Typicality tolerance (simulate)
    #[arg(long = "typ-tol", global = true)]
    pub typ_tol: Option<f64>,
    /// Emit the equivocation-distortion curve instead of the table (binary)
    #[arg(long, global = true)]
    pub curve: bool,
    /// Also write the distinct boundary schemes as TOML (sweep)
    #[arg(long = "schemes-out", global = true)]
    pub schemes_out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    p: Option<f64>,
    eps: Option<f64>,
    grid: Option<usize>,
    rate_budget: Option<f64>,
    seed: Option<u64>,
    trials: Option<usize>,
    n: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
    source: Option<PathBuf>,
    scheme: Option<PathBuf>,
    alpha: Option<f64>,
    beta: Option<f64>,
    slack: Option<f64>,
    typ_tol: Option<f64>,
    curve: Option<bool>,
    schemes_out: Option<PathBuf>,
}

/// Paths in a config file are relative to the file's directory.
fn rebase(base: &Path, p: Option<PathBuf>) -> Option<PathBuf> {
    p.map(|p| if p.is_relative() { base.join(p) } else { p })
}

impl Flags {
    pub fn merged(self) -> Result<Flags, String> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let file: FileConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Ok(Flags {
            config: self.config,
            p: self.p.or(file.p),
            eps: self.eps.or(file.eps),
            grid: self.grid.or(file.grid),
            rate_budget: self.rate_budget.or(file.rate_budget),
            seed: self.seed.or(file.seed),
            trials: self.trials.or(file.trials),
            n: self.n.or(file.n),
            out: self.out.or(rebase(base, file.out)),
            format: self.format.or(file.format),
            source: self.source.or(rebase(base, file.source)),
            scheme: self.scheme.or(rebase(base, file.scheme)),
            alpha: self.alpha.or(file.alpha),
            beta: self.beta.or(file.beta),
            slack: self.slack.or(file.slack),
            typ_tol: self.typ_tol.or(file.typ_tol),
            curve: self.curve || file.curve.unwrap_or(false),
            schemes_out: self.schemes_out.or(rebase(base, file.schemes_out)),
        })
    }
}
