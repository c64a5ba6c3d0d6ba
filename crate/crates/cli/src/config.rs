//! Run configuration: defaults, optional key=value config file, and explicit
//! flags, merged in that order of increasing precedence.

use std::path::Path;

use clap::Args;
use morse_susy::MorseParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonOpts {
    /// Potential depth V0 (> 0)
    #[arg(long = "V0", allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// Width parameter alpha (> 0)
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Basis scale gamma (2*gamma > -1)
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Highest coefficient/polynomial index in tables
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Energy grid start
    #[arg(long, allow_negative_numbers = true)]
    pub emin: Option<f64>,
    /// Energy grid end
    #[arg(long, allow_negative_numbers = true)]
    pub emax: Option<f64>,
    /// Number of energy grid points
    #[arg(long)]
    pub esteps: Option<usize>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Config file with key=value lines (keys: V0, alpha, gamma, nmax,
    /// emin, emax, esteps, format)
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: MorseParams,
    pub nmax: usize,
    pub emin: f64,
    pub emax: f64,
    pub esteps: usize,
    pub format: OutputFormat,
}

#[derive(Debug, Default)]
struct FileValues {
    v0: Option<f64>,
    alpha: Option<f64>,
    gamma: Option<f64>,
    nmax: Option<usize>,
    emin: Option<f64>,
    emax: Option<f64>,
    esteps: Option<usize>,
    format: Option<OutputFormat>,
}

fn parse_config_file(path: &Path) -> Result<FileValues, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut values = FileValues::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value, got `{raw}`", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |e: std::num::ParseFloatError| format!("line {}: {key}: {e}", lineno + 1);
        let bad_int = |e: std::num::ParseIntError| format!("line {}: {key}: {e}", lineno + 1);
        match key {
            "V0" => values.v0 = Some(value.parse().map_err(bad)?),
            "alpha" => values.alpha = Some(value.parse().map_err(bad)?),
            "gamma" => values.gamma = Some(value.parse().map_err(bad)?),
            "nmax" => values.nmax = Some(value.parse().map_err(bad_int)?),
            "emin" => values.emin = Some(value.parse().map_err(bad)?),
            "emax" => values.emax = Some(value.parse().map_err(bad)?),
            "esteps" => values.esteps = Some(value.parse().map_err(bad_int)?),
            "format" => {
                values.format = Some(match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => return Err(format!("line {}: unknown format `{other}`", lineno + 1)),
                })
            }
            other => return Err(format!("line {}: unknown config key `{other}`", lineno + 1)),
        }
    }
    Ok(values)
}

impl CommonOpts {
    /// Flags > config file > defaults (V0=8, alpha=1, gamma=0, nmax=12,
    /// energy grid [0, 12] with 13 points, csv).
    pub fn resolve(&self) -> Result<RunConfig, String> {
        let file = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => FileValues::default(),
        };
        let v0 = self.v0.or(file.v0).unwrap_or(8.0);
        let alpha = self.alpha.or(file.alpha).unwrap_or(1.0);
        let gamma = self.gamma.or(file.gamma).unwrap_or(0.0);
        let params = MorseParams::new(v0, alpha, gamma).map_err(|e| e.to_string())?;
        let esteps = self.esteps.or(file.esteps).unwrap_or(13);
        if esteps < 2 {
            return Err("esteps must be at least 2".into());
        }
        Ok(RunConfig {
            params,
            nmax: self.nmax.or(file.nmax).unwrap_or(12),
            emin: self.emin.or(file.emin).unwrap_or(0.0),
            emax: self.emax.or(file.emax).unwrap_or(12.0),
            esteps,
            format: self.format.or(file.format).unwrap_or(OutputFormat::Csv),
        })
    }
}

impl RunConfig {
    pub fn energy_grid(&self) -> Vec<f64> {
        let step = (self.emax - self.emin) / (self.esteps as f64 - 1.0);
        (0..self.esteps)
            .map(|i| self.emin + step * i as f64)
            .collect()
    }
}
