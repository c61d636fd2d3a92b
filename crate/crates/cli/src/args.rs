//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{DressSpec, Format, GridConfig, Mode, PresetName, PresetParams, RunConfig, Source, Unit};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "zrp", version, about = "Zero-range potential scattering on small molecular clusters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase shifts (tan eta per mode, with multiplicities) over an energy grid.
    Phases {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Also run the generalized solver and report the largest deviation.
        #[arg(long)]
        verify: bool,
    },
    /// Integral cross section over an energy grid.
    Ics {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Reference ICS (CSV: E_eV, sigma) used to pick b for silane-dressed.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// S-matrix poles of a single channel.
    Poles {
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-check closed forms against the generalized solver.
    Verify {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Geometry file (`x y z alpha [b e]` per line).
    #[arg(long, conflicts_with = "preset")]
    pub geometry: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<PresetName>,
    /// Angular momentum of the single preset.
    #[arg(long)]
    pub l: Option<u32>,
    /// Inverse scattering length of the X sites (a0^-1).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Inverse scattering length of the central Y site (a0^-1).
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// X-X distance for x2/x3/x4 (a0).
    #[arg(long)]
    pub r: Option<f64>,
    /// Y-X distance for yx4/silane (a0).
    #[arg(long)]
    pub d: Option<f64>,
    /// Dressing strength for silane-dressed.
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Per-site dressing `<site>:<b>[,<e>]`, site index from 0; repeatable.
    #[arg(long, allow_negative_numbers = true)]
    pub dress: Vec<DressSpec>,
    #[arg(long, value_enum, default_value = "effective-alpha")]
    pub mode: Mode,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.1)]
    pub emin: f64,
    #[arg(long, default_value_t = 12.0)]
    pub emax: f64,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Logarithmic energy spacing.
    #[arg(long)]
    pub log: bool,
    #[arg(long, value_enum, default_value = "ev")]
    pub unit: Unit,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl GridArgs {
    pub fn config(&self) -> GridConfig {
        GridConfig { min: self.emin, max: self.emax, count: self.n, log: self.log, unit: self.unit }
    }
}

impl TargetArgs {
    pub fn source(&self) -> Result<Source> {
        let mut params = match (&self.geometry, self.preset) {
            (Some(path), _) => {
                if self.l.is_some() || self.alpha.is_some() || self.beta.is_some() || self.r.is_some() || self.d.is_some() || self.b.is_some() {
                    return Err(CliError::Config("preset parameters cannot be combined with --geometry".into()));
                }
                return Ok(Source::File(path.clone()));
            }
            (None, Some(name)) => PresetParams::with_defaults(name),
            (None, None) => return Err(CliError::Config("one of --geometry or --preset is required".into())),
        };
        if let Some(l) = self.l {
            params.l = l;
        }
        if let Some(a) = self.alpha {
            params.alpha = a;
        }
        if let Some(b) = self.beta {
            params.beta = b;
        }
        if let Some(r) = self.r {
            params.r = r;
        }
        if let Some(d) = self.d {
            params.d = d;
        }
        if self.b.is_some() && params.name != PresetName::SilaneDressed {
            return Err(CliError::Config("--b applies to silane-dressed; use --dress for other targets".into()));
        }
        params.b = self.b;
        Ok(Source::Preset(params))
    }

    pub fn config(&self, command: &str, grid: &GridArgs, format: Format) -> Result<RunConfig> {
        Ok(RunConfig {
            command: command.to_string(),
            source: self.source()?,
            grid: grid.config(),
            dress: self.dress.clone(),
            mode: self.mode,
            format,
        })
    }
}
