//! Run configuration: where the geometry comes from, the energy grid, the
//! dressings and the output format. Serialized verbatim into JSON output.

use std::path::PathBuf;

use serde::Serialize;
use zrp_core::darboux::DressingStep;
use zrp_core::geometry::{build_yxn, Background};
use zrp_core::presets::{self, DressingMode};
use zrp_core::scan::{EnergyUnit, Grid, Spacing};
use zrp_core::{Alpha, Geometry, Wavenumber};

use crate::error::{CliError, Result};
use crate::geometry_file::parse_geometry_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PresetName {
    Single,
    X2,
    X3,
    X4,
    Yx4,
    Silane,
    SilaneDressed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Unit {
    Ev,
    Ha,
}

impl Unit {
    pub fn energy_unit(self) -> EnergyUnit {
        match self {
            Unit::Ev => EnergyUnit::Ev,
            Unit::Ha => EnergyUnit::Hartree,
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            Unit::Ev => "E_eV",
            Unit::Ha => "E_Ha",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    EffectiveAlpha,
    DressedKernels,
}

impl From<Mode> for DressingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::EffectiveAlpha => DressingMode::EffectiveAlpha,
            Mode::DressedKernels => DressingMode::DressedKernels,
        }
    }
}

/// Preset parameters after defaults are filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PresetParams {
    pub name: PresetName,
    pub l: u32,
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub d: f64,
    /// Dressing strength; only used by `silane-dressed`.
    pub b: Option<f64>,
}

impl PresetParams {
    /// Defaults are the silane values (`silane-dressed` uses its own alpha, beta).
    pub fn with_defaults(name: PresetName) -> Self {
        let (alpha, beta) = match name {
            PresetName::SilaneDressed => (presets::SILANE_DRESSED_ALPHA, presets::SILANE_DRESSED_BETA),
            _ => (presets::SILANE_ALPHA, presets::SILANE_BETA),
        };
        PresetParams { name, l: 0, alpha, beta, r: presets::SILANE_R, d: presets::SILANE_D, b: None }
    }

    pub fn xn_count(&self) -> Option<usize> {
        match self.name {
            PresetName::X2 => Some(2),
            PresetName::X3 => Some(3),
            PresetName::X4 => Some(4),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Preset(PresetParams),
    File(PathBuf),
}

/// `--dress site:b[,e]`; `e` defaults by mode (`-b` or `inf`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressSpec {
    pub site: usize,
    pub b: f64,
    pub e: Option<Alpha>,
}

impl std::str::FromStr for DressSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (site, rest) = s.split_once(':').ok_or_else(|| format!("expected <site>:<b>[,<e>], got '{s}'"))?;
        let site = site.trim().parse().map_err(|_| format!("bad site index '{site}'"))?;
        let (b, e) = match rest.split_once(',') {
            Some((b, e)) => (b, Some(e)),
            None => (rest, None),
        };
        let b: f64 = b.trim().parse().map_err(|_| format!("bad b '{b}'"))?;
        let e = match e.map(str::trim) {
            None => None,
            Some(t) => match t.parse::<f64>() {
                Ok(v) if v == f64::INFINITY => Some(Alpha::Infinite),
                Ok(v) if v.is_finite() => Some(Alpha::Finite(v)),
                _ => return Err(format!("bad e '{t}'")),
            },
        };
        Ok(DressSpec { site, b, e })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
    pub unit: Unit,
}

impl GridConfig {
    pub fn grid(&self) -> Result<Grid> {
        let spacing = if self.log { Spacing::Log } else { Spacing::Linear };
        Ok(Grid::new(self.min, self.max, self.count, spacing)?)
    }

    pub fn wavenumbers(&self) -> Result<Vec<Wavenumber>> {
        Ok(self.grid()?.wavenumbers(self.unit.energy_unit())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub source: Source,
    pub grid: GridConfig,
    pub dress: Vec<DressSpec>,
    pub mode: Mode,
    pub format: Format,
}

impl RunConfig {
    pub fn preset(&self) -> Option<&PresetParams> {
        match &self.source {
            Source::Preset(p) => Some(p),
            Source::File(_) => None,
        }
    }

    /// Geometry with dressings applied. Steps with `e = inf` become the
    /// background centered on their site.
    pub fn geometry(&self) -> Result<Geometry> {
        let g = match &self.source {
            Source::File(path) => parse_geometry_file(path)?,
            Source::Preset(p) => preset_geometry(p, self.mode)?,
        };
        apply_dressings(g, &self.dress, self.mode)
    }
}

fn preset_geometry(p: &PresetParams, mode: Mode) -> Result<Geometry> {
    if p.l != 0 && p.name != PresetName::Single {
        return Err(CliError::Config("--l applies to the single preset only".into()));
    }
    Ok(match p.name {
        PresetName::Single => presets::single(p.alpha)?,
        PresetName::X2 | PresetName::X3 | PresetName::X4 => presets::xn(p.xn_count().expect("xn preset"), p.r, p.alpha)?,
        PresetName::Yx4 | PresetName::Silane => build_yxn(4, p.d, p.alpha, p.beta)?,
        PresetName::SilaneDressed => {
            let b = p.b.ok_or_else(|| CliError::Config("silane-dressed needs --b or --reference".into()))?;
            let g = build_yxn(4, p.d, p.alpha, p.beta)?;
            presets::dress(g, b, mode.into())?
        }
    })
}

pub fn apply_dressings(g: Geometry, specs: &[DressSpec], mode: Mode) -> Result<Geometry> {
    let mut background = g.background().copied();
    let mut sites = g.sites().to_vec();
    for spec in specs {
        if spec.site >= sites.len() {
            return Err(CliError::Config(format!(
                "--dress refers to site {} but the geometry has {} sites",
                spec.site,
                sites.len()
            )));
        }
        let e = spec.e.unwrap_or(match mode {
            Mode::EffectiveAlpha => Alpha::Finite(-spec.b),
            Mode::DressedKernels => Alpha::Infinite,
        });
        sites[spec.site].dressing = Some(DressingStep::new(spec.b, e)?);
    }
    for s in &mut sites {
        if let Some(step) = s.dressing.filter(|st| st.e.is_infinite()) {
            if background.is_some() {
                return Err(CliError::Config("at most one background dressing (e = inf) is supported".into()));
            }
            background = Some(Background { center: s.position, step });
            s.dressing = None;
        }
    }
    let g = Geometry::new(sites)?;
    Ok(match background {
        Some(b) => g.with_background(b),
        None => g,
    })
}
