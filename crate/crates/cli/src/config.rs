//! Experiment configuration files.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! # comment (also allowed after a value)
//! key = value
//! section.key = value
//! ```
//!
//! Keys are case-sensitive and may appear once. Lists are comma-separated
//! (`block.sites = 0, 1, 2`), operators are `*`-joined Pauli factors such as
//! `z0*x3`. Every key not understood by the chosen kind is rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use quenchlab_core::cft::CftParams;
use quenchlab_core::diagnostics::RegimeParams;
use quenchlab_core::eikonal::{
    AbsorptiveProfile, EikonalModel, ImpactGrid, RealProfile, SuppressionMode,
};
use quenchlab_core::fermion::QuenchSpec;
use quenchlab_core::spin::{IsingParams, LocalOperator, Pauli, MAX_SITES};
use quenchlab_core::Boundary;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {reason}")]
    Io { path: PathBuf, reason: String },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("missing required key `{0}`")]
    Missing(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("config declares kind `{declared}` but `{requested}` was requested")]
    KindMismatch { declared: Kind, requested: Kind },
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    FermionQuench,
    SpinQuench,
    Otoc,
    Negativity,
    Eikonal,
    Report,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::FermionQuench,
        Kind::SpinQuench,
        Kind::Otoc,
        Kind::Negativity,
        Kind::Eikonal,
        Kind::Report,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::FermionQuench => "fermion_quench",
            Kind::SpinQuench => "spin_quench",
            Kind::Otoc => "otoc",
            Kind::Negativity => "negativity",
            Kind::Eikonal => "eikonal",
            Kind::Report => "report",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown experiment kind `{s}`"))
    }
}

/// `n_points` samples on `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        quenchlab_core::series::linspace(self.start, self.end, self.points)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermionQuenchConfig {
    pub len: usize,
    pub boundary: Boundary,
    /// Half-width of uniformly random on-site potentials; 0 means clean.
    pub disorder: f64,
    pub quench: QuenchSpec,
    pub block: Range<usize>,
    /// Log-slope window; defaults to the pre-revival part of the grid.
    pub fit_window: Option<(f64, f64)>,
    pub regime: RegimeParams,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    AllUp,
    Ground,
    /// Uniform random amplitudes drawn from the seed.
    Random,
    Thermal(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum OtocStateSpec {
    InfiniteTemperature,
    Thermal(f64),
    Ground,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinQuenchConfig {
    pub model: IsingParams,
    pub initial: InitialState,
    pub operator: Option<LocalOperator>,
    pub block: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OtocConfig {
    pub model: IsingParams,
    pub w: LocalOperator,
    pub v: LocalOperator,
    pub state: OtocStateSpec,
    pub regime: RegimeParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityConfig {
    pub model: IsingParams,
    pub initial: InitialState,
    pub operator: Option<LocalOperator>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EikonalConfig {
    pub model: EikonalModel,
    pub cft: CftParams,
    pub mode: SuppressionMode,
    pub regime: RegimeParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub quench: SpinQuenchConfig,
    pub otoc: OtocConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    FermionQuench(FermionQuenchConfig),
    SpinQuench(SpinQuenchConfig),
    Otoc(OtocConfig),
    Negativity(NegativityConfig),
    Eikonal(EikonalConfig),
    Report(ReportConfig),
}

/// Fully validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub seed: u64,
    pub time: TimeGrid,
    pub output_dir: Option<PathBuf>,
    pub plot: bool,
    pub model: Model,
    /// Raw entries as written, for the manifest.
    pub echo: BTreeMap<String, String>,
}

/// Reads and validates a config file; the file must declare `kind`.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    parse_config(&read(path)?, None)
}

/// Like [`load_config`], with `kind` supplied by the caller. A `kind` entry in
/// the file is then optional but must agree.
pub fn load_config_for(path: &Path, kind: Kind) -> Result<ExperimentConfig, ConfigError> {
    parse_config(&read(path)?, Some(kind))
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

struct Entry {
    value: String,
    line: usize,
    used: bool,
}

/// Key lookup that remembers which entries were consumed.
struct Entries {
    map: BTreeMap<String, Entry>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
                line,
                reason: format!("expected `key = value`, found `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let key_ok = !key.is_empty()
                && key.split('.').all(|part| {
                    !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                });
            if !key_ok {
                return Err(ConfigError::Parse {
                    line,
                    reason: format!("malformed key `{key}`"),
                });
            }
            if value.is_empty() {
                return Err(ConfigError::Parse {
                    line,
                    reason: format!("`{key}` has no value"),
                });
            }
            let entry = Entry {
                value: value.to_string(),
                line,
                used: false,
            };
            if let Some(prev) = map.insert(key.to_string(), entry) {
                return Err(ConfigError::Parse {
                    line,
                    reason: format!("`{key}` already set on line {}", prev.line),
                });
            }
        }
        Ok(Entries { map })
    }

    fn raw(&mut self, key: &str) -> Option<String> {
        self.map.get_mut(key).map(|e| {
            e.used = true;
            e.value.clone()
        })
    }

    fn get<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| invalid(key, format!("`{v}`: {e}"))))
            .transpose()
    }

    fn or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn require<T: FromStr>(&mut self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?.ok_or_else(|| ConfigError::Missing(key.to_string()))
    }

    fn finite(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.or(key, default)?;
        if !v.is_finite() {
            return Err(invalid(key, "must be finite"));
        }
        Ok(v)
    }

    fn positive(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.finite(key, default)?;
        if v <= 0.0 {
            return Err(invalid(key, format!("must be > 0, got {v}")));
        }
        Ok(v)
    }

    fn non_negative(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.finite(key, default)?;
        if v < 0.0 {
            return Err(invalid(key, format!("must be >= 0, got {v}")));
        }
        Ok(v)
    }

    fn sites(&mut self, key: &str) -> Result<Option<Vec<usize>>, ConfigError> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|e| invalid(key, format!("`{}`: {e}", s.trim())))
                    })
                    .collect()
            })
            .transpose()
    }

    fn reject_unused(&self) -> Result<(), ConfigError> {
        match self.map.iter().filter(|(_, e)| !e.used).min_by_key(|(_, e)| e.line) {
            Some((key, e)) => Err(ConfigError::UnknownKey {
                key: key.clone(),
                line: e.line,
            }),
            None => Ok(()),
        }
    }

    fn echo(&self) -> BTreeMap<String, String> {
        self.map.iter().map(|(k, e)| (k.clone(), e.value.clone())).collect()
    }
}

struct BoundaryArg(Boundary);

impl FromStr for BoundaryArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "open" => Ok(BoundaryArg(Boundary::Open)),
            "periodic" => Ok(BoundaryArg(Boundary::Periodic)),
            _ => Err("expected `open` or `periodic`".into()),
        }
    }
}

/// Parses `z0*x3` into a Pauli product.
pub fn parse_operator(text: &str) -> Result<LocalOperator, String> {
    let factors = text
        .split('*')
        .map(|f| {
            let f = f.trim();
            let mut chars = f.chars();
            let axis = match chars.next() {
                Some('x' | 'X') => Pauli::X,
                Some('y' | 'Y') => Pauli::Y,
                Some('z' | 'Z') => Pauli::Z,
                _ => return Err(format!("`{f}` is not a Pauli factor like `z0`")),
            };
            let site = chars
                .as_str()
                .parse::<usize>()
                .map_err(|_| format!("`{f}` lacks a site index"))?;
            Ok((site, axis))
        })
        .collect::<Result<Vec<_>, String>>()?;
    LocalOperator::product(factors).map_err(|e| e.to_string())
}

fn operator(e: &mut Entries, key: &str, n: usize) -> Result<Option<LocalOperator>, ConfigError> {
    let Some(text) = e.raw(key) else {
        return Ok(None);
    };
    if text == "none" {
        return Ok(None);
    }
    let op = parse_operator(&text).map_err(|r| invalid(key, r))?;
    if let Some(s) = op.sites().find(|&s| s >= n) {
        return Err(invalid(key, format!("site {s} outside chain of {n}")));
    }
    Ok(Some(op))
}

fn check_sites(key: &str, sites: &[usize], n: usize) -> Result<(), ConfigError> {
    if sites.is_empty() {
        return Err(invalid(key, "needs at least one site"));
    }
    if let Some(s) = sites.iter().find(|&&s| s >= n) {
        return Err(invalid(key, format!("site {s} outside chain of {n}")));
    }
    let mut sorted = sites.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != sites.len() {
        return Err(invalid(key, "sites repeat"));
    }
    Ok(())
}

fn regime(e: &mut Entries) -> Result<RegimeParams, ConfigError> {
    let d = RegimeParams::default();
    let rel_tol = e.finite("analysis.rel_tol", d.rel_tol)?;
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(invalid("analysis.rel_tol", "must lie in (0, 1)"));
    }
    let window_fraction = e.finite("analysis.window_fraction", d.window_fraction)?;
    if !(window_fraction > 0.0 && window_fraction < 1.0) {
        return Err(invalid("analysis.window_fraction", "must lie in (0, 1)"));
    }
    let otoc_onset = e.finite("analysis.otoc_onset", d.otoc_onset)?;
    if !(otoc_onset > 0.0 && otoc_onset < 1.0) {
        return Err(invalid("analysis.otoc_onset", "must lie in (0, 1)"));
    }
    let otoc_floor = e.finite("analysis.otoc_floor", d.otoc_floor)?;
    if !(otoc_floor > 0.0 && otoc_floor < 1.0) {
        return Err(invalid("analysis.otoc_floor", "must lie in (0, 1)"));
    }
    let revival_time = e.get::<f64>("analysis.revival_time")?;
    if revival_time.is_some_and(|t| !(t.is_finite() && t > 0.0)) {
        return Err(invalid("analysis.revival_time", "must be > 0"));
    }
    Ok(RegimeParams {
        rel_tol,
        window_fraction,
        otoc_onset,
        otoc_floor,
        revival_time,
    })
}

fn spin_model(e: &mut Entries) -> Result<IsingParams, ConfigError> {
    let sites: usize = e.require("spin.L")?;
    if sites == 0 || sites > MAX_SITES {
        return Err(invalid("spin.L", format!("L must lie in 1..={MAX_SITES}, got {sites}")));
    }
    let d = IsingParams::chaotic(sites);
    Ok(IsingParams {
        sites,
        coupling: e.finite("spin.J", d.coupling)?,
        transverse_field: e.finite("spin.g", d.transverse_field)?,
        longitudinal_field: e.finite("spin.hz", d.longitudinal_field)?,
        boundary: e.or("spin.boundary", BoundaryArg(d.boundary))?.0,
    })
}

fn initial_state(e: &mut Entries) -> Result<InitialState, ConfigError> {
    let name: String = e.or("state.initial", "all_up".to_string())?;
    Ok(match name.as_str() {
        "all_up" => InitialState::AllUp,
        "ground" => InitialState::Ground,
        "random" => InitialState::Random,
        "thermal" => InitialState::Thermal(e.non_negative("state.beta", 1.0)?),
        _ => {
            return Err(invalid(
                "state.initial",
                "expected `all_up`, `ground`, `random` or `thermal`",
            ))
        }
    })
}

fn first_half(n: usize) -> Vec<usize> {
    (0..(n / 2).max(1)).collect()
}

fn spin_quench(e: &mut Entries) -> Result<SpinQuenchConfig, ConfigError> {
    let model = spin_model(e)?;
    let n = model.sites;
    let initial = initial_state(e)?;
    let operator = operator(e, "quench.operator", n)?;
    let block = e.sites("block.sites")?.unwrap_or_else(|| first_half(n));
    check_sites("block.sites", &block, n)?;
    Ok(SpinQuenchConfig {
        model,
        initial,
        operator,
        block,
    })
}

fn otoc(e: &mut Entries, model: IsingParams) -> Result<OtocConfig, ConfigError> {
    let n = model.sites;
    let w = operator(e, "otoc.w", n)?.unwrap_or(LocalOperator::single(0, Pauli::Z));
    let v = operator(e, "otoc.v", n)?.unwrap_or(LocalOperator::single(n / 2, Pauli::Z));
    let name: String = e.or("otoc.state", "infinite_temperature".to_string())?;
    let state = match name.as_str() {
        "infinite_temperature" => OtocStateSpec::InfiniteTemperature,
        "thermal" => OtocStateSpec::Thermal(e.non_negative("otoc.beta", 1.0)?),
        "ground" => OtocStateSpec::Ground,
        _ => {
            return Err(invalid(
                "otoc.state",
                "expected `infinite_temperature`, `thermal` or `ground`",
            ))
        }
    };
    Ok(OtocConfig {
        model,
        w,
        v,
        state,
        regime: regime(e)?,
    })
}

fn fermion_quench(e: &mut Entries) -> Result<FermionQuenchConfig, ConfigError> {
    let len: usize = e.require("lattice.L")?;
    if len < 2 {
        return Err(invalid("lattice.L", format!("L must be >= 2, got {len}")));
    }
    let boundary = e.or("lattice.boundary", BoundaryArg(Boundary::Open))?.0;
    let disorder = e.non_negative("lattice.disorder", 0.0)?;

    let protocol: String = e.require("quench.protocol")?;
    let quench = match protocol.as_str() {
        "join_halves" => QuenchSpec::JoinHalves {
            cut: e.or("quench.cut", len / 2)?,
        },
        "local_creation" => QuenchSpec::LocalCreation {
            site: e.or("quench.site", len / 2)?,
        },
        "thermal_creation" => QuenchSpec::ThermalBackgroundPlusCreation {
            site: e.or("quench.site", len / 2)?,
            beta: e.non_negative("quench.beta", 1.0)?,
        },
        _ => {
            return Err(invalid(
                "quench.protocol",
                "expected `join_halves`, `local_creation` or `thermal_creation`",
            ))
        }
    };
    quench.validate(len).map_err(|err| match err {
        quenchlab_core::Error::InvalidParameter { name, reason } => {
            invalid(&format!("quench.{name}"), reason)
        }
        other => invalid("quench", other.to_string()),
    })?;

    let start: usize = e.or("block.start", 0)?;
    let end: usize = e.or("block.end", len / 2)?;
    if start >= end || end > len {
        return Err(invalid(
            "block.end",
            format!("block {start}..{end} must be non-empty and inside 0..{len}"),
        ));
    }
    let fit_window = match (e.get::<f64>("analysis.fit_start")?, e.get::<f64>("analysis.fit_end")?) {
        (None, None) => None,
        (Some(lo), Some(hi)) if lo > 0.0 && lo < hi => Some((lo, hi)),
        (Some(_), Some(_)) => {
            return Err(invalid("analysis.fit_start", "need 0 < fit_start < fit_end"))
        }
        (Some(_), None) => return Err(ConfigError::Missing("analysis.fit_end".into())),
        (None, Some(_)) => return Err(ConfigError::Missing("analysis.fit_start".into())),
    };
    Ok(FermionQuenchConfig {
        len,
        boundary,
        disorder,
        quench,
        block: start..end,
        fit_window,
        regime: regime(e)?,
    })
}

fn eikonal(e: &mut Entries) -> Result<EikonalConfig, ConfigError> {
    let d = EikonalModel::default();
    let real_profile = match e.or("eikonal.real_profile", "exponential".to_string())?.as_str() {
        "zero" => RealProfile::Zero,
        "exponential" => RealProfile::Exponential {
            amplitude: e.finite("eikonal.real_amplitude", 1.0)?,
            scale: e.positive("eikonal.real_scale", 0.25)?,
        },
        _ => return Err(invalid("eikonal.real_profile", "expected `zero` or `exponential`")),
    };
    let horizon_scale = e.positive("eikonal.horizon", 1.0)?;
    let absorptive_profile = match e.or("eikonal.absorber", "gaussian".to_string())?.as_str() {
        "gaussian" => AbsorptiveProfile::Gaussian {
            alpha: e.non_negative("eikonal.alpha", 1.0)?,
            horizon_scale,
        },
        "hard_disk" => AbsorptiveProfile::HardDisk { horizon_scale },
        _ => return Err(invalid("eikonal.absorber", "expected `gaussian` or `hard_disk`")),
    };
    let model = EikonalModel {
        newton_constant: e.positive("eikonal.G", d.newton_constant)?,
        base_energy: e.positive("eikonal.s0", d.base_energy)?,
        beta: e.positive("eikonal.beta", d.beta)?,
        real_profile,
        absorptive_profile,
        grid: ImpactGrid {
            b_max: e.positive("eikonal.b_max", d.grid.b_max)?,
            points: e.or("eikonal.points", d.grid.points)?,
        },
        area_scale: e.positive("eikonal.area_scale", d.area_scale)?,
        plateau_fraction: e.positive("eikonal.plateau_fraction", d.plateau_fraction)?,
    }
    .validated()
    .map_err(|err| core_invalid("eikonal", err))?;
    let mode = match e.or("eikonal.mode", "saturating".to_string())?.as_str() {
        "saturating" => SuppressionMode::Saturating,
        "literal" => SuppressionMode::LiteralSubtraction,
        _ => return Err(invalid("eikonal.mode", "expected `saturating` or `literal`")),
    };
    let c = CftParams::default();
    let cft = CftParams {
        central_charge: e.positive("cft.c", c.central_charge)?,
        regulator: e.positive("cft.delta", c.regulator)?,
        ..c
    }
    .validated()
    .map_err(|err| core_invalid("cft", err))?;
    Ok(EikonalConfig {
        model,
        cft,
        mode,
        regime: regime(e)?,
    })
}

fn core_invalid(section: &str, err: quenchlab_core::Error) -> ConfigError {
    match err {
        quenchlab_core::Error::InvalidParameter { name, reason } => {
            invalid(&format!("{section}.{name}"), reason)
        }
        other => invalid(section, other.to_string()),
    }
}

fn negativity(e: &mut Entries) -> Result<NegativityConfig, ConfigError> {
    let model = spin_model(e)?;
    let n = model.sites;
    let initial = initial_state(e)?;
    let operator = operator(e, "quench.operator", n)?;
    let a = e.sites("partition.a")?.unwrap_or_else(|| first_half(n));
    let b = e
        .sites("partition.b")?
        .unwrap_or_else(|| (0..n).filter(|s| !a.contains(s)).collect());
    check_sites("partition.a", &a, n)?;
    check_sites("partition.b", &b, n)?;
    if a.iter().any(|s| b.contains(s)) {
        return Err(invalid("partition.b", "overlaps partition.a"));
    }
    Ok(NegativityConfig {
        model,
        initial,
        operator,
        a,
        b,
    })
}

fn time_grid(e: &mut Entries) -> Result<TimeGrid, ConfigError> {
    let start = e.finite("time.start", 0.0)?;
    let end: f64 = e.require("time.end")?;
    let points: usize = e.require("time.points")?;
    if !end.is_finite() || start >= end {
        return Err(invalid("time.end", format!("need time.start < time.end, got {start} and {end}")));
    }
    if points < 2 {
        return Err(invalid("time.points", format!("n_points must be >= 2, got {points}")));
    }
    Ok(TimeGrid { start, end, points })
}

/// Parses config text. `kind` overrides a missing `kind` entry.
pub fn parse_config(text: &str, kind: Option<Kind>) -> Result<ExperimentConfig, ConfigError> {
    let mut e = Entries::parse(text)?;
    let declared: Option<Kind> = e.get("kind")?;
    let kind = match (declared, kind) {
        (Some(d), Some(r)) if d != r => {
            return Err(ConfigError::KindMismatch {
                declared: d,
                requested: r,
            })
        }
        (Some(k), _) | (None, Some(k)) => k,
        (None, None) => return Err(ConfigError::Missing("kind".into())),
    };
    let seed = e.or("seed", 0u64)?;
    let output_dir = e.raw("output.dir").map(PathBuf::from);
    let plot = e.or("output.plot", false)?;
    let time = time_grid(&mut e)?;

    let model = match kind {
        Kind::FermionQuench => Model::FermionQuench(fermion_quench(&mut e)?),
        Kind::SpinQuench => Model::SpinQuench(spin_quench(&mut e)?),
        Kind::Otoc => {
            let m = spin_model(&mut e)?;
            Model::Otoc(otoc(&mut e, m)?)
        }
        Kind::Negativity => Model::Negativity(negativity(&mut e)?),
        Kind::Eikonal => Model::Eikonal(eikonal(&mut e)?),
        Kind::Report => {
            let quench = spin_quench(&mut e)?;
            let otoc = otoc(&mut e, quench.model)?;
            Model::Report(ReportConfig { quench, otoc })
        }
    };
    e.reject_unused()?;
    Ok(ExperimentConfig {
        kind,
        seed,
        time,
        output_dir,
        plot,
        model,
        echo: e.echo(),
    })
}
