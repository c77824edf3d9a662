//! Sweep configuration (JSON).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use foxlink_core::{DggParams, PointingErrorParams, PointingGeometry};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Outage,
    Ber,
    Capacity,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Ber => "ber",
            Metric::Capacity => "capacity",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "outage" => Ok(Metric::Outage),
            "ber" => Ok(Metric::Ber),
            "capacity" => Ok(Metric::Capacity),
            _ => Err(CliError::Config(format!("unknown metric {s:?}"))),
        }
    }
}

/// Which evaluators to run. `All` expands to every mode defined for the metric.
#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    Hash,
    PartialOrd,
    Ord,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Asymptotic,
    Mc,
    All,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Analytic => "analytic",
            Mode::Asymptotic => "asymptotic",
            Mode::Mc => "mc",
            Mode::All => "all",
        }
    }

    /// Concrete modes for `metric`. Only outage has an asymptotic form.
    pub fn expand(self, metric: Metric) -> Vec<Mode> {
        match self {
            Mode::All if metric == Metric::Outage => {
                vec![Mode::Analytic, Mode::Asymptotic, Mode::Mc]
            }
            Mode::All => vec![Mode::Analytic, Mode::Mc],
            m => vec![m],
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "analytic" => Ok(Mode::Analytic),
            "asymptotic" => Ok(Mode::Asymptotic),
            "mc" => Ok(Mode::Mc),
            "all" => Ok(Mode::All),
            _ => Err(CliError::Config(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl PowerGrid {
    /// `start + i·step` for every `i` with the point not beyond `stop`.
    pub fn points(&self) -> Vec<f64> {
        if !(self.step > 0.0)
            || !self.start.is_finite()
            || !self.stop.is_finite()
            || self.stop < self.start
        {
            return Vec::new();
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// A builtin profile name or inline dGG parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TurbulenceRef {
    Named(String),
    Inline(DggParams),
}

/// A builtin profile name, direct `(A₀, ρ²)`, or a geometry to convert.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointingRef {
    Named(String),
    Direct(PointingErrorParams),
    Geometry { geometry: PointingGeometry },
}

/// Pointing errors by hop position. Both fields are required: the interior
/// value is not a published constant and has to be stated explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointingConfig {
    /// First and last optical hop (and the only hop when K = 1).
    pub endpoints: PointingRef,
    /// Hops between two surfaces.
    pub interior: PointingRef,
}

/// Constants mapping transmit power to average SNRs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    /// Optical receiver noise variance `σ_R²` in dB (relative to 1 mW²).
    /// There is no published value; it is a calibration constant.
    pub fso_noise_db: f64,
    #[serde(default = "one")]
    pub fso_path_gain: f64,
    #[serde(default = "one")]
    pub rf_path_gain: f64,
    #[serde(default = "rf_noise")]
    pub rf_noise_dbm: f64,
}

fn one() -> f64 {
    1.0
}

fn rf_noise() -> f64 {
    crate::profiles::RF_NOISE_DBM
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulationConfig {
    pub p: f64,
    pub q: f64,
}

impl Default for ModulationConfig {
    fn default() -> Self {
        Self { p: 1.0, q: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    #[serde(default = "default_samples")]
    pub n_samples: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> u64 {
    1_000_000
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_samples: default_samples(),
            seed: 0,
        }
    }
}

pub const MIN_MC_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Base name of the output files.
    #[serde(default = "default_name")]
    pub name: String,
    pub metric: Metric,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    pub power_grid_dbm: PowerGrid,
    /// Numbers of multiplicative channel factors K (hops) per link.
    pub hop_counts: Vec<usize>,
    pub fso_profile: TurbulenceRef,
    pub rf_profile: TurbulenceRef,
    pub pointing: PointingConfig,
    pub budget: BudgetConfig,
    #[serde(default)]
    pub modulation: ModulationConfig,
    #[serde(default)]
    pub gamma_th_db: f64,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default = "yes")]
    pub plot: bool,
    /// Record per-row wall time. Off by default so reruns are byte-identical.
    #[serde(default)]
    pub timing: bool,
}

fn default_name() -> String {
    "sweep".into()
}

fn default_mode() -> Mode {
    Mode::Analytic
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

impl SweepConfig {
    pub fn from_json(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let s = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        Self::from_json(&s)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the canonical JSON form, without the output directory.
    /// Reordering fields in the source file does not change it.
    pub fn hash(&self) -> String {
        let mut canonical = serde_json::to_value(self).expect("config serializes");
        canonical
            .as_object_mut()
            .expect("config is an object")
            .remove("output");
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }

    /// Schema-level checks plus profile resolution.
    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.power_grid_dbm;
        if !(g.step > 0.0 && g.step.is_finite()) {
            return Err(CliError::Config(format!(
                "power_grid_dbm.step must be positive, got {}",
                g.step
            )));
        }
        if self.power_grid_dbm.points().is_empty() {
            return Err(CliError::Config(format!(
                "power grid [{}, {}] is empty",
                g.start, g.stop
            )));
        }
        if self.hop_counts.is_empty() || self.hop_counts.contains(&0) {
            return Err(CliError::Config(
                "hop_counts must be a nonempty list of positive integers".into(),
            ));
        }
        let mut ks = self.hop_counts.clone();
        ks.sort_unstable();
        ks.dedup();
        if ks.len() != self.hop_counts.len() {
            return Err(CliError::Config("hop_counts contains duplicates".into()));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(CliError::Config(format!(
                "name {:?} is not a plain file name",
                self.name
            )));
        }
        let includes_mc = self.mode == Mode::Mc || self.mode == Mode::All;
        if includes_mc && self.mc.n_samples < MIN_MC_SAMPLES {
            return Err(CliError::Config(format!(
                "mc.n_samples must be at least {MIN_MC_SAMPLES}"
            )));
        }
        if self.mode == Mode::Asymptotic && self.metric != Metric::Outage {
            return Err(CliError::Config(format!(
                "no asymptotic form for {}",
                self.metric
            )));
        }
        crate::sweep::Resolved::new(self)?;
        Ok(())
    }
}
