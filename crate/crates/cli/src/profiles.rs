//! Builtin parameter sets and the figure presets.

use std::path::PathBuf;

use foxlink_core::{DggParams, GenGammaParams, PointingErrorParams};

use crate::config::{
    BudgetConfig, McConfig, Metric, Mode, ModulationConfig, PointingConfig, PointingRef, PowerGrid,
    SweepConfig, TurbulenceRef,
};
use crate::error::CliError;

/// RF receiver noise floor for a 20 MHz channel.
pub const RF_NOISE_DBM: f64 = -104.4;

/// `σ_R²` used by the outage preset. Only the difference between the
/// transmit power and this value matters; it was chosen so that the K=2 to
/// K=3 outage gap at 1e-3 lands near 20 dBm.
pub const FIG1A_FSO_NOISE_DB: f64 = -255.0;

/// `σ_R²` used by the BER and capacity presets.
pub const FIG1BC_FSO_NOISE_DB: f64 = -200.0;

const fn gg(alpha: f64, beta: f64, omega: f64) -> GenGammaParams {
    GenGammaParams { alpha, beta, omega }
}

/// Strong turbulence.
pub const ST: DggParams = DggParams {
    first: gg(1.8621, 0.5, 1.5074),
    second: gg(1.0, 1.8, 0.928),
};

/// Moderate turbulence.
pub const MT: DggParams = DggParams {
    first: gg(2.169, 0.55, 1.5793),
    second: gg(1.0, 2.35, 0.9671),
};

/// Radio fading.
pub const RF_DEFAULT: DggParams = DggParams {
    first: gg(1.5, 1.5, 1.5793),
    second: gg(1.0, 1.5, 0.9671),
};

/// First and last optical hop.
pub const PE_ENDPOINTS: PointingErrorParams = PointingErrorParams {
    a0: 0.02,
    rho2: 6.0,
};

/// Surface-to-surface optical hops. `A₀` is an assumption (same as the
/// endpoints); configs must restate it.
pub const PE_INTERIOR: PointingErrorParams = PointingErrorParams {
    a0: 0.02,
    rho2: 25.0,
};

pub const PRESETS: [&str; 3] = ["paper-fig1a", "paper-fig1b", "paper-fig1c"];

fn key(name: &str) -> String {
    name.to_ascii_lowercase().replace('_', "-")
}

pub fn turbulence(name: &str) -> Result<DggParams, CliError> {
    match key(name).as_str() {
        "st" => Ok(ST),
        "mt" => Ok(MT),
        "rf-default" | "rf" => Ok(RF_DEFAULT),
        _ => Err(CliError::UnknownProfile(name.into())),
    }
}

pub fn pointing(name: &str) -> Result<PointingErrorParams, CliError> {
    match key(name).as_str() {
        "pe-endpoints" => Ok(PE_ENDPOINTS),
        "pe-interior" => Ok(PE_INTERIOR),
        _ => Err(CliError::UnknownProfile(name.into())),
    }
}

/// Human-readable table for `profiles list`.
pub fn describe() -> Vec<(String, String)> {
    let d = |p: &DggParams| {
        format!(
            "α₁={} β₁={} Ω₁={}  α₂={} β₂={} Ω₂={}",
            p.first.alpha,
            p.first.beta,
            p.first.omega,
            p.second.alpha,
            p.second.beta,
            p.second.omega
        )
    };
    let pe = |p: &PointingErrorParams| format!("A₀={} ρ²={}", p.a0, p.rho2);
    let mut v = vec![
        ("ST".into(), d(&ST)),
        ("MT".into(), d(&MT)),
        ("RF-default".into(), d(&RF_DEFAULT)),
        ("PE-endpoints".into(), pe(&PE_ENDPOINTS)),
        (
            "PE-interior".into(),
            format!("{} (A₀ assumed)", pe(&PE_INTERIOR)),
        ),
    ];
    for name in PRESETS {
        let cfgs = preset(name).expect("builtin preset");
        let c = &cfgs[0];
        v.push((
            name.into(),
            format!(
                "{} vs power {}..{} dBm, K ∈ {:?}, σ_R² = {} dB, runs: {}",
                c.metric,
                c.power_grid_dbm.start,
                c.power_grid_dbm.stop,
                c.hop_counts,
                c.budget.fso_noise_db,
                cfgs.iter()
                    .map(|c| c.name.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        ));
    }
    v
}

fn figure(
    name: &str,
    turbulence: &str,
    metric: Metric,
    grid: PowerGrid,
    fso_noise_db: f64,
) -> SweepConfig {
    SweepConfig {
        name: format!("{name}-{}", turbulence.to_ascii_lowercase()),
        metric,
        mode: Mode::All,
        power_grid_dbm: grid,
        hop_counts: vec![2, 3],
        fso_profile: TurbulenceRef::Named(turbulence.into()),
        rf_profile: TurbulenceRef::Named("RF-default".into()),
        pointing: PointingConfig {
            endpoints: PointingRef::Named("PE-endpoints".into()),
            interior: PointingRef::Direct(PE_INTERIOR),
        },
        budget: BudgetConfig {
            fso_noise_db,
            fso_path_gain: 1.0,
            rf_path_gain: 1.0,
            rf_noise_dbm: RF_NOISE_DBM,
        },
        modulation: ModulationConfig::default(),
        gamma_th_db: 0.0,
        mc: McConfig {
            n_samples: 1_000_000,
            seed: 1,
        },
        output: PathBuf::from("out"),
        plot: true,
        timing: false,
    }
}

/// The figure presets, one run per turbulence profile.
pub fn preset(name: &str) -> Result<Vec<SweepConfig>, CliError> {
    let (metric, grid, noise) = match key(name).as_str() {
        "paper-fig1a" => (
            Metric::Outage,
            PowerGrid {
                start: -70.0,
                stop: 10.0,
                step: 2.0,
            },
            FIG1A_FSO_NOISE_DB,
        ),
        "paper-fig1b" => (
            Metric::Ber,
            PowerGrid {
                start: -60.0,
                stop: 20.0,
                step: 2.0,
            },
            FIG1BC_FSO_NOISE_DB,
        ),
        "paper-fig1c" => (
            Metric::Capacity,
            PowerGrid {
                start: -60.0,
                stop: 0.0,
                step: 2.0,
            },
            FIG1BC_FSO_NOISE_DB,
        ),
        _ => return Err(CliError::UnknownProfile(name.into())),
    };
    let base = key(name);
    Ok(["ST", "MT"]
        .iter()
        .map(|t| figure(&base, t, metric, grid, noise))
        .collect())
}
