//! Grid evaluation.

use std::time::Instant;

use foxlink_core::channels::pe_from_geometry;
use foxlink_core::mc::{
    estimate_ber_df, estimate_capacity, estimate_outage, McEstimate, RngConfig,
};
use foxlink_core::metrics::PowerBudget;
use foxlink_core::{
    CascadeSpec, DggParams, Hop, LinkBudget, MixedLink, ModulationParams, PointingErrorParams,
    ThresholdSpec,
};
use rayon::prelude::*;

use crate::config::{Metric, Mode, PointingRef, SweepConfig, TurbulenceRef};
use crate::error::CliError;
use crate::profiles;

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub k: usize,
    pub power_dbm: f64,
    pub metric: Metric,
    pub mode: Mode,
    /// `None` if the evaluation failed (see the result notes).
    pub value: Option<f64>,
    pub std_error: Option<f64>,
    pub ci: Option<(f64, f64)>,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub tool_version: String,
    pub name: String,
    pub config_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub meta: Metadata,
    /// Sorted by `(K, power, mode)`.
    pub rows: Vec<Row>,
    /// Failures and fallbacks, in row order.
    pub notes: Vec<String>,
}

/// A config with every profile resolved to numbers.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub fso: DggParams,
    pub rf: DggParams,
    pub endpoints: PointingErrorParams,
    pub interior: PointingErrorParams,
    pub budget: PowerBudget,
    pub threshold: ThresholdSpec,
    pub modulation: ModulationParams,
}

fn turbulence(r: &TurbulenceRef) -> Result<DggParams, CliError> {
    let p = match r {
        TurbulenceRef::Named(n) => profiles::turbulence(n)?,
        TurbulenceRef::Inline(p) => *p,
    };
    p.validate()?;
    Ok(p)
}

fn pointing(r: &PointingRef) -> Result<PointingErrorParams, CliError> {
    let p = match r {
        PointingRef::Named(n) => profiles::pointing(n)?,
        PointingRef::Direct(p) => *p,
        PointingRef::Geometry { geometry } => pe_from_geometry(geometry)?,
    };
    p.validate()?;
    Ok(p)
}

impl Resolved {
    pub fn new(cfg: &SweepConfig) -> Result<Self, CliError> {
        let b = &cfg.budget;
        let budget = PowerBudget {
            fso_path_gain: b.fso_path_gain,
            fso_noise_db: b.fso_noise_db,
            rf_path_gain: b.rf_path_gain,
            rf_noise_dbm: b.rf_noise_dbm,
        };
        if !budget.fso_noise_db.is_finite() || !budget.rf_noise_dbm.is_finite() {
            return Err(CliError::Config("noise levels must be finite".into()));
        }
        LinkBudget::from_power(0.0, &budget)?;
        Ok(Self {
            fso: turbulence(&cfg.fso_profile)?,
            rf: turbulence(&cfg.rf_profile)?,
            endpoints: pointing(&cfg.pointing.endpoints)?,
            interior: pointing(&cfg.pointing.interior)?,
            budget,
            threshold: ThresholdSpec::from_db(cfg.gamma_th_db)?,
            modulation: ModulationParams::new(cfg.modulation.p, cfg.modulation.q)?,
        })
    }

    /// K optical factors: the endpoint pointing profile on the first and last
    /// hop, the interior one in between.
    pub fn fso_cascade(&self, k: usize) -> Result<CascadeSpec, CliError> {
        let hops = (0..k)
            .map(|i| {
                Hop::fso(
                    self.fso,
                    if i == 0 || i + 1 == k {
                        self.endpoints
                    } else {
                        self.interior
                    },
                )
            })
            .collect();
        Ok(CascadeSpec::new(hops)?)
    }

    pub fn rf_cascade(&self, k: usize) -> Result<CascadeSpec, CliError> {
        Ok(CascadeSpec::new(
            (0..k).map(|_| Hop::rf(self.rf)).collect(),
        )?)
    }

    pub fn link_budget(&self, power_dbm: f64) -> Result<LinkBudget, CliError> {
        Ok(LinkBudget::from_power(power_dbm, &self.budget)?)
    }
}

struct Point {
    k_index: usize,
    k: usize,
    p_index: usize,
    power_dbm: f64,
    mode: Mode,
}

struct Evaluated {
    row: Row,
    note: Option<String>,
}

struct Link {
    fso: CascadeSpec,
    rf: CascadeSpec,
    mixed: MixedLink,
}

/// Evaluates every `(K, power, mode)` triple of `cfg` on the current rayon
/// pool. Failures are recorded per row and do not stop the sweep.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult, CliError> {
    cfg.validate()?;
    let res = Resolved::new(cfg)?;
    let links = cfg
        .hop_counts
        .iter()
        .map(|&k| {
            let (fso, rf) = (res.fso_cascade(k)?, res.rf_cascade(k)?);
            let mixed = MixedLink::new(&fso, &rf)?;
            Ok(Link { fso, rf, mixed })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let powers = cfg.power_grid_dbm.points();
    let modes = cfg.mode.expand(cfg.metric);
    let mut points = Vec::new();
    for (k_index, &k) in cfg.hop_counts.iter().enumerate() {
        for (p_index, &power_dbm) in powers.iter().enumerate() {
            for &mode in &modes {
                points.push(Point {
                    k_index,
                    k,
                    p_index,
                    power_dbm,
                    mode,
                });
            }
        }
    }
    let mut out: Vec<Evaluated> = points
        .par_iter()
        .map(|p| evaluate(cfg, &res, &links[p.k_index], p))
        .collect();
    out.sort_by(|a, b| {
        a.row
            .k
            .cmp(&b.row.k)
            .then(a.row.power_dbm.total_cmp(&b.row.power_dbm))
            .then(a.row.mode.cmp(&b.row.mode))
    });
    let notes = out.iter().filter_map(|e| e.note.clone()).collect();
    Ok(SweepResult {
        meta: Metadata {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            name: cfg.name.clone(),
            config_hash: cfg.hash(),
            seed: cfg.mc.seed,
        },
        rows: out.into_iter().map(|e| e.row).collect(),
        notes,
    })
}

fn evaluate(cfg: &SweepConfig, res: &Resolved, link: &Link, p: &Point) -> Evaluated {
    let start = Instant::now();
    let mut row = Row {
        k: p.k,
        power_dbm: p.power_dbm,
        metric: cfg.metric,
        mode: p.mode,
        value: None,
        std_error: None,
        ci: None,
        wall_ms: None,
    };
    let here = format!("K={} power={} dBm {}", p.k, p.power_dbm, p.mode);
    let mut note = None;
    match compute(cfg, res, link, p) {
        Ok(Computed::Exact { value, fallback }) => {
            row.value = Some(value);
            if fallback {
                note = Some(format!(
                    "fallback: {here}: capacity cross terms by quadrature"
                ));
            }
        }
        Ok(Computed::Mc(e)) => {
            row.value = Some(e.value);
            row.std_error = Some(e.std_error);
            row.ci = Some(e.ci95);
        }
        Err(e) => note = Some(format!("failed: {here}: {e}")),
    }
    if cfg.timing {
        row.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Evaluated { row, note }
}

enum Computed {
    Exact { value: f64, fallback: bool },
    Mc(McEstimate),
}

fn compute(
    cfg: &SweepConfig,
    res: &Resolved,
    link: &Link,
    p: &Point,
) -> Result<Computed, CliError> {
    let lb = res.link_budget(p.power_dbm)?;
    let m = &link.mixed;
    let exact = |value| {
        Ok(Computed::Exact {
            value,
            fallback: false,
        })
    };
    match (p.mode, cfg.metric) {
        (Mode::Analytic, Metric::Outage) => exact(m.outage(&lb, &res.threshold)?),
        (Mode::Analytic, Metric::Ber) => exact(m.avg_ber_df(&lb, &res.modulation)?),
        (Mode::Analytic, Metric::Capacity) => {
            let c = m.capacity(&lb)?;
            Ok(Computed::Exact {
                value: c.value,
                fallback: c.used_fallback(),
            })
        }
        (Mode::Asymptotic, Metric::Outage) => {
            exact(m.outage_asymptotic(&lb, &res.threshold)?.value)
        }
        (Mode::Asymptotic, metric) => {
            Err(CliError::Config(format!("no asymptotic form for {metric}")))
        }
        (Mode::Mc, metric) => {
            // One substream per grid point, so the result does not depend on
            // scheduling.
            let stream_id = ((p.k_index as u64) << 32) | p.p_index as u64;
            let mut rng = RngConfig {
                seed: cfg.mc.seed,
                stream_id,
            }
            .rng();
            let n = cfg.mc.n_samples;
            let e = match metric {
                Metric::Outage => {
                    estimate_outage(&link.fso, &link.rf, &lb, &res.threshold, n, &mut rng)
                }
                Metric::Ber => {
                    estimate_ber_df(&link.fso, &link.rf, &lb, &res.modulation, n, &mut rng)
                }
                Metric::Capacity => estimate_capacity(&link.fso, &link.rf, &lb, n, &mut rng),
            };
            Ok(Computed::Mc(e))
        }
        (Mode::All, _) => unreachable!("expanded before evaluation"),
    }
}
