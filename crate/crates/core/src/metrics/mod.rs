//! End-to-end performance of a decode-and-forward mixed FSO/RF link: SNR
//! distribution, outage, diversity order, average BER and ergodic capacity.
//!
//! The optical hop SNR is `γ_F = γ̄_F h²` (intensity modulation with direct
//! detection) and the radio hop SNR is `γ_R = γ̄_R g²`; the relay decodes and
//! forwards, so the end-to-end SNR is `min(γ_F, γ_R)`.

mod asymptotic;
mod ber;
mod capacity;
pub mod reference;

use alloc::string::String;

#[allow(unused_imports)]
use num_traits::Float;

use crate::channels::{cascade_fso, cascade_rf, CascadeSpec, ChannelError, LinkKind, MellinLaw};
use crate::foxh::FoxHError;

pub use asymptotic::{leading_cdf_terms, AsymptoticOutage, AsymptoticPath, LeadingTerm};
pub use ber::{ber_kernel, conditional_ber, link_ber};
pub use capacity::{
    capacity_kernel, cross_term_params, link_capacity, Capacity, CapacityOptions, CapacityTerm,
    TermPath,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("{name} must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("{0}")]
    Spec(String),
    #[error("coincident residue exponents: Γ argument {argument} is a pole (exponent {exponent})")]
    DegenerateExponents { exponent: f64, argument: f64 },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    FoxH(#[from] FoxHError),
}

fn positive(name: &'static str, value: f64) -> Result<f64, MetricsError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(MetricsError::InvalidParameter {
            name,
            value,
            requirement: "positive and finite",
        })
    }
}

/// `10^{x/10}`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10 log10(x)`.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Average SNRs of the two links (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkBudget {
    pub mean_snr_fso: f64,
    pub mean_snr_rf: f64,
}

/// Transmitter/receiver constants turning a transmit power into average SNRs:
/// `γ̄_F = P² |h_l|² / σ_R²` and `γ̄_R = P |g_l|² / σ_D²`, with `P` in mW.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PowerBudget {
    /// `|h_l|²` (linear).
    pub fso_path_gain: f64,
    /// `σ_R²` in dB relative to 1 mW².
    pub fso_noise_db: f64,
    /// `|g_l|²` (linear).
    pub rf_path_gain: f64,
    /// `σ_D²` in dBm.
    pub rf_noise_dbm: f64,
}

impl LinkBudget {
    pub fn new(mean_snr_fso: f64, mean_snr_rf: f64) -> Result<Self, MetricsError> {
        positive("mean_snr_fso", mean_snr_fso)?;
        positive("mean_snr_rf", mean_snr_rf)?;
        Ok(Self {
            mean_snr_fso,
            mean_snr_rf,
        })
    }

    pub fn from_db(fso_db: f64, rf_db: f64) -> Result<Self, MetricsError> {
        Self::new(db_to_linear(fso_db), db_to_linear(rf_db))
    }

    /// Both links at the same average SNR.
    pub fn symmetric_db(db: f64) -> Result<Self, MetricsError> {
        Self::from_db(db, db)
    }

    pub fn from_power(power_dbm: f64, budget: &PowerBudget) -> Result<Self, MetricsError> {
        positive("fso_path_gain", budget.fso_path_gain)?;
        positive("rf_path_gain", budget.rf_path_gain)?;
        let fso_db = 2.0 * power_dbm + linear_to_db(budget.fso_path_gain) - budget.fso_noise_db;
        let rf_db = power_dbm + linear_to_db(budget.rf_path_gain) - budget.rf_noise_dbm;
        Self::from_db(fso_db, rf_db)
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        positive("mean_snr_fso", self.mean_snr_fso)?;
        positive("mean_snr_rf", self.mean_snr_rf)?;
        Ok(())
    }
}

/// Modulation constants of the conditional error probability
/// `Γ(p, qγ) / (2Γ(p))`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModulationParams {
    pub p: f64,
    pub q: f64,
}

impl ModulationParams {
    pub const DBPSK: Self = Self { p: 1.0, q: 1.0 };
    pub const BPSK: Self = Self { p: 0.5, q: 1.0 };

    pub fn new(p: f64, q: f64) -> Result<Self, MetricsError> {
        positive("p", p)?;
        positive("q", q)?;
        Ok(Self { p, q })
    }
}

/// Outage threshold `γ_th` (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdSpec {
    pub gamma_th: f64,
}

impl ThresholdSpec {
    pub fn new(gamma_th: f64) -> Result<Self, MetricsError> {
        positive("gamma_th", gamma_th)?;
        Ok(Self { gamma_th })
    }

    pub fn from_db(db: f64) -> Result<Self, MetricsError> {
        Self::new(db_to_linear(db))
    }
}

/// The two cascaded links of a mixed FSO/RF decode-and-forward system.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedLink {
    fso_spec: CascadeSpec,
    rf_spec: CascadeSpec,
    fso: MellinLaw,
    rf: MellinLaw,
}

impl MixedLink {
    pub fn new(fso: &CascadeSpec, rf: &CascadeSpec) -> Result<Self, MetricsError> {
        if fso.kind() != Some(LinkKind::Fso) {
            return Err(MetricsError::Spec(
                "the optical cascade needs pointing errors on every hop".into(),
            ));
        }
        if rf.kind() != Some(LinkKind::Rf) {
            return Err(MetricsError::Spec(
                "the radio cascade must not carry pointing errors".into(),
            ));
        }
        Ok(Self {
            fso_spec: fso.clone(),
            rf_spec: rf.clone(),
            fso: cascade_fso(fso)?,
            rf: cascade_rf(rf)?,
        })
    }

    pub fn fso_spec(&self) -> &CascadeSpec {
        &self.fso_spec
    }
    pub fn rf_spec(&self) -> &CascadeSpec {
        &self.rf_spec
    }
    pub fn fso_law(&self) -> &MellinLaw {
        &self.fso
    }
    pub fn rf_law(&self) -> &MellinLaw {
        &self.rf
    }

    /// `F_{γ_F}(γ) = F_h(√(γ/γ̄_F))`.
    pub fn fso_snr_cdf(&self, lb: &LinkBudget, gamma: f64) -> Result<f64, MetricsError> {
        Ok(self.fso.cdf(snr_to_gain(gamma, lb.mean_snr_fso)?)?)
    }

    /// `F_{γ_R}(γ) = F_g(√(γ/γ̄_R))`.
    pub fn rf_snr_cdf(&self, lb: &LinkBudget, gamma: f64) -> Result<f64, MetricsError> {
        Ok(self.rf.cdf(snr_to_gain(gamma, lb.mean_snr_rf)?)?)
    }

    /// `F_γ = F_F + F_R - F_F F_R`, the CDF of `min(γ_F, γ_R)`.
    pub fn snr_cdf(&self, lb: &LinkBudget, gamma: f64) -> Result<f64, MetricsError> {
        lb.validate()?;
        let f = self.fso_snr_cdf(lb, gamma)?;
        let r = self.rf_snr_cdf(lb, gamma)?;
        Ok(f + r - f * r)
    }

    /// `1 - (1 - F_F)(1 - F_R)`, the same CDF in product form.
    pub fn snr_cdf_product_form(&self, lb: &LinkBudget, gamma: f64) -> Result<f64, MetricsError> {
        lb.validate()?;
        let f = self.fso_snr_cdf(lb, gamma)?;
        let r = self.rf_snr_cdf(lb, gamma)?;
        Ok(1.0 - (1.0 - f) * (1.0 - r))
    }

    pub fn outage(&self, lb: &LinkBudget, th: &ThresholdSpec) -> Result<f64, MetricsError> {
        positive("gamma_th", th.gamma_th)?;
        self.snr_cdf(lb, th.gamma_th)
    }

    /// `min{α_{i,1}β_{i,1}, α_{i,2}β_{i,2}, ρ_i², α_{i,3}β_{i,3}, α_{i,4}β_{i,4}} / 2`.
    pub fn diversity_order(&self) -> f64 {
        let mut g = f64::INFINITY;
        for h in self.fso_spec.hops.iter().chain(self.rf_spec.hops.iter()) {
            g = g.min(h.turbulence.first.alpha * h.turbulence.first.beta);
            g = g.min(h.turbulence.second.alpha * h.turbulence.second.beta);
            if let Some(p) = &h.pointing {
                g = g.min(p.rho2);
            }
        }
        g / 2.0
    }

    pub fn avg_ber_fso(&self, lb: &LinkBudget, m: &ModulationParams) -> Result<f64, MetricsError> {
        link_ber(&self.fso, lb.mean_snr_fso, m)
    }

    pub fn avg_ber_rf(&self, lb: &LinkBudget, m: &ModulationParams) -> Result<f64, MetricsError> {
        link_ber(&self.rf, lb.mean_snr_rf, m)
    }

    /// End-to-end bit error probability of the two decoded hops:
    /// `P_F + P_R - 2 P_F P_R`.
    pub fn avg_ber_df(&self, lb: &LinkBudget, m: &ModulationParams) -> Result<f64, MetricsError> {
        let f = self.avg_ber_fso(lb, m)?;
        let r = self.avg_ber_rf(lb, m)?;
        Ok(f + r - 2.0 * f * r)
    }
}

fn snr_to_gain(gamma: f64, mean: f64) -> Result<f64, MetricsError> {
    positive("mean SNR", mean)?;
    if gamma.is_nan() || gamma < 0.0 {
        return Err(MetricsError::InvalidParameter {
            name: "gamma",
            value: gamma,
            requirement: "non-negative",
        });
    }
    Ok((gamma / mean).sqrt())
}

/// See [`MixedLink::snr_cdf`].
pub fn snr_cdf(
    fso: &CascadeSpec,
    rf: &CascadeSpec,
    lb: &LinkBudget,
    gamma: f64,
) -> Result<f64, MetricsError> {
    MixedLink::new(fso, rf)?.snr_cdf(lb, gamma)
}

/// See [`MixedLink::outage`].
pub fn outage(
    fso: &CascadeSpec,
    rf: &CascadeSpec,
    lb: &LinkBudget,
    th: &ThresholdSpec,
) -> Result<f64, MetricsError> {
    MixedLink::new(fso, rf)?.outage(lb, th)
}

/// See [`MixedLink::outage_asymptotic`].
pub fn outage_asymptotic(
    fso: &CascadeSpec,
    rf: &CascadeSpec,
    lb: &LinkBudget,
    th: &ThresholdSpec,
) -> Result<AsymptoticOutage, MetricsError> {
    MixedLink::new(fso, rf)?.outage_asymptotic(lb, th)
}

/// See [`MixedLink::diversity_order`].
pub fn diversity_order(fso: &CascadeSpec, rf: &CascadeSpec) -> Result<f64, MetricsError> {
    Ok(MixedLink::new(fso, rf)?.diversity_order())
}

/// See [`MixedLink::avg_ber_fso`].
pub fn avg_ber_fso(
    fso: &CascadeSpec,
    lb: &LinkBudget,
    m: &ModulationParams,
) -> Result<f64, MetricsError> {
    link_ber(&cascade_fso(fso)?, lb.mean_snr_fso, m)
}

/// See [`MixedLink::avg_ber_rf`].
pub fn avg_ber_rf(
    rf: &CascadeSpec,
    lb: &LinkBudget,
    m: &ModulationParams,
) -> Result<f64, MetricsError> {
    link_ber(&cascade_rf(rf)?, lb.mean_snr_rf, m)
}

/// See [`MixedLink::avg_ber_df`].
pub fn avg_ber_df(
    fso: &CascadeSpec,
    rf: &CascadeSpec,
    lb: &LinkBudget,
    m: &ModulationParams,
) -> Result<f64, MetricsError> {
    MixedLink::new(fso, rf)?.avg_ber_df(lb, m)
}

/// See [`MixedLink::capacity`].
pub fn capacity(
    fso: &CascadeSpec,
    rf: &CascadeSpec,
    lb: &LinkBudget,
) -> Result<Capacity, MetricsError> {
    MixedLink::new(fso, rf)?.capacity(lb)
}
