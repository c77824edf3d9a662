//! Fading laws: generalized Gamma, double generalized Gamma (dGG), zero-
//! boresight pointing errors, and their K-fold products.
//!
//! Every composite law is represented as a [`MellinLaw`]: a density of the
//! form `f(x) = (ψ/x) H[U x]`, whose moments are `E[X^r] = ψ U^{-r} Θ(r)`.

mod cascade;
mod law;

use alloc::string::String;

#[allow(unused_imports)]
use num_traits::Float;

use crate::foxh::FoxHError;
use crate::special::ln_gamma_real;

pub use cascade::{
    cascade_fso, cascade_rf, dgg_pdf, dgg_pe_pdf, moment, CascadeSpec, Hop, LinkKind,
};
pub use law::{product_cdf, product_law, product_pdf, FactorSpec, MellinLaw};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChannelError {
    #[error("{name} must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("argument must be positive, got {0}")]
    Domain(f64),
    #[error("cascade specification: {0}")]
    Spec(String),
    #[error("moment order {r} lies outside the convergence strip ({lo}, {hi})")]
    Strip { r: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    FoxH(#[from] FoxHError),
}

fn positive(name: &'static str, value: f64) -> Result<f64, ChannelError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ChannelError::InvalidParameter {
            name,
            value,
            requirement: "positive and finite",
        })
    }
}

/// Generalized Gamma law
/// `f(x) = α x^{αβ-1} / ((Ω/β)^β Γ(β)) exp(-(β/Ω) x^α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenGammaParams {
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
}

impl GenGammaParams {
    pub fn new(alpha: f64, beta: f64, omega: f64) -> Result<Self, ChannelError> {
        let p = Self { alpha, beta, omega };
        p.validate()?;
        Ok(p)
    }

    /// Builds the law from `E[χ²]` instead of `Ω`. Under the density above
    /// `Ω = E[χ^α]`, so `Ω = β (E[χ²] Γ(β) / Γ(β + 2/α))^{α/2}`.
    pub fn from_mean_square(alpha: f64, beta: f64, mean_square: f64) -> Result<Self, ChannelError> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        positive("mean_square", mean_square)?;
        let ln_omega = beta.ln()
            + 0.5
                * alpha
                * (mean_square.ln() + ln_gamma_real(beta) - ln_gamma_real(beta + 2.0 / alpha));
        Self::new(alpha, beta, ln_omega.exp())
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        positive("alpha", self.alpha)?;
        positive("beta", self.beta)?;
        positive("omega", self.omega)?;
        Ok(())
    }

    /// `(β/Ω)^{1/α}`, the scale entering the Fox-H argument.
    pub fn rate(&self) -> f64 {
        (self.beta / self.omega).powf(1.0 / self.alpha)
    }

    /// `E[χ^r] = (Ω/β)^{r/α} Γ(β + r/α) / Γ(β)` for `β + r/α > 0`.
    pub fn moment(&self, r: f64) -> Result<f64, ChannelError> {
        let arg = self.beta + r / self.alpha;
        if !(arg > 0.0) {
            return Err(ChannelError::Strip {
                r,
                lo: -self.alpha * self.beta,
                hi: f64::INFINITY,
            });
        }
        Ok(
            ((r / self.alpha) * (self.omega / self.beta).ln() + ln_gamma_real(arg)
                - ln_gamma_real(self.beta))
            .exp(),
        )
    }
}

/// Generalized Gamma density. `x <= 0` is a domain error.
pub fn gg_pdf(p: &GenGammaParams, x: f64) -> Result<f64, ChannelError> {
    p.validate()?;
    if !(x > 0.0) {
        return Err(ChannelError::Domain(x));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let ln = p.alpha.ln() + (p.alpha * p.beta - 1.0) * x.ln()
        - p.beta * (p.omega / p.beta).ln()
        - ln_gamma_real(p.beta)
        - p.beta / p.omega * x.powf(p.alpha);
    Ok(ln.exp())
}

/// Double generalized Gamma law: the product of two independent
/// generalized Gamma variates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DggParams {
    pub first: GenGammaParams,
    pub second: GenGammaParams,
}

impl DggParams {
    pub fn new(first: GenGammaParams, second: GenGammaParams) -> Result<Self, ChannelError> {
        first.validate()?;
        second.validate()?;
        Ok(Self { first, second })
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        self.first.validate()?;
        self.second.validate()
    }

    /// `ψ = (β₂/Ω₂)^{1/α₂} (β₁/Ω₁)^{1/α₁}`.
    pub fn psi(&self) -> f64 {
        self.first.rate() * self.second.rate()
    }

    pub fn moment(&self, r: f64) -> Result<f64, ChannelError> {
        Ok(self.first.moment(r)? * self.second.moment(r)?)
    }
}

/// Zero-boresight pointing-error law `f(x) = ρ²/A₀^{ρ²} x^{ρ²-1}` on `[0, A₀]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointingErrorParams {
    pub a0: f64,
    pub rho2: f64,
}

impl PointingErrorParams {
    pub fn new(a0: f64, rho2: f64) -> Result<Self, ChannelError> {
        let p = Self { a0, rho2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.a0 > 0.0 && self.a0 <= 1.0) {
            return Err(ChannelError::InvalidParameter {
                name: "a0",
                value: self.a0,
                requirement: "in (0, 1]",
            });
        }
        positive("rho2", self.rho2)?;
        Ok(())
    }

    /// `E[h^r] = ρ² A₀^r / (ρ² + r)` for `ρ² + r > 0`.
    pub fn moment(&self, r: f64) -> Result<f64, ChannelError> {
        if !(self.rho2 + r > 0.0) {
            return Err(ChannelError::Strip {
                r,
                lo: -self.rho2,
                hi: f64::INFINITY,
            });
        }
        Ok(self.rho2 * self.a0.powf(r) / (self.rho2 + r))
    }
}

/// Pointing-error density; zero outside `[0, A₀]`.
pub fn pe_pdf(p: &PointingErrorParams, x: f64) -> f64 {
    if !(x >= 0.0 && x <= p.a0) {
        return 0.0;
    }
    if x == 0.0 {
        return match p.rho2 {
            r if r < 1.0 => f64::INFINITY,
            r if r == 1.0 => 1.0 / p.a0,
            _ => 0.0,
        };
    }
    p.rho2 / p.a0 * (x / p.a0).powf(p.rho2 - 1.0)
}

/// Physical pointing geometry of an RIS-assisted optical hop.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointingGeometry {
    /// Receiver aperture radius (m).
    pub aperture_radius: f64,
    /// Beam width at the receiver (m).
    pub beam_width: f64,
    /// Equivalent beam width at the receiver (m).
    pub equivalent_beam_width: f64,
    /// Pointing jitter standard deviation (rad).
    pub sigma_theta: f64,
    /// RIS jitter standard deviation (rad).
    pub sigma_beta: f64,
    /// Transmitter to RIS distance (m).
    pub d1: f64,
    /// RIS to receiver distance (m).
    pub d2: f64,
}

/// Converts geometry into `(A₀, ρ²)`:
/// `υ = √(π/2) a_r/ω_z`, `A₀ = erf(υ)²`, `ξ = 4σ_θ²d₁² + 16σ_β²d₂²`,
/// `ρ² = ω_zeq²/ξ`.
///
/// When `ξ` is so small that `ρ²` overflows, `rho2` is `+∞` (no jitter); such
/// a value is rejected by [`PointingErrorParams::validate`].
pub fn pe_from_geometry(g: &PointingGeometry) -> Result<PointingErrorParams, ChannelError> {
    positive("aperture_radius", g.aperture_radius)?;
    positive("beam_width", g.beam_width)?;
    positive("equivalent_beam_width", g.equivalent_beam_width)?;
    positive("sigma_theta", g.sigma_theta)?;
    positive("sigma_beta", g.sigma_beta)?;
    positive("d1", g.d1)?;
    positive("d2", g.d2)?;
    let upsilon = (core::f64::consts::PI / 2.0).sqrt() * g.aperture_radius / g.beam_width;
    let a0 = libm::erf(upsilon).powi(2);
    let xi =
        4.0 * g.sigma_theta.powi(2) * g.d1.powi(2) + 16.0 * g.sigma_beta.powi(2) * g.d2.powi(2);
    if !(xi > 0.0) {
        return Err(ChannelError::Domain(xi));
    }
    Ok(PointingErrorParams {
        a0,
        rho2: g.equivalent_beam_width.powi(2) / xi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, integrate_positive_axis, QuadOptions};

    #[test]
    fn gg_reductions() {
        let e = (-1f64).exp();
        let p = GenGammaParams::new(1.0, 1.0, 1.0).unwrap();
        assert!((gg_pdf(&p, 1.0).unwrap() - e).abs() < 1e-15);
        let p = GenGammaParams::new(2.0, 1.0, 1.0).unwrap();
        assert!((gg_pdf(&p, 1.0).unwrap() - 2.0 * e).abs() < 1e-15);
        assert!(matches!(gg_pdf(&p, 0.0), Err(ChannelError::Domain(_))));
        assert!(matches!(gg_pdf(&p, -1.0), Err(ChannelError::Domain(_))));
    }

    #[test]
    fn gg_normalization_and_moment() {
        let p = GenGammaParams::new(1.8621, 0.5, 1.5074).unwrap();
        let opts = QuadOptions::default();
        let n = integrate_positive_axis(|x| gg_pdf(&p, x).unwrap(), 1.0, 1e-18, &opts).value;
        assert!((n - 1.0).abs() < 1e-9);
        let m2 =
            integrate_positive_axis(|x| x * x * gg_pdf(&p, x).unwrap(), 1.0, 1e-18, &opts).value;
        assert!((m2 - p.moment(2.0).unwrap()).abs() < 1e-9 * m2);
    }

    #[test]
    fn omega_from_mean_square_round_trips() {
        let p = GenGammaParams::new(2.169, 0.55, 1.5793).unwrap();
        let ms = p.moment(2.0).unwrap();
        let q = GenGammaParams::from_mean_square(2.169, 0.55, ms).unwrap();
        assert!((q.omega - p.omega).abs() < 1e-12);
    }

    #[test]
    fn pointing_error_density() {
        let u = PointingErrorParams::new(1.0, 1.0).unwrap();
        assert_eq!(pe_pdf(&u, 0.3), 1.0);
        let p = PointingErrorParams::new(0.02, 6.0).unwrap();
        assert!((pe_pdf(&p, 0.02) - 300.0).abs() < 1e-10);
        assert_eq!(pe_pdf(&p, 0.03), 0.0);
        assert_eq!(pe_pdf(&p, -0.01), 0.0);
        let p = PointingErrorParams::new(0.02, 25.0).unwrap();
        let n = integrate(|x| pe_pdf(&p, x), 0.0, 0.02, 4, &QuadOptions::default()).value;
        assert!((n - 1.0).abs() < 1e-10);
        assert!(PointingErrorParams::new(1.5, 2.0).is_err());
        assert!(PointingErrorParams::new(0.5, 0.0).is_err());
    }

    fn geometry(sigma: f64) -> PointingGeometry {
        PointingGeometry {
            aperture_radius: 0.05,
            beam_width: 2.5,
            equivalent_beam_width: 2.5,
            sigma_theta: sigma,
            sigma_beta: sigma,
            d1: 500.0,
            d2: 500.0,
        }
    }

    #[test]
    fn geometry_limits() {
        let mut g = geometry(1e-3);
        g.aperture_radius = 1e3;
        assert!((pe_from_geometry(&g).unwrap().a0 - 1.0).abs() < 1e-15);
        let tight = pe_from_geometry(&geometry(1e-160)).unwrap();
        assert!(tight.rho2.is_infinite());
        assert!(tight.validate().is_err());
        assert!(pe_from_geometry(&geometry(0.0)).is_err());
    }
}
