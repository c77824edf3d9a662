use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::law::{product_law, FactorSpec, MellinLaw};
use super::{ChannelError, DggParams, PointingErrorParams};
use crate::foxh::{FoxHParams, GammaPair};
use crate::special::ln_gamma_real;

/// Which link a cascade models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LinkKind {
    /// Optical hops: dGG turbulence times pointing error.
    Fso,
    /// Radio hops: dGG fading only.
    Rf,
}

/// One multiplicative channel factor of a cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Hop {
    pub turbulence: DggParams,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub pointing: Option<PointingErrorParams>,
}

impl Hop {
    pub fn fso(turbulence: DggParams, pointing: PointingErrorParams) -> Self {
        Self {
            turbulence,
            pointing: Some(pointing),
        }
    }

    pub fn rf(turbulence: DggParams) -> Self {
        Self {
            turbulence,
            pointing: None,
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        self.turbulence.validate()?;
        if let Some(p) = &self.pointing {
            p.validate()?;
        }
        Ok(())
    }

    /// Closed-form `E[h^r]`.
    pub fn moment(&self, r: f64) -> Result<f64, ChannelError> {
        let m = self.turbulence.moment(r)?;
        match &self.pointing {
            Some(p) => Ok(m * p.moment(r)?),
            None => Ok(m),
        }
    }

    /// The hop density in the factor form `ψ x^{φ-1} H[ζ x]` with
    /// `φ = α₂β₂`.
    ///
    /// Without pointing errors: `H^{2,0}_{0,2}[ψx | -; (0,1/α₂), ((α₁β₁-α₂β₂)/α₁, 1/α₁)]`.
    /// With pointing errors the argument is `ψx/A₀` and the kernel gains
    /// the pairs `(ρ²-α₂β₂+1, 1)` (upper) and `(ρ²-α₂β₂, 1)` (lower).
    pub fn factor(&self) -> Result<FactorSpec, ChannelError> {
        self.validate()?;
        let (g1, g2) = (&self.turbulence.first, &self.turbulence.second);
        let phi = g2.alpha * g2.beta;
        let mut ln_pref = -(phi / g1.alpha) * (g1.omega / g1.beta).ln()
            - g2.beta * (g2.omega / g2.beta).ln()
            - ln_gamma_real(g1.beta)
            - ln_gamma_real(g2.beta);
        let mut lower = Vec::from([
            GammaPair::new(0.0, 1.0 / g2.alpha),
            GammaPair::new((g1.alpha * g1.beta - phi) / g1.alpha, 1.0 / g1.alpha),
        ]);
        let mut upper = Vec::new();
        let mut scale = self.turbulence.psi();
        if let Some(p) = &self.pointing {
            ln_pref += p.rho2.ln() - phi * p.a0.ln();
            scale /= p.a0;
            lower.push(GammaPair::new(p.rho2 - phi, 1.0));
            upper.push(GammaPair::new(p.rho2 - phi + 1.0, 1.0));
        }
        let m = lower.len();
        Ok(FactorSpec {
            prefactor: ln_pref.exp(),
            power: phi,
            scale,
            kernel: FoxHParams::new(m, 0, upper, lower)?,
        })
    }
}

/// An ordered list of independent channel factors `h = Π h_i`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CascadeSpec {
    pub hops: Vec<Hop>,
}

impl CascadeSpec {
    pub fn new(hops: Vec<Hop>) -> Result<Self, ChannelError> {
        let s = Self { hops };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if self.hops.is_empty() {
            return Err(ChannelError::Spec(
                "a cascade needs at least one hop".into(),
            ));
        }
        for h in &self.hops {
            h.validate()?;
        }
        Ok(())
    }

    /// Number of factors `K`.
    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    /// `Some(kind)` when every hop agrees on the presence of pointing errors.
    pub fn kind(&self) -> Option<LinkKind> {
        if self.hops.iter().all(|h| h.pointing.is_some()) {
            Some(LinkKind::Fso)
        } else if self.hops.iter().all(|h| h.pointing.is_none()) {
            Some(LinkKind::Rf)
        } else {
            None
        }
    }

    /// Closed-form `E[h^r] = Π E[h_i^r]`.
    pub fn moment(&self, r: f64) -> Result<f64, ChannelError> {
        self.validate()?;
        self.hops
            .iter()
            .try_fold(1.0, |acc, h| Ok(acc * h.moment(r)?))
    }

    /// Per-hop factor forms, for [`product_law`].
    pub fn factors(&self) -> Result<Vec<FactorSpec>, ChannelError> {
        self.hops.iter().map(Hop::factor).collect()
    }

    /// The cascade law assembled from the per-hop factor forms.
    pub fn product_law(&self) -> Result<MellinLaw, ChannelError> {
        self.validate()?;
        product_law(&self.factors()?)
    }

    /// The cascade law in closed form (dispatching on [`CascadeSpec::kind`]).
    pub fn law(&self) -> Result<MellinLaw, ChannelError> {
        match self.kind() {
            Some(LinkKind::Fso) => cascade_fso(self),
            Some(LinkKind::Rf) => cascade_rf(self),
            None => self.product_law(),
        }
    }
}

/// Cascaded optical law
/// `f_h(x) = (ψ₁/x) H^{3K,0}_{K,3K}[U₁x | {(ρ_i²+1,1)}; V₁]` with
/// `ψ₁ = Π ρ_i²/(Γ(β_{i,1})Γ(β_{i,2}))`, `U₁ = Π ψ_i/A_{0,i}` and
/// `V₁ = {(β_{i,1},1/α_{i,1}), (β_{i,2},1/α_{i,2}), (ρ_i²,1)}`.
pub fn cascade_fso(spec: &CascadeSpec) -> Result<MellinLaw, ChannelError> {
    spec.validate()?;
    let mut ln_pref = 0.0;
    let mut ln_scale = 0.0;
    let mut upper = Vec::with_capacity(spec.len());
    let mut lower = Vec::with_capacity(3 * spec.len());
    for (i, h) in spec.hops.iter().enumerate() {
        let p = h.pointing.ok_or_else(|| {
            ChannelError::Spec(format!("optical hop {i} has no pointing-error parameters"))
        })?;
        let (g1, g2) = (&h.turbulence.first, &h.turbulence.second);
        ln_pref += p.rho2.ln() - ln_gamma_real(g1.beta) - ln_gamma_real(g2.beta);
        ln_scale += h.turbulence.psi().ln() - p.a0.ln();
        upper.push(GammaPair::new(p.rho2 + 1.0, 1.0));
        lower.push(GammaPair::new(g1.beta, 1.0 / g1.alpha));
        lower.push(GammaPair::new(g2.beta, 1.0 / g2.alpha));
        lower.push(GammaPair::new(p.rho2, 1.0));
    }
    let m = lower.len();
    MellinLaw::new(
        ln_pref.exp(),
        ln_scale.exp(),
        FoxHParams::new(m, 0, upper, lower)?,
    )
}

/// Cascaded radio law `f_g(x) = (ψ₂/x) H^{2K,0}_{0,2K}[U₂x | -; V₂]` with
/// `ψ₂ = Π 1/(Γ(β_{i,3})Γ(β_{i,4}))`, `U₂ = Π ψ_i` and
/// `V₂ = {(β_{i,3},1/α_{i,3}), (β_{i,4},1/α_{i,4})}`.
pub fn cascade_rf(spec: &CascadeSpec) -> Result<MellinLaw, ChannelError> {
    spec.validate()?;
    let mut ln_pref = 0.0;
    let mut ln_scale = 0.0;
    let mut lower = Vec::with_capacity(2 * spec.len());
    for (i, h) in spec.hops.iter().enumerate() {
        if h.pointing.is_some() {
            return Err(ChannelError::Spec(format!(
                "radio hop {i} carries pointing-error parameters"
            )));
        }
        let (g1, g2) = (&h.turbulence.first, &h.turbulence.second);
        ln_pref -= ln_gamma_real(g1.beta) + ln_gamma_real(g2.beta);
        ln_scale += h.turbulence.psi().ln();
        lower.push(GammaPair::new(g1.beta, 1.0 / g1.alpha));
        lower.push(GammaPair::new(g2.beta, 1.0 / g2.alpha));
    }
    let m = lower.len();
    MellinLaw::new(
        ln_pref.exp(),
        ln_scale.exp(),
        FoxHParams::new(m, 0, Vec::new(), lower)?,
    )
}

/// dGG density in the factor form `x^{α₂β₂-1} ... H^{2,0}_{0,2}[ψx]`.
pub fn dgg_pdf(p: &DggParams, x: f64) -> Result<f64, ChannelError> {
    if !(x > 0.0) {
        return Err(ChannelError::Domain(x));
    }
    Hop::rf(*p).factor()?.pdf(x)
}

/// Density of a dGG variate times an independent pointing error, in the
/// factor form `x^{α₂β₂-1} ... H^{3,0}_{1,3}[ψx/A₀]`.
pub fn dgg_pe_pdf(p: &DggParams, pe: &PointingErrorParams, x: f64) -> Result<f64, ChannelError> {
    if !(x > 0.0) {
        return Err(ChannelError::Domain(x));
    }
    Hop::fso(*p, *pe).factor()?.pdf(x)
}

/// Closed-form `r`-th moment of a cascade.
pub fn moment(spec: &CascadeSpec, r: f64) -> Result<f64, ChannelError> {
    spec.moment(r)
}
