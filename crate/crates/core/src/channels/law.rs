use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::ChannelError;
use crate::foxh::{mellin_integrand, FoxHParams, GammaPair};

/// A positive variate with density `f(x) = (ψ/x) H[U x]`.
///
/// `E[X^r] = ψ U^{-r} Θ(r)` for `r` inside the kernel's anchor interval,
/// and the CDF is `ψ H'[U x]` with `H'` the [`FoxHParams::integrated`] kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinLaw {
    prefactor: f64,
    scale: f64,
    kernel: FoxHParams,
}

impl MellinLaw {
    /// Requires `ψ, U > 0` and an admissible kernel whose anchor interval
    /// contains `0` (so that the density has a finite total mass `ψ Θ(0)`).
    pub fn new(prefactor: f64, scale: f64, kernel: FoxHParams) -> Result<Self, ChannelError> {
        if !(prefactor > 0.0 && prefactor.is_finite()) {
            return Err(ChannelError::InvalidParameter {
                name: "prefactor",
                value: prefactor,
                requirement: "positive and finite",
            });
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(ChannelError::InvalidParameter {
                name: "scale",
                value: scale,
                requirement: "positive and finite",
            });
        }
        let report = kernel.validate();
        if !report.is_admissible() {
            return Err(ChannelError::Spec(format!(
                "kernel is not admissible: {:?}",
                report.issues
            )));
        }
        let (lo, hi) = report.anchor_interval;
        if !(lo < 0.0 && 0.0 < hi) {
            return Err(ChannelError::Spec(format!(
                "density kernel strip ({lo}, {hi}) does not contain 0"
            )));
        }
        Ok(Self {
            prefactor,
            scale,
            kernel,
        })
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn kernel(&self) -> &FoxHParams {
        &self.kernel
    }

    /// Orders `r` with finite moments.
    pub fn moment_strip(&self) -> (f64, f64) {
        self.kernel.anchor_interval()
    }

    /// Small-`x` behaviour `f(x) ~ x^{e-1}`.
    pub fn leading_exponent(&self) -> f64 {
        -self.kernel.anchor_interval().0
    }

    pub fn pdf(&self, x: f64) -> Result<f64, ChannelError> {
        if x < 0.0 || x.is_nan() {
            return Err(ChannelError::Domain(x));
        }
        if x.is_infinite() {
            return Ok(0.0);
        }
        if x == 0.0 {
            let e = self.leading_exponent();
            return Ok(if (e - 1.0).abs() < 1e-12 {
                self.pdf(1e-200 / self.scale)?
            } else if e > 1.0 {
                0.0
            } else {
                f64::INFINITY
            });
        }
        let v = self.prefactor / x * self.kernel.eval(self.scale * x)?;
        Ok(v.max(0.0))
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> Result<f64, ChannelError> {
        if x.is_nan() {
            return Err(ChannelError::Domain(x));
        }
        if x <= 0.0 {
            return Ok(0.0);
        }
        if x.is_infinite() {
            return Ok(1.0);
        }
        Ok(self.prefactor * self.kernel.integrated().eval(self.scale * x)?)
    }

    /// `P(X > x)`, evaluated on a contour to the right of `s = 0` so that it
    /// keeps relative accuracy in the upper tail.
    pub fn survival(&self, x: f64) -> Result<f64, ChannelError> {
        if x.is_nan() {
            return Err(ChannelError::Domain(x));
        }
        if x <= 0.0 {
            return Ok(1.0);
        }
        if x.is_infinite() {
            return Ok(0.0);
        }
        Ok(self.prefactor * self.survival_kernel().eval(self.scale * x)?)
    }

    /// `Γ(s) Θ(s) / Γ(1 + s)`, valid to the right of the origin.
    pub fn survival_kernel(&self) -> FoxHParams {
        let k = &self.kernel;
        let mut lower = Vec::with_capacity(k.q() + 1);
        lower.push(GammaPair::new(0.0, 1.0));
        lower.extend_from_slice(k.lower());
        let mut upper = k.upper().to_vec();
        upper.push(GammaPair::new(1.0, 1.0));
        FoxHParams::new(k.m() + 1, k.n(), upper, lower).expect("well-formed extension")
    }

    /// CDF kernel, see [`FoxHParams::integrated`].
    pub fn cdf_kernel(&self) -> FoxHParams {
        self.kernel.integrated()
    }

    /// `E[X^r] = ψ U^{-r} Θ(r)` through the Mellin kernel.
    pub fn moment(&self, r: f64) -> Result<f64, ChannelError> {
        let (lo, hi) = self.moment_strip();
        if !(r > lo && r < hi) {
            return Err(ChannelError::Strip { r, lo, hi });
        }
        let theta = mellin_integrand(&self.kernel, Complex64::new(r, 0.0))?;
        Ok(self.prefactor * self.scale.powf(-r) * theta.re)
    }

    /// The law of `X₁ X₂ ⋯` for independent factors.
    pub fn product(laws: &[MellinLaw]) -> Result<MellinLaw, ChannelError> {
        if laws.is_empty() {
            return Err(ChannelError::Spec("empty product".into()));
        }
        let mut prefactor = 1.0;
        let mut scale = 1.0;
        let (mut m, mut n) = (0, 0);
        let mut lower_num = Vec::new();
        let mut lower_den = Vec::new();
        let mut upper_num = Vec::new();
        let mut upper_den = Vec::new();
        for l in laws {
            prefactor *= l.prefactor;
            scale *= l.scale;
            let k = &l.kernel;
            m += k.m();
            n += k.n();
            lower_num.extend_from_slice(&k.lower()[..k.m()]);
            lower_den.extend_from_slice(&k.lower()[k.m()..]);
            upper_num.extend_from_slice(&k.upper()[..k.n()]);
            upper_den.extend_from_slice(&k.upper()[k.n()..]);
        }
        lower_num.extend(lower_den);
        upper_num.extend(upper_den);
        MellinLaw::new(
            prefactor,
            scale,
            FoxHParams::new(m, n, upper_num, lower_num)?,
        )
    }
}

/// A factor with density `f(x) = ψ x^{φ-1} H[ζ x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSpec {
    pub prefactor: f64,
    pub power: f64,
    pub scale: f64,
    pub kernel: FoxHParams,
}

impl FactorSpec {
    /// Rewrites the factor as `(ψ ζ^{-φ}/x) H_φ[ζ x]`, where `H_φ` has every
    /// pair `(a, A)` shifted to `(a + Aφ, A)`.
    pub fn to_law(&self) -> Result<MellinLaw, ChannelError> {
        if !self.power.is_finite() {
            return Err(ChannelError::InvalidParameter {
                name: "power",
                value: self.power,
                requirement: "finite",
            });
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(ChannelError::InvalidParameter {
                name: "scale",
                value: self.scale,
                requirement: "positive and finite",
            });
        }
        let phi = self.power;
        let shift = |v: &[GammaPair]| -> Vec<GammaPair> {
            v.iter()
                .map(|g| GammaPair::new(g.shift + g.coef * phi, g.coef))
                .collect()
        };
        let k = &self.kernel;
        let kernel = FoxHParams::new(k.m(), k.n(), shift(k.upper()), shift(k.lower()))?;
        let prefactor = (self.prefactor.ln() - phi * self.scale.ln()).exp();
        MellinLaw::new(prefactor, self.scale, kernel)
    }

    /// Evaluates `ψ x^{φ-1} H[ζ x]` as written (no kernel shift).
    pub fn pdf(&self, x: f64) -> Result<f64, ChannelError> {
        if x < 0.0 || x.is_nan() {
            return Err(ChannelError::Domain(x));
        }
        if x == 0.0 || x.is_infinite() {
            return self.to_law()?.pdf(x);
        }
        let h = self.kernel.eval(self.scale * x)?;
        Ok((self.prefactor.ln() + (self.power - 1.0) * x.ln()).exp() * h.max(0.0))
    }
}

/// The law of a product of independent factors.
pub fn product_law(factors: &[FactorSpec]) -> Result<MellinLaw, ChannelError> {
    let laws = factors
        .iter()
        .map(FactorSpec::to_law)
        .collect::<Result<Vec<_>, _>>()?;
    MellinLaw::product(&laws)
}

/// Density of a product of independent factors.
pub fn product_pdf(factors: &[FactorSpec], x: f64) -> Result<f64, ChannelError> {
    product_law(factors)?.pdf(x)
}

/// CDF of a product of independent factors.
pub fn product_cdf(factors: &[FactorSpec], x: f64) -> Result<f64, ChannelError> {
    product_law(factors)?.cdf(x)
}
