//! Ergodic capacity `E[log₂(1 + min(γ_F, γ_R))]`.
//!
//! Since `f_min = f_F (1 - F_R) + f_R (1 - F_F)`,
//!
//! ```text
//! C = η_F + η_R - η_FR - η_RF
//! η_F  = ∫ log₂(1+γ) f_F(γ) dγ
//! η_FR = ∫ log₂(1+γ) f_F(γ) F_R(γ) dγ
//! ```
//!
//! The single-link terms are univariate H-functions. The cross terms follow
//! from writing `ln(1+y) = H^{1,2}_{2,2}[y | (1,1),(1,1); (1,1),(0,1)]` and
//! the CDF as an H-function and integrating out `x`, which couples the two
//! contour variables through the density kernel evaluated at `-2s - t`.

use alloc::vec::Vec;

use core::f64::consts::LOG2_E;

#[allow(unused_imports)]
use num_traits::Float;

use super::{positive, LinkBudget, MetricsError, MixedLink};
use crate::channels::MellinLaw;
use crate::foxh::{
    eval_bivariate, BivariateFoxHParams, BivariateOptions, CouplingTerm, FoxHError, FoxHParams,
    GammaPair,
};
use crate::quad::{integrate_positive_axis, QuadOptions};

/// Which evaluator produced a capacity term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermPath {
    FoxH,
    /// Direct quadrature after the H-function evaluator did not converge (or
    /// was bypassed on request).
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityTerm {
    pub value: f64,
    pub path: TermPath,
}

/// Capacity in bits/s/Hz together with its four terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacity {
    pub value: f64,
    pub eta_fso: CapacityTerm,
    pub eta_rf: CapacityTerm,
    pub eta_fso_rf: CapacityTerm,
    pub eta_rf_fso: CapacityTerm,
}

impl Capacity {
    pub fn used_fallback(&self) -> bool {
        [self.eta_fso, self.eta_rf, self.eta_fso_rf, self.eta_rf_fso]
            .iter()
            .any(|t| t.path == TermPath::Quadrature)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityOptions {
    /// Skip the H-function path for the cross terms.
    pub force_fallback: bool,
    pub bivariate: BivariateOptions,
    pub quad: QuadOptions,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self {
            force_fallback: false,
            bivariate: BivariateOptions::default(),
            quad: QuadOptions {
                abs_tol: 1e-13,
                rel_tol: 1e-8,
                max_intervals: 2000,
            },
        }
    }
}

/// Density kernel of `law` extended by `Γ(s/2)² Γ(1 - s/2) / Γ(1 + s/2)`, the
/// Mellin transform of `ln(1 + y)` at `-s/2`.
pub fn capacity_kernel(law: &MellinLaw) -> FoxHParams {
    law.kernel()
        .with_lower_numerator(GammaPair::new(0.0, 0.5))
        .with_lower_numerator(GammaPair::new(0.0, 0.5))
        .with_upper_numerator(GammaPair::new(0.0, 0.5))
        .with_upper_denominator(GammaPair::new(1.0, 0.5))
}

/// `E[log₂(1 + γ̄ X²)] = (log₂e/2) ψ H[U/√γ̄]`.
pub fn link_capacity(law: &MellinLaw, mean_snr: f64) -> Result<f64, MetricsError> {
    positive("mean_snr", mean_snr)?;
    let h = capacity_kernel(law).eval(law.scale() / mean_snr.sqrt())?;
    Ok(0.5 * LOG2_E * law.prefactor() * h)
}

/// The cross term `∫ log₂(1+γ) f_P(γ) F_C(γ) dγ` as `c · H[z1, z2]`, returned
/// as `(params, z1, z2, c)`.
pub fn cross_term_params(
    pdf: &MellinLaw,
    cdf: &MellinLaw,
    mean_pdf: f64,
    mean_cdf: f64,
) -> Result<(BivariateFoxHParams, f64, f64, f64), MetricsError> {
    positive("mean_snr", mean_pdf)?;
    positive("mean_snr", mean_cdf)?;
    let log_kernel = FoxHParams::new(
        1,
        2,
        [GammaPair::new(1.0, 1.0), GammaPair::new(1.0, 1.0)],
        [GammaPair::new(1.0, 1.0), GammaPair::new(0.0, 1.0)],
    )?;
    let mut num = Vec::new();
    let mut den = Vec::new();
    for f in pdf.kernel().factors() {
        let c = CouplingTerm::new(f.offset, -2.0 * f.slope, -f.slope);
        if f.numerator {
            num.push(c);
        } else {
            den.push(c);
        }
    }
    let params = BivariateFoxHParams::new(num, den, log_kernel, cdf.cdf_kernel())?;
    let (up, uc) = (pdf.scale(), cdf.scale());
    let z1 = mean_pdf / (up * up);
    let z2 = uc * mean_pdf.sqrt() / (up * mean_cdf.sqrt());
    Ok((params, z1, z2, LOG2_E * pdf.prefactor() * cdf.prefactor()))
}

fn cross_term_foxh(
    pdf: &MellinLaw,
    cdf: &MellinLaw,
    mean_pdf: f64,
    mean_cdf: f64,
    opts: &BivariateOptions,
) -> Result<f64, MetricsError> {
    let (params, z1, z2, c) = cross_term_params(pdf, cdf, mean_pdf, mean_cdf)?;
    Ok(c * eval_bivariate(&params, z1, z2, opts)?.value)
}

/// `∫ log₂(1 + γ̄_P x²) f_P(x) F_C(√(γ̄_P/γ̄_C) x) dx` by adaptive quadrature.
pub(crate) fn cross_term_quadrature(
    pdf: &MellinLaw,
    cdf: &MellinLaw,
    mean_pdf: f64,
    mean_cdf: f64,
    opts: &QuadOptions,
) -> Result<f64, MetricsError> {
    let ratio = (mean_pdf / mean_cdf).sqrt();
    let mut err = None;
    let r = integrate_positive_axis(
        |x| {
            let v = pdf.pdf(x).and_then(|f| Ok(f * cdf.cdf(ratio * x)?));
            match v {
                Ok(v) => (mean_pdf * x * x).ln_1p() * v,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        },
        typical_gain(pdf),
        1e-17,
        opts,
    );
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(LOG2_E * r.value)
}

/// `E[log₂(1 + γ̄ X²)]` by adaptive quadrature of `∫ P(X² > γ/γ̄)/(1+γ) dγ`.
pub(crate) fn link_capacity_quadrature(
    law: &MellinLaw,
    mean_snr: f64,
    opts: &QuadOptions,
) -> Result<f64, MetricsError> {
    let mut err = None;
    let r = integrate_positive_axis(
        |g| match law.survival((g / mean_snr).sqrt()) {
            Ok(s) => s / (1.0 + g),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        mean_snr * typical_gain(law).powi(2),
        1e-17,
        opts,
    );
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(LOG2_E * r.value)
}

/// `E[X]`, a point inside the bulk of the distribution.
pub(crate) fn typical_gain(law: &MellinLaw) -> f64 {
    law.moment(1.0)
        .ok()
        .filter(|m| *m > 0.0 && m.is_finite())
        .unwrap_or(1.0 / law.scale())
}

fn fell_back(e: &MetricsError) -> bool {
    matches!(e, MetricsError::FoxH(FoxHError::NonConvergent(_)))
}

impl MixedLink {
    pub fn capacity(&self, lb: &LinkBudget) -> Result<Capacity, MetricsError> {
        self.capacity_with(lb, &CapacityOptions::default())
    }

    /// Four-term capacity. Each term falls back to direct quadrature when its
    /// H-function evaluation reports non-convergence; `force_fallback` does
    /// so for the cross terms unconditionally.
    pub fn capacity_with(
        &self,
        lb: &LinkBudget,
        opts: &CapacityOptions,
    ) -> Result<Capacity, MetricsError> {
        lb.validate()?;
        let (f, r) = (self.fso_law(), self.rf_law());
        let (gf, gr) = (lb.mean_snr_fso, lb.mean_snr_rf);
        let single = |law: &MellinLaw, g: f64| -> Result<CapacityTerm, MetricsError> {
            match link_capacity(law, g) {
                Ok(value) => Ok(CapacityTerm {
                    value,
                    path: TermPath::FoxH,
                }),
                Err(e) if fell_back(&e) => Ok(CapacityTerm {
                    value: link_capacity_quadrature(law, g, &opts.quad)?,
                    path: TermPath::Quadrature,
                }),
                Err(e) => Err(e),
            }
        };
        let cross = |p: &MellinLaw,
                     c: &MellinLaw,
                     gp: f64,
                     gc: f64|
         -> Result<CapacityTerm, MetricsError> {
            let quadrature = || -> Result<CapacityTerm, MetricsError> {
                Ok(CapacityTerm {
                    value: cross_term_quadrature(p, c, gp, gc, &opts.quad)?,
                    path: TermPath::Quadrature,
                })
            };
            if opts.force_fallback {
                return quadrature();
            }
            match cross_term_foxh(p, c, gp, gc, &opts.bivariate) {
                Ok(value) => Ok(CapacityTerm {
                    value,
                    path: TermPath::FoxH,
                }),
                Err(e) if fell_back(&e) => quadrature(),
                Err(e) => Err(e),
            }
        };
        let eta_fso = single(f, gf)?;
        let eta_rf = single(r, gr)?;
        let eta_fso_rf = cross(f, r, gf, gr)?;
        let eta_rf_fso = cross(r, f, gr, gf)?;
        let value = eta_fso.value + eta_rf.value - eta_fso_rf.value - eta_rf_fso.value;
        Ok(Capacity {
            value,
            eta_fso,
            eta_rf,
            eta_fso_rf,
            eta_rf_fso,
        })
    }
}
