//! Direct quadrature of the metric definitions, independent of the closed
//! forms. Used as oracles and as the capacity fallback.

#[allow(unused_imports)]
use num_traits::Float;

use core::f64::consts::LOG2_E;

use super::capacity::{cross_term_quadrature, link_capacity_quadrature, typical_gain};
use super::{positive, LinkBudget, MetricsError, MixedLink, ModulationParams};
use crate::channels::MellinLaw;
use crate::quad::{integrate_positive_axis, QuadOptions, QuadResult};
use crate::special::ln_gamma_real;

fn opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-9,
        max_intervals: 4000,
    }
}

fn checked<F: FnMut(f64) -> Result<f64, MetricsError>>(
    mut f: F,
    center: f64,
    cutoff: f64,
    o: &QuadOptions,
) -> Result<QuadResult, MetricsError> {
    let mut err = None;
    let r = integrate_positive_axis(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        center,
        cutoff,
        o,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

/// `∫ f(x) dx` of the density of `law`.
pub fn pdf_mass(law: &MellinLaw) -> Result<f64, MetricsError> {
    Ok(checked(|x| Ok(law.pdf(x)?), typical_gain(law), 1e-18, &opts())?.value)
}

/// `q^p/(2Γ(p)) ∫ γ^{p-1} e^{-qγ} F(γ) dγ` for an arbitrary SNR CDF.
///
/// The integrand is followed outward until it falls below `1e-16` of its
/// peak, which on the right is reached once `e^{-qγ}` has decayed that far.
pub fn ber_quadrature<F: FnMut(f64) -> Result<f64, MetricsError>>(
    mut cdf: F,
    m: &ModulationParams,
) -> Result<f64, MetricsError> {
    positive("p", m.p)?;
    positive("q", m.q)?;
    let ln_c = m.p * m.q.ln() - ln_gamma_real(m.p) - core::f64::consts::LN_2;
    let r = checked(
        |g| Ok((ln_c + (m.p - 1.0) * g.ln() - m.q * g).exp() * cdf(g)?),
        m.p / m.q,
        1e-16,
        &opts(),
    )?;
    Ok(r.value)
}

/// Average BER of one link by quadrature over its SNR CDF.
pub fn link_ber_quadrature(
    law: &MellinLaw,
    mean_snr: f64,
    m: &ModulationParams,
) -> Result<f64, MetricsError> {
    positive("mean_snr", mean_snr)?;
    ber_quadrature(|g| Ok(law.cdf((g / mean_snr).sqrt())?), m)
}

/// `E[log₂(1 + γ̄ X²)]` by quadrature.
pub fn link_capacity_reference(law: &MellinLaw, mean_snr: f64) -> Result<f64, MetricsError> {
    link_capacity_quadrature(law, mean_snr, &opts())
}

/// `∫ log₂(1+γ) f_P(γ) F_C(γ) dγ` by quadrature.
pub fn cross_term_reference(
    pdf: &MellinLaw,
    cdf: &MellinLaw,
    mean_pdf: f64,
    mean_cdf: f64,
) -> Result<f64, MetricsError> {
    cross_term_quadrature(pdf, cdf, mean_pdf, mean_cdf, &opts())
}

impl MixedLink {
    /// `∫ log₂(1+γ) f_γ(γ) dγ` for the end-to-end SNR, integrated by parts to
    /// `log₂e ∫ (1 - F_F)(1 - F_R)/(1 + γ) dγ` and evaluated by quadrature.
    pub fn capacity_quadrature(&self, lb: &LinkBudget) -> Result<f64, MetricsError> {
        lb.validate()?;
        let (f, r) = (self.fso_law(), self.rf_law());
        let center = (lb.mean_snr_fso * typical_gain(f).powi(2))
            .min(lb.mean_snr_rf * typical_gain(r).powi(2));
        let res = checked(
            |g| {
                let sf = f.survival((g / lb.mean_snr_fso).sqrt())?;
                if sf == 0.0 {
                    return Ok(0.0);
                }
                let sr = r.survival((g / lb.mean_snr_rf).sqrt())?;
                Ok(sf * sr / (1.0 + g))
            },
            center,
            1e-17,
            &opts(),
        )?;
        Ok(LOG2_E * res.value)
    }

    /// End-to-end BER as the conditional-error average over the min-SNR CDF.
    pub fn ber_min_snr_quadrature(
        &self,
        lb: &LinkBudget,
        m: &ModulationParams,
    ) -> Result<f64, MetricsError> {
        ber_quadrature(|g| self.snr_cdf(lb, g), m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foxh::{FoxHParams, GammaPair};

    #[test]
    fn rayleigh_ber_by_quadrature() {
        let k = FoxHParams::new(1, 0, [], [GammaPair::new(1.0, 0.5)]).unwrap();
        let law = MellinLaw::new(1.0, 1.0, k).unwrap();
        assert!((pdf_mass(&law).unwrap() - 1.0).abs() < 1e-10);
        let v = link_ber_quadrature(&law, 10.0, &ModulationParams::DBPSK).unwrap();
        assert!((v - 0.5 / 11.0).abs() < 1e-10);
        // BPSK over Rayleigh: (1 - √(γ̄/(1+γ̄)))/2
        let v = link_ber_quadrature(&law, 10.0, &ModulationParams::BPSK).unwrap();
        assert!((v - 0.5 * (1.0 - (10.0f64 / 11.0).sqrt())).abs() < 1e-10);
    }
}
