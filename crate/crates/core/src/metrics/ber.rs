//! Average bit error probability over a fading link.
//!
//! With the conditional error `Γ(p, qγ)/(2Γ(p))` and `γ = γ̄ X²`,
//!
//! ```text
//! P̄ = q^p/(2Γ(p)) ∫ γ^{p-1} e^{-qγ} F_X(√(γ/γ̄)) dγ
//!   = ψ/(2Γ(p)) · H'[U/√(qγ̄)]
//! ```
//!
//! where `H'` is the CDF kernel with the extra factor `Γ(p - s/2)`.

#[allow(unused_imports)]
use num_traits::Float;

use super::{positive, MetricsError, ModulationParams};
use crate::channels::MellinLaw;
use crate::foxh::{FoxHParams, GammaPair};
use crate::special::{gamma_q, ln_gamma_real};

/// CDF kernel of `law` extended by `Γ(p - s/2)`.
pub fn ber_kernel(law: &MellinLaw, m: &ModulationParams) -> FoxHParams {
    law.cdf_kernel()
        .with_upper_numerator(GammaPair::new(1.0 - m.p, 0.5))
}

/// Average BER of one link with average SNR `mean_snr`.
pub fn link_ber(law: &MellinLaw, mean_snr: f64, m: &ModulationParams) -> Result<f64, MetricsError> {
    positive("mean_snr", mean_snr)?;
    positive("p", m.p)?;
    positive("q", m.q)?;
    let z = law.scale() / (m.q * mean_snr).sqrt();
    let h = ber_kernel(law, m).eval(z)?;
    Ok((law.prefactor().ln() - ln_gamma_real(m.p)).exp() * 0.5 * h)
}

/// `Γ(p, qγ)/(2Γ(p))`.
pub fn conditional_ber(gamma: f64, m: &ModulationParams) -> f64 {
    0.5 * gamma_q(m.p, m.q * gamma.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rayleigh_dbpsk() {
        // X² ~ Exp(1): f(x) = 2x e^{-x²} = (1/x) H^{1,0}_{0,1}[x | (1, 1/2)], P̄ = 1/(2(1+γ̄))
        let k = FoxHParams::new(1, 0, [], [GammaPair::new(1.0, 0.5)]).unwrap();
        let law = MellinLaw::new(1.0, 1.0, k).unwrap();
        assert!((law.cdf(1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        for &g in &[0.1, 1.0, 10.0, 1000.0] {
            let v = link_ber(&law, g, &ModulationParams::DBPSK).unwrap();
            let r = 0.5 / (1.0 + g);
            assert!((v - r).abs() < 1e-10 * r, "γ̄={g}: {v} vs {r}");
        }
    }

    #[test]
    fn kernel_values() {
        assert!((conditional_ber(0.0, &ModulationParams::DBPSK) - 0.5).abs() < 1e-15);
        assert!(
            (conditional_ber(2.0, &ModulationParams::DBPSK) - 0.5 * (-2.0f64).exp()).abs() < 1e-14
        );
    }
}
