//! High-SNR outage asymptotics.
//!
//! For small `x` the CDF `ψ H'[U x]` of a [`MellinLaw`] is dominated by the
//! residues at the rightmost pole of each `Γ(b_j + B_j s)` factor,
//! `s = -e_j` with `e_j = b_j / B_j`. With every such pole simple,
//!
//! ```text
//! F(x) ≈ ψ Σ_j (1/B_j) Θ_j(-e_j) (U x)^{e_j} / e_j
//! ```
//!
//! where `Θ_j` is the density kernel with the `j`-th factor removed. When two
//! exponents coincide (e.g. identical hops) some `Γ(b_k - B_k e_j)` sits on a
//! pole and the printed sum is undefined; the coefficient of the merged
//! multiple pole is then extracted numerically by a circle contour.

use alloc::vec::Vec;

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{positive, LinkBudget, MetricsError, MixedLink, ThresholdSpec};
use crate::channels::MellinLaw;
use crate::foxh::FoxHParams;
use crate::special::{is_nonpositive_integer, ln_gamma_signed};

const POLE_TOL: f64 = 1e-8;
const CLUSTER_TOL: f64 = 1e-6;
const CIRCLE_POINTS: usize = 128;
const MAX_RADIUS: f64 = 0.25;

/// One term `coefficient · x^{exponent}` of a small-argument CDF expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingTerm {
    pub exponent: f64,
    pub coefficient: f64,
}

/// How an asymptotic outage value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticPath {
    /// Sum of simple-pole residues in closed form.
    ClosedForm,
    /// Coincident exponents; merged residues from a circle contour.
    NumericalResidue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticOutage {
    pub value: f64,
    pub path: AsymptoticPath,
}

/// Leading small-`x` terms `c_j x^{e_j}` of the CDF of `law`, one per
/// numerator factor of the density kernel.
///
/// Fails with [`MetricsError::DegenerateExponents`] if any of the other
/// numerator Gamma functions is evaluated at a pole.
pub fn leading_cdf_terms(law: &MellinLaw) -> Result<Vec<LeadingTerm>, MetricsError> {
    let k = law.kernel();
    let mut out = Vec::with_capacity(k.m());
    for (j, g) in k.lower()[..k.m()].iter().enumerate() {
        let e = g.shift / g.coef;
        let s = -e;
        let mut ln_abs = law.prefactor().ln() - g.coef.ln() - e.ln() + e * law.scale().ln();
        let mut sign = 1.0;
        let mut vanishes = false;
        let mut visit = |arg: f64, numerator: bool| -> Result<(), MetricsError> {
            if numerator {
                if is_nonpositive_integer(arg, POLE_TOL) {
                    return Err(MetricsError::DegenerateExponents {
                        exponent: e,
                        argument: arg,
                    });
                }
                let (l, sg) = ln_gamma_signed(arg);
                ln_abs += l;
                sign *= sg;
            } else if is_nonpositive_integer(arg, 0.0) {
                vanishes = true;
            } else {
                let (l, sg) = ln_gamma_signed(arg);
                ln_abs -= l;
                sign *= sg;
            }
            Ok(())
        };
        for (i, h) in k.lower().iter().enumerate() {
            if i == j {
                continue;
            }
            if i < k.m() {
                visit(h.shift + h.coef * s, true)?;
            } else {
                visit(1.0 - h.shift - h.coef * s, false)?;
            }
        }
        for (i, h) in k.upper().iter().enumerate() {
            if i < k.n() {
                visit(1.0 - h.shift - h.coef * s, true)?;
            } else {
                visit(h.shift + h.coef * s, false)?;
            }
        }
        let coefficient = if vanishes { 0.0 } else { sign * ln_abs.exp() };
        out.push(LeadingTerm {
            exponent: e,
            coefficient,
        });
    }
    Ok(out)
}

fn sum_terms(terms: &[LeadingTerm], x: f64) -> f64 {
    terms
        .iter()
        .map(|t| t.coefficient * x.powf(t.exponent))
        .sum()
}

/// Leading-order CDF at small `x` from the merged residues at every distinct
/// rightmost pole, each integrated on a circle that excludes the other poles.
fn residue_cdf(law: &MellinLaw, x: f64) -> Result<f64, MetricsError> {
    let cdf = law.cdf_kernel();
    let k = law.kernel();
    let lower = &k.lower()[..k.m()];
    let mut centers: Vec<f64> = Vec::new();
    for g in lower {
        let s = -g.shift / g.coef;
        if !centers.iter().any(|c| (c - s).abs() <= CLUSTER_TOL) {
            centers.push(s);
        }
    }
    let lnz = (law.scale() * x).ln();
    let mut total = 0.0;
    for &center in &centers {
        // Members of this cluster are the poles within CLUSTER_TOL; every
        // other left pole and the right pole at s = 0 bound the radius.
        let mut nearest = center.abs();
        for g in lower {
            let mut kk = 0.0;
            loop {
                let p = -(g.shift + kk) / g.coef;
                let d = (p - center).abs();
                if d > CLUSTER_TOL {
                    nearest = nearest.min(d);
                }
                if p < center - 2.0 || kk > 1e4 {
                    break;
                }
                kk += 1.0;
            }
        }
        let radius = (0.5 * nearest).min(MAX_RADIUS);
        total += circle_residue(&cdf, center, radius, lnz)?;
    }
    Ok(law.prefactor() * total)
}

// (1/2πi) ∮ Θ(s) z^{-s} ds on |s - center| = radius, counterclockwise.
fn circle_residue(
    kernel: &FoxHParams,
    center: f64,
    radius: f64,
    lnz: f64,
) -> Result<f64, MetricsError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..CIRCLE_POINTS {
        let theta = 2.0 * PI * (j as f64 + 0.5) / CIRCLE_POINTS as f64;
        let w = Complex64::from_polar(radius, theta);
        let s = w + center;
        let l = kernel.ln_kernel(s)?;
        if l.re == f64::NEG_INFINITY {
            continue;
        }
        acc += (l - s * lnz).exp() * w;
    }
    Ok(acc.re / CIRCLE_POINTS as f64)
}

impl MixedLink {
    /// `F_F + F_R` with each CDF replaced by its leading-pole expansion.
    /// Routes to the numerical residue path when exponents coincide.
    pub fn outage_asymptotic(
        &self,
        lb: &LinkBudget,
        th: &ThresholdSpec,
    ) -> Result<AsymptoticOutage, MetricsError> {
        match self.outage_asymptotic_closed_form(lb, th) {
            Ok(value) => Ok(AsymptoticOutage {
                value,
                path: AsymptoticPath::ClosedForm,
            }),
            Err(MetricsError::DegenerateExponents { .. }) => {
                let (xf, xr) = arguments(lb, th)?;
                let value = residue_cdf(self.fso_law(), xf)? + residue_cdf(self.rf_law(), xr)?;
                Ok(AsymptoticOutage {
                    value,
                    path: AsymptoticPath::NumericalResidue,
                })
            }
            Err(e) => Err(e),
        }
    }

    /// The simple-pole residue sum only; fails on coincident exponents.
    pub fn outage_asymptotic_closed_form(
        &self,
        lb: &LinkBudget,
        th: &ThresholdSpec,
    ) -> Result<f64, MetricsError> {
        let (xf, xr) = arguments(lb, th)?;
        let f = leading_cdf_terms(self.fso_law())?;
        let r = leading_cdf_terms(self.rf_law())?;
        Ok(sum_terms(&f, xf) + sum_terms(&r, xr))
    }
}

fn arguments(lb: &LinkBudget, th: &ThresholdSpec) -> Result<(f64, f64), MetricsError> {
    lb.validate()?;
    positive("gamma_th", th.gamma_th)?;
    Ok((
        (th.gamma_th / lb.mean_snr_fso).sqrt(),
        (th.gamma_th / lb.mean_snr_rf).sqrt(),
    ))
}
