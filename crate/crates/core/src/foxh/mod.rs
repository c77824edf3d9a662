//! Fox H-functions.
//!
//! Convention:
//!
//! ```text
//! H^{m,n}_{p,q}[z] = 1/(2πi) ∫_L Θ(s) z^{-s} ds
//!
//! Θ(s) = Π_{j≤m} Γ(b_j + B_j s) Π_{j≤n} Γ(1 - a_j - A_j s)
//!      / ( Π_{j>n} Γ(a_j + A_j s) Π_{j>m} Γ(1 - b_j - B_j s) )
//! ```
//!
//! with upper pairs `(a_j, A_j)`, lower pairs `(b_j, B_j)` and `L` a vertical
//! line `Re s = c` separating the poles of the `Γ(b_j + B_j s)` factors (on
//! the left) from those of the `Γ(1 - a_j - A_j s)` factors (on the right).
//! The line integral is evaluated by trapezoidal quadrature, which converges
//! geometrically for these analytic, exponentially decaying integrands.

mod bivariate;
mod eval;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::special::{is_nonpositive_integer, ln_gamma};

pub use bivariate::{
    eval_bivariate, BivariateContour, BivariateEvaluation, BivariateFoxHParams, BivariateOptions,
    CouplingTerm,
};
pub use eval::{
    eval, eval_complex_on_contour, eval_on_contour, eval_with, ContourSpec, EvalOptions,
    Evaluation, QuadratureRule,
};

/// Errors raised by Fox-H construction and evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FoxHError {
    #[error("invalid Fox-H parameters: {0}")]
    InvalidParams(String),
    #[error("contour passes through a pole of the kernel at s = {re} + {im}i")]
    PoleHit { re: f64, im: f64 },
    #[error("contour quadrature did not converge: {0}")]
    NonConvergent(String),
    #[error("argument must be positive and finite, got {0}")]
    Domain(f64),
}

/// A pair `(shift, coef)` entering a Gamma factor as `Γ(shift + coef·s)`
/// (or its reflected form, depending on the group).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GammaPair {
    pub shift: f64,
    pub coef: f64,
}

impl GammaPair {
    pub const fn new(shift: f64, coef: f64) -> Self {
        Self { shift, coef }
    }
}

impl From<(f64, f64)> for GammaPair {
    fn from((shift, coef): (f64, f64)) -> Self {
        Self { shift, coef }
    }
}

/// One factor `Γ(offset + slope·s)^{±1}` of a Mellin-Barnes kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Factor {
    pub offset: f64,
    pub slope: f64,
    pub numerator: bool,
}

/// Parameters of `H^{m,n}_{p,q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHParams {
    m: usize,
    n: usize,
    upper: Vec<GammaPair>,
    lower: Vec<GammaPair>,
}

/// Why a parameter set cannot be evaluated on a vertical contour.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    /// The left and right pole families are not separated by any vertical
    /// line.
    NoSeparatingLine { left: f64, right: f64 },
    /// A left pole and a right pole coincide.
    PoleCoincidence {
        s: f64,
        lower_index: usize,
        upper_index: usize,
    },
    /// `a* <= 0`: the kernel does not decay along vertical lines.
    NonPositiveAperture { a_star: f64 },
}

/// Structural quantities of a parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Open interval of admissible contour abscissas. Ends may be infinite.
    pub anchor_interval: (f64, f64),
    /// `Σ_{j≤n} A_j - Σ_{j>n} A_j + Σ_{j≤m} B_j - Σ_{j>m} B_j`.
    pub a_star: f64,
    /// `Σ B_j - Σ A_j`.
    pub big_delta: f64,
    /// `Π A_j^{-A_j} Π B_j^{B_j}`.
    pub delta: f64,
    /// `Σ b_j - Σ a_j + (p - q)/2`.
    pub mu: f64,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.issues.is_empty()
    }
}

const COINCIDENCE_TOL: f64 = 1e-9;

impl FoxHParams {
    /// Builds `H^{m,n}_{p,q}` with `p = upper.len()`, `q = lower.len()`.
    ///
    /// Requires `m <= q`, `n <= p`, finite shifts and finite positive
    /// coefficients. Contour admissibility is checked separately by
    /// [`FoxHParams::validate`].
    pub fn new(
        m: usize,
        n: usize,
        upper: impl Into<Vec<GammaPair>>,
        lower: impl Into<Vec<GammaPair>>,
    ) -> Result<Self, FoxHError> {
        let upper = upper.into();
        let lower = lower.into();
        if m > lower.len() {
            return Err(FoxHError::InvalidParams(format!(
                "m = {m} exceeds q = {}",
                lower.len()
            )));
        }
        if n > upper.len() {
            return Err(FoxHError::InvalidParams(format!(
                "n = {n} exceeds p = {}",
                upper.len()
            )));
        }
        for (name, pairs) in [("upper", &upper), ("lower", &lower)] {
            for (j, g) in pairs.iter().enumerate() {
                if !g.shift.is_finite() {
                    return Err(FoxHError::InvalidParams(format!(
                        "{name}[{j}] shift is {}",
                        g.shift
                    )));
                }
                if !(g.coef > 0.0) || !g.coef.is_finite() {
                    return Err(FoxHError::InvalidParams(format!(
                        "{name}[{j}] coefficient must be positive and finite, got {}",
                        g.coef
                    )));
                }
            }
        }
        Ok(Self { m, n, upper, lower })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.upper.len()
    }
    pub fn q(&self) -> usize {
        self.lower.len()
    }
    pub fn upper(&self) -> &[GammaPair] {
        &self.upper
    }
    pub fn lower(&self) -> &[GammaPair] {
        &self.lower
    }

    pub(crate) fn factors(&self) -> Vec<Factor> {
        let mut out = Vec::with_capacity(self.p() + self.q());
        for (j, g) in self.lower.iter().enumerate() {
            out.push(if j < self.m {
                Factor {
                    offset: g.shift,
                    slope: g.coef,
                    numerator: true,
                }
            } else {
                Factor {
                    offset: 1.0 - g.shift,
                    slope: -g.coef,
                    numerator: false,
                }
            });
        }
        for (j, g) in self.upper.iter().enumerate() {
            out.push(if j < self.n {
                Factor {
                    offset: 1.0 - g.shift,
                    slope: -g.coef,
                    numerator: true,
                }
            } else {
                Factor {
                    offset: g.shift,
                    slope: g.coef,
                    numerator: false,
                }
            });
        }
        out
    }

    /// Open interval of abscissas `c` such that every numerator Gamma
    /// argument has positive real part on `Re s = c`.
    pub fn anchor_interval(&self) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for g in &self.lower[..self.m] {
            lo = lo.max(-g.shift / g.coef);
        }
        for g in &self.upper[..self.n] {
            hi = hi.min((1.0 - g.shift) / g.coef);
        }
        (lo, hi)
    }

    pub fn validate(&self) -> ValidationReport {
        let (lo, hi) = self.anchor_interval();
        let mut issues = Vec::new();
        if !(lo < hi) {
            issues.push(ValidationIssue::NoSeparatingLine {
                left: lo,
                right: hi,
            });
            if let Some(c) = self.find_coincidence() {
                issues.push(c);
            }
        }
        let a_star = self.a_star();
        if !(a_star > 1e-12) {
            issues.push(ValidationIssue::NonPositiveAperture { a_star });
        }
        let big_delta = self.lower.iter().map(|g| g.coef).sum::<f64>()
            - self.upper.iter().map(|g| g.coef).sum::<f64>();
        let ln_delta = self.lower.iter().map(|g| g.coef * g.coef.ln()).sum::<f64>()
            - self.upper.iter().map(|g| g.coef * g.coef.ln()).sum::<f64>();
        let mu = self.lower.iter().map(|g| g.shift).sum::<f64>()
            - self.upper.iter().map(|g| g.shift).sum::<f64>()
            + (self.p() as f64 - self.q() as f64) / 2.0;
        ValidationReport {
            anchor_interval: (lo, hi),
            a_star,
            big_delta,
            delta: ln_delta.exp(),
            mu,
            issues,
        }
    }

    pub fn a_star(&self) -> f64 {
        let up: f64 = self
            .upper
            .iter()
            .enumerate()
            .map(|(j, g)| if j < self.n { g.coef } else { -g.coef })
            .sum();
        let low: f64 = self
            .lower
            .iter()
            .enumerate()
            .map(|(j, g)| if j < self.m { g.coef } else { -g.coef })
            .sum();
        up + low
    }

    // Left poles: s = -(b_j + k)/B_j. Right poles: s = (1 - a_i + k')/A_i.
    fn find_coincidence(&self) -> Option<ValidationIssue> {
        for (j, b) in self.lower[..self.m].iter().enumerate() {
            for (i, a) in self.upper[..self.n].iter().enumerate() {
                let right_start = (1.0 - a.shift) / a.coef;
                let mut k = 0u32;
                loop {
                    let s = -(b.shift + k as f64) / b.coef;
                    if s < right_start - COINCIDENCE_TOL || k > 100_000 {
                        break;
                    }
                    let kp = (a.coef * s - (1.0 - a.shift)).round().max(0.0);
                    let sr = (1.0 - a.shift + kp) / a.coef;
                    if (s - sr).abs() <= COINCIDENCE_TOL {
                        return Some(ValidationIssue::PoleCoincidence {
                            s,
                            lower_index: j,
                            upper_index: i,
                        });
                    }
                    k += 1;
                }
            }
        }
        None
    }

    pub(crate) fn ensure_admissible(&self) -> Result<ValidationReport, FoxHError> {
        let report = self.validate();
        if let Some(issue) = report.issues.first() {
            return Err(FoxHError::InvalidParams(format!("{issue:?}")));
        }
        Ok(report)
    }

    /// `ln Θ(s)`. The imaginary part is defined modulo 2π.
    pub fn ln_kernel(&self, s: Complex64) -> Result<Complex64, FoxHError> {
        ln_kernel_of(&self.factors(), s)
    }

    /// Evaluates `H` at `z > 0` with the adaptive contour.
    pub fn eval(&self, z: f64) -> Result<f64, FoxHError> {
        eval(self, z, None)
    }

    /// Parameters of the CDF-type transform `H^{m,n+1}_{p+1,q+1}` with `(1,1)`
    /// prepended to the upper pairs and `(0,1)` appended to the lower pairs.
    /// If `f(x) = (ψ/x) H^{m,n}_{p,q}[U x]` is a density, its CDF is
    /// `ψ H^{m,n+1}_{p+1,q+1}[U x]`.
    pub fn integrated(&self) -> FoxHParams {
        let mut upper = Vec::with_capacity(self.p() + 1);
        upper.push(GammaPair::new(1.0, 1.0));
        upper.extend_from_slice(&self.upper);
        let mut lower = self.lower.clone();
        lower.push(GammaPair::new(0.0, 1.0));
        FoxHParams {
            m: self.m,
            n: self.n + 1,
            upper,
            lower,
        }
    }

    /// Adds `Γ(1 - a - A s)` to the numerator (`n` grows by one).
    pub fn with_upper_numerator(&self, pair: GammaPair) -> FoxHParams {
        let mut out = self.clone();
        out.upper.insert(self.n, pair);
        out.n += 1;
        out
    }

    /// Adds `1/Γ(a + A s)`.
    pub fn with_upper_denominator(&self, pair: GammaPair) -> FoxHParams {
        let mut out = self.clone();
        out.upper.push(pair);
        out
    }

    /// Adds `Γ(b + B s)` to the numerator (`m` grows by one).
    pub fn with_lower_numerator(&self, pair: GammaPair) -> FoxHParams {
        let mut out = self.clone();
        out.lower.insert(self.m, pair);
        out.m += 1;
        out
    }

    /// Adds `1/Γ(1 - b - B s)`.
    pub fn with_lower_denominator(&self, pair: GammaPair) -> FoxHParams {
        let mut out = self.clone();
        out.lower.push(pair);
        out
    }
}

pub(crate) fn ln_kernel_of(factors: &[Factor], s: Complex64) -> Result<Complex64, FoxHError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for f in factors {
        let arg = s * f.slope + f.offset;
        let at_pole =
            arg.im.abs() <= 1e-13 * (1.0 + arg.re.abs()) && is_nonpositive_integer(arg.re, 1e-12);
        if f.numerator {
            if at_pole {
                return Err(FoxHError::PoleHit { re: s.re, im: s.im });
            }
            acc += ln_gamma(arg);
        } else {
            if at_pole {
                return Ok(Complex64::new(f64::NEG_INFINITY, 0.0));
            }
            acc -= ln_gamma(arg);
        }
    }
    Ok(acc)
}

/// The Mellin-Barnes kernel `Θ(s)`.
pub fn mellin_integrand(params: &FoxHParams, s: Complex64) -> Result<Complex64, FoxHError> {
    let l = params.ln_kernel(s)?;
    if l.re == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(l.exp())
}

/// See [`FoxHParams::validate`].
pub fn validate(params: &FoxHParams) -> ValidationReport {
    params.validate()
}
