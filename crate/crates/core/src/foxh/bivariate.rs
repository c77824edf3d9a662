//! Bivariate Fox H-functions on a product of vertical contours.
//!
//! ```text
//! H[z1, z2] = 1/(2πi)² ∫∫ Φ(s, t) Θ1(s) Θ2(t) z1^{-s} z2^{-t} ds dt
//!
//! Φ(s, t) = Π_num Γ(e_j + E_j s + F_j t) / Π_den Γ(e_j + E_j s + F_j t)
//! ```
//!
//! `Θ1`, `Θ2` are the kernels of two univariate parameter sets and the
//! coupling coefficients `E_j`, `F_j` may have either sign.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::eval::minimize_in_interval;
use super::{ln_kernel_of, Factor, FoxHError, FoxHParams};
use crate::special::{is_nonpositive_integer, ln_gamma};

use core::f64::consts::PI;

const LN_CUTOFF: f64 = 37.0;
const MARGIN: f64 = 0.05;
const RAYS: usize = 16;
const MAX_RADIUS: f64 = 2000.0;

/// A coupling factor `Γ(shift + coef_s·s + coef_t·t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingTerm {
    pub shift: f64,
    pub coef_s: f64,
    pub coef_t: f64,
}

impl CouplingTerm {
    pub const fn new(shift: f64, coef_s: f64, coef_t: f64) -> Self {
        Self {
            shift,
            coef_s,
            coef_t,
        }
    }

    fn arg(&self, s: Complex64, t: Complex64) -> Complex64 {
        s * self.coef_s + t * self.coef_t + self.shift
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BivariateFoxHParams {
    pub numerator: Vec<CouplingTerm>,
    pub denominator: Vec<CouplingTerm>,
    /// Kernel in the first variable `s`.
    pub first: FoxHParams,
    /// Kernel in the second variable `t`.
    pub second: FoxHParams,
}

/// The grid of the final tensor trapezoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateContour {
    pub anchor: (f64, f64),
    pub halfheight: (f64, f64),
    pub step: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateOptions {
    pub rel_tol: f64,
    /// Absolute tolerance relative to the quadrature of `|integrand|`.
    pub abs_tol: f64,
    pub anchor: Option<(f64, f64)>,
    pub max_refinements: u32,
    /// Refuse grids with more nodes than this.
    pub max_nodes: usize,
}

impl Default for BivariateOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-12,
            anchor: None,
            max_refinements: 6,
            max_nodes: 4_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateEvaluation {
    pub value: f64,
    pub contour: BivariateContour,
    pub estimated_error: f64,
    pub refinements: u32,
}

struct Kernel {
    num: Vec<CouplingTerm>,
    den: Vec<CouplingTerm>,
    first: Vec<Factor>,
    second: Vec<Factor>,
}

impl Kernel {
    fn ln(&self, s: Complex64, t: Complex64) -> Result<Complex64, FoxHError> {
        let a = ln_kernel_of(&self.first, s)?;
        let b = ln_kernel_of(&self.second, t)?;
        let mut acc = a + b;
        if acc.re == f64::NEG_INFINITY {
            return Ok(acc);
        }
        for c in &self.num {
            let z = c.arg(s, t);
            if z.im.abs() <= 1e-13 && is_nonpositive_integer(z.re, 1e-12) {
                return Err(FoxHError::PoleHit { re: s.re, im: s.im });
            }
            acc += ln_gamma(z);
        }
        for c in &self.den {
            let z = c.arg(s, t);
            if z.im.abs() <= 1e-13 && is_nonpositive_integer(z.re, 1e-12) {
                return Ok(Complex64::new(f64::NEG_INFINITY, 0.0));
            }
            acc -= ln_gamma(z);
        }
        Ok(acc)
    }
}

struct Region {
    first: (f64, f64),
    second: (f64, f64),
    num: Vec<CouplingTerm>,
}

impl Region {
    fn contains(&self, c1: f64, c2: f64) -> bool {
        c1 > self.first.0
            && c1 < self.first.1
            && c2 > self.second.0
            && c2 < self.second.1
            && self
                .num
                .iter()
                .all(|t| t.shift + t.coef_s * c1 + t.coef_t * c2 >= MARGIN)
    }

    // Feasible interval for one coordinate with the other held fixed.
    fn line(&self, axis: usize, other: f64) -> (f64, f64) {
        let (mut lo, mut hi) = if axis == 0 { self.first } else { self.second };
        for t in &self.num {
            let (a, b) = if axis == 0 {
                (t.coef_s, t.coef_t)
            } else {
                (t.coef_t, t.coef_s)
            };
            let rest = t.shift + b * other - MARGIN;
            // rest + a x >= 0
            if a > 0.0 {
                lo = lo.max(-rest / a);
            } else if a < 0.0 {
                hi = hi.min(rest / -a);
            }
        }
        (lo, hi)
    }

    // Distance (in the imaginary direction of each variable) to the nearest
    // singularity of the integrand.
    fn pole_distance(&self, c1: f64, c2: f64) -> (f64, f64) {
        let mut d1 = (c1 - self.first.0).min(self.first.1 - c1);
        let mut d2 = (c2 - self.second.0).min(self.second.1 - c2);
        for t in &self.num {
            let arg = t.shift + t.coef_s * c1 + t.coef_t * c2;
            if t.coef_s != 0.0 {
                d1 = d1.min(arg / t.coef_s.abs());
            }
            if t.coef_t != 0.0 {
                d2 = d2.min(arg / t.coef_t.abs());
            }
        }
        (d1, d2)
    }
}

impl BivariateFoxHParams {
    pub fn new(
        numerator: Vec<CouplingTerm>,
        denominator: Vec<CouplingTerm>,
        first: FoxHParams,
        second: FoxHParams,
    ) -> Result<Self, FoxHError> {
        for c in numerator.iter().chain(denominator.iter()) {
            if !(c.shift.is_finite() && c.coef_s.is_finite() && c.coef_t.is_finite()) {
                return Err(FoxHError::InvalidParams(format!(
                    "non-finite coupling term {c:?}"
                )));
            }
        }
        Ok(Self {
            numerator,
            denominator,
            first,
            second,
        })
    }

    /// The same function with the roles of the two variables exchanged:
    /// `swapped().eval(z2, z1) == eval(z1, z2)`.
    pub fn swapped(&self) -> Self {
        let flip = |v: &[CouplingTerm]| {
            v.iter()
                .map(|c| CouplingTerm::new(c.shift, c.coef_t, c.coef_s))
                .collect()
        };
        Self {
            numerator: flip(&self.numerator),
            denominator: flip(&self.denominator),
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }

    fn region(&self) -> Result<Region, FoxHError> {
        let r1 = self.first.ensure_admissible()?;
        let r2 = self.second.ensure_admissible()?;
        Ok(Region {
            first: r1.anchor_interval,
            second: r2.anchor_interval,
            num: self.numerator.clone(),
        })
    }

    fn kernel(&self) -> Kernel {
        Kernel {
            num: self.numerator.clone(),
            den: self.denominator.clone(),
            first: self.first.factors(),
            second: self.second.factors(),
        }
    }

    /// `ln` of the full kernel `Φ(s,t) Θ1(s) Θ2(t)`.
    pub fn ln_kernel(&self, s: Complex64, t: Complex64) -> Result<Complex64, FoxHError> {
        self.kernel().ln(s, t)
    }

    pub fn eval(&self, z1: f64, z2: f64) -> Result<f64, FoxHError> {
        eval_bivariate(self, z1, z2, &BivariateOptions::default()).map(|e| e.value)
    }
}

fn finite_box(lo: f64, hi: f64, width: f64) -> (f64, f64) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (true, false) => (lo, lo + width),
        (false, true) => (hi - width, hi),
        (false, false) => (-width, width),
    }
}

/// Evaluates the bivariate function at `z1, z2 > 0` by a tensor trapezoid
/// rule, halving both steps until successive sums agree.
pub fn eval_bivariate(
    params: &BivariateFoxHParams,
    z1: f64,
    z2: f64,
    opts: &BivariateOptions,
) -> Result<BivariateEvaluation, FoxHError> {
    for z in [z1, z2] {
        if !(z > 0.0 && z.is_finite()) {
            return Err(FoxHError::Domain(z));
        }
    }
    let (l1, l2) = (z1.ln(), z2.ln());
    let region = params.region()?;
    let kernel = params.kernel();

    let envelope = |c1: f64, c2: f64, y1: f64, y2: f64| -> f64 {
        match kernel.ln(Complex64::new(c1, y1), Complex64::new(c2, y2)) {
            Ok(l) if !l.re.is_nan() => l.re - c1 * l1 - c2 * l2,
            _ => f64::INFINITY,
        }
    };
    let objective = |c1: f64, c2: f64| -> f64 {
        if !region.contains(c1, c2) {
            return f64::INFINITY;
        }
        let a = envelope(c1, c2, 0.0, 0.0);
        let b = envelope(c1, c2, 1.0, 0.0).max(envelope(c1, c2, 0.0, 1.0));
        if a.is_finite() {
            a.max(b)
        } else {
            b
        }
    };

    let (c1, c2) = match opts.anchor {
        Some((c1, c2)) if region.contains(c1, c2) => (c1, c2),
        Some(a) => {
            return Err(FoxHError::InvalidParams(format!(
                "anchor {a:?} outside the admissible region"
            )))
        }
        None => {
            let mut best = (f64::NAN, f64::NAN, f64::INFINITY);
            const G: usize = 24;
            for width in [30.0, 4.0, 1.0] {
                let b1 = finite_box(region.first.0, region.first.1, width);
                let b2 = finite_box(region.second.0, region.second.1, width);
                for i in 1..G {
                    for j in 1..G {
                        let c1 = b1.0 + (b1.1 - b1.0) * i as f64 / G as f64;
                        let c2 = b2.0 + (b2.1 - b2.0) * j as f64 / G as f64;
                        let v = objective(c1, c2);
                        if v < best.2 {
                            best = (c1, c2, v);
                        }
                    }
                }
            }
            if !best.2.is_finite() {
                return Err(FoxHError::InvalidParams(
                    "no admissible contour pair found".into(),
                ));
            }
            let (mut c1, mut c2) = (best.0, best.1);
            for _ in 0..6 {
                let (lo, hi) = region.line(0, c2);
                c1 = minimize_in_interval(&|x| objective(x, c2), lo, hi);
                let (lo, hi) = region.line(1, c1);
                c2 = minimize_in_interval(&|x| objective(c1, x), lo, hi);
            }
            (c1, c2)
        }
    };

    // Truncation box from rays in the upper half plane of (y1, y2) directions.
    let peak0 = envelope(c1, c2, 0.0, 0.0);
    let mut t1: f64 = 2.0;
    let mut t2: f64 = 2.0;
    for k in 0..RAYS {
        let th = PI * k as f64 / RAYS as f64;
        let (dx, dy) = (th.cos(), th.sin());
        let mut peak = if peak0.is_finite() {
            peak0
        } else {
            f64::NEG_INFINITY
        };
        let mut r = 0.0;
        let mut quiet = 0;
        loop {
            r += 0.5;
            if r > MAX_RADIUS {
                return Err(FoxHError::NonConvergent(format!(
                    "bivariate integrand does not decay along ray {k}"
                )));
            }
            let e = envelope(c1, c2, r * dx, r * dy);
            if e > peak {
                peak = e;
            }
            if e < peak - LN_CUTOFF {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        t1 = t1.max(r * dx.abs());
        t2 = t2.max(r * dy.abs());
    }

    let reference = if peak0.is_finite() {
        peak0
    } else {
        envelope(c1, c2, 1.0, 1.0)
    };
    let reference = if reference.is_finite() {
        reference
    } else {
        0.0
    };
    let (d1, d2) = region.pole_distance(c1, c2);
    let mut h1 = 0.5f64.min(0.5 * d1).min(t1 / 8.0);
    let mut h2 = 0.5f64.min(0.5 * d2).min(t2 / 8.0);

    let sum_grid = |h1: f64, h2: f64| -> Result<(f64, f64), FoxHError> {
        let n1 = (t1 / h1).ceil() as i64;
        let n2 = (t2 / h2).ceil() as i64;
        let mut re = 0.0;
        let mut abs = 0.0;
        for j1 in 0..=n1 {
            let w = if j1 == 0 { 1.0 } else { 2.0 };
            let y1 = h1 * j1 as f64;
            for j2 in -n2..=n2 {
                let y2 = h2 * j2 as f64;
                let s = Complex64::new(c1, y1);
                let t = Complex64::new(c2, y2);
                let l = kernel.ln(s, t)?;
                if l.re == f64::NEG_INFINITY {
                    continue;
                }
                let v = (l - s * l1 - t * l2 - reference).exp();
                re += w * v.re;
                abs += w * v.norm();
            }
        }
        Ok((re * h1 * h2, abs * h1 * h2))
    };

    let nodes = |h1: f64, h2: f64| ((t1 / h1).ceil() + 1.0) * (2.0 * (t2 / h2).ceil() + 1.0);
    let scale = reference.exp() / (4.0 * PI * PI);
    let (mut value, _) = sum_grid(h1, h2)?;
    for level in 1..=opts.max_refinements {
        h1 *= 0.5;
        h2 *= 0.5;
        if nodes(h1, h2) > opts.max_nodes as f64 {
            break;
        }
        let (v, a) = sum_grid(h1, h2)?;
        let diff = (v - value).abs();
        value = v;
        if diff <= opts.rel_tol * v.abs() || diff <= opts.abs_tol * a {
            return Ok(BivariateEvaluation {
                value: v * scale,
                contour: BivariateContour {
                    anchor: (c1, c2),
                    halfheight: (t1, t2),
                    step: (h1, h2),
                },
                estimated_error: diff * scale,
                refinements: level,
            });
        }
    }
    Err(FoxHError::NonConvergent(format!(
        "bivariate quadrature at z = ({z1}, {z2})"
    )))
}
