//! Univariate contour quadrature.

use alloc::format;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{ln_kernel_of, Factor, FoxHError, FoxHParams};

use core::f64::consts::PI;

/// Truncation threshold: the contour is cut where the integrand envelope has
/// dropped by this many nepers below its peak (about 1e-18).
pub(crate) const LN_CUTOFF: f64 = 41.5;
const MAX_HALFHEIGHT: f64 = 1e4;
const UNDERFLOW_LN: f64 = -800.0;
const SINH_KAPPA: f64 = 3.0;

/// Node distribution along the contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum QuadratureRule {
    /// Equally spaced nodes.
    #[default]
    Trapezoid,
    /// Nodes clustered near `Im s = 0` through `y = T sinh(κv)/sinh(κ)`,
    /// `v` uniform on `[-1, 1]`.
    SinhClustered,
}

/// An explicit contour `Re s = anchor`, `|Im s| <= halfheight`, with `nodes`
/// quadrature nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContourSpec {
    pub anchor: f64,
    pub halfheight: f64,
    pub nodes: usize,
    pub rule: QuadratureRule,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub rel_tol: f64,
    /// Absolute tolerance, relative to `∫|integrand|` (the scale below which
    /// cancellation makes digits meaningless).
    pub abs_tol: f64,
    /// Overrides the automatic anchor. Must lie in the admissible interval.
    pub anchor: Option<f64>,
    pub max_refinements: u32,
    pub rule: QuadratureRule,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            anchor: None,
            max_refinements: 14,
            rule: QuadratureRule::Trapezoid,
        }
    }
}

/// Result of an adaptive evaluation. `contour` reproduces the final grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub contour: ContourSpec,
    pub estimated_error: f64,
    pub refinements: u32,
}

/// Evaluates `H[z]` for `z > 0`. With `contour = None` the contour is chosen
/// and refined adaptively; an explicit contour is used as given.
pub fn eval(params: &FoxHParams, z: f64, contour: Option<&ContourSpec>) -> Result<f64, FoxHError> {
    match contour {
        Some(c) => eval_on_contour(params, z, c),
        None => eval_with(params, z, &EvalOptions::default()).map(|e| e.value),
    }
}

fn check_z(z: f64) -> Result<f64, FoxHError> {
    if z > 0.0 && z.is_finite() {
        Ok(z.ln())
    } else {
        Err(FoxHError::Domain(z))
    }
}

/// Real part of [`eval_complex_on_contour`].
pub fn eval_on_contour(
    params: &FoxHParams,
    z: f64,
    contour: &ContourSpec,
) -> Result<f64, FoxHError> {
    eval_complex_on_contour(params, z, contour).map(|v| v.re)
}

/// Sums the full (non-symmetrized) quadrature over an explicit contour. For
/// real parameters and `z > 0` the imaginary part vanishes up to rounding.
pub fn eval_complex_on_contour(
    params: &FoxHParams,
    z: f64,
    contour: &ContourSpec,
) -> Result<Complex64, FoxHError> {
    let lnz = check_z(z)?;
    let (lo, hi) = params.ensure_admissible()?.anchor_interval;
    let c = contour.anchor;
    if !(c > lo && c < hi) {
        return Err(FoxHError::InvalidParams(format!(
            "anchor {c} outside admissible interval ({lo}, {hi})"
        )));
    }
    if contour.nodes < 2 || !(contour.halfheight > 0.0) {
        return Err(FoxHError::InvalidParams(
            "contour needs at least two nodes and a positive halfheight".into(),
        ));
    }
    let factors = params.factors();
    let n = contour.nodes;
    let t = contour.halfheight;
    let dv = 2.0 / (n - 1) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let v = -1.0 + dv * j as f64;
        let (y, dy) = match contour.rule {
            QuadratureRule::Trapezoid => (t * v, t),
            QuadratureRule::SinhClustered => {
                let sk = SINH_KAPPA.sinh();
                (
                    t * (SINH_KAPPA * v).sinh() / sk,
                    t * SINH_KAPPA * (SINH_KAPPA * v).cosh() / sk,
                )
            }
        };
        let w = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
        let s = Complex64::new(c, y);
        let l = ln_kernel_of(&factors, s)?;
        if l.re == f64::NEG_INFINITY {
            continue;
        }
        acc += (l - s * lnz).exp() * (w * dy * dv);
    }
    Ok(acc / (2.0 * PI))
}

/// Adaptive evaluation: saddle-point anchor, envelope-based truncation and
/// step halving until successive trapezoid sums agree.
pub fn eval_with(params: &FoxHParams, z: f64, opts: &EvalOptions) -> Result<Evaluation, FoxHError> {
    let lnz = check_z(z)?;
    let report = params.ensure_admissible()?;
    let (lo, hi) = report.anchor_interval;
    let factors = params.factors();
    let c = match opts.anchor {
        Some(c) if c > lo && c < hi => c,
        Some(c) => {
            return Err(FoxHError::InvalidParams(format!(
                "anchor {c} outside admissible interval ({lo}, {hi})"
            )))
        }
        None => choose_anchor(&factors, lnz, lo, hi),
    };
    if underflows(&factors, lnz, c) {
        return Ok(Evaluation {
            value: 0.0,
            contour: ContourSpec {
                anchor: c,
                halfheight: 1.0,
                nodes: 17,
                rule: opts.rule,
            },
            estimated_error: 0.0,
            refinements: 0,
        });
    }
    let t = halfheight(&factors, lnz, c)?;
    let d = (c - lo).min(hi - c);
    let reference = envelope(&factors, lnz, c, 0.0).max(envelope(&factors, lnz, c, 1.0));
    let reference = if reference.is_finite() {
        reference
    } else {
        0.0
    };

    let kappa_sinh = SINH_KAPPA.sinh();
    let map = |u: f64| -> (f64, f64) {
        match opts.rule {
            QuadratureRule::Trapezoid => (u, 1.0),
            QuadratureRule::SinhClustered => {
                let v = u / t;
                (
                    t * (SINH_KAPPA * v).sinh() / kappa_sinh,
                    SINH_KAPPA * (SINH_KAPPA * v).cosh() / kappa_sinh,
                )
            }
        }
    };
    // f(u) = Re[Θ(c+iy) z^{-c-iy}] dy/du, scaled by e^{-reference}
    let f = |u: f64| -> Result<(f64, f64), FoxHError> {
        let (y, jac) = map(u);
        let s = Complex64::new(c, y);
        let l = ln_kernel_of(&factors, s)?;
        if l.re == f64::NEG_INFINITY {
            return Ok((0.0, 0.0));
        }
        let v = (l - s * lnz - reference).exp();
        Ok((v.re * jac, v.norm() * jac))
    };

    let mut h = 0.5f64.min(0.5 * d).min(t / 8.0);
    let mut nodes = (t / h).ceil() as usize;
    h = t / nodes as f64;
    let (f0, a0) = f(0.0)?;
    let mut sum = 0.5 * f0;
    let mut abs_sum = 0.5 * a0;
    for k in 1..=nodes {
        let (v, a) = f(h * k as f64)?;
        sum += v;
        abs_sum += a;
    }
    let mut value = h * sum;
    let scale = reference.exp() / PI;
    for level in 1..=opts.max_refinements {
        let h_new = 0.5 * h;
        for k in 0..nodes {
            let (v, a) = f(h_new * (2 * k + 1) as f64)?;
            sum += v;
            abs_sum += a;
        }
        nodes *= 2;
        h = h_new;
        let new_value = h * sum;
        let diff = (new_value - value).abs();
        value = new_value;
        if diff <= opts.rel_tol * value.abs() || diff <= opts.abs_tol * h * abs_sum {
            return Ok(Evaluation {
                value: value * scale,
                contour: ContourSpec {
                    anchor: c,
                    halfheight: t,
                    nodes: 2 * nodes + 1,
                    rule: opts.rule,
                },
                estimated_error: diff * scale,
                refinements: level,
            });
        }
    }
    Err(FoxHError::NonConvergent(format!(
        "z = {z}, anchor = {c}, {} halvings",
        opts.max_refinements
    )))
}

// Re ln Θ(c + iy) - c ln z
fn envelope(factors: &[Factor], lnz: f64, c: f64, y: f64) -> f64 {
    match ln_kernel_of(factors, Complex64::new(c, y)) {
        Ok(l) if !l.re.is_nan() => l.re - c * lnz,
        _ => f64::INFINITY,
    }
}

// |H| <= (1/2π) ∫ |Θ(c+iy)| z^{-c} dy; when the envelope stays below e^{-800}
// everywhere the value is zero in double precision.
fn underflows(factors: &[Factor], lnz: f64, c: f64) -> bool {
    let mut y = 0.0;
    let mut peak = envelope(factors, lnz, c, 0.0);
    while y < 1e6 {
        y = if y == 0.0 { 0.25 } else { 2.0 * y };
        peak = peak.max(envelope(factors, lnz, c, y));
    }
    peak < UNDERFLOW_LN
}

fn halfheight(factors: &[Factor], lnz: f64, c: f64) -> Result<f64, FoxHError> {
    let mut peak = envelope(factors, lnz, c, 0.0);
    if !peak.is_finite() {
        peak = f64::NEG_INFINITY;
    }
    let step = 0.5;
    let mut y = 0.0;
    let mut quiet = 0;
    while y < MAX_HALFHEIGHT {
        y += step;
        let e = envelope(factors, lnz, c, y);
        if e > peak {
            peak = e;
        }
        if e < peak - LN_CUTOFF {
            quiet += 1;
            if quiet >= 3 && y >= 2.0 {
                return Ok(y);
            }
        } else {
            quiet = 0;
        }
    }
    Err(FoxHError::NonConvergent(format!(
        "integrand does not decay along Re s = {c}"
    )))
}

// Saddle-point objective: the log-magnitude of the integrand near the real axis.
fn objective(factors: &[Factor], lnz: f64, c: f64) -> f64 {
    let a = envelope(factors, lnz, c, 0.0);
    let b = envelope(factors, lnz, c, 1.0);
    let v = if a.is_finite() { a.max(b) } else { b };
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

pub(crate) fn choose_anchor(factors: &[Factor], lnz: f64, lo: f64, hi: f64) -> f64 {
    let phi = |c: f64| objective(factors, lnz, c);
    minimize_in_interval(&phi, lo, hi)
}

/// Minimizes `phi` over the open interval `(lo, hi)` (ends may be infinite),
/// staying a small margin away from finite ends.
pub(crate) fn minimize_in_interval(phi: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let margin = if lo.is_finite() && hi.is_finite() {
        (1e-3f64).min(0.25 * (hi - lo))
    } else {
        1e-3
    };
    let a = lo + margin;
    let b = hi - margin;
    match (a.is_finite(), b.is_finite()) {
        (true, true) => {
            const GRID: usize = 40;
            let mut best = (a, phi(a));
            let w = (b - a) / GRID as f64;
            for i in 1..=GRID {
                let c = a + w * i as f64;
                let v = phi(c);
                if v < best.1 {
                    best = (c, v);
                }
            }
            golden(phi, (best.0 - w).max(a), (best.0 + w).min(b))
        }
        (true, false) => {
            let (l, r) = bracket(phi, a, 1.0);
            golden(phi, l, r)
        }
        (false, true) => {
            let (l, r) = bracket(phi, b, -1.0);
            golden(phi, l, r)
        }
        (false, false) => {
            let right = bracket(phi, 0.0, 1.0);
            let left = bracket(phi, 0.0, -1.0);
            let cr = golden(phi, right.0, right.1);
            let cl = golden(phi, left.0, left.1);
            if phi(cr) <= phi(cl) {
                cr
            } else {
                cl
            }
        }
    }
}

// Walks from `start` in direction `dir` with doubling steps while `phi`
// decreases. Returns an ordered interval containing a local minimum.
fn bracket(phi: &dyn Fn(f64) -> f64, start: f64, dir: f64) -> (f64, f64) {
    let ordered = |x: f64, y: f64| (x.min(y), x.max(y));
    let mut step = 0.5;
    let mut a = start;
    let mut b = start + dir * step;
    let fa = phi(a);
    let mut fb = phi(b);
    if fb >= fa {
        return ordered(a, b);
    }
    for _ in 0..80 {
        step *= 2.0;
        let c = b + dir * step;
        let fc = phi(c);
        if fc >= fb {
            return ordered(a, c);
        }
        a = b;
        b = c;
        fb = fc;
    }
    ordered(a, b)
}

fn golden(phi: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    if a > b {
        core::mem::swap(&mut a, &mut b);
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = phi(x1);
    let mut f2 = phi(x2);
    for _ in 0..80 {
        if (b - a) <= 1e-7 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = phi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = phi(x2);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::super::GammaPair;
    use super::*;

    fn gp(a: f64, b: f64) -> GammaPair {
        GammaPair::new(a, b)
    }

    fn exp_params() -> FoxHParams {
        FoxHParams::new(1, 0, [], [gp(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn exponential_identity() {
        let h = exp_params();
        for &z in &[1e-3, 0.1, 1.0, 2.5, 10.0, 40.0] {
            let v = h.eval(z).unwrap();
            let r = (-z).exp();
            assert!((v - r).abs() <= 1e-10 * r, "z={z}: {v} vs {r}");
        }
    }

    #[test]
    fn explicit_contour_reproduces_adaptive_value() {
        let h = FoxHParams::new(2, 0, [], [gp(0.5, 1.0), gp(1.3, 0.7)]).unwrap();
        let e = eval_with(&h, 0.7, &EvalOptions::default()).unwrap();
        let v = eval_on_contour(&h, 0.7, &e.contour).unwrap();
        assert!((v - e.value).abs() <= 1e-10 * e.value.abs());
        let cplx = eval_complex_on_contour(&h, 0.7, &e.contour).unwrap();
        assert!(cplx.im.abs() < 1e-12);
    }

    #[test]
    fn anchor_outside_interval_rejected() {
        let h = exp_params();
        let c = ContourSpec {
            anchor: -0.5,
            halfheight: 10.0,
            nodes: 101,
            rule: QuadratureRule::Trapezoid,
        };
        assert!(matches!(
            eval(&h, 1.0, Some(&c)),
            Err(FoxHError::InvalidParams(_))
        ));
        assert!(matches!(h.eval(0.0), Err(FoxHError::Domain(_))));
        assert!(matches!(h.eval(f64::NAN), Err(FoxHError::Domain(_))));
    }

    #[test]
    fn sinh_rule_agrees() {
        let h = FoxHParams::new(1, 1, [gp(0.0, 1.0)], [gp(0.0, 1.0)]).unwrap();
        // H^{1,1}_{1,1}[z | (0,1); (0,1)] = Γ(1) (1+z)^{-1}
        let opts = EvalOptions {
            rule: QuadratureRule::SinhClustered,
            ..Default::default()
        };
        for &z in &[0.2, 1.0, 3.0] {
            let v = eval_with(&h, z, &opts).unwrap().value;
            assert!((v - 1.0 / (1.0 + z)).abs() < 1e-9, "z={z} v={v}");
        }
    }

    #[test]
    fn minimizer_finds_interior_minimum() {
        let phi = |c: f64| (c - 3.0) * (c - 3.0);
        assert!((minimize_in_interval(&phi, 0.0, f64::INFINITY) - 3.0).abs() < 1e-5);
        assert!((minimize_in_interval(&phi, f64::NEG_INFINITY, 10.0) - 3.0).abs() < 1e-5);
        assert!((minimize_in_interval(&phi, f64::NEG_INFINITY, f64::INFINITY) - 3.0).abs() < 1e-5);
        assert!((minimize_in_interval(&phi, -1.0, 2.0) - 1.999).abs() < 1e-5);
    }
}
