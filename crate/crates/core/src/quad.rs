//! Adaptive Gauss-Kronrod quadrature.
//!
//! Used by the reference (non-Fox-H) integrals: normalization checks, BER and
//! capacity by direct integration over the SNR distribution, and the capacity
//! fallback path.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]`, starting from `initial` equal subintervals
/// and bisecting the worst one until the error estimate meets the tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    initial: usize,
    opts: &QuadOptions,
) -> QuadResult {
    let initial = initial.max(1);
    let mut segs: Vec<Segment> = Vec::with_capacity(initial + 64);
    let w = (b - a) / initial as f64;
    for i in 0..initial {
        let lo = a + w * i as f64;
        let hi = if i + 1 == initial { b } else { lo + w };
        segs.push(gk15(&mut f, lo, hi));
    }
    let mut evaluations = 15 * initial;
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target || !value.is_finite() {
            return QuadResult {
                value,
                abs_error: error,
                evaluations,
                converged: value.is_finite(),
            };
        }
        if segs.len() >= opts.max_intervals {
            return QuadResult {
                value,
                abs_error: error,
                evaluations,
                converged: false,
            };
        }
        let (worst, _) = segs.iter().enumerate().fold((0, -1.0), |acc, (i, s)| {
            if s.error > acc.1 {
                (i, s.error)
            } else {
                acc
            }
        });
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return QuadResult {
                value,
                abs_error: error,
                evaluations,
                converged: false,
            };
        }
        segs.push(gk15(&mut f, s.a, mid));
        segs.push(gk15(&mut f, mid, s.b));
        evaluations += 30;
    }
}

/// Integrates `g(u)` over the whole real line, where `g` is expected to decay
/// on both sides of `center`. The effective support is found by unit steps
/// until `|g|` stays below `cutoff` times the running peak.
pub fn integrate_real_line<F: FnMut(f64) -> f64>(
    mut g: F,
    center: f64,
    cutoff: f64,
    opts: &QuadOptions,
) -> QuadResult {
    let mut peak = g(center).abs();
    let edge = |dir: f64, peak: &mut f64, g: &mut F| -> f64 {
        let mut u = center;
        let mut quiet = 0;
        for _ in 0..400 {
            u += dir;
            let v = g(u).abs();
            let v = if v.is_nan() { 0.0 } else { v };
            if v > *peak {
                *peak = v;
            }
            if v <= cutoff * *peak {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        u
    };
    let hi = edge(1.0, &mut peak, &mut g);
    let lo = edge(-1.0, &mut peak, &mut g);
    let n = ((hi - lo).round() as usize).max(1);
    integrate(g, lo, hi, n, opts)
}

/// Integrates `f(x)` over `(0, ∞)` through the substitution `x = e^u`.
pub fn integrate_positive_axis<F: FnMut(f64) -> f64>(
    mut f: F,
    center: f64,
    cutoff: f64,
    opts: &QuadOptions,
) -> QuadResult {
    integrate_real_line(
        |u| {
            let x = u.exp();
            if x == 0.0 || x.is_infinite() {
                return 0.0;
            }
            let v = f(x) * x;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        center.ln(),
        cutoff,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(
            |x| x * x * x - 2.0 * x + 1.0,
            -1.0,
            2.0,
            1,
            &QuadOptions::default(),
        );
        assert!((r.value - (15.0 / 4.0 - 3.0 + 3.0)).abs() < 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn oscillatory_and_peaked() {
        let r = integrate(|x| (10.0 * x).sin(), 0.0, 3.0, 1, &QuadOptions::default());
        let exact = (1.0 - 30f64.cos()) / 10.0;
        assert!((r.value - exact).abs() < 1e-12);
        let r = integrate(|x| x.sqrt(), 0.0, 1.0, 1, &QuadOptions::default());
        assert!((r.value - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn positive_axis_gamma_integral() {
        // ∫ x^{2.5} e^{-x} dx = Γ(3.5)
        let r = integrate_positive_axis(
            |x| x.powf(2.5) * (-x).exp(),
            1.0,
            1e-18,
            &QuadOptions::default(),
        );
        assert!((r.value - libm::tgamma(3.5)).abs() < 1e-10 * libm::tgamma(3.5));
        // heavy algebraic tail: ∫ 1/(1+x)^2 = 1
        let r = integrate_positive_axis(
            |x| 1.0 / ((1.0 + x) * (1.0 + x)),
            1.0,
            1e-18,
            &QuadOptions::default(),
        );
        assert!((r.value - 1.0).abs() < 1e-9);
    }
}
