//! Special functions: complex log-Gamma, signed real log-Gamma and the
//! regularized upper incomplete Gamma function.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

// B_{2k} / (2k (2k - 1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Returns `true` when `x` is (numerically) a non-positive integer.
pub fn is_nonpositive_integer(x: f64, tol: f64) -> bool {
    x <= tol && (x - x.round()).abs() <= tol
}

/// Principal-ish logarithm of the Gamma function for complex arguments.
///
/// The real part is `ln|Γ(z)|`. The imaginary part is a valid argument of
/// `Γ(z)` (defined modulo 2π), which is all that exponentiation needs. At the
/// poles the real part is `+∞`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_gamma(z.conj()).conj();
    }
    if z.im == 0.0 && is_nonpositive_integer(z.re, 0.0) {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let w = Complex64::new(1.0, 0.0) - z;
        return Complex64::new(LN_PI, 0.0) - ln_sin_pi(z) - ln_gamma_right(w);
    }
    ln_gamma_right(z)
}

/// `Γ(z)` for complex `z`; the poles give an infinite value.
pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

// ln sin(πz) for Im z >= 0, stable for large imaginary parts.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = z * PI;
    if z.im > 1.0 {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw})
        let i = Complex64::new(0.0, 1.0);
        let e = (i * 2.0 * w).exp();
        -i * w
            + (Complex64::new(1.0, 0.0) - e).ln()
            + Complex64::new(-core::f64::consts::LN_2, PI / 2.0)
    } else {
        w.sin().ln()
    }
}

// Requires Re z >= 0.5.
fn ln_gamma_right(mut z: Complex64) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    let mut shifted = false;
    while z.norm_sqr() < 144.0 {
        prod *= z;
        z += 1.0;
        shifted = true;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pw = inv;
    for c in STIRLING {
        series += pw * c;
        pw *= inv2;
    }
    let mut out = (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series;
    if shifted {
        out -= prod.ln();
    }
    out
}

/// `ln|Γ(x)|` together with the sign of `Γ(x)` for real `x`.
///
/// At the poles the magnitude is `+∞` and the sign is `+1`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if is_nonpositive_integer(x, 0.0) {
        return (f64::INFINITY, 1.0);
    }
    let (v, s) = libm::lgamma_r(x);
    (v, if s < 0 { -1.0 } else { 1.0 })
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `Γ(x)` for real `x`.
pub fn gamma_real(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Regularized upper incomplete Gamma function `Q(a, x) = Γ(a, x) / Γ(a)`.
///
/// Returns NaN for `a <= 0` or `x < 0`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if !(a > 0.0) || !(x >= 0.0) {
        return f64::NAN;
    }
    if x == 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_continued_fraction(a, x)
    }
}

/// Regularized lower incomplete Gamma function `P(a, x) = 1 - Q(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if !(a > 0.0) || !(x >= 0.0) {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_continued_fraction(a, x)
    }
}

fn prefix(a: f64, x: f64) -> f64 {
    (a * x.ln() - x - ln_gamma_real(a)).exp()
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..10_000 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * prefix(a, x)
}

// Modified Lentz evaluation of the continued fraction for Q.
fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    prefix(a, x) * h
}
