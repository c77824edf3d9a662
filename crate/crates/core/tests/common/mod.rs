#![allow(dead_code)]

use foxlink_core::{CascadeSpec, DggParams, GenGammaParams, Hop, PointingErrorParams};

pub fn gg(alpha: f64, beta: f64, omega: f64) -> GenGammaParams {
    GenGammaParams::new(alpha, beta, omega).unwrap()
}

pub fn st() -> DggParams {
    DggParams::new(gg(1.8621, 0.5, 1.5074), gg(1.0, 1.8, 0.928)).unwrap()
}

pub fn mt() -> DggParams {
    DggParams::new(gg(2.169, 0.55, 1.5793), gg(1.0, 2.35, 0.9671)).unwrap()
}

pub fn rf() -> DggParams {
    DggParams::new(gg(1.5, 1.5, 1.5793), gg(1.0, 1.5, 0.9671)).unwrap()
}

pub fn pe(rho2: f64) -> PointingErrorParams {
    PointingErrorParams::new(0.02, rho2).unwrap()
}

/// `k` optical hops: ρ² = 6 on the first and last hop, 25 in between.
pub fn fso(t: DggParams, k: usize) -> CascadeSpec {
    CascadeSpec::new(
        (0..k)
            .map(|i| Hop::fso(t, pe(if i == 0 || i + 1 == k { 6.0 } else { 25.0 })))
            .collect(),
    )
    .unwrap()
}

pub fn rf_cascade(k: usize) -> CascadeSpec {
    CascadeSpec::new((0..k).map(|_| Hop::rf(rf())).collect()).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
