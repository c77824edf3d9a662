//! Monte-Carlo oracle.
//!
//! Every channel factor is drawn from first principles (Gamma variates and
//! inverse-CDF pointing errors), never through an H-function, so estimates
//! here are an independent check on the analytic path.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::channels::{CascadeSpec, DggParams, GenGammaParams, Hop, PointingErrorParams};
use crate::metrics::{conditional_ber, LinkBudget, ModulationParams, ThresholdSpec};

/// Reproducible random stream: identical `(seed, stream_id)` pairs give
/// identical draws, distinct stream ids give independent streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RngConfig {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngConfig {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream_id);
        r
    }
}

/// Sample mean with its standard error and a normal 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub ci95: (f64, f64),
}

impl McEstimate {
    /// Whether `x` lies within `k` standard errors of the estimate.
    pub fn brackets(&self, x: f64, k: f64) -> bool {
        (x - self.value).abs() <= k * self.std_error
    }
}

/// Streaming mean and variance (Welford), mergeable across substreams.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Count-weighted combination of two partial accumulators.
    pub fn merge(&self, other: &Accumulator) -> Accumulator {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64;
        Accumulator { n, mean, m2 }
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn estimate(&self) -> McEstimate {
        let var = if self.n > 1 {
            self.m2 / (self.n - 1) as f64
        } else {
            0.0
        };
        let se = (var / self.n.max(1) as f64).sqrt();
        McEstimate {
            value: self.mean,
            std_error: se,
            n_samples: self.n,
            ci95: (self.mean - 1.96 * se, self.mean + 1.96 * se),
        }
    }
}

/// `Y^{1/α}` with `Y ~ Gamma(shape β, scale Ω/β)`.
pub fn sample_gg<R: Rng + ?Sized>(p: &GenGammaParams, rng: &mut R) -> f64 {
    let g = Gamma::new(p.beta, p.omega / p.beta).expect("validated generalized Gamma parameters");
    g.sample(rng).powf(1.0 / p.alpha)
}

/// `χ₁ χ₂` with independent generalized Gamma factors.
pub fn sample_dgg<R: Rng + ?Sized>(p: &DggParams, rng: &mut R) -> f64 {
    sample_gg(&p.first, rng) * sample_gg(&p.second, rng)
}

/// `A₀ u^{1/ρ²}` with `u` uniform on `(0, 1]`.
pub fn sample_pe<R: Rng + ?Sized>(p: &PointingErrorParams, rng: &mut R) -> f64 {
    let u = 1.0 - rng.random::<f64>();
    p.a0 * u.powf(1.0 / p.rho2)
}

pub fn sample_hop<R: Rng + ?Sized>(h: &Hop, rng: &mut R) -> f64 {
    let g = sample_dgg(&h.turbulence, rng);
    match &h.pointing {
        Some(pe) => g * sample_pe(pe, rng),
        None => g,
    }
}

pub fn sample_cascade<R: Rng + ?Sized>(spec: &CascadeSpec, rng: &mut R) -> f64 {
    spec.hops.iter().map(|h| sample_hop(h, rng)).product()
}

/// Anything that draws a channel gain.
pub trait GainSampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64;
}

impl GainSampler for CascadeSpec {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        sample_cascade(self, rng)
    }
}

/// A channel with gain identically one.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitGain;

impl GainSampler for UnitGain {
    fn sample(&self, _rng: &mut ChaCha8Rng) -> f64 {
        1.0
    }
}

/// Per-realization SNR pair `(γ̄_F h², γ̄_R g²)`.
pub fn sample_snrs<F: GainSampler + ?Sized, G: GainSampler + ?Sized>(
    fso: &F,
    rf: &G,
    lb: &LinkBudget,
    rng: &mut ChaCha8Rng,
) -> (f64, f64) {
    let h = fso.sample(rng);
    let g = rf.sample(rng);
    (lb.mean_snr_fso * h * h, lb.mean_snr_rf * g * g)
}

/// Averages `stat(γ_F, γ_R)` over `n` realizations.
pub fn estimate_with<F, G, S>(
    fso: &F,
    rf: &G,
    lb: &LinkBudget,
    n: u64,
    rng: &mut ChaCha8Rng,
    mut stat: S,
) -> Accumulator
where
    F: GainSampler + ?Sized,
    G: GainSampler + ?Sized,
    S: FnMut(f64, f64) -> f64,
{
    let mut acc = Accumulator::default();
    for _ in 0..n {
        let (a, b) = sample_snrs(fso, rf, lb, rng);
        acc.push(stat(a, b));
    }
    acc
}

/// `P(min(γ_F, γ_R) <= γ_th)`.
pub fn estimate_outage<F: GainSampler + ?Sized, G: GainSampler + ?Sized>(
    fso: &F,
    rf: &G,
    lb: &LinkBudget,
    th: &ThresholdSpec,
    n: u64,
    rng: &mut ChaCha8Rng,
) -> McEstimate {
    estimate_with(fso, rf, lb, n, rng, |a, b| {
        if a.min(b) <= th.gamma_th {
            1.0
        } else {
            0.0
        }
    })
    .estimate()
}

/// Mean of the conditional error `Γ(p, qγ)/(2Γ(p))` at `γ = min(γ_F, γ_R)`.
pub fn estimate_ber<F: GainSampler + ?Sized, G: GainSampler + ?Sized>(
    fso: &F,
    rf: &G,
    lb: &LinkBudget,
    m: &ModulationParams,
    n: u64,
    rng: &mut ChaCha8Rng,
) -> McEstimate {
    estimate_with(fso, rf, lb, n, rng, |a, b| conditional_ber(a.min(b), m)).estimate()
}

/// Mean of `e_F + e_R - 2 e_F e_R` with `e = Γ(p, qγ)/(2Γ(p))` on each hop:
/// the bit is wrong end to end when exactly one of the two decodings errs.
pub fn estimate_ber_df<F: GainSampler + ?Sized, G: GainSampler + ?Sized>(
    fso: &F,
    rf: &G,
    lb: &LinkBudget,
    m: &ModulationParams,
    n: u64,
    rng: &mut ChaCha8Rng,
) -> McEstimate {
    estimate_with(fso, rf, lb, n, rng, |a, b| {
        let (ef, er) = (conditional_ber(a, m), conditional_ber(b, m));
        ef + er - 2.0 * ef * er
    })
    .estimate()
}

/// Mean of `log₂(1 + min(γ_F, γ_R))`.
pub fn estimate_capacity<F: GainSampler + ?Sized, G: GainSampler + ?Sized>(
    fso: &F,
    rf: &G,
    lb: &LinkBudget,
    n: u64,
    rng: &mut ChaCha8Rng,
) -> McEstimate {
    estimate_with(fso, rf, lb, n, rng, |a, b| {
        a.min(b).ln_1p() * core::f64::consts::LOG2_E
    })
    .estimate()
}

/// `n` independent draws.
pub fn draw<S: GainSampler + ?Sized>(s: &S, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| s.sample(rng)).collect()
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `sorted` and
/// `cdf`, evaluated at `points` evenly spaced order statistics.
///
/// Between two checked order statistics both CDFs are monotone, so the true
/// supremum exceeds the returned value by at most the empirical mass between
/// them, `1/points`.
pub fn ks_distance<E, F: FnMut(f64) -> Result<f64, E>>(
    sorted: &[f64],
    points: usize,
    mut cdf: F,
) -> Result<f64, E> {
    let n = sorted.len();
    if n == 0 {
        return Ok(0.0);
    }
    let points = points.clamp(1, n);
    let mut d: f64 = 0.0;
    for k in 0..points {
        let i = ((k as f64 + 0.5) * n as f64 / points as f64) as usize;
        let i = i.min(n - 1);
        let f = cdf(sorted[i])?;
        // Empirical CDF jumps from i/n to (i+1)/n at sorted[i].
        d = d
            .max((f - i as f64 / n as f64).abs())
            .max((f - (i + 1) as f64 / n as f64).abs());
    }
    Ok(d)
}
