//! Fox-H evaluation and cascaded fading statistics for RIS-assisted multihop
//! mixed FSO/RF decode-and-forward links.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! - [`foxh`]: univariate and bivariate Fox-H functions by Mellin-Barnes
//!   contour quadrature, parameter validation and the raw Mellin kernel.
//! - [`channels`]: generalized-Gamma, double generalized-Gamma and
//!   pointing-error laws, products of Fox-H-type variates and K-hop cascades.
//! - [`metrics`]: end-to-end SNR distribution, outage (exact and asymptotic),
//!   diversity order, average BER and ergodic capacity.
//! - [`mc`]: an independent Monte-Carlo oracle that samples the channels from
//!   first principles.
//!
//! File formats, sweeps and the command line live in the `foxlink` crate.
#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod channels;
pub mod foxh;
pub mod mc;
pub mod metrics;
pub mod quad;
pub mod special;

pub use channels::{
    CascadeSpec, ChannelError, DggParams, GenGammaParams, Hop, MellinLaw, PointingErrorParams,
    PointingGeometry,
};
pub use foxh::{BivariateFoxHParams, ContourSpec, FoxHError, FoxHParams, GammaPair};
pub use metrics::{LinkBudget, MetricsError, MixedLink, ModulationParams, ThresholdSpec};
