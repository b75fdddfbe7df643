//! Volume bounds for drilling a closed geodesic out of a hyperbolic
//! 3-manifold, with the curvature and smoothing machinery behind them.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the
//! `*64` / `*32` aliases below fix the scalar for everyday use.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod format;
pub mod geodesic;
pub mod oracle;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod smoothing;
pub mod warped;

pub use error::{Error, Result};
pub use scalar::{Jet, Real};

pub type WarpingPair64 = warped::WarpingPair<f64>;
pub type WarpingPair32 = warped::WarpingPair<f32>;
pub type TubeParams64 = warped::TubeParams<f64>;
pub type TubeParams32 = warped::TubeParams<f32>;
pub type DrillEstimate64 = bounds::DrillEstimate<f64>;
pub type DrillEstimate32 = bounds::DrillEstimate<f32>;
pub type SmoothedJunction64 = smoothing::SmoothedJunction<f64>;
pub type SmoothedWarpingFamily64 = smoothing::SmoothedWarpingFamily<f64>;
pub type DiagonalMetric64 = oracle::DiagonalMetric<f64>;
pub type CurvatureReport64 = oracle::CurvatureReport<f64>;
