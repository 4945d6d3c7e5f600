//! Bibliometric indicators as dimensioned quantities.
//!
//! Every index is a [`Quantity`] carrying an exact rational power of the
//! publication unit `[P]`. Adding or comparing quantities of different
//! dimension is an error, which makes statements such as "the Euclidean
//! index is an alternative to h" fail loudly instead of silently.
//!
//! The numeric core is generic over the floating-point [`Scalar`]; the
//! aliases below fix it to `f64`, which is what the CLI and reports use.

pub mod analytics;
pub mod dimension;
pub mod error;
pub mod expr;
pub mod indicators;
pub mod io;
pub mod plot;
pub mod scalar;
pub mod scaling;
pub mod table1;

pub use dimension::{Dimension, Exponent, Quantity};
pub use error::{Error, Location, Result};
pub use expr::DimExpr;
pub use indicators::{CitationVector, IndicatorDescriptor, IndicatorReport};
pub use scalar::Scalar;

/// Double-precision quantity, the default throughout the crate.
pub type Quantity64 = Quantity<f64>;
/// Single-precision quantity.
pub type Quantity32 = Quantity<f32>;
pub type IndicatorReport64 = IndicatorReport<f64>;
pub type IndicatorDescriptor64 = IndicatorDescriptor<f64>;
pub type AnalyticsTable64 = analytics::AnalyticsTable<f64>;
pub type CorrelationMatrix64 = analytics::CorrelationMatrix<f64>;
pub type ExponentEstimate64 = scaling::ExponentEstimate<f64>;
pub type ProbeRecord64 = scaling::ProbeRecord<f64>;
