use std::fmt;

use thiserror::Error;

use crate::dimension::Dimension;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Where in an input document a problem was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line number of a text input.
    Line(usize),
    /// 1-based index of a record in a JSON array.
    Record(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Record(n) => write!(f, "record {n}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimensional heterogeneity in {op}: {left} vs {right}")]
    Heterogeneity {
        op: &'static str,
        left: Dimension,
        right: Dimension,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at position {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("empty portfolio: at least one paper is required")]
    EmptyPortfolio,

    #[error("degenerate series{}: {reason}", indicator.as_ref().map(|n| format!(" for `{n}`")).unwrap_or_default())]
    DegenerateSeries {
        indicator: Option<String>,
        reason: String,
    },

    #[error("column `{column}` has zero variance")]
    ZeroVariance { column: String },

    #[error("unknown indicator `{0}`")]
    UnknownIndicator(String),

    #[error("format error at {location}: {message}")]
    Format { location: Location, message: String },

    #[error("negative citation count `{value}` at {location}")]
    NegativeCount { location: Location, value: String },

    #[error("mixed input forms at {location}: {message}")]
    MixedForm { location: Location, message: String },

    #[error("series `{series}` has non-positive point ({x}, {y}); log-log axes need positive coordinates")]
    NonPositivePoint { series: String, x: f64, y: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn format(location: Location, msg: impl Into<String>) -> Self {
        Error::Format {
            location,
            message: msg.into(),
        }
    }
}
