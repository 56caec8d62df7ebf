//! Error type shared by every numerical stage of the crate.

use thiserror::Error;

use crate::fraclap::RouteId;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Gamma-function argument sits on a pole that nothing cancels.
    #[error("Gamma pole at {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    /// NaN or infinite input reached an operation that requires finite values.
    #[error("non-finite input to {stage}")]
    NonFinite { stage: &'static str },

    #[error(
        "{stage}: no convergence (estimate {estimate:e}, error {error:e}, tolerance {tolerance:e})"
    )]
    NoConvergence {
        stage: &'static str,
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("residue estimate at x = {pole} does not stabilize; not a simple pole")]
    NotSimplePole { pole: f64 },

    #[error("contour integrand still {magnitude:e} at |Im s| = {height}; tail too fat")]
    TailTooFat { height: f64, magnitude: f64 },

    #[error("Re s = {re} lies outside the convergence strip ({lo}, {hi})")]
    OutsideStrip { re: f64, lo: f64, hi: f64 },

    #[error("no admissible contour abscissa: {reason}")]
    StripConflict { reason: String },

    #[error("inverse transform left an imaginary part {im:e} against real part {re:e}")]
    ResidualImaginary { re: f64, im: f64 },

    #[error("dimension n = {n} is not supported by {what}")]
    DimensionUnsupported { n: u32, what: &'static str },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("function is not integrable on the real line")]
    NotIntegrable,

    #[error("cosine factor vanishes at s = {re}{im:+}i")]
    CosineZero { re: f64, im: f64 },

    #[error("{what} is unavailable for this function")]
    Missing { what: &'static str },

    /// Wraps the error of one operator route so reports can name it.
    #[error("route {route}: {source}")]
    Route {
        route: RouteId,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, range: &'static str) -> Self {
        Error::ParameterOutOfRange { name, value, range }
    }

    /// True for failures of a numerical procedure (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::NoConvergence { .. }
            | Error::NotSimplePole { .. }
            | Error::TailTooFat { .. }
            | Error::StripConflict { .. }
            | Error::ResidualImaginary { .. }
            | Error::Pole { .. }
            | Error::CosineZero { .. }
            | Error::NonFinite { .. } => true,
            Error::Route { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}
