use thiserror::Error;

/// Errors raised by the counting and enumeration engines.
///
/// A preference list that fails to park is *not* an error; it is reported
/// through [`crate::rule::Outcome`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("car {car} has preference {value}, outside the street [1, {n}]")]
    InvalidPreference { car: usize, value: usize, n: usize },

    #[error("vacillation step k = {k} is outside [1, {n}]")]
    InvalidStep { k: usize, n: usize },

    #[error("index i = {i} is outside [1, {n}]")]
    IndexOutOfRange { n: usize, i: usize },

    #[error("length n = {n} is below the minimum {min}")]
    LengthTooSmall { n: usize, min: usize },

    #[error("{what} with n = {n} exceeds the configured ceiling {ceiling}")]
    ResourceGuard {
        what: &'static str,
        n: usize,
        ceiling: usize,
    },

    #[error(
        "outcome statistics requested for a list that does not park (car {failing_car} fails)"
    )]
    NotParked { failing_car: usize },

    #[error(
        "numeric closed form is limited to n <= {ceiling} (requested {n}); use the series expansion instead"
    )]
    NumericCeiling { n: usize, ceiling: usize },

    #[error("imaginary residue {residue:e} of the closed form at n = {n} exceeds {tolerance:e}")]
    ImaginaryResidue {
        n: usize,
        residue: f64,
        tolerance: f64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("count cache rejected: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
