use core::fmt;

/// Errors raised by validation, integration and closed-form evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix or parameter contained NaN or an infinity.
    NonFinite,
    NotHermitian { deviation: f64 },
    TraceNotOne { trace: f64 },
    NotPositive { min_eigenvalue: f64 },
    OutsideBlochBall { norm: f64 },
    /// `Tr(ρO)` had an imaginary part too large to be round-off.
    ImaginaryExpectation { residue: f64 },
    InvalidOptions(&'static str),
    /// The adaptive controller shrank the step below its floor.
    StepSizeUnderflow { time: f64, step: f64 },
    /// The Liouvillian null space is not one-dimensional.
    DegenerateSteadyState { dimension: usize },
    /// A parameter lies outside the domain of a closed form.
    Domain { parameter: &'static str, value: f64 },
    /// A parameter lies inside a band where a closed form divides by ~0.
    SingularParameter { parameter: &'static str, value: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite => write!(f, "non-finite value"),
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")
            }
            Error::TraceNotOne { trace } => write!(f, "trace is {trace}, expected 1"),
            Error::NotPositive { min_eigenvalue } => {
                write!(f, "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")
            }
            Error::OutsideBlochBall { norm } => {
                write!(f, "Bloch vector of length {norm} lies outside the unit ball")
            }
            Error::ImaginaryExpectation { residue } => {
                write!(f, "expectation value has imaginary part {residue:e}")
            }
            Error::InvalidOptions(why) => write!(f, "invalid options: {why}"),
            Error::StepSizeUnderflow { time, step } => {
                write!(f, "step size underflow at t = {time} (h = {step:e})")
            }
            Error::DegenerateSteadyState { dimension } => {
                write!(f, "steady state is not unique (null space dimension {dimension})")
            }
            Error::Domain { parameter, value } => {
                write!(f, "{parameter} = {value} is outside the formula's domain")
            }
            Error::SingularParameter { parameter, value } => write!(
                f,
                "{parameter} = {value} lies in the singular band of the closed form; use the numeric path"
            ),
        }
    }
}

impl core::error::Error for Error {}
