use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid pressure law parameters: {0}")]
    InvalidLaw(String),

    #[error("density {rho} outside the admissible range [0, {rho_star})")]
    Domain { rho: f64, rho_star: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("linear solver failed: {0}")]
    LinearSolver(String),

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NewtonNonConvergence {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },

    #[error("root bracket [{lo}, {hi}] does not change sign (f = {flo:e}, {fhi:e})")]
    InvalidBracket { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("root finder did not converge (best estimate {estimate})")]
    RootNonConvergence { estimate: f64 },

    #[error("quadrature did not converge (estimate {estimate}, error {error:e})")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    #[error("density bound violated at node {node}: rho = {rho} (time {time})")]
    DensityBound { node: usize, rho: f64, time: f64 },

    #[error("Riemann problems interact at t = {interaction_time}, before the requested time {t}")]
    Interaction { interaction_time: f64, t: f64 },

    #[error("step {step} (t = {time}) failed: {source}")]
    Step {
        step: usize,
        time: f64,
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
