use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    Pole(Complex64),
    #[error("order a = {0} is outside the supported box |Re a| <= 2, |Im a| <= 10")]
    OrderRange(Complex64),
    #[error("argument |z| = {0} is outside the supported range |z| <= 200")]
    ArgumentRange(f64),
    #[error("integration failed at zeta = {zeta}: {reason}")]
    Integration { zeta: Complex64, reason: String },
    #[error("{what}: residual {residual:e} exceeds {tol:e}")]
    Consistency { what: String, residual: f64, tol: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not converge (error estimate {estimate:e})")]
    Quadrature { estimate: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("periodic box too small: boundary amplitude {amplitude:e} exceeds {tol:e}")]
    BoxTooSmall { amplitude: f64, tol: f64 },
    #[error("mass drift {drift:e} exceeds {tol:e}")]
    Instability { drift: f64, tol: f64 },
    #[error("ray point x = {x} lies outside the box [{lo}, {hi})")]
    RayOutside { x: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
