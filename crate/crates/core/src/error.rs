use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree must be an integer >= 2, got {0}")]
    InvalidDegree(u32),
    #[error("degree must be a finite real >= 2, got {0}")]
    InvalidRealDegree(f64),
    #[error("complex point must have finite components, got ({re}, {im})")]
    NonFinitePoint { re: f64, im: f64 },
    #[error("invalid iteration budget: {0}")]
    InvalidBudget(String),
    #[error("{operation} requires an odd degree, got {degree}")]
    EvenDegree {
        operation: &'static str,
        degree: u32,
    },
    #[error("parameter must be a finite nonnegative real, got {0}")]
    InvalidParameter(f64),
    #[error("no sign change of cosh(d x) - d cosh(x) on [{lo}, {hi}] for d = {degree}")]
    BracketFailure { degree: f64, lo: f64, hi: f64 },
    #[error("omega = ({re}, {im}) is not a root of {target} of order d - 1 = {order}")]
    InvalidOmega {
        re: f64,
        im: f64,
        target: i8,
        order: u32,
    },
    #[error("ray {ray} is not available for degree {degree}: {reason}")]
    UnsupportedRay {
        ray: &'static str,
        degree: u32,
        reason: &'static str,
    },
    #[error("ray scan upper bound t = {t} did not escape within {max_iters} iterations")]
    ScanUpperBoundNotEscaped { t: f64, max_iters: u64 },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("failed to write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}
