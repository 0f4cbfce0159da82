use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({re}, {im}) is not strictly inside the unit disc")]
    OutsideDisc { re: f64, im: f64 },

    #[error("point with modulus {modulus} is not on the unit circle")]
    NotOnBoundary { modulus: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("limit of {quantity} did not converge (last increment {last_delta:e})")]
    NotConverged { quantity: &'static str, last_delta: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("curve `{label}` is not g-special and g-restricted")]
    CurveNotAdmissible { label: String },

    #[error("no curve in the family produced a converged reference limit")]
    NoConvergedReference,

    #[error("orbit from seed {seed} stabilizes at an interior fixed point")]
    InteriorFixedPoint { seed: usize },

    #[error("orbit left the closed bidisc at iterate {index}")]
    DomainEscape { index: usize },

    #[error("slice family of component {component} is ambiguous: {detail}")]
    AmbiguousSlice { component: usize, detail: String },

    #[error("projection device not defined here: {0}")]
    UnsupportedDevice(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
