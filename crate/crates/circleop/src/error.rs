use thiserror::Error;

/// Errors for symbol construction, sampling, and operator routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircleopError {
    #[error("duplicate mode {0} in coefficient list")]
    DuplicateMode(i64),

    #[error("grid size {n} too small: need a power of two >= 16 exceeding twice the support radius {radius}")]
    GridTooSmall { n: usize, radius: i64 },

    #[error("requested degree {degree} aliases on an {n}-point grid (need degree < n/2)")]
    AliasingDegree { degree: usize, n: usize },

    #[error("curve passes within {guard:e} of the base point; winding number undefined")]
    CurveTouchesPoint { guard: f64 },

    #[error("grid too coarse for winding number: phase increment {increment:.3} rad at sample {index}")]
    GridTooCoarse { index: usize, increment: f64 },

    #[error("shift power must be nonnegative, got {0}")]
    NegativePower(i64),

    #[error("truncation window radius {m} too small (need at least {required})")]
    WindowTooSmall { m: i64, required: i64 },

    #[error("expansion degree {degree} insufficient for tail accuracy {target:e}; need degree >= {required}")]
    DegreeTooLow {
        degree: usize,
        required: usize,
        target: f64,
    },

    #[error("Blaschke zero {0} does not lie strictly inside the unit disk")]
    ZeroNotInDisk(String),

    #[error("constant must be unimodular, |c| = {0}")]
    ConstantNotUnimodular(f64),

    #[error("symbol must be analytic for this operation")]
    NotAnalytic,

    #[error("symbol is identically zero")]
    ZeroSymbol,

    #[error("shift parameter must be nonzero")]
    LambdaZero,

    #[error("point {0} lies in neither essential range")]
    NotInRange(String),

    #[error("a root lies within {guard:e} of the unit circle: |root| = {modulus}")]
    RootNearCircle { modulus: f64, guard: f64 },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, CircleopError>;
