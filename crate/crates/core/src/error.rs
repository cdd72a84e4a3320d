use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{what}: argument {value} outside the domain")]
    Domain { what: &'static str, value: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("cannot build a polynomial from an empty root list")]
    EmptyRoots,
    #[error("non-finite root at index {0}")]
    NonFiniteRoot(usize),
    #[error("derivative order {order} exceeds degree {degree}")]
    OrderTooLarge { order: usize, degree: usize },
    #[error("fractional order {alpha} outside [0, {degree}]")]
    FractionalOrder { alpha: f64, degree: usize },
    #[error("zero polynomial")]
    Zero,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("polynomial has degree 0")]
    Constant,
    #[error("found {found} sign-change brackets, expected {expected}")]
    BracketMismatch { found: usize, expected: usize },
    #[error("invalid interval [{0}, {1}]")]
    Interval(f64, f64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LawError {
    #[error("invalid law parameters: {0}")]
    Invalid(String),
    #[error("law has infinite total mass and cannot be sampled")]
    InfiniteMass,
    #[error("sample size must be at least 1")]
    EmptySample,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("time {t} outside [0, {mass})")]
    Time { t: f64, mass: f64 },
    #[error("initial law has an atom at radius 0")]
    AtomAtOrigin,
    #[error("total mass must be positive")]
    NoMass,
    #[error("a profile needs a finite total mass")]
    Unbounded,
    #[error("grid point ({x}, {t}) lies where the distribution function vanishes")]
    ZeroRegion { x: f64, t: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealError {
    #[error("point {0} lies on the support")]
    OnSupport(f64),
    #[error("argument {value} outside the valid range ({lo}, {hi})")]
    Range { value: f64, lo: f64, hi: f64 },
    #[error("time {t} outside [0, {mass})")]
    Time { t: f64, mass: f64 },
    #[error("measure must be a probability measure (mass {0})")]
    NotProbability(f64),
    #[error("invalid measure: {0}")]
    Invalid(String),
    #[error("iteration failed to converge at z = {0}")]
    NoConvergence(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Law(#[from] LawError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Real(#[from] RealError),
    #[error("config: {0}")]
    Config(String),
    #[error("plot: {0}")]
    Plot(String),
    #[error("root finding did not converge")]
    NonConvergence,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
