use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("homogeneous coordinates must not all be zero")]
    ZeroVector,
    #[error("a line through two points needs distinct points")]
    EqualPoints,
    #[error("intersecting a line with itself")]
    EqualLines,
    #[error("unsupported curve degree {0} (only 1 and 2)")]
    UnsupportedDegree(usize),
    #[error("transform matrix is singular")]
    SingularMatrix,
    #[error("conic of rank {0} is reducible; represent it by its line components")]
    ReducibleConic(usize),
    #[error("conic is irreducible and has no line components")]
    IrreducibleConic,
    #[error("reducible conic splits into lines that are not defined over the rationals")]
    IrrationalComponents,
    #[error("curves {0} and {1} meet in points with irrational coordinates")]
    IrrationalIntersection(String, String),
    #[error("two conic components ({0}, {1}) are not supported")]
    ConicPair(String, String),
    #[error("negative weight {0}")]
    NegativeWeight(Rational),
    #[error("subtracting {requested} exceeds component weight {available}")]
    WeightExceeded {
        requested: Rational,
        available: Rational,
    },
    #[error("negative scale factor {0}")]
    NegativeScale(Rational),
    #[error("level-set threshold must be positive, got {0}")]
    NonpositiveThreshold(Rational),
    #[error("alpha must exceed 2/5, got {0}")]
    AlphaOutOfRange(Rational),
    #[error("only {found} points with Lelong number at least {alpha}; four are required")]
    TooFewHeavyPoints { found: usize, alpha: Rational },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("the three points are collinear")]
    CollinearPoints,
    #[error("auxiliary parameter must exceed 2/5, got {0}")]
    BadAlphaPrime(Rational),
    #[error("current must have unit mass, got {0}")]
    NonUnitMass(Rational),
    #[error("line carries the full mass of the current")]
    FullWeightLine,
    #[error("no seed produced a configuration with the required incidences")]
    DegenerateSeed,
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("sweep grid has {size} configurations, above the cap of {cap}")]
    GridTooLarge { size: u128, cap: u128 },
}
