use thiserror::Error;

use crate::lattice::MukaiVector;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("half-degree d must be a positive integer, got {0}")]
    InvalidHalfDegree(String),

    #[error("stability point requires y > 0, got y = {0}")]
    NonPositiveY(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operation requires positive rank, got r = {0}")]
    RankNotPositive(String),

    #[error("operation requires nonzero rank")]
    RankZero,

    #[error("class {0} is not spherical")]
    NotSpherical(MukaiVector),

    #[error("class {0} is not isotropic")]
    NotIsotropic(MukaiVector),

    #[error("phase comparison needs both imaginary parts on the same side of the real axis")]
    MixedImaginarySigns,

    #[error("phase comparison is undefined when an imaginary part vanishes")]
    VanishingImaginaryPart,

    #[error("the classes are proportional; the wall locus is degenerate")]
    ProportionalPair,

    #[error("lambda vanishes at this point; phase-zero comparisons are outside the search domain")]
    LambdaZero,

    #[error("point lies outside the geometric chamber; witness {0}")]
    OutsideGeometricChamber(MukaiVector),

    #[error("scan grid must satisfy y > 0 everywhere")]
    GridNotPositive,

    #[error("scan grid step must be positive")]
    GridStepNotPositive,

    #[error("certificate verdict is {0}; only Stable certificates can be cross-checked")]
    CertificateNotStable(String),

    #[error("certificates of family {0} have no destabilizer search attached")]
    CertificateNotSearchable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
