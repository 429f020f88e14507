use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed PD code: {0}")]
    MalformedPd(String),
    #[error("inconsistent diagram: {0}")]
    InconsistentDiagram(String),
    #[error("braid letter {letter} out of range for {strands} strands")]
    BadLetter { letter: i64, strands: usize },
    #[error("malformed braid input: {0}")]
    MalformedBraid(String),
    #[error("torus knot parameters must be >= 2, got ({p}, {q})")]
    BadTorusParameters { p: usize, q: usize },

    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("unknown coefficient ring {0:?} (expected q, z or fp:<p>)")]
    BadRing(String),
    #[error("operation requires field coefficients")]
    RingNotField,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("element does not belong to the coefficient ring")]
    RingMismatch,

    #[error("h^2 + 4t has no non-zero square root giving split roots: {0}")]
    NotDiagonalizable(String),
    #[error("no a with a^2 = disc(src)/disc(dst) exists in the ring")]
    NoSquareRatio,
    #[error("basis change requires division by 2; characteristic 2 unsupported")]
    CharTwoUnsupported,
    #[error("twist element is not a unit of A")]
    NotAUnit,
    #[error("invalid theory: {0}")]
    InvalidTheory(String),

    #[error("cube too large: {crossings} crossings exceeds limit {limit}")]
    CubeTooLarge { crossings: usize, limit: usize },
    #[error("chain is zero")]
    ZeroChain,
    #[error("chain mixes homological degrees")]
    MixedDegree,

    #[error("gamma = {gamma} vanishes mod {p}")]
    GammaVanishesModP { gamma: String, p: u64 },
    #[error("diagram has {0} components; a knot is required")]
    NotAKnot(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("unexpected filtration profile: {0}")]
    UnexpectedProfile(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid input: {0}")]
    BadInput(String),
}

impl Error {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedPd(_) => "MALFORMED_PD",
            Error::InconsistentDiagram(_) => "INCONSISTENT_DIAGRAM",
            Error::BadLetter { .. } => "BAD_LETTER",
            Error::MalformedBraid(_) => "MALFORMED_BRAID",
            Error::BadTorusParameters { .. } => "BAD_TORUS_PARAMETERS",
            Error::NotPrime(_) => "NOT_PRIME",
            Error::BadRing(_) => "BAD_RING",
            Error::RingNotField => "RING_NOT_FIELD",
            Error::ShapeMismatch(_) => "SHAPE_MISMATCH",
            Error::RingMismatch => "RING_MISMATCH",
            Error::NotDiagonalizable(_) => "NOT_DIAGONALIZABLE",
            Error::NoSquareRatio => "NO_SQUARE_RATIO",
            Error::CharTwoUnsupported => "CHAR_TWO_UNSUPPORTED",
            Error::NotAUnit => "NOT_A_UNIT",
            Error::InvalidTheory(_) => "INVALID_THEORY",
            Error::CubeTooLarge { .. } => "CUBE_TOO_LARGE",
            Error::ZeroChain => "ZERO_CHAIN",
            Error::MixedDegree => "MIXED_DEGREE",
            Error::GammaVanishesModP { .. } => "GAMMA_VANISHES_MOD_P",
            Error::NotAKnot(_) => "NOT_A_KNOT",
            Error::HypothesisViolated(_) => "HYPOTHESIS_VIOLATED",
            Error::UnexpectedProfile(_) => "UNEXPECTED_PROFILE",
            Error::VerificationFailed(_) => "VERIFICATION_FAILED",
            Error::FileNotFound(_) => "FILE_NOT_FOUND",
            Error::Io(_) => "IO_ERROR",
            Error::BadInput(_) => "BAD_INPUT",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
