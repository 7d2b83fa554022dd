use num_rational::BigRational;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong inside the kernel.
///
/// Variants are split into three groups by the CLI: malformed input,
/// domain errors (a mathematical precondition fails) and verification
/// failures (an identity that must hold exactly did not).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chart mismatch: `{left}` vs `{right}`")]
    ChartMismatch { left: String, right: String },

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("parity mismatch when substituting `{0}`")]
    ParityMismatch(String),

    #[error("image of t must be a positive rational multiple of t, got {0}")]
    NonInvertibleT(String),

    #[error("{0} is not a rational number")]
    IrrationalPower(String),

    #[error("operation requires a chart with density variables (t, t*)")]
    UnhattedChart,

    #[error("expression contains density variables but the target chart has none")]
    UnexpectedDensityVariables,

    #[error("density {0} is not an invertible monomial in t")]
    NonInvertibleDensity(String),

    #[error(
        "weight {0} is singular for the canonical lift (weight 1 corresponds to \
         half densities on the odd cotangent bundle)"
    )]
    WeightOne(BigRational),

    #[error("expected a homogeneous element: {0}")]
    Inhomogeneous(String),

    #[error("argument {index} of an r-ary bracket has nonzero fiber degree")]
    NonzeroFiberDegree { index: usize },

    #[error("coordinate change reverses orientation (Jacobian determinant {0})")]
    Orientation(BigRational),

    #[error("invalid coordinate change: {0}")]
    InvalidChange(String),

    #[error("not a lift of the given element: {0}")]
    MalformedLift(String),

    #[error("weight mismatch: expected {expected}, found {found}")]
    WeightMismatch { expected: String, found: String },

    #[error("master equation fails: (s, s) = {0}")]
    MasterEquationFails(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("chart is not a Darboux chart: {0}")]
    NotDarboux(String),

    #[error("invalid Lie algebra data: {0}")]
    InvalidLieAlgebra(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl Error {
    /// True for failures of an exact identity (as opposed to bad input).
    pub fn is_verification(&self) -> bool {
        matches!(self, Error::VerificationFailed(_))
    }
}
