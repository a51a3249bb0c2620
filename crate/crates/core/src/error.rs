//! Error type shared by every module, with the CLI exit-code contract.

use thiserror::Error;

/// Unified error type. `exit_code` maps each variant onto the CLI contract:
/// 1 usage error, 2 verification negative, 3 numerical failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("denominator is zero at byte {offset}")]
    ZeroDenominator { offset: usize },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("scale must be positive")]
    NonPositiveScale,

    #[error("unsupported degree {degree}: gcd computations are capped at degree {cap}")]
    UnsupportedDegree { degree: i64, cap: i64 },

    #[error("unsupported Harnack degree {0}: the catalog covers degrees 1 through 4")]
    UnsupportedHarnackDegree(u32),

    #[error("degenerate curve: C, C_x and C_y share a nonconstant factor, so C=0 may have infinitely many singular points")]
    DegenerateCurve,

    #[error("grid too coarse: a traced component failed to close; retry with grid at least {suggested}")]
    ResolutionTooCoarse { suggested: u32 },

    #[error("ambiguous point: within on-curve tolerance of the oval polyline")]
    AmbiguousPoint,

    #[error("not invariant: C_x*P + C_y*Q leaves remainder {remainder} modulo C")]
    NotInvariant { remainder: String },

    #[error("line divides the curve")]
    LineDividesCurve,

    #[error("degenerate parameters: alpha*D_x + beta*D_y = 0")]
    DegenerateParameters,

    #[error("line meets an oval of the curve")]
    LineMeetsOval,

    #[error("invalid line: D vanishes on the oval interior")]
    InvalidLine,

    #[error("relocation needed: {0}")]
    RelocationNeeded(String),

    #[error("certificate invalid: {0}")]
    InvalidCertificate(String),

    #[error("integration failed: {message} (last reliable t = {t})")]
    Integration { message: String, t: f64 },

    #[error("no return to the section within t = {t_max}")]
    NoReturn { t_max: f64 },

    #[error("periodic-orbit refinement did not converge: {0}")]
    NonConvergence(String),

    #[error("epsilon search failed after {attempts} halvings; diagnostics:\n{diagnostics}")]
    SearchFailure { attempts: u32, diagnostics: String },

    #[error("n = {n} is outside the {family} table; beyond it only the asymptotic growth O(n^2 log n) is recorded, as documentation")]
    OutOfTable { family: String, n: i64 },

    #[error("empty radius list")]
    EmptyRadii,

    #[error("repeated radius {0}: the construction would not be hyperbolic")]
    RepeatedRadius(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("{0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code contracted by the CLI: 0 is success (never an error),
    /// 1 usage, 2 verification negative, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::ZeroDenominator { .. }
            | Error::DivisionByZero
            | Error::NonPositiveScale
            | Error::UnsupportedDegree { .. }
            | Error::UnsupportedHarnackDegree(_)
            | Error::OutOfTable { .. }
            | Error::EmptyRadii
            | Error::RepeatedRadius(_)
            | Error::Usage(_)
            | Error::Io(_) => 1,
            Error::DegenerateCurve
            | Error::AmbiguousPoint
            | Error::NotInvariant { .. }
            | Error::LineDividesCurve
            | Error::DegenerateParameters
            | Error::LineMeetsOval
            | Error::InvalidLine
            | Error::RelocationNeeded(_)
            | Error::InvalidCertificate(_) => 2,
            Error::ResolutionTooCoarse { .. }
            | Error::Integration { .. }
            | Error::NoReturn { .. }
            | Error::NonConvergence(_)
            | Error::SearchFailure { .. }
            | Error::Internal(_) => 3,
        }
    }
}
