use alloc::string::String;
use core::fmt;

/// Domain errors. Every fallible operation in this crate reports one of
/// these; panics are reserved for internal invariant violations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by an exact zero (rational, cyclotomic, or matrix inverse of
    /// a singular matrix).
    DivisionByZero,
    /// A matrix (or matrix pair) had incompatible dimensions for the
    /// requested operation.
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    /// An operation mixing two braid words (or a word and a table/system)
    /// defined on different strand counts.
    StrandMismatch { left: usize, right: usize },
    /// A braid letter outside `1..strands` (in absolute value), a strand
    /// index outside `1..=strands`, or a degenerate pure-generator pair.
    BadLetter(String),
    /// Twist parameters violating their constraints (level < 2, weight out
    /// of range, weight-count mismatch, zero defects).
    BadParams(String),
    /// The operation needs the single-probe setting (`n = 1`).
    ProbeCountUnsupported { probes: usize },
    /// A phase-table lookup for a strand pair the table does not cover.
    MissingPhase { pair: (usize, usize) },
    /// Cyclotomic arithmetic on mismatched orders without a common embedding.
    OrderMismatch { left: u64, right: u64 },
    /// A relation check failed; carries a human-readable counterexample.
    RelationFailure(String),
    /// A gate-set label that does not name a gate.
    UnknownLabel(String),
    /// The compiler was handed an empty gate set or an impossible request.
    BadCompileRequest(String),
    /// Solovay-Kitaev is implemented for 2x2 gate sets only.
    SolovayKitaevDimension { dim: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::DimensionMismatch { left, right } => write!(
                f,
                "dimension mismatch: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::StrandMismatch { left, right } => {
                write!(f, "strand count mismatch: {left} vs {right}")
            }
            Error::BadLetter(msg) => write!(f, "bad letter: {msg}"),
            Error::BadParams(msg) => write!(f, "bad twist parameters: {msg}"),
            Error::ProbeCountUnsupported { probes } => {
                write!(f, "monodromy needs exactly one probe strand, got {probes}")
            }
            Error::MissingPhase { pair } => {
                write!(f, "phase table has no entry for pair ({},{})", pair.0, pair.1)
            }
            Error::OrderMismatch { left, right } => {
                write!(f, "cyclotomic order mismatch: {left} vs {right}")
            }
            Error::RelationFailure(msg) => write!(f, "relation check failed: {msg}"),
            Error::UnknownLabel(label) => write!(f, "unknown gate label: {label}"),
            Error::BadCompileRequest(msg) => write!(f, "bad compile request: {msg}"),
            Error::SolovayKitaevDimension { dim } => {
                write!(f, "solovay-kitaev refinement handles 2x2 gates only, got {dim}x{dim}")
            }
        }
    }
}

impl core::error::Error for Error {}
