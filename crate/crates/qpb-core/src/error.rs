use alloc::string::String;
use core::fmt;

/// Errors produced anywhere in the engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Inversion was requested for a scalar that is not a nonzero monomial.
    NonInvertibleScalar(String),
    /// `specialize` was called with `q = 0`.
    ZeroSpecialization,
    /// Text input could not be parsed; byte position and message.
    Syntax { pos: usize, msg: String },
    /// A generator index is outside `1..=n` (or violates a family constraint).
    IndexOutOfRange(String),
    /// A parsed letter is not admitted by the target algebra.
    LetterNotAdmitted(String),
    /// A tensor operation was applied to operands of different rank.
    RankMismatch { left: usize, right: usize },
    /// A rewrite rule would not be compatible with the term order.
    RuleOrderViolation(String),
    /// Two rules share the same left-hand word.
    DuplicateLhs(String),
    /// A polynomial contains a letter outside the presentation.
    UnknownLetter(String),
    /// The reduction step budget was exhausted.
    BudgetExceeded { budget: u64 },
    /// Bounded completion could not orient an ambiguity.
    CompletionFailure(String),
    /// The requested algebra spec is invalid.
    InvalidSpec(String),
    /// A structure map table is missing an entry (e.g. coproduct of a letter).
    MissingStructure(String),
    /// The algebra carries no Hopf structure (e.g. the projective ring).
    NoHopfStructure(String),
    /// A Hopf axiom failed during a build-time self check.
    HopfAxiomFailure(String),
    /// No push-left rule could be derived for a (generator, inverse) pair.
    OreDerivationFailure(String),
    /// A requested computation window exceeds the configured budget.
    WindowTooLarge(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonInvertibleScalar(s) => write!(f, "non-invertible scalar: {s}"),
            Error::ZeroSpecialization => write!(f, "cannot specialize at q = 0"),
            Error::Syntax { pos, msg } => write!(f, "syntax error at byte {pos}: {msg}"),
            Error::IndexOutOfRange(s) => write!(f, "index out of range: {s}"),
            Error::LetterNotAdmitted(s) => write!(f, "letter not admitted by context: {s}"),
            Error::RankMismatch { left, right } => {
                write!(f, "tensor rank mismatch: {left} vs {right}")
            }
            Error::RuleOrderViolation(s) => write!(f, "rule violates term order: {s}"),
            Error::DuplicateLhs(s) => write!(f, "duplicate rule left-hand side: {s}"),
            Error::UnknownLetter(s) => write!(f, "letter not in presentation: {s}"),
            Error::BudgetExceeded { budget } => {
                write!(f, "reduction budget of {budget} rule applications exceeded")
            }
            Error::CompletionFailure(s) => write!(f, "completion failure: {s}"),
            Error::InvalidSpec(s) => write!(f, "invalid algebra spec: {s}"),
            Error::MissingStructure(s) => write!(f, "missing structure table entry: {s}"),
            Error::NoHopfStructure(s) => write!(f, "no Hopf structure on {s}"),
            Error::HopfAxiomFailure(s) => write!(f, "Hopf axiom failed: {s}"),
            Error::OreDerivationFailure(s) => write!(f, "Ore rule derivation failed: {s}"),
            Error::WindowTooLarge(s) => write!(f, "window too large: {s}"),
        }
    }
}

impl core::error::Error for Error {}
