use thiserror::Error;

/// Errors raised by the algebra and pipeline layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("operands belong to different fields or rings")]
    DomainMismatch,
    #[error("{what} exceeds budget {budget}")]
    BudgetExceeded { what: String, budget: u64 },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by the zero polynomial")]
    ZeroDenominator,
    #[error("denominator vanishes at the specialization point")]
    DenominatorVanishes,
    #[error("variable `{0}` has no assigned value")]
    MissingAssignment(String),
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("no cyclic vector among {budget} candidates (seed {seed})")]
    NoCyclicVector { budget: usize, seed: u64 },
    #[error("matrix is not in companion shape")]
    NotCompanion,
    #[error("polynomial is inseparable (zero linear coefficient)")]
    Inseparable,
    #[error("splitting degree not reached by m = {0}")]
    SplittingBoundExceeded(u32),
    #[error("no coordinate extraction rule for group `{0}`")]
    NoExtractionRule(String),
    #[error("{0}")]
    ExistenceOnly(String),
    #[error("route mismatch: {0}")]
    RouteMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no witness found: {0}")]
    NoWitness(String),
}

pub type Result<T> = std::result::Result<T, Error>;
