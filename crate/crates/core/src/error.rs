use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("not invertible in the atom ring: {0}")]
    NotInvertible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("denominator unit {unit} vanishes at q = {prime}")]
    BadSpecialization { prime: u64, unit: String },

    #[error("invalid count query: {0}")]
    InvalidQuery(String),

    #[error(
        "naive enumeration needs {needed} evaluations, over the budget of {budget}; \
         use the lifting method instead"
    )]
    NaiveBudget { needed: String, budget: u64 },

    #[error("lifting stopped at level d = {level}: {stored} live solutions exceed the budget of {budget}")]
    LiftingBudget { level: u32, stored: u64, budget: u64 },

    #[error("invalid resolution datum:\n{0}")]
    InvalidDatum(String),

    #[error("unknown built-in datum {0:?}")]
    UnknownBuiltin(String),

    #[error("p = {0} is a bad prime for this datum; Denef's formula is not asserted there")]
    BadPrime(u64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid zeta function: {0}")]
    InvalidZeta(String),

    #[error("no component of the datum meets the fiber over the origin")]
    NoFiberComponent,

    #[error("UNRESOLVABLE_OVER_Q: {0}")]
    UnresolvableOverQ(String),

    #[error("blow-up budget of {0} exceeded")]
    BlowupBudget(usize),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("complex error: {0}")]
    Complex(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
