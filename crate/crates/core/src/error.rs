use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime (or exceeds the supported range 2..2^31)")]
    NotPrime(u64),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("exponent overflow: q = {p}^{e} does not fit the exponent range")]
    ExponentOverflow { p: u64, e: u32 },

    #[error("ideal carries no Gröbner basis")]
    MissingGroebnerBasis,

    #[error("quotient has infinite length")]
    InfiniteLength,

    #[error("time budget exhausted")]
    BudgetExceeded,

    #[error("search region insufficient: {0}")]
    RegionInsufficient(String),

    #[error("p = {p} divides the degree {degree}; tame covers require p not dividing the degree")]
    PrimeDividesDegree { p: u64, degree: u64 },

    #[error("pulled-back divisor is not effective: coefficient {coefficient} on facet {facet}")]
    NotEffective { facet: usize, coefficient: String },

    #[error("F-signature is zero: not strongly F-regular, theorem inapplicable")]
    NotStronglyFRegular,
}
