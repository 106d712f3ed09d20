use thiserror::Error;

/// Errors raised by the library. Every operation that can reject its input
/// returns one of these rather than panicking.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{value} does not divide {modulus}")]
    NotADivisor { value: u64, modulus: String },

    #[error("{0} is not a prime factor of {1}")]
    NotAPrimeFactor(u64, String),

    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("size guard exceeded: {what} is {size}, limit {limit}")]
    SizeGuard {
        what: &'static str,
        size: String,
        limit: u64,
    },

    #[error("no value supplied for prime {0}")]
    MissingValue(u64),

    #[error("evaluation point {0} must not be an integer")]
    IntegerPoint(String),

    #[error("gcd(a, b) = {gcd} does not divide 2N = {two_n}; no offset exists")]
    NoOffset { gcd: u64, two_n: u128 },

    #[error("s = {s} is too close to a pole: |sin({lcm} s)| = {value:e}")]
    NearSingular { s: f64, lcm: u64, value: f64 },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
