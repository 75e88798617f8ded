use thiserror::Error;

/// Errors surfaced by the fallible operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("residue class 0 has no inverse")]
    ZeroResidue,
    #[error("{divisor} does not divide {of}")]
    NotDivisor { divisor: u64, of: u64 },
    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("operation needs an inverse table; build the context with `with_inverse_table`")]
    InverseTableMissing,
    #[error("sieve weight delta is not positive; the sieved condition does not apply")]
    NonPositiveDelta,
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
