use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is not supported; p must be odd")]
    EvenPrime,
    #[error("field size {p}^{e} exceeds the bound q <= {bound}")]
    FieldTooLarge { p: u64, e: u32, bound: u64 },
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("cyclotomic conductor {n} exceeds the bound phi(n) <= {bound}")]
    ConductorTooLarge { n: u64, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator divisible by p = {0}; value is not p-integral")]
    NotPIntegral(u64),
    #[error("value has p-adic valuation {valuation} < 0 at p = {p}")]
    NegativeValuation { p: u64, valuation: i64 },
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("work budget exceeded: {steps} steps > {budget}")]
    BudgetExceeded { steps: u128, budget: u128 },
    #[error("rounding gate failed: residual + err = {bound:e} at {bits} bits")]
    RoundingGate { bound: f64, bits: u32 },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
