use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomials live over different fields (q = {0} vs q = {1})")]
    ModulusMismatch(u64, u64),
    #[error("coefficient {coeff} is outside [0, {q})")]
    CoefficientOutOfRange { coeff: u64, q: u64 },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("polynomial {0} is reducible")]
    Reducible(String),
    #[error("polynomial {0} is not squarefree")]
    NotSquarefree(String),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(String, String),
    #[error("{0} is not a unit modulo the generator's polynomial")]
    NotAUnit(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid auxiliary set: {0}")]
    InvalidAuxSet(String),
    #[error("no auxiliary set found for primes in [{p_min}, {p_max}] after {attempts} attempts")]
    SearchExhausted { p_min: u64, p_max: u64, attempts: u64 },
    #[error("injectivity violated: n = {n} produced by {first} and {second}")]
    DuplicateValue { n: String, first: String, second: String },
    #[error("value {0} does not decode to a member of the sequence")]
    ForeignValue(String),
    #[error("strict parameter check failed: {0}")]
    Strict(String),
    #[error("malformed sequence data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
