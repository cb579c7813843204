use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {modulus} is not an irreducible polynomial of degree {degree} over GF({p})")]
    Reducible { p: u32, degree: u32, modulus: u32 },
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("division by zero")]
    DivideByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field of order {q} is too small, need at least {needed} distinct elements")]
    FieldTooSmall { q: u32, needed: usize },
    #[error("exhaustive minor check refused for a matrix with min(rows, cols) = {0} > 6")]
    TooLargeToCheck(usize),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("generator matrix has rank {rank}, expected {k}")]
    NotFullRank { rank: usize, k: usize },
    #[error("enumeration of {needed} projective messages exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("invalid locality assignment: {0}")]
    InvalidLocality(String),
    #[error("symbol {symbol} cannot be repaired: {erased} erasures among its repair set, at most {limit} allowed")]
    RepairImpossible {
        symbol: usize,
        erased: usize,
        limit: usize,
    },
    #[error("received symbols are not consistent with any codeword")]
    NotACodeword,
    #[error("locality verification failed for symbols {0:?}")]
    LocalityNotVerified(Vec<usize>),
    #[error("enlarging needs r < k, got r = {r}, k = {k}")]
    RNoLessThanK { r: usize, k: usize },
    #[error("no enlarging vector found after {samples} samples")]
    NoWitnessFound { samples: u64 },
    #[error("input code not verified: {0}")]
    InputNotVerified(String),
    #[error("puncturing needs k >= 2, got k = {0}")]
    DimensionTooSmall(usize),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("no verified code after {attempts} attempts (best measured distance {best_d:?}, floor {floor})")]
    RetriesExhausted {
        attempts: u32,
        best_d: Option<usize>,
        floor: usize,
    },
    #[error("unknown code family {0:?}")]
    BadFamily(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
