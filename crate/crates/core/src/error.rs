use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("gram matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("diagonal entry {0} is odd; lattice is not even")]
    OddDiagonal(usize),
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("unknown lattice name `{0}`")]
    UnknownName(String),
    #[error("<{0}> requires a nonzero even integer")]
    InvalidDiagonal(i64),
    #[error("scale must be a positive integer, got {0}")]
    InvalidScale(i64),
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector is not primitive (gcd {0})")]
    NotPrimitive(i64),
    #[error("vector has square zero; its orthogonal complement is degenerate")]
    IsotropicVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("ill-defined quadratic form: {0}")]
    IllDefinedForm(String),
    #[error("quadratic form is degenerate")]
    DegenerateForm,
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("epsilon must be +1 or -1, got {0}")]
    InvalidEpsilon(i64),
    #[error("form is too large for {0}")]
    TooLarge(&'static str),
    #[error("isometry undecided: invariants agree but the group exceeds the search cap")]
    Undecided,
    #[error("prime 2 is not supported: involutions are outside the scope of this classification")]
    PrimeTwo,
    #[error("out of scope: p^2 divides 2(n-1) for n = {n}, p = {p} (alpha = {alpha}); only alpha <= 1 is treated")]
    AlphaScope { n: i64, p: i64, alpha: u32 },
    #[error("parity violation: m = {m} and a = {a} must have the same parity when p does not divide 2(n-1)")]
    Parity { m: i64, a: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not an isometry: (M^T G M)[{row}][{col}] = {got}, expected {expected}")]
    NotIsometry { row: usize, col: usize, got: String, expected: String },
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
