use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivisionByZero,

    #[error("grade overflow: {0} + {1} exceeds dimension {2}")]
    GradeOverflow(usize, usize, usize),
    #[error("interior product of a grade-0 form")]
    GradeUnderflow,
    #[error("grade mismatch: expected {expected}, got {got}")]
    GradeMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("expected {expected} vectors, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("expected a grade-6 form on F^7, got grade {grade} on F^{dim}")]
    WrongGradeOrDim { grade: usize, dim: usize },
    #[error("volume form is zero")]
    ZeroEta,
    #[error("invalid multi-index: {0}")]
    BadIndex(String),

    #[error("skew matrix has odd size {0}")]
    OddSize(usize),
    #[error("matrix is not skew-symmetric with zero diagonal")]
    NotSkew,

    #[error("enumeration of {requested} items exceeds budget {budget} (set GW_BUDGET to raise it)")]
    BudgetExceeded { requested: u128, budget: u128 },
    #[error("triple count {count} is not divisible by {divisor}")]
    NonDivisible { count: u128, divisor: u128 },

    #[error("the zero form has no weight, kernel reduction or class")]
    ZeroForm,
    #[error("form is degenerate (kernel dimension {0})")]
    DegenerateInput(usize),
    #[error("rank parameter {r} outside 1..={max}")]
    RankOutOfRange { r: usize, max: usize },
    #[error("weight formula produced the non-integer {0}")]
    NonIntegerResult(String),

    #[error("class {index} has no variant {variant} in characteristic {p}")]
    VariantMismatch { index: u8, variant: String, p: u32 },
    #[error("no class index {0}")]
    NoSuchClass(u8),
    #[error("no class matches fingerprint {0}")]
    NoMatch(String),
    #[error("fingerprint {0} matches several classes")]
    AmbiguousMatch(String),

    #[error("polynomial division leaves a nonzero remainder")]
    InexactDivision,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
