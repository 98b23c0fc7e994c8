use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// `2q >= m`: the adversary may corrupt half the measurements or more.
    #[error("corruption budget q={q} too large for m={m} measurements (need 2q < m)")]
    BudgetTooLarge { m: usize, q: usize },

    /// No subsystem with at most `q` rows removed is consistent.
    #[error("no consistent subsystem after dropping up to q={q} rows; corruption exceeds the budget or the model does not hold")]
    BudgetExceeded { q: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not symmetric (max |C - C^T| = {asymmetry:e})")]
    NonSymmetricInput { asymmetry: f64 },

    #[error("vector is not in the ambiguity set: |supp(Av)| = {support_size} > 2q = {}", 2 * .q)]
    NotAMember { support_size: usize, q: usize },

    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("invalid tolerance {name} = {value}: must be finite and strictly positive")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("vectors are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("subset count C({m}, {k}) overflows u64")]
    CountOverflow { m: usize, k: usize },

    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}:{line}: ragged row, expected {expected} entries, found {found}", path.display())]
    RaggedRow {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 2,
            Error::BudgetTooLarge { .. } => 4,
            Error::DimensionMismatch { .. }
            | Error::NonFiniteEntry { .. }
            | Error::EmptyMatrix { .. }
            | Error::Parse { .. }
            | Error::RaggedRow { .. } => 3,
            _ => 1,
        }
    }
}
