use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid root context: {0}")]
    InvalidRoot(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: cyclotomic orders {0} and {1}")]
    FieldMismatch(u32, u32),

    #[error("backend mismatch: cannot mix exact and approximate values")]
    BackendMismatch,

    #[error("representations live over different roots of unity: {0} vs {1}")]
    ContextMismatch(String, String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("polynomial contains J; substitute it first")]
    ContainsJ,

    #[error("word length {0} exceeds the rewriting cap of {1}")]
    WordTooLong(usize, usize),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("representation violates {relation} (residual {residual:e})")]
    RelationViolated { relation: String, residual: f64 },

    #[error("the two expressions for J disagree (residual {0:e})")]
    JFormsDisagree(f64),

    #[error("eigenvalue iteration did not converge after {iterations} steps (max correction {max_step:e})")]
    NoConvergence {
        iterations: usize,
        max_step: f64,
        best: Vec<num_complex::Complex64>,
    },

    #[error("matrix is not diagonalizable: eigenvalue {value} has multiplicity {algebraic} but {geometric} eigenvectors")]
    NotDiagonalizable {
        value: num_complex::Complex64,
        algebraic: usize,
        geometric: usize,
    },

    #[error("vector is not an eigenvector of J for [x]_q (residual {0:e})")]
    NotEigenvector(f64),

    #[error("ladder chain links {linked} of {dim} eigenvalues")]
    IncompleteChain {
        linked: usize,
        dim: usize,
        partial: Vec<num_complex::Complex64>,
    },

    #[error("dimension {0} is not supported (max {1})")]
    TooLarge(usize, usize),

    #[error("malformed representation data: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
