use thiserror::Error;

use crate::grid::Space;

/// Errors raised by the grid, operators, test functions and the driver.
#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] brlab_core::Error),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("expected a {expected:?}-space grid function, got {found:?}")]
    WrongSpace { expected: Space, found: Space },
    #[error("grid functions live on different grids")]
    GridMismatch,
    #[error("multiplier is {value} at frequency {frequency:?}")]
    NonFiniteMultiplier { frequency: Vec<f64>, value: f64 },
    #[error("mean-zero input required, |f^(0)| = {0:e}")]
    NonzeroMean(f64),
    #[error("test function tail {0:e} at the box boundary exceeds 1e-12")]
    TailTooLarge(f64),
    #[error("atom construction degenerate after {0} attempts")]
    DegenerateAtom(usize),
    #[error("atom certification failed: {0}")]
    Certification(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("bad grid function file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
