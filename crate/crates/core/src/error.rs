use std::path::PathBuf;

use thiserror::Error;

use crate::quad::LatticeVector;
use crate::window::Cell;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A star image landed exactly on the window boundary.
    #[error("lattice point {lattice} has its star image on the window boundary (non-generic window)")]
    BoundaryHit { lattice: LatticeVector },

    #[error("Minkowski sum is not direct: cell ({}, {}) is produced twice", .cell[0], .cell[1])]
    OverlappingSum { cell: Cell },

    #[error("enumeration estimate {estimate} exceeds budget {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },

    #[error("no placement reproduces the closed-form intensity (best max relative error {best_error:.3e})")]
    NoPlacementMatches { best_error: f64 },

    #[error("pair reconstruction failed: {0}")]
    ReconstructionFailed(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate cell ({}, {})", .cell[0], .cell[1])]
    DuplicateCell { line: usize, cell: Cell },

    #[error("window has no cells")]
    EmptyWindow,

    #[error("cells are not edge-connected")]
    Disconnected,

    #[error("point configuration contains ({}, {}) twice", .point[0], .point[1])]
    DuplicatePoint { point: Cell },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
