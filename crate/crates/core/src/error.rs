use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed image: {0}")]
    Format(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("window {top},{left} ({rows}x{cols}) does not fit inside a {height}x{width} image")]
    WindowOutOfBounds {
        top: i64,
        left: i64,
        rows: usize,
        cols: usize,
        height: usize,
        width: usize,
    },

    #[error("parts are not closure-disjoint: pixels ({0}, {1}) and ({2}, {3}) touch")]
    NotClosureDisjoint(usize, usize, usize, usize),

    #[error("pixel ({0}, {1}) of a part is not in the ambient set")]
    NotInAmbient(usize, usize),

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("cycle is not expressible in the given homology basis")]
    NotExpressible,

    #[error("complex is not a subcomplex of the ambient complex")]
    NotSubcomplex,

    #[error("filtration is not monotone: a face of cell {0} enters later than the cell")]
    NotMonotone(usize),

    #[error("diagram has a bar at level {0}, outside the short filtration levels 1..=3")]
    LevelOutOfRange(i64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
