//! Exact foliation cones of symbolic Markov systems.
//!
//! A [`markov::MarkovSystem`] is a finite directed graph whose edges carry
//! integer homology classes. Its minimal loops span the homology cone, and the
//! dual of that cone is the foliation cone of cohomology classes that are
//! nonnegative on every loop. All arithmetic is exact.

pub mod arith;
pub mod cli;
pub mod cone;
pub mod fixtures;
pub mod foliation;
pub mod io;
pub mod markov;
pub mod orbit;

use thiserror::Error;

pub use cone::{Cone, ConeError};
pub use foliation::FoliationError;
pub use io::{FormatError, SliceError};
pub use markov::{MarkovError, MarkovSystem};
pub use orbit::SimError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Markov(#[from] MarkovError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Foliation(#[from] FoliationError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("foliation cones overlap in their interiors: {pairs:?}")]
    FamilyViolation {
        pairs: Vec<(usize, usize)>,
        report: String,
    },
    #[error("verification failed\n{0}")]
    VerifyFailed(String),
}

impl Error {
    /// Process exit code: 1 invalid input, 2 mathematical failure, 3 I/O or syntax.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Format(FormatError::SyntaxError { .. }) => 3,
            Error::Foliation(FoliationError::NoTransverseClass { .. })
            | Error::Sim(SimError::ProductTypeSystem)
            | Error::FamilyViolation { .. }
            | Error::VerifyFailed(_) => 2,
            _ => 1,
        }
    }
}
