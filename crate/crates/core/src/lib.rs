//! Matrix-scheme representation of CNF formulas with exact model counting,
//! a pseudo-Boolean unsatisfied-clause function, polynomial-time
//! satisfiability checks, an S-factor minimizer and a brute-force oracle.
//!
//! Variables and clauses are 0-based in the API and 1-based in every piece of
//! user-facing text.

pub mod checks;
pub mod cli;
pub mod counting;
pub mod dyadic;
pub mod fixtures;
pub mod format;
pub mod minimizer;
pub mod oracle;
pub mod pseudo_boolean;
pub mod pt_solvers;
pub mod scheme;
pub mod transforms;

pub use dyadic::Dyadic;
pub use scheme::{Assignment, Fill, Scheme, SchemeError, Status};
pub use transforms::Satisfiability;

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Parse(#[from] format::ParseError),
    #[error(transparent)]
    Transform(#[from] transforms::TransformError),
    #[error(transparent)]
    Count(#[from] counting::CountError),
    #[error(transparent)]
    PseudoBoolean(#[from] pseudo_boolean::PbError),
    #[error(transparent)]
    Check(#[from] checks::CheckError),
    #[error(transparent)]
    Solve(#[from] pt_solvers::SolveError),
    #[error(transparent)]
    Minimize(#[from] minimizer::MinimizeError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
