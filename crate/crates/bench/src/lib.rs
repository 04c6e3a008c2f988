//! Experiment harness: seeded run matrices over problems, algorithms,
//! population sizes and archive sizes, with summary tables, rank-sum tests
//! and plot data.

pub mod error;
pub mod lists;
pub mod plan;
pub mod plotdata;
pub mod records;
pub mod runner;
pub mod stats;
pub mod summary;

pub use error::{Error, Result};
pub use plan::{Algorithm, ExperimentPlan, ProblemEntry, ResolvedPlan, RunSpec, SelectionEntry};
pub use runner::{execute_run, run_cells, run_matrix, MatrixOutput};
pub use summary::{summarize, Summary};
