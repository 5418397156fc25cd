//! Evaluation harness: query sampling, error metrics, parameter sweeps, and
//! the exact reference search used to check the engine.

mod ablation;
mod oracle;
mod queries;
mod sweep;

use std::path::PathBuf;

use thiserror::Error;

use crate::index::IndexError;
use crate::ingest::IngestError;
use crate::search::SearchError;

pub use ablation::{coverage_ablation, CoverageLevel, CoverageReport};
pub use oracle::{dijkstra_oracle, oracle_route, OraclePath};
pub use queries::{generate_queries, read_queries, write_queries, QuerySet, DEFAULT_QUERY_COUNT};
pub use sweep::{
    read_reference, run_sweep, write_reference, Aggregates, QueryOutcome, Reference, ReferenceRow, SweepOptions,
    SweepParam, SweepReport, SweepRow, SWEEP_HEADER,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("count must be at least 1")]
    ZeroCount,
    #[error("trajectory database is empty")]
    EmptyDb,
    #[error("only {produced} of {requested} valid queries after {draws} draws")]
    InsufficientData {
        requested: usize,
        produced: usize,
        draws: usize,
    },
    #[error("length mismatch: {left} values against {right} references")]
    LengthMismatch { left: usize, right: usize },
    #[error("cannot average an empty list")]
    Empty,
    #[error("sweep needs at least one value")]
    EmptyValues,
    #[error("unknown sweep parameter {0:?}; valid names are r_penalty, rw, w_time")]
    UnknownParam(String),
    #[error("missing reference: {0}")]
    MissingReference(String),
    #[error("no path between source and targets")]
    NoPath,
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Cost(#[from] crate::cost::CostError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Mean absolute error between paired values.
pub fn mae(xs: &[f64], refs: &[f64]) -> Result<f64, EvalError> {
    if xs.len() != refs.len() {
        return Err(EvalError::LengthMismatch {
            left: xs.len(),
            right: refs.len(),
        });
    }
    if xs.is_empty() {
        return Err(EvalError::Empty);
    }
    let sum: f64 = xs.iter().zip(refs).map(|(x, r)| (x - r).abs()).sum();
    Ok(sum / xs.len() as f64)
}
