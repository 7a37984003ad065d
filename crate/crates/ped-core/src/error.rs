//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by dataset handling, selection, and evaluation.
#[derive(Debug, Error)]
pub enum PedError {
    #[error("file not found: {path}")]
    MissingFile { path: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse cell at row {row}, column '{column}': {value:?}")]
    ParseCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("unknown column name: '{name}'")]
    UnknownColumn { name: String },

    #[error("target column '{column}' is constant (a single class)")]
    ConstantTarget { column: String },

    #[error("invalid schema for column '{column}': {reason}")]
    InvalidSchema { column: String, reason: String },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty row list")]
    EmptyRows,

    #[error("row has {got} features, dataset schema has {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("training data contains a single class")]
    SingleClass,

    #[error("leaf cap infeasible: every candidate tree exceeds {cap} leaves")]
    LeafCapInfeasible { cap: usize },

    #[error("infeasible allocation bounds: lower sum {lower_sum}, upper sum {upper_sum}, budget {budget}")]
    InfeasibleBounds {
        lower_sum: usize,
        upper_sum: usize,
        budget: usize,
    },

    #[error("allocation assigns zero samples to nonempty stratum {stratum}")]
    ZeroAllocation { stratum: usize },

    #[error("sample size {n} exceeds population size {population}")]
    SampleTooLarge { n: usize, population: usize },

    #[error("sample size must be positive")]
    EmptySample,

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("point dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("metric requires both classes present in the truth vector")]
    SingleClassTruth,

    #[error("class {class} absent from the truth vector")]
    MissingClass { class: usize },

    #[error("total row count is zero")]
    ZeroTotal,

    #[error("metadata error for {path}: {reason}")]
    Metadata { path: String, reason: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<PedError>,
    },
}

impl PedError {
    /// Wrap an error with the name of the pipeline stage it came from.
    pub fn in_stage(self, stage: &'static str) -> Self {
        PedError::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, PedError>;
