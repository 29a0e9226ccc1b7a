use thiserror::Error;

/// Errors raised by graph construction, kernel evaluation, clustering and I/O.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("adjacency is not symmetric at ({i}, {j}): {a} vs {b}")]
    AsymmetricInput { i: usize, j: usize, a: f64, b: f64 },
    #[error("negative edge weight {value} at ({i}, {j})")]
    NegativeWeight { i: usize, j: usize, value: f64 },
    #[error("non-finite entry at ({i}, {j})")]
    NonFiniteInput { i: usize, j: usize },
    #[error("nonzero diagonal entry {value} at node {i} (self-loops are not supported)")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("label vector has {got} entries for {n} nodes")]
    LabelCount { n: usize, got: usize },
    #[error("class labels must cover 0..{classes} without gaps; class {missing} is empty")]
    LabelOutOfRange { classes: usize, missing: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("eigendecomposition did not converge")]
    NotConverged,
    #[error("matrix is singular or not positive definite")]
    Singular,
    #[error("parameter {name} = {value} is outside its admissible range {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("entry ({i}, {j}) = {value} is not strictly positive")]
    NonPositiveEntry { i: usize, j: usize, value: f64 },
    #[error("entry ({i}, {j}) is not finite (overflow)")]
    NonFinite { i: usize, j: usize },
    #[error("node {0} has zero degree")]
    ZeroDegree(usize),
    #[error("kernel entries have zero standard deviation")]
    DegenerateKernel,
    #[error("induced distance ({i}, {j}) = {value} is negative")]
    NegativeDistance { i: usize, j: usize, value: f64 },
    #[error("no connected sample after {attempts} attempts")]
    CannotConnect { attempts: usize },
    #[error("invalid block model: {0}")]
    InvalidSpec(String),
    #[error("cluster count {k} is invalid for {n} points")]
    InvalidK { k: usize, n: usize },
    #[error("malformed distance matrix: {0}")]
    MalformedDistance(String),
    #[error("partitions have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("labels are degenerate: {0}")]
    DegenerateLabels(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph file has no class labels")]
    MissingLabels,
    #[error("unknown name `{0}`")]
    NotFound(String),
    #[error("dataset {name}: expected {expected_nodes} nodes / {expected_classes} classes, found {nodes} / {classes}")]
    DatasetMismatch {
        name: String,
        expected_nodes: usize,
        expected_classes: usize,
        nodes: usize,
        classes: usize,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
