//! Graph proximity measures and the benchmark protocols that compare them:
//! parameter sweeps scored by Ward clustering and ARI, Copeland tournaments
//! and reject curves.

pub mod clustering;
pub mod datasets;
pub mod error;
pub mod evaluation;
pub mod generators;
pub mod graph;
pub mod kernels;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result};
pub use graph::Graph;
pub use kernels::{Family, FamilyMatrix, Kind, PreparedGraph, Scaling};

/// Dense row/column-major matrix used throughout.
pub type Matrix = nalgebra::DMatrix<f64>;
