//! Browser bindings for the demo page in `www/`.
//!
//! [`Session`] holds one generated graph and does all the work in plain Rust;
//! [`Demo`] wraps it for JavaScript.

use kernelbench_core::clustering::{adjusted_rand_index, ward_cluster, Partition};
use kernelbench_core::evaluation::{evaluate_cell, grid, reject_curve_for};
use kernelbench_core::generators::{generate, BlockModelSpec};
use kernelbench_core::transforms::{reject_distance, ward_input};
use kernelbench_core::{Family, Graph, PreparedGraph, Result as CoreResult, Scaling};
use wasm_bindgen::prelude::*;

pub struct Session {
    prepared: PreparedGraph,
    truth: Partition,
    scaling: Scaling,
}

impl Session {
    pub fn new(nodes: usize, classes: usize, p_in: f64, p_out: f64, seed: u64) -> CoreResult<Self> {
        let spec = BlockModelSpec::uniform(nodes, classes, p_in, p_out, seed)?;
        Self::from_graph(generate(&spec, 0)?)
    }

    pub fn from_graph(g: Graph) -> CoreResult<Self> {
        let truth = Partition::from_labels(g.labels().ok_or(kernelbench_core::Error::MissingLabels)?);
        Ok(Session {
            prepared: PreparedGraph::new(g)?,
            truth,
            scaling: Scaling::default(),
        })
    }

    pub fn graph(&self) -> &Graph {
        self.prepared.graph()
    }

    /// Edges as a flat `[i0, j0, i1, j1, …]` list with `i < j`.
    pub fn edges(&self) -> Vec<u32> {
        let a = self.graph().adjacency();
        let n = self.graph().n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if a[(i, j)] != 0.0 {
                    out.extend([i as u32, j as u32]);
                }
            }
        }
        out
    }

    /// Row-major `n × n` distance matrix of the family (kernels are converted).
    pub fn distances(&self, family: Family, p: f64) -> CoreResult<Vec<f64>> {
        let m = self.prepared.evaluate(family, p, &self.scaling)?;
        let d = reject_distance(&m)?;
        let n = d.matrix.nrows();
        Ok((0..n * n).map(|k| d.matrix[(k / n, k % n)]).collect())
    }

    /// Ward clustering into the true number of classes, and its ARI.
    pub fn cluster(&self, family: Family, p: f64) -> CoreResult<(Vec<u32>, f64)> {
        let m = self.prepared.evaluate(family, p, &self.scaling)?;
        let part = ward_cluster(&ward_input(&m)?, self.truth.k())?;
        let ari = adjusted_rand_index(&part, &self.truth)?;
        Ok((part.labels().iter().map(|&l| l as u32).collect(), ari))
    }

    /// ARI at each of `points` grid values; failed cells are −1.
    pub fn ari_curve(&self, family: Family, points: usize) -> (Vec<f64>, Vec<f64>) {
        let g = grid(points);
        let ari = g
            .iter()
            .map(|&p| evaluate_cell(&self.prepared, &self.truth, family, p, &self.scaling).ari)
            .collect();
        (g, ari)
    }

    /// Reject curve as a flat `[x0, y0, x1, y1, …]` list, and its area.
    pub fn reject(&self, family: Family, p: f64) -> CoreResult<(Vec<f64>, f64)> {
        let c = reject_curve_for(&self.prepared, family, p, &self.scaling)?;
        Ok((c.points.iter().flat_map(|&(x, y)| [x, y]).collect(), c.auc))
    }
}

fn js(e: kernelbench_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn family(name: &str) -> Result<Family, JsError> {
    name.parse().map_err(js)
}

/// Names of all families, in display order.
#[wasm_bindgen]
pub fn families() -> Vec<String> {
    Family::ALL.iter().map(|f| f.name().to_string()).collect()
}

#[wasm_bindgen]
pub struct Demo {
    session: Session,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(nodes: usize, classes: usize, p_in: f64, p_out: f64, seed: u32) -> Result<Demo, JsError> {
        let session = Session::new(nodes, classes, p_in, p_out, u64::from(seed)).map_err(js)?;
        Ok(Demo { session })
    }

    pub fn nodes(&self) -> usize {
        self.session.graph().n()
    }

    pub fn labels(&self) -> Vec<u32> {
        self.session.truth.labels().iter().map(|&l| l as u32).collect()
    }

    pub fn edges(&self) -> Vec<u32> {
        self.session.edges()
    }

    pub fn distances(&self, family_name: &str, p: f64) -> Result<Vec<f64>, JsError> {
        self.session.distances(family(family_name)?, p).map_err(js)
    }

    /// Predicted cluster of every node; the score comes from [`Demo::ari`].
    pub fn cluster(&self, family_name: &str, p: f64) -> Result<Vec<u32>, JsError> {
        Ok(self.session.cluster(family(family_name)?, p).map_err(js)?.0)
    }

    pub fn ari(&self, family_name: &str, p: f64) -> Result<f64, JsError> {
        Ok(self.session.cluster(family(family_name)?, p).map_err(js)?.1)
    }

    /// `[p0, ari0, p1, ari1, …]` over an evenly spaced grid.
    pub fn ari_curve(&self, family_name: &str, points: usize) -> Result<Vec<f64>, JsError> {
        let (g, ari) = self.session.ari_curve(family(family_name)?, points);
        Ok(g.into_iter().zip(ari).flat_map(|(p, a)| [p, a]).collect())
    }

    /// `[x0, y0, x1, y1, …]` of the reject curve.
    pub fn reject_curve(&self, family_name: &str, p: f64) -> Result<Vec<f64>, JsError> {
        Ok(self.session.reject(family(family_name)?, p).map_err(js)?.0)
    }

    pub fn reject_auc(&self, family_name: &str, p: f64) -> Result<f64, JsError> {
        Ok(self.session.reject(family(family_name)?, p).map_err(js)?.1)
    }
}
