use super::commute::{cct_kernel, entry_std, resistance_from_ct, spct_combine};
use super::diffusion::{check_finite, log_comm_from_eigen, log_kernel};
use super::rsp::{edge_costs, rsp_fe_with_cost, PathVariant};
use super::{Family, FamilyMatrix, ProximityMatrix, Scaling};
use crate::error::{Error, Result};
use crate::graph::{is_connected, shortest_path_matrix, Graph};
use crate::spectral::{pinv_from_eigen, sym_eigen, SymmetricEigen, PINV_RELATIVE_CUTOFF};
use crate::Matrix;

/// A connected graph with every parameter-independent quantity precomputed.
///
/// Evaluating a family then costs one `Q f(Λ) Qᵀ` product (walk, forest,
/// communicability and heat families), an `O(N²)` sigmoid (SCT, SCCT), an
/// `O(N²)` combination (SP-CT) or one RSP/FE solve.
#[derive(Debug, Clone)]
pub struct PreparedGraph {
    graph: Graph,
    adjacency_eigen: SymmetricEigen,
    laplacian_eigen: SymmetricEigen,
    shortest_paths: Matrix,
    resistance: Matrix,
    ct: Matrix,
    ct_std: f64,
    cct: std::result::Result<(Matrix, f64), Error>,
    costs: Matrix,
}

impl PreparedGraph {
    pub fn new(graph: Graph) -> Result<Self> {
        if !is_connected(&graph) {
            return Err(Error::Disconnected);
        }
        let adjacency_eigen = sym_eigen(graph.adjacency())?;
        let laplacian_eigen = sym_eigen(graph.laplacian().matrix())?;
        let shortest_paths = shortest_path_matrix(&graph)?;
        let ct = pinv_from_eigen(&laplacian_eigen, PINV_RELATIVE_CUTOFF)?;
        let resistance = resistance_from_ct(&ct)?.matrix;
        let ct_std = entry_std(&ct);
        let cct = cct_kernel(&graph).map(|k| {
            let s = entry_std(&k.matrix);
            (k.matrix, s)
        });
        let costs = edge_costs(&graph);
        Ok(PreparedGraph {
            graph,
            adjacency_eigen,
            laplacian_eigen,
            shortest_paths,
            resistance,
            ct,
            ct_std,
            cct,
            costs,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn spectral_radius(&self) -> f64 {
        self.adjacency_eigen.spectral_radius()
    }

    pub fn shortest_paths(&self) -> &Matrix {
        &self.shortest_paths
    }

    pub fn resistance(&self) -> &Matrix {
        &self.resistance
    }

    pub fn evaluate(&self, family: Family, p: f64, scaling: &Scaling) -> Result<FamilyMatrix> {
        let t = scaling.raw_parameter(family, p, self.spectral_radius())?;
        self.evaluate_raw(family, t)
    }

    /// Evaluates a family at its raw (unscaled) parameter.
    pub fn evaluate_raw(&self, family: Family, t: f64) -> Result<FamilyMatrix> {
        let prox = |m: Matrix| Ok(FamilyMatrix::Proximity(ProximityMatrix::new(m, family.name(), t)));
        let logged = |m: Matrix| {
            let k = log_kernel(&ProximityMatrix::new(m, family.name(), t))?;
            Ok(FamilyMatrix::Proximity(k))
        };
        if !(t.is_finite() && (t > 0.0 || (family == Family::SpCt && t == 0.0))) {
            return Err(Error::ParameterOutOfRange {
                name: "t",
                value: t,
                range: "(0, inf)",
            });
        }
        match family {
            Family::PWalk | Family::Walk => {
                let rho = self.spectral_radius();
                if rho > 0.0 && t >= 1.0 / rho {
                    return Err(Error::ParameterOutOfRange {
                        name: "t",
                        value: t,
                        range: "(0, 1/rho)",
                    });
                }
                let k = self.adjacency_eigen.apply(|v| 1.0 / (1.0 - t * v));
                if family == Family::PWalk {
                    prox(k)
                } else {
                    logged(k)
                }
            }
            Family::For => prox(self.laplacian_eigen.apply(|v| 1.0 / (1.0 + t * v))),
            Family::LogFor => logged(self.laplacian_eigen.apply(|v| 1.0 / (1.0 + t * v))),
            Family::Comm => {
                let k = self.adjacency_eigen.apply(|v| (t * v).exp());
                check_finite(&k)?;
                prox(k)
            }
            Family::LogComm => {
                let mut k = log_comm_from_eigen(&self.adjacency_eigen, t)?;
                k.name = family.name();
                Ok(FamilyMatrix::Proximity(k))
            }
            Family::Heat => prox(self.laplacian_eigen.apply(|v| (-t * v).exp())),
            Family::LogHeat => logged(self.laplacian_eigen.apply(|v| (-t * v).exp())),
            Family::Sct => prox(sigmoid(&self.ct, self.ct_std, t)?),
            Family::Scct => {
                let (k, s) = self.cct.as_ref().map_err(Clone::clone)?;
                prox(sigmoid(k, *s, t)?)
            }
            Family::Rsp => Ok(FamilyMatrix::Distance(rsp_fe_with_cost(
                self.graph.adjacency(),
                &self.costs,
                t,
                PathVariant::Rsp,
            )?)),
            Family::Fe => Ok(FamilyMatrix::Distance(rsp_fe_with_cost(
                self.graph.adjacency(),
                &self.costs,
                t,
                PathVariant::Fe,
            )?)),
            Family::SpCt => {
                if t > 1.0 {
                    return Err(Error::ParameterOutOfRange {
                        name: "lambda",
                        value: t,
                        range: "[0, 1]",
                    });
                }
                Ok(FamilyMatrix::Distance(spct_combine(&self.shortest_paths, &self.resistance, t)?))
            }
        }
    }
}

fn sigmoid(k: &Matrix, sigma: f64, t: f64) -> Result<Matrix> {
    if !(sigma > 0.0) {
        return Err(Error::DegenerateKernel);
    }
    Ok(k.map(|v| 1.0 / (1.0 + (-t * v / sigma).exp())))
}
