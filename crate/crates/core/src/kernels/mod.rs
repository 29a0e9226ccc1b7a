//! The thirteen proximity / distance measure families.
//!
//! Every family maps a graph and a normalized parameter `p ∈ [0, 1]` to either
//! a proximity (kernel) matrix or a distance matrix. The raw family parameter
//! is obtained from `p` by [`Scaling::raw_parameter`].

mod commute;
mod diffusion;
mod prepared;
mod rsp;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph};
use crate::spectral::max_abs;
use crate::Matrix;

pub(crate) use commute::double_center;
pub use commute::{cct_kernel, ct_kernel, resistance_distance, sct_scct_kernel, spct_distance, sigmoid_kernel};
pub use diffusion::{comm_kernel, forest_kernel, heat_kernel, log_comm_kernel, log_kernel, pwalk_kernel};
pub use prepared::PreparedGraph;
pub use rsp::{rsp_fe_distance, rsp_fe_with_cost, PathVariant};

/// Tolerance on the diagonal of a distance matrix.
pub const DIAGONAL_TOL: f64 = 1e-8;
/// Negative entries above `-NEGATIVE_TOL * scale` are rounding noise and clamp to zero.
pub const NEGATIVE_TOL: f64 = 1e-10;
/// Margin that keeps the walk parameter strictly inside `(0, 1/ρ)`.
pub const WALK_EPSILON: f64 = 1e-4;

/// Whether a family produces similarities or dissimilarities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Proximity,
    Distance,
}

/// The measure families, in the order they are usually tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Family {
    PWalk,
    Walk,
    For,
    LogFor,
    Comm,
    LogComm,
    Heat,
    LogHeat,
    Sct,
    Scct,
    Rsp,
    Fe,
    SpCt,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::PWalk,
        Family::Walk,
        Family::For,
        Family::LogFor,
        Family::Comm,
        Family::LogComm,
        Family::Heat,
        Family::LogHeat,
        Family::Sct,
        Family::Scct,
        Family::Rsp,
        Family::Fe,
        Family::SpCt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PWalk => "pWalk",
            Family::Walk => "Walk",
            Family::For => "For",
            Family::LogFor => "logFor",
            Family::Comm => "Comm",
            Family::LogComm => "logComm",
            Family::Heat => "Heat",
            Family::LogHeat => "logHeat",
            Family::Sct => "SCT",
            Family::Scct => "SCCT",
            Family::Rsp => "RSP",
            Family::Fe => "FE",
            Family::SpCt => "SP-CT",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            Family::Rsp | Family::Fe | Family::SpCt => Kind::Distance,
            _ => Kind::Proximity,
        }
    }

    /// The plain family whose elementwise logarithm this family is.
    pub fn log_of(self) -> Option<Family> {
        match self {
            Family::Walk => Some(Family::PWalk),
            Family::LogFor => Some(Family::For),
            Family::LogComm => Some(Family::Comm),
            Family::LogHeat => Some(Family::Heat),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        Family::ALL.iter().position(|&f| f == self).unwrap()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::NotFound(s.to_string()))
    }
}

impl TryFrom<String> for Family {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Family> for String {
    fn from(f: Family) -> String {
        f.name().to_string()
    }
}

/// Per-family constant `c` of the `t = c·p/(1−p)` map (the inverse of `t/(t+c)`).
#[derive(Debug, Clone, PartialEq)]
pub struct Scaling {
    constants: [f64; 13],
}

impl Default for Scaling {
    fn default() -> Self {
        Scaling {
            constants: [1.0; 13],
        }
    }
}

impl Scaling {
    pub fn with(mut self, family: Family, c: f64) -> Self {
        self.constants[family.index()] = c;
        self
    }

    pub fn constant(&self, family: Family) -> f64 {
        self.constants[family.index()]
    }

    /// Maps a normalized parameter onto the family's raw parameter.
    ///
    /// `spectral_radius` is ρ(A), needed only by the walk families.
    pub fn raw_parameter(&self, family: Family, p: f64, spectral_radius: f64) -> Result<f64> {
        let out_of_range = || Error::ParameterOutOfRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        };
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(out_of_range());
        }
        match family {
            Family::SpCt => Ok(p),
            Family::PWalk | Family::Walk => {
                if p == 0.0 {
                    return Err(Error::ParameterOutOfRange {
                        name: "p",
                        value: p,
                        range: "(0, 1]",
                    });
                }
                if spectral_radius > 0.0 {
                    Ok(p * (1.0 - WALK_EPSILON) / spectral_radius)
                } else {
                    Ok(p)
                }
            }
            _ => {
                if p == 0.0 || p == 1.0 {
                    return Err(Error::ParameterOutOfRange {
                        name: "p",
                        value: p,
                        range: "(0, 1)",
                    });
                }
                Ok(self.constant(family) * p / (1.0 - p))
            }
        }
    }
}

/// A symmetric similarity matrix tagged with its origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximityMatrix {
    pub matrix: Matrix,
    pub name: &'static str,
    pub param: f64,
}

/// A symmetric, zero-diagonal, nonnegative dissimilarity matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub matrix: Matrix,
    pub name: &'static str,
    pub param: f64,
}

impl ProximityMatrix {
    pub fn new(matrix: Matrix, name: &'static str, param: f64) -> Self {
        ProximityMatrix {
            matrix,
            name,
            param,
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }
}

impl DistanceMatrix {
    /// Validates and cleans a candidate distance matrix.
    ///
    /// The matrix is symmetrized, its diagonal must vanish within
    /// [`DIAGONAL_TOL`] (and is then set to exactly zero), and negative
    /// entries within `NEGATIVE_TOL * max(1, max|Δ|)` clamp to zero.
    pub fn new(matrix: Matrix, name: &'static str, param: f64) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::NotSquare {
                rows: n,
                cols: matrix.ncols(),
            });
        }
        let mut m = crate::spectral::symmetrize(matrix);
        let scale = max_abs(&m).max(1.0);
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
                if i == j {
                    if v.abs() > DIAGONAL_TOL * scale {
                        return Err(Error::MalformedDistance(format!("diagonal entry {i} is {v}")));
                    }
                    m[(i, j)] = 0.0;
                } else if v < 0.0 {
                    if v < -NEGATIVE_TOL * scale {
                        return Err(Error::NegativeDistance { i, j, value: v });
                    }
                    m[(i, j)] = 0.0;
                }
            }
        }
        Ok(DistanceMatrix {
            matrix: m,
            name,
            param,
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Output of a family evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyMatrix {
    Proximity(ProximityMatrix),
    Distance(DistanceMatrix),
}

impl FamilyMatrix {
    pub fn matrix(&self) -> &Matrix {
        match self {
            FamilyMatrix::Proximity(k) => &k.matrix,
            FamilyMatrix::Distance(d) => &d.matrix,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            FamilyMatrix::Proximity(_) => Kind::Proximity,
            FamilyMatrix::Distance(_) => Kind::Distance,
        }
    }

    pub fn param(&self) -> f64 {
        match self {
            FamilyMatrix::Proximity(k) => k.param,
            FamilyMatrix::Distance(d) => d.param,
        }
    }
}

/// Evaluates a family at normalized parameter `p` with default scaling.
pub fn family_matrix(g: &Graph, family: Family, p: f64) -> Result<FamilyMatrix> {
    family_matrix_with(g, family, p, &Scaling::default())
}

/// Evaluates a family directly from the graph, computing every intermediate
/// from scratch (linear solves for the resolvent kernels).
///
/// Sweeps over many parameters should use [`PreparedGraph`] instead, which
/// caches spectra and reaches the same matrices through eigendecompositions.
pub fn family_matrix_with(g: &Graph, family: Family, p: f64, scaling: &Scaling) -> Result<FamilyMatrix> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let rho = match family {
        Family::PWalk | Family::Walk => crate::spectral::sym_eigen(g.adjacency())?.spectral_radius(),
        _ => 0.0,
    };
    let t = scaling.raw_parameter(family, p, rho)?;
    let tagged = |k: ProximityMatrix| {
        FamilyMatrix::Proximity(ProximityMatrix {
            name: family.name(),
            param: t,
            ..k
        })
    };
    let out = match family {
        Family::PWalk => tagged(pwalk_kernel(g, t)?),
        Family::Walk => tagged(log_kernel(&pwalk_kernel(g, t)?)?),
        Family::For => tagged(forest_kernel(g, t)?),
        Family::LogFor => tagged(log_kernel(&forest_kernel(g, t)?)?),
        Family::Comm => tagged(comm_kernel(g, t)?),
        Family::LogComm => tagged(log_comm_kernel(g, t)?),
        Family::Heat => tagged(heat_kernel(g, t)?),
        Family::LogHeat => tagged(log_kernel(&heat_kernel(g, t)?)?),
        Family::Sct => tagged(sct_scct_kernel(g, t, false)?),
        Family::Scct => tagged(sct_scct_kernel(g, t, true)?),
        Family::Rsp => FamilyMatrix::Distance(rsp_fe_distance(g, t, PathVariant::Rsp)?),
        Family::Fe => FamilyMatrix::Distance(rsp_fe_distance(g, t, PathVariant::Fe)?),
        Family::SpCt => FamilyMatrix::Distance(spct_distance(g, t)?),
    };
    Ok(out)
}
