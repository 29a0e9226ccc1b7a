//! Randomized shortest path and free energy distances.
//!
//! With `P = D⁻¹A`, `W = P ∘ exp(−βC)` and `Z = (I − W)⁻¹`:
//! RSP uses `S = (Z (C∘W) Z) ÷ Z`, `C̄ = S − e diag(S)ᵀ`, `Δ = (C̄ + C̄ᵀ)/2`;
//! FE uses `Φ = −β⁻¹ ln(Z Diag(Z)⁻¹)`, `Δ = (Φ + Φᵀ)/2`.
//!
//! At large β the off-diagonal entries of `Z` fall far below machine epsilon
//! relative to its diagonal, where an LU inverse loses them entirely. In that
//! regime `Z` is accumulated as `∏ (I + W^{2^k})`, which only adds and
//! multiplies nonnegative numbers and so keeps every entry to full relative
//! precision.

use super::{DistanceMatrix, Kind};
use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph};
use crate::spectral::inverse;
use crate::Matrix;

/// Selects which of the two path-based distances to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathVariant {
    Rsp,
    Fe,
}

impl PathVariant {
    pub fn kind(self) -> Kind {
        Kind::Distance
    }
}

/// Smallest `min Z / max Z` ratio accepted from the LU inverse.
const LU_DYNAMIC_RANGE: f64 = 1e-6;
const MAX_DOUBLINGS: usize = 64;

/// Edge costs: `1` on unweighted edges, `1 / w` on weighted ones, `0` off the edge set
/// (never read, since `W` vanishes there).
pub(crate) fn edge_costs(g: &Graph) -> Matrix {
    let weighted = g.is_weighted();
    g.adjacency().map(|w| match (w > 0.0, weighted) {
        (false, _) => 0.0,
        (true, false) => 1.0,
        (true, true) => 1.0 / w,
    })
}

pub fn rsp_fe_distance(g: &Graph, beta: f64, variant: PathVariant) -> Result<DistanceMatrix> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    rsp_fe_with_cost(g.adjacency(), &edge_costs(g), beta, variant)
}

/// Same as [`rsp_fe_distance`] with an explicit cost matrix.
pub fn rsp_fe_with_cost(adjacency: &Matrix, cost: &Matrix, beta: f64, variant: PathVariant) -> Result<DistanceMatrix> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::ParameterOutOfRange {
            name: "beta",
            value: beta,
            range: "(0, inf)",
        });
    }
    let n = adjacency.nrows();
    let degrees: Vec<f64> = adjacency.row_iter().map(|r| r.sum()).collect();
    if let Some(i) = degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::ZeroDegree(i));
    }
    let w = Matrix::from_fn(n, n, |i, j| {
        let a = adjacency[(i, j)];
        if a > 0.0 {
            a / degrees[i] * (-beta * cost[(i, j)]).exp()
        } else {
            0.0
        }
    });
    let z = fundamental_matrix(&w)?;
    match variant {
        PathVariant::Rsp => {
            let cw = cost.component_mul(&w);
            let s = (&z * cw * &z).component_div(&z);
            let cbar = Matrix::from_fn(n, n, |i, j| s[(i, j)] - s[(j, j)]);
            let delta = (&cbar + cbar.transpose()) * 0.5;
            DistanceMatrix::new(delta, "RSP", beta)
        }
        PathVariant::Fe => {
            let mut phi = Matrix::zeros(n, n);
            for j in 0..n {
                let zjj = z[(j, j)];
                for i in 0..n {
                    let h = z[(i, j)] / zjj;
                    if !(h > 0.0) || !h.is_finite() {
                        return Err(Error::NonPositiveEntry { i, j, value: h });
                    }
                    phi[(i, j)] = if i == j { 0.0 } else { -h.ln() / beta };
                }
            }
            let delta = (&phi + phi.transpose()) * 0.5;
            DistanceMatrix::new(delta, "FE", beta)
        }
    }
}

/// `Z = (I − W)⁻¹` for a nonnegative substochastic `W`.
fn fundamental_matrix(w: &Matrix) -> Result<Matrix> {
    let n = w.nrows();
    if let Ok(z) = inverse(&(Matrix::identity(n, n) - w)) {
        let (lo, hi) = z
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if lo > 0.0 && lo >= LU_DYNAMIC_RANGE * hi {
            return Ok(z);
        }
    }
    neumann_product(w)
}

/// `Σ_k W^k` as `(I + W)(I + W²)(I + W⁴)…`, stopped once every entry has
/// converged to relative precision.
fn neumann_product(w: &Matrix) -> Result<Matrix> {
    let n = w.nrows();
    let mut z = Matrix::identity(n, n) + w;
    let mut power = w.clone();
    for _ in 0..MAX_DOUBLINGS {
        power = &power * &power;
        let increment = &z * &power;
        z += &increment;
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular);
        }
        let converged = z
            .iter()
            .zip(increment.iter())
            .all(|(&total, &inc)| total > 0.0 && inc <= total * f64::EPSILON * 0.5);
        if converged {
            return Ok(z);
        }
    }
    Err(Error::Singular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{complete, cycle, path};
    use crate::graph::shortest_path_matrix;
    use crate::spectral::max_abs;

    #[test]
    fn low_temperature_limit_on_p3() {
        let d = rsp_fe_distance(&path(3), 20.0, PathVariant::Rsp).unwrap();
        assert!((d.matrix[(0, 2)] - 2.0).abs() <= 1e-3, "{}", d.matrix[(0, 2)]);
        assert!((d.matrix[(0, 1)] - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn free_energy_keeps_reference_walk_entropy() {
        // On P3 the only cheap walk 0 -> 2 leaves the middle node with
        // probability 1/2, so the free energy tends to 2 + ln 2 / beta.
        for beta in [20.0, 49.0, 200.0] {
            let d = rsp_fe_distance(&path(3), beta, PathVariant::Fe).unwrap();
            let want = 2.0 + std::f64::consts::LN_2 / beta;
            assert!((d.matrix[(0, 2)] - want).abs() <= 1e-6, "beta {beta}: {}", d.matrix[(0, 2)]);
        }
    }

    #[test]
    fn k2_symmetric_zero_diagonal() {
        for beta in [0.05, 1.0, 30.0] {
            for variant in [PathVariant::Rsp, PathVariant::Fe] {
                let d = rsp_fe_distance(&complete(2), beta, variant).unwrap();
                assert_eq!(d.matrix[(0, 0)], 0.0);
                assert_eq!(d.matrix[(0, 1)], d.matrix[(1, 0)]);
                assert!(d.matrix[(0, 1)] >= 1.0 - 1e-12);
            }
        }
    }

    #[test]
    fn bounded_below_by_shortest_paths() {
        let g = cycle(7);
        let sp = shortest_path_matrix(&g).unwrap();
        for beta in [0.02, 0.3, 2.0, 15.0, 49.0] {
            for variant in [PathVariant::Rsp, PathVariant::Fe] {
                let d = rsp_fe_distance(&g, beta, variant).unwrap();
                let gap = (&d.matrix - &sp).min();
                assert!(gap >= -1e-8, "{variant:?} beta={beta}: {gap}");
            }
        }
    }

    #[test]
    fn lu_and_product_routes_agree() {
        let g = cycle(6);
        let w = Matrix::from_fn(6, 6, |i, j| g.adjacency()[(i, j)] * 0.5 * (-0.7f64).exp());
        let lu = inverse(&(Matrix::identity(6, 6) - &w)).unwrap();
        let product = neumann_product(&w).unwrap();
        assert!(max_abs(&(lu - product)) < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(rsp_fe_distance(&path(3), 0.0, PathVariant::Rsp).is_err());
        let g = Graph::new(Matrix::zeros(2, 2), None).unwrap();
        assert_eq!(rsp_fe_distance(&g, 1.0, PathVariant::Fe), Err(Error::Disconnected));
    }
}
