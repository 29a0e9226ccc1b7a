//! Commute-time family: `L⁺`, resistance distance, the shortest-path /
//! resistance mixture and the sigmoid commute-time kernels.

use super::{DistanceMatrix, ProximityMatrix};
use crate::error::{Error, Result};
use crate::graph::{is_connected, shortest_path_matrix, Graph};
use crate::spectral::{pinv_laplacian, solve_spd, symmetrize};
use crate::Matrix;

/// Commute-time kernel `K_CT = L⁺`.
pub fn ct_kernel(g: &Graph) -> Result<ProximityMatrix> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    Ok(ProximityMatrix::new(pinv_laplacian(&g.laplacian())?, "CT", 0.0))
}

/// Effective resistance `r_ij = L⁺_ii + L⁺_jj − 2 L⁺_ij`.
pub fn resistance_distance(g: &Graph) -> Result<DistanceMatrix> {
    let k = ct_kernel(g)?;
    resistance_from_ct(&k.matrix)
}

pub(crate) fn resistance_from_ct(pinv: &Matrix) -> Result<DistanceMatrix> {
    let n = pinv.nrows();
    let r = Matrix::from_fn(n, n, |i, j| pinv[(i, i)] + pinv[(j, j)] - 2.0 * pinv[(i, j)]);
    DistanceMatrix::new(r, "resistance", 0.0)
}

/// `(1 − λ) D^s + λ D^r`.
pub fn spct_distance(g: &Graph, lambda: f64) -> Result<DistanceMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::ParameterOutOfRange {
            name: "lambda",
            value: lambda,
            range: "[0, 1]",
        });
    }
    let sp = shortest_path_matrix(g)?;
    let r = resistance_distance(g)?;
    spct_combine(&sp, &r.matrix, lambda)
}

pub(crate) fn spct_combine(sp: &Matrix, resistance: &Matrix, lambda: f64) -> Result<DistanceMatrix> {
    let m = sp * (1.0 - lambda) + resistance * lambda;
    DistanceMatrix::new(m, "SP-CT", lambda)
}

/// Corrected commute-time kernel
/// `H D^{-1/2} M (I − M)⁻¹ M D^{-1/2} H` with `M = D^{-1/2}(A − d dᵀ/vol) D^{-1/2}`,
/// where `vol` is the sum of degrees.
pub fn cct_kernel(g: &Graph) -> Result<ProximityMatrix> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let dd = g.degrees();
    if let Some(i) = dd.degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::ZeroDegree(i));
    }
    let inv_sqrt: Vec<f64> = dd.degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
    let a = g.adjacency();
    let m = Matrix::from_fn(n, n, |i, j| {
        (a[(i, j)] - dd.degrees[i] * dd.degrees[j] / dd.volume) * inv_sqrt[i] * inv_sqrt[j]
    });
    let m = symmetrize(m);
    let x = solve_spd(&(Matrix::identity(n, n) - &m), &m)?;
    let mut core = symmetrize(&m * x);
    for i in 0..n {
        for j in 0..n {
            core[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
        }
    }
    Ok(ProximityMatrix::new(double_center(&core), "CCT", 0.0))
}

/// `H K H` with `H = I − eeᵀ/N`.
pub(crate) fn double_center(k: &Matrix) -> Matrix {
    let n = k.nrows();
    let nf = n as f64;
    let row: Vec<f64> = k.row_iter().map(|r| r.sum() / nf).collect();
    let col: Vec<f64> = k.column_iter().map(|c| c.sum() / nf).collect();
    let total = row.iter().sum::<f64>() / nf;
    symmetrize(Matrix::from_fn(n, n, |i, j| k[(i, j)] - row[i] - col[j] + total))
}

/// Elementwise sigmoid `1 / (1 + exp(−t k_ij / σ))`, σ the (population)
/// standard deviation over all N² entries.
pub fn sigmoid_kernel(k: &ProximityMatrix, t: f64, name: &'static str) -> Result<ProximityMatrix> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::ParameterOutOfRange {
            name: "t",
            value: t,
            range: "(0, inf)",
        });
    }
    let sigma = entry_std(&k.matrix);
    if !(sigma > 0.0) {
        return Err(Error::DegenerateKernel);
    }
    let s = k.matrix.map(|v| 1.0 / (1.0 + (-t * v / sigma).exp()));
    Ok(ProximityMatrix::new(s, name, t))
}

pub(crate) fn entry_std(m: &Matrix) -> f64 {
    let count = m.len() as f64;
    let mean = m.sum() / count;
    (m.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count).sqrt()
}

/// Sigmoid commute time (`corrected = false`) or sigmoid corrected commute time kernel.
pub fn sct_scct_kernel(g: &Graph, t: f64, corrected: bool) -> Result<ProximityMatrix> {
    if corrected {
        sigmoid_kernel(&cct_kernel(g)?, t, "SCCT")
    } else {
        sigmoid_kernel(&ct_kernel(g)?, t, "SCT")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{complete, cycle, path};
    use crate::spectral::max_abs;

    #[test]
    fn ct_of_k2_and_null_space() {
        let k = ct_kernel(&complete(2)).unwrap();
        let want = Matrix::from_row_slice(2, 2, &[0.25, -0.25, -0.25, 0.25]);
        assert!(max_abs(&(&k.matrix - want)) < 1e-14);
        let k = ct_kernel(&cycle(7)).unwrap();
        for r in k.matrix.row_iter() {
            assert!(r.sum().abs() < 1e-12);
        }
    }

    #[test]
    fn resistance_hand_values() {
        assert!((resistance_distance(&complete(2)).unwrap().matrix[(0, 1)] - 1.0).abs() < 1e-14);
        // Series-parallel: one unit resistor in parallel with two in series.
        let r = resistance_distance(&complete(3)).unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!((r.matrix[(i, j)] - 2.0 / 3.0).abs() < 1e-14);
        }
        assert!((resistance_distance(&path(3)).unwrap().matrix[(0, 2)] - 2.0).abs() < 1e-14);
        // 4-cycle opposite corners: two 2-ohm branches in parallel.
        assert!((resistance_distance(&cycle(4)).unwrap().matrix[(0, 2)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spct_endpoints_and_tree() {
        let g = cycle(6);
        let sp = shortest_path_matrix(&g).unwrap();
        let r = resistance_distance(&g).unwrap().matrix;
        assert!(max_abs(&(spct_distance(&g, 0.0).unwrap().matrix - sp)) < 1e-15);
        assert!(max_abs(&(spct_distance(&g, 1.0).unwrap().matrix - r)) < 1e-15);
        assert!((spct_distance(&path(3), 0.5).unwrap().matrix[(0, 2)] - 2.0).abs() < 1e-14);
        assert!(spct_distance(&g, 1.1).is_err());
    }

    #[test]
    fn sigmoid_range_and_midpoint() {
        let g = cycle(6);
        for corrected in [false, true] {
            let k = sct_scct_kernel(&g, 0.8, corrected).unwrap();
            assert!(k.matrix.iter().all(|&v| v > 0.0 && v < 1.0));
        }
        let mut m = Matrix::zeros(2, 2);
        m[(0, 0)] = 1.0;
        let s = sigmoid_kernel(&ProximityMatrix::new(m, "x", 0.0), 1.0, "S").unwrap();
        assert_eq!(s.matrix[(0, 1)], 0.5);
        let flat = ProximityMatrix::new(Matrix::from_element(3, 3, 2.0), "x", 0.0);
        assert_eq!(sigmoid_kernel(&flat, 1.0, "S"), Err(Error::DegenerateKernel));
    }

    #[test]
    fn cct_is_centered_and_symmetric() {
        let g = cycle(7);
        let k = cct_kernel(&g).unwrap().matrix;
        for r in k.row_iter() {
            assert!(r.sum().abs() < 1e-12);
        }
        assert!(max_abs(&(&k - k.transpose())) < 1e-14);
    }

    #[test]
    fn disconnected_errors() {
        let g = Graph::new(Matrix::zeros(3, 3), None).unwrap();
        assert_eq!(ct_kernel(&g), Err(Error::Disconnected));
        assert_eq!(sct_scct_kernel(&g, 1.0, true), Err(Error::Disconnected));
    }
}
