//! Conversions between proximities and distances.
//!
//! `d(x, y) = p(x, x) + p(y, y) − p(x, y) − p(y, x)` turns a kernel into a
//! distance; double centering `K = −½ H Δ⁽²⁾ H` turns a distance back into an
//! inner-product matrix.

use crate::error::Result;
use crate::kernels::double_center;
use crate::kernels::{DistanceMatrix, FamilyMatrix, ProximityMatrix};
use crate::Matrix;

/// Kernel-induced distance `Δ_ij = K_ii + K_jj − 2 K_ij`.
///
/// Negative values below `−1e-10 · max(1, max|K_ii|)` raise
/// [`Error::NegativeDistance`](crate::Error::NegativeDistance); smaller ones clamp to 0.
pub fn proximity_to_distance(k: &ProximityMatrix) -> Result<DistanceMatrix> {
    let m = &k.matrix;
    let n = m.nrows();
    let diag_scale = (0..n).fold(1.0_f64, |acc, i| acc.max(m[(i, i)].abs()));
    let mut d = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            m[(i, i)] + m[(j, j)] - m[(i, j)] - m[(j, i)]
        }
    });
    // Rescale the clamp tolerance to the kernel's magnitude rather than the distance's.
    let limit = -crate::kernels::NEGATIVE_TOL * diag_scale;
    for j in 0..n {
        for i in 0..n {
            let v = d[(i, j)];
            if v < 0.0 {
                if v < limit {
                    return Err(crate::Error::NegativeDistance { i, j, value: v });
                }
                d[(i, j)] = 0.0;
            }
        }
    }
    DistanceMatrix::new(d, k.name, k.param)
}

/// Classical-scaling kernel `K = −½ H Δ⁽²⁾ H`, `H = I − eeᵀ/N`.
///
/// The result may be indefinite when Δ is not Euclidean.
pub fn distance_to_kernel(d: &DistanceMatrix) -> ProximityMatrix {
    let sq = d.matrix.map(|v| -0.5 * v * v);
    ProximityMatrix::new(double_center(&sq), d.name, d.param)
}

/// The distance used for reject curves: kernels are converted, distances pass through.
pub fn reject_distance(m: &FamilyMatrix) -> Result<DistanceMatrix> {
    match m {
        FamilyMatrix::Proximity(k) => proximity_to_distance(k),
        FamilyMatrix::Distance(d) => Ok(d.clone()),
    }
}

/// The squared-distance matrix handed to Ward clustering.
///
/// Every family goes through the kernel-induced distance: distance-kind
/// families are first double-centered into a kernel and then re-induced,
/// which yields `Δ⁽²⁾`.
pub fn ward_input(m: &FamilyMatrix) -> Result<Matrix> {
    let k = match m {
        FamilyMatrix::Proximity(k) => std::borrow::Cow::Borrowed(k),
        FamilyMatrix::Distance(d) => std::borrow::Cow::Owned(distance_to_kernel(d)),
    };
    Ok(proximity_to_distance(&k)?.matrix)
}

/// Checks `p(x,y) + p(x,z) − p(y,z) ≤ p(x,x) + tol` over all ordered triples.
pub fn satisfies_proximity_triangle(k: &Matrix, tol: f64) -> bool {
    let n = k.nrows();
    (0..n).all(|x| {
        (0..n).all(|y| (0..n).all(|z| k[(x, y)] + k[(x, z)] - k[(y, z)] <= k[(x, x)] + tol))
    })
}

/// Checks `d(i,k) ≤ d(i,j) + d(j,k) + tol` over all triples.
pub fn satisfies_triangle(d: &Matrix, tol: f64) -> bool {
    let n = d.nrows();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| d[(i, k)] <= d[(i, j)] + d[(j, k)] + tol)))
}
