//! Dense symmetric linear algebra backing every kernel family.
//!
//! All matrix functions go through a symmetric eigendecomposition
//! (`f(M) = Q diag(f(λ)) Qᵀ`); linear systems use Cholesky when the matrix is
//! positive definite and partially pivoted LU otherwise.

use nalgebra::linalg::{Cholesky, SymmetricEigen as NaEigen, LU};

use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::Matrix;

/// Relative cutoff used by [`pinv_laplacian`]: eigenvalues below
/// `N * λ_max * PINV_RELATIVE_CUTOFF` are treated as zero.
pub const PINV_RELATIVE_CUTOFF: f64 = 1e-12;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymmetricEigen {
    /// `Q diag(f(λ)) Qᵀ`, symmetrized.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let mut scaled = self.vectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= f(self.values[k]);
        }
        let out = scaled * self.vectors.transpose();
        symmetrize(out)
    }

    pub fn max_value(&self) -> f64 {
        *self.values.last().unwrap_or(&0.0)
    }

    pub fn min_value(&self) -> f64 {
        *self.values.first().unwrap_or(&0.0)
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_radius(&self) -> f64 {
        self.max_value().abs().max(self.min_value().abs())
    }
}

pub(crate) fn symmetrize(m: Matrix) -> Matrix {
    let t = m.transpose();
    (m + t) * 0.5
}

pub(crate) fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending.
pub fn sym_eigen(m: &Matrix) -> Result<SymmetricEigen> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.ncols(),
        });
    }
    let tol = 1e-10 * max_abs(m).max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[(i, j)] - m[(j, i)]).abs() > tol {
                return Err(Error::AsymmetricInput {
                    i,
                    j,
                    a: m[(i, j)],
                    b: m[(j, i)],
                });
            }
        }
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotConverged);
    }
    let eig = NaEigen::try_new(m.clone(), f64::EPSILON, 1000 * n.max(1))
        .ok_or(Error::NotConverged)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(SymmetricEigen { values, vectors })
}

/// `exp(M)` for symmetric `M`.
pub fn matrix_exp_sym(m: &Matrix) -> Result<Matrix> {
    Ok(sym_eigen(m)?.apply(f64::exp))
}

/// Solves `M X = B`.
///
/// Tries Cholesky first (every kernel system except the RSP one is symmetric
/// positive definite), falls back to LU, and rejects any solution whose
/// residual exceeds `1e-8 * max|B|`.
pub fn solve_spd(m: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.ncols(),
        });
    }
    let accept = |x: Matrix| -> Option<Matrix> {
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let residual = max_abs(&(m * &x - b));
        (residual <= 1e-8 * max_abs(b).max(f64::MIN_POSITIVE)).then_some(x)
    };
    // Cholesky only reads the lower triangle, so it is only tried on symmetric input.
    let symmetric = (0..n).all(|i| (0..i).all(|j| m[(i, j)] == m[(j, i)]));
    if symmetric {
        if let Some(x) = Cholesky::new(m.clone()).and_then(|c| accept(c.solve(b))) {
            return Ok(x);
        }
    }
    LU::new(m.clone())
        .solve(b)
        .and_then(accept)
        .ok_or(Error::Singular)
}

/// Inverse of a nonsingular matrix via [`solve_spd`].
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    solve_spd(m, &Matrix::identity(m.nrows(), m.nrows()))
}

/// Moore–Penrose pseudoinverse of a connected graph's Laplacian.
pub fn pinv_laplacian(l: &Laplacian) -> Result<Matrix> {
    pinv_laplacian_with_cutoff(l, PINV_RELATIVE_CUTOFF)
}

pub fn pinv_laplacian_with_cutoff(l: &Laplacian, relative_cutoff: f64) -> Result<Matrix> {
    let eig = sym_eigen(l.matrix())?;
    pinv_from_eigen(&eig, relative_cutoff)
}

pub(crate) fn pinv_from_eigen(eig: &SymmetricEigen, relative_cutoff: f64) -> Result<Matrix> {
    let n = eig.values.len();
    let cutoff = n as f64 * eig.max_value().abs() * relative_cutoff;
    let null = eig.values.iter().filter(|v| v.abs() <= cutoff).count();
    if null != 1 {
        return Err(Error::Disconnected);
    }
    Ok(eig.apply(|v| if v.abs() <= cutoff { 0.0 } else { 1.0 / v }))
}
