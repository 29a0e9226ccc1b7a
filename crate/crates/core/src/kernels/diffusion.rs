//! Walk, forest, communicability and heat kernels, plus the elementwise logarithm.

use super::ProximityMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{inverse, matrix_exp_sym, sym_eigen, symmetrize, SymmetricEigen};
use crate::Matrix;

fn require_positive(name: &'static str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value: t,
            range: "(0, inf)",
        })
    }
}

pub(crate) fn check_finite(m: &Matrix) -> Result<()> {
    match m.iter().position(|v| !v.is_finite()) {
        Some(k) => Err(Error::NonFinite {
            i: k % m.nrows(),
            j: k / m.nrows(),
        }),
        None => Ok(()),
    }
}

/// Von Neumann diffusion kernel `(I − tA)⁻¹`, `0 < t < 1/ρ(A)`.
pub fn pwalk_kernel(g: &Graph, t: f64) -> Result<ProximityMatrix> {
    require_positive("t", t)?;
    let rho = sym_eigen(g.adjacency())?.spectral_radius();
    if rho > 0.0 && t >= 1.0 / rho {
        return Err(Error::ParameterOutOfRange {
            name: "t",
            value: t,
            range: "(0, 1/rho)",
        });
    }
    let n = g.n();
    let m = Matrix::identity(n, n) - g.adjacency() * t;
    Ok(ProximityMatrix::new(symmetrize(inverse(&m)?), "pWalk", t))
}

/// Regularized Laplacian kernel `(I + tL)⁻¹`, `t > 0`.
pub fn forest_kernel(g: &Graph, t: f64) -> Result<ProximityMatrix> {
    require_positive("t", t)?;
    let n = g.n();
    let m = Matrix::identity(n, n) + g.laplacian().matrix() * t;
    Ok(ProximityMatrix::new(symmetrize(inverse(&m)?), "For", t))
}

/// Exponential diffusion kernel `exp(tA)`, `t > 0`.
///
/// Fails with [`Error::NonFinite`] when the entries overflow.
pub fn comm_kernel(g: &Graph, t: f64) -> Result<ProximityMatrix> {
    require_positive("t", t)?;
    let k = matrix_exp_sym(&(g.adjacency() * t))?;
    check_finite(&k)?;
    Ok(ProximityMatrix::new(k, "Comm", t))
}

/// `ln exp(tA)` evaluated as `tλ_max + ln exp(t(A − λ_max I))`, which never overflows.
pub fn log_comm_kernel(g: &Graph, t: f64) -> Result<ProximityMatrix> {
    require_positive("t", t)?;
    let eig = sym_eigen(g.adjacency())?;
    log_comm_from_eigen(&eig, t)
}

pub(crate) fn log_comm_from_eigen(eig: &SymmetricEigen, t: f64) -> Result<ProximityMatrix> {
    let top = eig.max_value();
    let shifted = eig.apply(|v| (t * (v - top)).exp());
    let mut k = log_kernel(&ProximityMatrix::new(shifted, "logComm", t))?;
    k.matrix.add_scalar_mut(t * top);
    Ok(k)
}

/// Laplacian exponential diffusion kernel `exp(−tL)`, `t > 0`.
pub fn heat_kernel(g: &Graph, t: f64) -> Result<ProximityMatrix> {
    require_positive("t", t)?;
    let k = matrix_exp_sym(&(g.laplacian().matrix() * -t))?;
    Ok(ProximityMatrix::new(k, "Heat", t))
}

/// Elementwise natural logarithm; every entry must be strictly positive.
pub fn log_kernel(k: &ProximityMatrix) -> Result<ProximityMatrix> {
    let n = k.matrix.nrows();
    for i in 0..n {
        for j in 0..k.matrix.ncols() {
            let v = k.matrix[(i, j)];
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositiveEntry { i, j, value: v });
            }
        }
    }
    Ok(ProximityMatrix::new(k.matrix.map(f64::ln), k.name, k.param))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{complete, cycle, path};
    use crate::spectral::max_abs;

    fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
        max_abs(&(a - b)) <= tol
    }

    fn m2(a: f64, b: f64) -> Matrix {
        Matrix::from_row_slice(2, 2, &[a, b, b, a])
    }

    #[test]
    fn small_parameter_limit_is_identity() {
        let g = cycle(5);
        let id = Matrix::identity(5, 5);
        assert!(close(&pwalk_kernel(&g, 1e-9).unwrap().matrix, &id, 1e-6));
        assert!(close(&forest_kernel(&g, 1e-9).unwrap().matrix, &id, 1e-6));
        assert!(close(&comm_kernel(&g, 1e-9).unwrap().matrix, &id, 1e-6));
        assert!(close(&heat_kernel(&g, 1e-9).unwrap().matrix, &id, 1e-6));
    }

    #[test]
    fn k2_closed_forms() {
        let g = complete(2);
        assert!(close(&pwalk_kernel(&g, 0.5).unwrap().matrix, &m2(4. / 3., 2. / 3.), 1e-14));
        assert!(close(&forest_kernel(&g, 1.0).unwrap().matrix, &m2(2. / 3., 1. / 3.), 1e-14));
        assert!(close(&comm_kernel(&g, 1.0).unwrap().matrix, &m2(1f64.cosh(), 1f64.sinh()), 1e-13));
        let e2 = (-2f64).exp();
        assert!(close(&heat_kernel(&g, 1.0).unwrap().matrix, &m2((1. + e2) / 2., (1. - e2) / 2.), 1e-14));
    }

    #[test]
    fn pwalk_parameter_domain() {
        let g = complete(2);
        assert!(pwalk_kernel(&g, 1.0).is_err());
        assert!(pwalk_kernel(&g, 0.0).is_err());
        assert!(forest_kernel(&g, -1.0).is_err());
        assert!(heat_kernel(&g, f64::NAN).is_err());
    }

    #[test]
    fn stochastic_kernels_have_unit_row_sums() {
        let g = path(6);
        for t in [0.1, 1.0, 10.0] {
            for k in [forest_kernel(&g, t).unwrap(), heat_kernel(&g, t).unwrap()] {
                for r in k.matrix.row_iter() {
                    assert!((r.sum() - 1.0).abs() < 1e-8);
                }
                assert!(k.matrix.iter().all(|&v| v > 0.0));
            }
        }
    }

    #[test]
    fn log_kernel_contract() {
        let ones = ProximityMatrix::new(Matrix::from_element(3, 3, 1.0), "x", 0.0);
        assert!(close(&log_kernel(&ones).unwrap().matrix, &Matrix::zeros(3, 3), 0.0));

        let f = forest_kernel(&complete(2), 1.0).unwrap();
        let lf = log_kernel(&f).unwrap();
        assert!(close(&lf.matrix, &m2((2f64 / 3.).ln(), (1f64 / 3.).ln()), 1e-14));

        let mut z = Matrix::identity(2, 2);
        z[(0, 1)] = 0.0;
        let err = log_kernel(&ProximityMatrix::new(z, "x", 0.0)).unwrap_err();
        assert_eq!(err, Error::NonPositiveEntry { i: 0, j: 1, value: 0.0 });
    }

    #[test]
    fn log_comm_handles_large_parameters() {
        let g = complete(4);
        let small = log_comm_kernel(&g, 0.7).unwrap();
        let direct = log_kernel(&comm_kernel(&g, 0.7).unwrap()).unwrap();
        assert!(close(&small.matrix, &direct.matrix, 1e-12));
        // exp(300 * 3) overflows; the shifted route does not.
        assert!(comm_kernel(&g, 300.0).is_err());
        let big = log_comm_kernel(&g, 300.0).unwrap();
        assert!(big.matrix.iter().all(|v| v.is_finite()));
    }
}
