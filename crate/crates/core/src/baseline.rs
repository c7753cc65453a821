//! Classical priority vectors used as starting points and for comparison.

use thiserror::Error;

use crate::pcm::Pcm;
use crate::weights::WeightVector;

/// Iteration cap for the power method.
pub const POWER_MAX_ITERS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
}

/// Normalized geometric means of the rows.
pub fn geometric_mean_vector(a: &Pcm) -> WeightVector {
    let n = a.n() as f64;
    // Averaging logs avoids overflow of the row product.
    let logs: Vec<f64> = a
        .rows()
        .map(|row| row.iter().map(|x| x.ln()).sum::<f64>() / n)
        .collect();
    WeightVector::from_log(&logs)
}

/// Principal eigenvector by power iteration started from the geometric-mean
/// vector. Returns the vector (first component 1) and the eigenvalue.
pub fn principal_eigenvector(a: &Pcm, tol: f64) -> Result<(WeightVector, f64), EigenError> {
    let n = a.n();
    let mut x = geometric_mean_vector(a).values().to_vec();
    let mut y = vec![0.0; n];
    for _ in 0..POWER_MAX_ITERS {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = a.row(i).iter().zip(&x).map(|(aij, xj)| aij * xj).sum();
        }
        // x[0] == 1, so the first coordinate of Ax is the eigenvalue estimate.
        let lambda = y[0];
        let scale = x.iter().fold(0.0f64, |m, xi| m.max(xi.abs()));
        let residual = y
            .iter()
            .zip(&x)
            .fold(0.0f64, |m, (yi, xi)| m.max((yi - lambda * xi).abs()));
        if residual <= tol * scale {
            return Ok((WeightVector::from_positive(&x), lambda));
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / lambda;
        }
    }
    Err(EigenError::NoConvergence(POWER_MAX_ITERS))
}

/// Saaty's consistency index `(lambda_max - n) / (n - 1)`.
pub fn saaty_index(a: &Pcm, lambda_max: f64) -> f64 {
    let n = a.n() as f64;
    ((lambda_max - n) / (n - 1.0)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcm::fixtures::a3;

    fn det3(m: [[f64; 3]; 3]) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest root of det(A - lambda I) for a 3x3 matrix, by bisection on
    /// [3, 4]: the characteristic polynomial is negative for large lambda and
    /// positive at lambda = 3 for an inconsistent reciprocal matrix.
    fn char_poly_root(a: &Pcm) -> f64 {
        let p = |l: f64| {
            let mut m = [[0.0; 3]; 3];
            for (i, row) in m.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = a.get(i, j) - if i == j { l } else { 0.0 };
                }
            }
            det3(m)
        };
        let (mut lo, mut hi) = (3.0, 4.0);
        assert!(p(lo) > 0.0 && p(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn geometric_mean_recovers_consistent_weights() {
        let a = Pcm::from_weights(&[1.0, 2.0, 4.0]).unwrap();
        let v = geometric_mean_vector(&a);
        for (got, want) in v.values().iter().zip([1.0, 2.0, 4.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        let two = Pcm::from_upper(2, &[(1, 2, 4.0)]).unwrap();
        let v = geometric_mean_vector(&two);
        assert!((v.values()[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn geometric_mean_of_a3() {
        let v = geometric_mean_vector(&a3());
        // 12^(-1/3) and 12^(-2/3)
        assert!((v.values()[1] - 0.43679).abs() < 5e-6);
        assert!((v.values()[2] - 0.19079).abs() < 5e-6);
        assert!((v.values()[1] - 12f64.powf(-1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn eigenvector_of_consistent_matrix() {
        let a = Pcm::from_weights(&[1.0, 2.0, 4.0]).unwrap();
        let (v, lambda) = principal_eigenvector(&a, 1e-12).unwrap();
        assert!((lambda - 3.0).abs() < 1e-12);
        assert!((v.values()[2] - 4.0).abs() < 1e-10);
        assert!(saaty_index(&a, lambda) < 1e-12);
    }

    #[test]
    fn eigenvector_of_a3_matches_characteristic_root() {
        let a = a3();
        let (v, lambda) = principal_eigenvector(&a, 1e-10).unwrap();
        let root = char_poly_root(&a);
        assert!((lambda - root).abs() < 1e-9, "{lambda} vs {root}");
        // closed form for 3x3 reciprocal matrices
        let t: f64 = 2.0 * 2.0 / 6.0;
        assert!((root - (1.0 + t.cbrt() + t.cbrt().recip())).abs() < 1e-12);
        let x = v.values();
        for i in 0..3 {
            let ax: f64 = (0..3).map(|j| a.get(i, j) * x[j]).sum();
            assert!((ax - lambda * x[i]).abs() < 1e-9);
        }
        assert!(saaty_index(&a, lambda) > 0.0);
    }

    #[test]
    fn any_two_by_two_has_lambda_two() {
        let a = Pcm::from_upper(2, &[(1, 2, 9.0)]).unwrap();
        let (_, lambda) = principal_eigenvector(&a, 1e-12).unwrap();
        assert!((lambda - 2.0).abs() < 1e-12);
        assert_eq!(saaty_index(&a, 2.0), 0.0);
    }
}
