//! Approximation errors between a matrix and the consistent matrix generated
//! by a weight vector.

use crate::pcm::Pcm;
use crate::weights::WeightVector;

/// `|a_ij - v_i/v_j|` for one ordered pair, 0-based.
#[inline]
pub fn deviation(a: &Pcm, v: &[f64], i: usize, j: usize) -> f64 {
    (a.get(i, j) - v[i] / v[j]).abs()
}

/// All off-diagonal deviations as `(i, j, |a_ij - v_i/v_j|)`, 0-based, in
/// row-major order.
pub fn deviations(a: &Pcm, v: &WeightVector) -> Vec<(usize, usize, f64)> {
    let n = a.n();
    let v = v.values();
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push((i, j, deviation(a, v, i, j)));
            }
        }
    }
    out
}

/// The generalized mean error `G_p`.
///
/// For finite `p` this is `[(1/n^2) sum |a_ij - v_i/v_j|^p]^(1/p)`. For
/// `p = f64::INFINITY` it is the plain maximum deviation, without the
/// `1/n^2` factor.
pub fn gp_error(a: &Pcm, v: &WeightVector, p: f64) -> f64 {
    assert!(p >= 1.0, "exponent must be at least 1, got {p}");
    let n = a.n();
    assert_eq!(v.len(), n, "weight vector length must match the matrix");
    if p.is_infinite() {
        return g_infinity(a, v.values());
    }
    let vals = v.values();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            sum += deviation(a, vals, i, j).powf(p);
        }
    }
    (sum / (n * n) as f64).powf(1.0 / p)
}

/// Maximum deviation over all pairs, for raw (unnormalized) weights.
pub fn g_infinity(a: &Pcm, v: &[f64]) -> f64 {
    let n = a.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max(deviation(a, v, i, j));
            }
        }
    }
    worst
}
