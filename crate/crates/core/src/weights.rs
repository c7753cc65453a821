use serde::{Deserialize, Serialize};

/// Positive priorities normalized so the first alternative has weight 1.
///
/// Both the priorities `v` and their logarithms `w = ln v` are kept, since
/// the solvers produce log-weights directly from shortest distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    v: Vec<f64>,
    w: Vec<f64>,
}

impl WeightVector {
    /// From arbitrary positive values; rescaled so `v[0] == 1`.
    ///
    /// # Panics
    /// If `values` is empty or holds a non-positive or non-finite value.
    pub fn from_positive(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "weight vector must not be empty");
        assert!(
            values.iter().all(|x| x.is_finite() && *x > 0.0),
            "weights must be positive and finite"
        );
        let first = values[0];
        let v: Vec<f64> = values.iter().map(|x| x / first).collect();
        let w = v.iter().map(|x| x.ln()).collect();
        WeightVector { v, w }
    }

    /// From log-weights; shifted so `w[0] == 0`.
    pub fn from_log(logs: &[f64]) -> Self {
        assert!(!logs.is_empty(), "weight vector must not be empty");
        assert!(logs.iter().all(|x| x.is_finite()), "log-weights must be finite");
        let first = logs[0];
        let w: Vec<f64> = logs.iter().map(|x| x - first).collect();
        let v = w.iter().map(|x| x.exp()).collect();
        WeightVector { v, w }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn logs(&self) -> &[f64] {
        &self.w
    }

    /// Rescaled copy summing to one.
    pub fn sum_normalized(&self) -> Vec<f64> {
        let total: f64 = self.v.iter().sum();
        self.v.iter().map(|x| x / total).collect()
    }
}
