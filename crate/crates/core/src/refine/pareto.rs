//! Empirical and exact checks that no vector improves on a given one for
//! some pair without worsening another.

use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::metrics::deviation;
use crate::pcm::Pcm;
use crate::random::RngStream;
use crate::weights::WeightVector;

/// A candidate may exceed the incumbent by this much on any pair.
pub const DOMINANCE_SLACK: f64 = 1e-12;
/// A candidate must improve some pair by at least this much.
pub const IMPROVEMENT_MIN: f64 = 1e-9;
/// Largest size for which [`verify_pareto`] also runs [`exact_pareto_check`].
pub const EXACT_CHECK_MAX_N: usize = 4;

const SCALES: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone, Serialize)]
pub struct ParetoAudit {
    pub candidates_tried: usize,
    /// A dominating vector, if one was found.
    pub dominator: Option<Vec<f64>>,
    pub exact: Option<ExactCheck>,
}

impl ParetoAudit {
    pub fn passed(&self) -> bool {
        self.dominator.is_none() && self.exact.as_ref().is_none_or(ExactCheck::passed)
    }
}

/// Result of minimizing each pair's deviation while no other pair worsens.
#[derive(Debug, Clone, Serialize)]
pub struct ExactCheck {
    pub pairs_checked: usize,
    /// `(i, j, current, achievable)`, 1-based, for pairs that can improve.
    pub improvable: Vec<(usize, usize, f64, f64)>,
}

impl ExactCheck {
    pub fn passed(&self) -> bool {
        self.improvable.is_empty()
    }
}

fn all_deviations(a: &Pcm, v: &[f64]) -> Vec<f64> {
    let n = a.n();
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(deviation(a, v, i, j));
            }
        }
    }
    out
}

/// Whether deviations `cand` dominate `base`.
fn dominates(cand: &[f64], base: &[f64]) -> bool {
    let mut better = false;
    for (c, b) in cand.iter().zip(base) {
        if *c > b + DOMINANCE_SLACK {
            return false;
        }
        better |= *c < b - IMPROVEMENT_MIN;
    }
    better
}

/// Searches for a vector dominating `v`: `trials` log-normal perturbations
/// at scales from 1e-1 down to 1e-4, then single-coordinate moves of every
/// weight. For `n <= 4` the exact check runs as well.
pub fn verify_pareto(a: &Pcm, v: &WeightVector, trials: usize, rng: &mut RngStream) -> ParetoAudit {
    let n = a.n();
    let base = all_deviations(a, v.values());
    let w = v.logs();
    let mut cand = vec![0.0; n];
    let mut tried = 0;
    let probe = |cand: &[f64], tried: &mut usize| -> Option<Vec<f64>> {
        *tried += 1;
        let u: Vec<f64> = cand.iter().map(|x| x.exp()).collect();
        dominates(&all_deviations(a, &u), &base).then_some(u)
    };

    let mut dominator = None;
    for t in 0..trials {
        let scale = SCALES[t % SCALES.len()];
        cand[0] = 0.0;
        for k in 1..n {
            let g: f64 = StandardNormal.sample(rng.rng());
            cand[k] = w[k] + scale * g;
        }
        if let Some(u) = probe(&cand, &mut tried) {
            dominator = Some(u);
            break;
        }
    }
    if dominator.is_none() {
        'line: for k in 1..n {
            for e in 1..=8 {
                for sign in [1.0, -1.0] {
                    cand.copy_from_slice(w);
                    cand[k] += sign * 10f64.powi(-e);
                    if let Some(u) = probe(&cand, &mut tried) {
                        dominator = Some(u);
                        break 'line;
                    }
                }
            }
        }
    }
    ParetoAudit {
        candidates_tried: tried,
        dominator,
        exact: (n <= EXACT_CHECK_MAX_N).then(|| exact_pareto_check(a, v)),
    }
}

/// For every ordered pair `(k, l)`, minimizes `|a_kl - v_k/v_l|` subject to no other
/// pair deviating more than it does at `v`. The other constraints bound
/// every log-difference `w_i - w_j`, so the reachable range of
/// `w_k - w_l` follows from all-pairs shortest paths.
pub fn exact_pareto_check(a: &Pcm, v: &WeightVector) -> ExactCheck {
    const LOG_SLACK: f64 = 1e-13;
    let n = a.n();
    let vals = v.values();
    let e: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| deviation(a, vals, i, j)).collect())
        .collect();
    let mut improvable = Vec::new();
    let mut pairs_checked = 0;
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            pairs_checked += 1;
            // dist[x][y]: tightest bound on w_y - w_x.
            let mut dist = vec![vec![f64::INFINITY; n]; n];
            for (x, row) in dist.iter_mut().enumerate() {
                row[x] = 0.0;
            }
            for i in 0..n {
                for j in 0..n {
                    if i == j || (i, j) == (k, l) {
                        continue;
                    }
                    let (aij, eij) = (a.get(i, j), e[i][j]);
                    // w_i - w_j <= ln(a_ij + e_ij)
                    let up = (aij + eij).ln() + LOG_SLACK;
                    dist[j][i] = dist[j][i].min(up);
                    // w_i - w_j >= ln(a_ij - e_ij)
                    if aij > eij {
                        let lo = (aij - eij).ln() - LOG_SLACK;
                        dist[i][j] = dist[i][j].min(-lo);
                    }
                }
            }
            for m in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        let through = dist[x][m] + dist[m][y];
                        if through < dist[x][y] {
                            dist[x][y] = through;
                        }
                    }
                }
            }
            let t_hi = dist[l][k];
            let t_lo = -dist[k][l];
            let akl = a.get(k, l);
            let best = if akl.ln() >= t_lo && akl.ln() <= t_hi {
                0.0
            } else {
                (akl - t_lo.exp()).abs().min((akl - t_hi.exp()).abs())
            };
            if best < e[k][l] - IMPROVEMENT_MIN {
                improvable.push((k + 1, l + 1, e[k][l], best));
            }
        }
    }
    ExactCheck {
        pairs_checked,
        improvable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcm::fixtures::segment4;

    #[test]
    fn perturbed_vector_is_dominated() {
        let a = Pcm::from_weights(&[1.0, 2.0, 4.0]).unwrap();
        let v = WeightVector::from_positive(&[1.0, 2.0, 4.4]);
        let exact = exact_pareto_check(&a, &v);
        assert!(!exact.passed());
        assert!(exact.improvable.iter().all(|&(_, _, _, best)| best < 1e-9));
        let audit = verify_pareto(&a, &v, 100, &mut RngStream::new(3));
        assert!(audit.dominator.is_some());
    }

    #[test]
    fn segment_points_are_incomparable() {
        let a = segment4();
        let devs = |v4: f64| all_deviations(&a, &[1.0, 0.4, 3.0, v4]);
        let (end, mid) = (devs(0.625), devs(0.63468));
        assert!(!dominates(&mid, &end) && !dominates(&end, &mid));
        let v = WeightVector::from_positive(&[1.0, 0.4, 3.0, 0.625]);
        assert!(exact_pareto_check(&a, &v).passed());
    }

    #[test]
    fn consistent_vector_is_pareto_optimal() {
        let a = Pcm::from_weights(&[1.0, 2.0, 4.0, 0.5]).unwrap();
        let v = WeightVector::from_positive(&[1.0, 2.0, 4.0, 0.5]);
        let audit = verify_pareto(&a, &v, 1000, &mut RngStream::new(5));
        assert!(audit.passed());
        assert_eq!(audit.candidates_tried, 1000 + 3 * 16);
    }

    #[test]
    fn dominance_relation() {
        assert!(dominates(&[0.1, 0.2], &[0.1, 0.3]));
        assert!(!dominates(&[0.1, 0.3], &[0.1, 0.3]));
        assert!(!dominates(&[0.0, 0.4], &[0.1, 0.3]));
    }
}
