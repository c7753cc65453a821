//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pcm::Pcm;

/// Deterministic random stream. ChaCha keeps sequences stable across
/// platforms and crate versions.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Random matrix following the experimental protocol: every judgment above
/// the diagonal is drawn uniformly from `{1, ..., a_max}` and placed with its
/// reciprocal on either side of the diagonal with equal probability.
pub fn random_pcm(n: usize, a_max: u32, rng: &mut RngStream) -> Pcm {
    assert!(n >= 2, "need at least two alternatives");
    assert!(a_max >= 2, "a_max must be at least 2");
    let r = rng.rng();
    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            let k = f64::from(r.gen_range(1..=a_max));
            let a = if r.gen_bool(0.5) { k } else { 1.0 / k };
            upper.push((i, j, a));
        }
    }
    Pcm::from_upper(n, &upper).expect("generated judgments are positive")
}

/// Consistent matrix from log-uniform weights in `[1/spread, spread]`.
pub fn random_consistent(n: usize, spread: f64, rng: &mut RngStream) -> (Pcm, Vec<f64>) {
    let r = rng.rng();
    let bound = spread.ln();
    let v: Vec<f64> = (0..n).map(|_| r.gen_range(-bound..=bound).exp()).collect();
    (Pcm::from_weights(&v).expect("weights are positive"), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_is_valid_and_reproducible() {
        let mut s1 = RngStream::new(7);
        let mut s2 = RngStream::new(7);
        for _ in 0..20 {
            let a = random_pcm(6, 5, &mut s1);
            let b = random_pcm(6, 5, &mut s2);
            assert_eq!(a, b);
            let rows: Vec<Vec<f64>> = a.rows().map(|r| r.to_vec()).collect();
            Pcm::new(rows).unwrap();
        }
    }

    #[test]
    fn entry_distribution_matches_protocol() {
        // Categories: 1, then k and 1/k for k = 2..=5.
        // P(1) = 1/5, every other category 1/10.
        let mut rng = RngStream::new(2024);
        let mut counts = [0usize; 9];
        let draws = 10_000;
        for _ in 0..draws {
            let a = random_pcm(10, 5, &mut rng);
            for i in 0..10 {
                for j in i + 1..10 {
                    let x = a.get(i, j);
                    let idx = if x == 1.0 {
                        0
                    } else if x > 1.0 {
                        x as usize - 1
                    } else {
                        (1.0 / x).round() as usize + 3
                    };
                    counts[idx] += 1;
                }
            }
        }
        let total = (draws * 45) as f64;
        let probs = [0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1];
        let mut chi2 = 0.0;
        for (c, p) in counts.iter().zip(probs) {
            let expected = total * p;
            let sigma = (total * p * (1.0 - p)).sqrt();
            assert!((*c as f64 - expected).abs() < 3.0 * sigma, "{counts:?}");
            chi2 += (*c as f64 - expected).powi(2) / expected;
        }
        // 8 degrees of freedom, 0.1% critical value
        assert!(chi2 < 26.12, "chi2 = {chi2}");
    }

    #[test]
    fn consistent_generator() {
        let mut rng = RngStream::new(1);
        let (a, v) = random_consistent(5, 9.0, &mut rng);
        assert!(a.is_consistent(1e-12));
        assert!(v.iter().all(|x| (1.0 / 9.0..=9.0).contains(x)));
    }
}
