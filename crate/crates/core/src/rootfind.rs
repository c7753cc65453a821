//! Anderson-Björck modified false position for strictly increasing
//! functions.
//!
//! The bracket is kept sign-ordered: `f(lo) < 0 <= f(hi)`. The method stops
//! once the bracket is narrower than `epsilon` and returns `hi`, so the
//! returned point never has a negative function value.

use thiserror::Error;

pub const MAX_ITERS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("bad bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}; need f(lo) < 0 <= f(hi)")]
    BadBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("no convergence after {0} iterations")]
    IterationLimit(usize),
}

/// Sign-bracketed interval with cached function values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn new<F: FnMut(f64) -> f64>(lo: f64, hi: f64, mut f: F) -> Result<Self, RootError> {
        Self::with_values(lo, hi, f(lo), f(hi))
    }

    pub fn with_values(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self, RootError> {
        if lo < hi && f_lo < 0.0 && f_hi >= 0.0 {
            Ok(Bracket { lo, hi, f_lo, f_hi })
        } else {
            Err(RootError::BadBracket { lo, hi, f_lo, f_hi })
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    /// Upper end of the final bracket; `f(z) >= 0`.
    pub z: f64,
    pub f_z: f64,
    /// Lower end of the final bracket; `f(lower) < 0` unless the root was hit
    /// exactly.
    pub lower: f64,
    /// Function evaluations beyond the two bracket endpoints.
    pub iterations: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Lo,
    Hi,
}

/// Finds the root of a strictly increasing `f` inside `bracket`.
///
/// Each step is a secant step through the current endpoints. When the new
/// point lands on the same side as the previous iterate, the function value
/// kept at the opposite endpoint is scaled by the ratio of divided
/// differences `f[z2,z3] / f[z1,z2]` (Illinois factor 1/2 if that ratio is
/// not positive). Two consecutive steps that fail to halve the bracket force
/// a bisection step, and a side that moves by less than `epsilon / 2` is
/// followed by a probe half a tolerance inside the bracket.
pub fn anderson_bjorck<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: Bracket,
    epsilon: f64,
) -> Result<Root, RootError> {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let Bracket {
        mut lo,
        mut hi,
        f_lo: mut g_lo,
        f_hi: mut g_hi,
    } = Bracket::with_values(bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi)?;
    // g_lo and g_hi may be damped by secant steps; true_* keep f itself.
    let mut true_lo = g_lo;
    let mut true_hi = g_hi;
    // The starting upper endpoint plays the role of the latest iterate.
    let mut last = Side::Hi;
    let mut slow_steps = 0;
    let mut probe: Option<f64> = None;
    let mut iterations = 0;

    loop {
        let width = hi - lo;
        if width < epsilon {
            return Ok(Root {
                z: hi,
                f_z: true_hi,
                lower: lo,
                iterations,
            });
        }
        if iterations >= MAX_ITERS {
            return Err(RootError::IterationLimit(MAX_ITERS));
        }

        let mid = 0.5 * (lo + hi);
        let (mut z, mut secant) = match probe.take() {
            Some(p) => (p, false),
            None if slow_steps >= 2 => (mid, false),
            None => (hi - g_hi * (hi - lo) / (g_hi - g_lo), true),
        };
        if !(z > lo && z < hi) {
            z = mid;
            secant = false;
        }
        let fz = f(z);
        iterations += 1;

        if fz == 0.0 {
            return Ok(Root {
                z,
                f_z: fz,
                lower: z,
                iterations,
            });
        }

        let side = if fz > 0.0 { Side::Hi } else { Side::Lo };
        if !secant {
            g_lo = true_lo;
            g_hi = true_hi;
        } else if side == last {
            // The opposite endpoint survives another step: damp its value.
            // With the secant point z3 built from (z1, g1), (z2, g2), the
            // ratio f[z2,z3] / f[z1,z2] reduces to 1 - f(z3) / f(z2).
            let f_prev = match side {
                Side::Hi => g_hi,
                Side::Lo => g_lo,
            };
            let m = 1.0 - fz / f_prev;
            let m = if m > 0.0 && m.is_finite() { m } else { 0.5 };
            match side {
                Side::Hi => g_lo *= m,
                Side::Lo => g_hi *= m,
            }
        }
        let step = match side {
            Side::Hi => {
                let step = hi - z;
                hi = z;
                g_hi = fz;
                true_hi = fz;
                step
            }
            Side::Lo => {
                let step = z - lo;
                lo = z;
                g_lo = fz;
                true_lo = fz;
                step
            }
        };
        // A secant step that barely moves its side sits next to the root:
        // test the point half a tolerance toward the other side, which
        // closes the bracket whenever the root lies in between.
        if secant && step < 0.5 * epsilon {
            probe = Some(match side {
                Side::Hi => hi - 0.5 * epsilon,
                Side::Lo => lo + 0.5 * epsilon,
            });
        }
        last = side;
        slow_steps = if hi - lo > 0.5 * width { slow_steps + 1 } else { 0 };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisection_root<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        hi
    }

    #[test]
    fn linear_is_exact_in_one_step() {
        let f = |z: f64| z - 1.0;
        let r = anderson_bjorck(f, Bracket::new(0.0, 2.0, f).unwrap(), 1e-9).unwrap();
        assert_eq!(r.z, 1.0);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn square_root_of_two() {
        let f = |z: f64| z * z - 2.0;
        let r = anderson_bjorck(f, Bracket::new(0.0, 2.0, f).unwrap(), 1e-9).unwrap();
        assert!((r.z - 2f64.sqrt()).abs() < 1e-9);
        assert!(f(r.z) >= 0.0);
    }

    #[test]
    fn bad_brackets_rejected() {
        let f = |z: f64| z - 1.0;
        assert!(matches!(
            Bracket::new(2.0, 3.0, f),
            Err(RootError::BadBracket { .. })
        ));
        assert!(matches!(
            Bracket::new(2.0, 0.0, f),
            Err(RootError::BadBracket { .. })
        ));
    }

    #[test]
    fn convex_and_concave_battery() {
        type Case = (fn(f64) -> f64, f64, f64);
        let cases: [Case; 8] = [
            (|z| z.exp() - 2.0, 0.0, 3.0),
            (|z| (1.0 + z).ln() - 0.5, 0.0, 10.0),
            (|z| z.powi(3) - 0.1, 0.0, 1.0),
            (|z| z.powi(9) - 0.5, 0.0, 1.5),
            (|z| 1.0 - (-5.0 * z).exp() - 0.9, 0.0, 4.0),
            (|z| z.sqrt() - 0.01, 0.0, 1.0),
            (|z| -(2.0 - z).ln() - 0.2, 0.0, 1.9),
            (|z| z.atan() - 1.2, 0.0, 100.0),
        ];
        for (k, (f, lo, hi)) in cases.iter().enumerate() {
            for eps in [1e-6, 1e-9, 1e-12] {
                let r = anderson_bjorck(f, Bracket::new(*lo, *hi, f).unwrap(), eps).unwrap();
                let truth = bisection_root(f, *lo, *hi);
                assert!((r.z - truth).abs() <= eps, "case {k} eps {eps}: {} vs {truth}", r.z);
                assert!(f(r.z) >= -1e-12);
                let cap = ((hi - lo) / eps).log2().ceil() as usize + 4;
                assert!(r.iterations <= cap, "case {k} eps {eps}: {} > {cap}", r.iterations);
            }
        }
    }

    #[test]
    fn a3_cycle_root() {
        use crate::arclen::{cycle_length, Cycle};
        use crate::pcm::fixtures::a3;
        let a = a3();
        let c = Cycle::new(vec![1, 0, 2]);
        let f = |z: f64| cycle_length(&a, &c, z);
        let r = anderson_bjorck(f, Bracket::new(0.0, 0.7585, f).unwrap(), 1e-6).unwrap();
        let truth = bisection_root(f, 0.0, 0.7585);
        let analytic = (33f64.sqrt() - 5.0) / 2.0;
        assert!((truth - analytic).abs() < 1e-12);
        assert!((r.z - analytic).abs() <= 1e-6);
        assert!(f(r.z) >= 0.0);
    }
}
