//! Arc lengths of the parametric network as functions of the deviation
//! level `z`.
//!
//! For a reciprocal pair `(a_ij, a_ji)` the constraint `|a_ij - v_i/v_j| <= z`
//! together with its mirror becomes `w_j - w_i <= l_ij(z)` in log space,
//! where `l_ij(z) = -ln max{a_ij - z, 1/(a_ji + z)}`. Every `l_ij` is
//! continuous and strictly increasing on `z >= 0`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::pcm::Pcm;

/// Length function of one arc, defined by the judgment and its reciprocal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcLength {
    pub a_ij: f64,
    pub a_ji: f64,
}

impl ArcLength {
    pub fn new(a_ij: f64, a_ji: f64) -> Self {
        ArcLength { a_ij, a_ji }
    }

    /// `max{a_ij - z, 1/(a_ji + z)}`; equals `a_ij` at `z = 0`.
    #[inline]
    pub fn multiplier(&self, z: f64) -> f64 {
        debug_assert!(z >= 0.0, "negative level {z}");
        (self.a_ij - z).max(1.0 / (self.a_ji + z))
    }

    /// `l_ij(z) = -ln multiplier(z)`.
    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        -self.multiplier(z).ln()
    }

    /// The single convex/concave switch `a_ij - a_ji`, present only when
    /// `a_ij > 1`.
    pub fn inflexion_point(&self) -> Option<f64> {
        (self.a_ij > 1.0).then_some(self.a_ij - self.a_ji)
    }
}

/// A family of parametric arc lengths on a complete digraph.
///
/// Implemented by the original matrix and by reduced problems whose nodes
/// are groups of alternatives. Every length must be strictly increasing in
/// `z`.
pub trait ParametricLengths {
    fn node_count(&self) -> usize;

    /// Length of arc `from -> to` at level `z`, 0-based, `from != to`.
    fn arc_length(&self, from: usize, to: usize, z: f64) -> f64;
}

impl Pcm {
    pub fn arc(&self, i: usize, j: usize) -> ArcLength {
        ArcLength::new(self.get(i, j), self.get(j, i))
    }
}

impl ParametricLengths for Pcm {
    fn node_count(&self) -> usize {
        self.n()
    }

    #[inline]
    fn arc_length(&self, from: usize, to: usize, z: f64) -> f64 {
        self.arc(from, to).eval(z)
    }
}

impl<P: ParametricLengths + ?Sized> ParametricLengths for &P {
    fn node_count(&self) -> usize {
        (**self).node_count()
    }

    fn arc_length(&self, from: usize, to: usize, z: f64) -> f64 {
        (**self).arc_length(from, to, z)
    }
}

/// A simple directed cycle, stored with its smallest node first.
///
/// Nodes are 0-based; `Display` and serialization use 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    /// Canonicalizes a closed walk given as its node sequence (without
    /// repeating the first node).
    ///
    /// # Panics
    /// If fewer than two nodes are given or a node repeats.
    pub fn new(mut nodes: Vec<usize>) -> Self {
        assert!(nodes.len() >= 2, "a cycle needs at least two nodes");
        let mut seen = nodes.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), nodes.len(), "cycle nodes must be distinct");
        let start = nodes
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| *v)
            .map(|(i, _)| i)
            .unwrap();
        nodes.rotate_left(start);
        Cycle(nodes)
    }

    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Arcs `(from, to)` in traversal order, closing back to the start.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }

    /// 1-based node list.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str(")")
    }
}

impl Serialize for Cycle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

/// Sum of the arc lengths around `cycle` at level `z`.
pub fn cycle_length<P: ParametricLengths + ?Sized>(lengths: &P, cycle: &Cycle, z: f64) -> f64 {
    cycle.arcs().map(|(i, j)| lengths.arc_length(i, j, z)).sum()
}
