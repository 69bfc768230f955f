//! Planar-diagram (PD) codes for oriented knots.
//!
//! A crossing is a 4-tuple of edge labels `(a, b, c, d)` listed
//! counterclockwise around the crossing, starting at the incoming
//! under-strand `a`. The under-strand runs `a -> c`; the over-strand
//! occupies the slots `b` and `d`, and a stored direction bit records
//! which of the two is its incoming end. With the over-strand running
//! `d -> b` the crossing is positive, with `b -> d` it is negative.
//!
//! Edge labels are positive integers, each occurring exactly twice. When no
//! explicit orientation cycle is given, labels must be `1..=2n` numbered
//! consecutively along the knot; an `O` line in the text format supplies the
//! traversal cycle for arbitrary labels.

mod parse;
pub mod alexander;
pub mod twist;

pub use parse::parse_pd;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// An edge label in a PD code.
pub type Edge = u32;

/// Direction of the over-strand through a crossing tuple `(a, b, c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverDir {
    /// Over-strand enters at slot `b`, leaves at slot `d` (negative crossing).
    BToD,
    /// Over-strand enters at slot `d`, leaves at slot `b` (positive crossing).
    DToB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    slots: [Edge; 4],
    over_dir: OverDir,
}

impl Crossing {
    pub fn slots(&self) -> [Edge; 4] {
        self.slots
    }

    /// Incoming under-strand edge.
    pub fn under_in(&self) -> Edge {
        self.slots[0]
    }

    /// Outgoing under-strand edge.
    pub fn under_out(&self) -> Edge {
        self.slots[2]
    }

    pub fn over_in(&self) -> Edge {
        match self.over_dir {
            OverDir::BToD => self.slots[1],
            OverDir::DToB => self.slots[3],
        }
    }

    pub fn over_out(&self) -> Edge {
        match self.over_dir {
            OverDir::BToD => self.slots[3],
            OverDir::DToB => self.slots[1],
        }
    }

    pub fn over_dir(&self) -> OverDir {
        self.over_dir
    }

    /// Oriented crossing sign: +1 when the over-strand runs `d -> b`.
    pub fn sign(&self) -> i8 {
        match self.over_dir {
            OverDir::DToB => 1,
            OverDir::BToD => -1,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PdError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("edge label {edge} occurs {count} times (every label must occur exactly twice)")]
    BadLabelCount { edge: Edge, count: usize },
    #[error("edge labels are not consecutive along the knot; add an `O` orientation line")]
    NonSequentialLabels,
    #[error("orientation cycle is inconsistent with crossing {index}: {msg}")]
    OrientationConflict { index: usize, msg: String },
    #[error("diagram has more than one component")]
    MultiComponent,
    #[error("orientation line must list every edge exactly once")]
    BadOrientationCycle,
    #[error("unknown edge label {edge}")]
    UnknownEdge { edge: Edge },
    #[error("twist site needs the same number of upward and downward strands (got {up} up, {down} down)")]
    OrientationImbalance { up: usize, down: usize },
    #[error("twist site lists edge {edge} twice")]
    DuplicateSiteEdge { edge: Edge },
    #[error("twist site needs at least two strands")]
    SiteTooSmall,
    #[error("Alexander computation failed: {0}")]
    AlexanderInternal(String),
}

/// A validated oriented knot diagram.
///
/// The empty crossing list denotes a crossingless unknot diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PDCode {
    crossings: Vec<Crossing>,
    /// Successor edge along the knot orientation.
    succ: BTreeMap<Edge, Edge>,
}

impl PDCode {
    /// The 0-crossing unknot diagram.
    pub fn unknot() -> Self {
        PDCode { crossings: Vec::new(), succ: BTreeMap::new() }
    }

    /// Builds and validates a PD code from raw 4-tuples.
    ///
    /// `orientation`, when given, is the full edge cycle in knot order;
    /// otherwise labels must be consecutive (`1..=2n` along the knot).
    pub fn new(tuples: &[[Edge; 4]], orientation: Option<&[Edge]>) -> Result<Self, PdError> {
        if tuples.is_empty() {
            if let Some(cycle) = orientation {
                if !cycle.is_empty() {
                    return Err(PdError::BadOrientationCycle);
                }
            }
            return Ok(Self::unknot());
        }

        // Every label occurs exactly twice.
        let mut counts: BTreeMap<Edge, usize> = BTreeMap::new();
        for t in tuples {
            for &e in t {
                *counts.entry(e).or_insert(0) += 1;
            }
        }
        for (&e, &c) in counts.iter() {
            if c != 2 {
                return Err(PdError::BadLabelCount { edge: e, count: c });
            }
        }
        let edges: BTreeSet<Edge> = counts.keys().copied().collect();
        let n2 = edges.len() as Edge; // 2 * crossing count
        debug_assert_eq!(n2 as usize, 2 * tuples.len());

        // Reference successor map, either from the explicit cycle or from
        // consecutive numbering.
        let succ_ref: BTreeMap<Edge, Edge> = match orientation {
            Some(cycle) => {
                if cycle.len() != edges.len()
                    || cycle.iter().copied().collect::<BTreeSet<_>>() != edges
                {
                    return Err(PdError::BadOrientationCycle);
                }
                cycle
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| (e, cycle[(i + 1) % cycle.len()]))
                    .collect()
            }
            None => {
                if edges.iter().copied().ne(1..=n2) {
                    return Err(PdError::NonSequentialLabels);
                }
                (1..=n2).map(|e| (e, e % n2 + 1)).collect()
            }
        };

        // Resolve the over-strand direction of each crossing against the
        // reference successors, and rebuild the successor map from the
        // crossings themselves.
        let mut crossings = Vec::with_capacity(tuples.len());
        let mut succ: BTreeMap<Edge, Edge> = BTreeMap::new();
        let mut record = |from: Edge, to: Edge, index: usize| -> Result<(), PdError> {
            if succ.insert(from, to).is_some() {
                return Err(PdError::OrientationConflict {
                    index,
                    msg: format!("edge {from} leaves two different crossings"),
                });
            }
            Ok(())
        };
        for (index, t) in tuples.iter().enumerate() {
            let [a, b, c, d] = *t;
            if succ_ref.get(&a) != Some(&c) {
                return Err(PdError::OrientationConflict {
                    index,
                    msg: format!("under-strand {a} -> {c} does not follow the edge order"),
                });
            }
            let over_dir = if succ_ref.get(&b) == Some(&d) {
                OverDir::BToD
            } else if succ_ref.get(&d) == Some(&b) {
                OverDir::DToB
            } else {
                return Err(PdError::OrientationConflict {
                    index,
                    msg: format!("over-strand pair ({b}, {d}) is not consecutive"),
                });
            };
            let cr = Crossing { slots: [a, b, c, d], over_dir };
            record(cr.under_in(), cr.under_out(), index)?;
            record(cr.over_in(), cr.over_out(), index)?;
            crossings.push(cr);
        }

        // The successor map must be a single cycle over all edges.
        let start = *edges.iter().next().expect("nonempty");
        let mut seen = 0usize;
        let mut cur = start;
        loop {
            cur = *succ.get(&cur).expect("succ is total on edges");
            seen += 1;
            if cur == start {
                break;
            }
            if seen > edges.len() {
                break;
            }
        }
        if seen != edges.len() {
            return Err(PdError::MultiComponent);
        }

        Ok(PDCode { crossings, succ })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.succ.keys().copied()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.succ.contains_key(&e)
    }

    /// Successor edge along the knot.
    pub fn next_edge(&self, e: Edge) -> Option<Edge> {
        self.succ.get(&e).copied()
    }

    /// The edge traversal cycle, starting from the smallest label.
    pub fn orientation_cycle(&self) -> Vec<Edge> {
        let mut cycle = Vec::with_capacity(self.succ.len());
        if let Some((&start, _)) = self.succ.iter().next() {
            let mut cur = start;
            loop {
                cycle.push(cur);
                cur = self.succ[&cur];
                if cur == start {
                    break;
                }
            }
        }
        cycle
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign() as i64).sum()
    }

    /// Applies an injective relabeling of edges.
    pub fn relabeled(&self, map: &BTreeMap<Edge, Edge>) -> Result<Self, PdError> {
        let get = |e: Edge| -> Result<Edge, PdError> {
            map.get(&e).copied().ok_or(PdError::UnknownEdge { edge: e })
        };
        let images: BTreeSet<Edge> = map.values().copied().collect();
        if images.len() != map.len() {
            return Err(PdError::BadOrientationCycle);
        }
        let mut tuples = Vec::with_capacity(self.crossings.len());
        for c in &self.crossings {
            let [a, b, cc, d] = c.slots;
            tuples.push([get(a)?, get(b)?, get(cc)?, get(d)?]);
        }
        let cycle: Vec<Edge> = self
            .orientation_cycle()
            .into_iter()
            .map(get)
            .collect::<Result<_, _>>()?;
        PDCode::new(&tuples, Some(&cycle))
    }

    /// Renders the diagram in the `.pd` text format, orientation line included.
    pub fn to_pd_text(&self) -> String {
        let mut out = String::new();
        for c in &self.crossings {
            let [a, b, cc, d] = c.slots;
            out.push_str(&format!("X {a} {b} {cc} {d}\n"));
        }
        let cycle = self.orientation_cycle();
        if !cycle.is_empty() {
            out.push('O');
            for e in cycle {
                out.push_str(&format!(" {e}"));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_pd_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn figure_eight() -> PDCode {
        PDCode::new(
            &[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn unknot_is_empty() {
        let pd = PDCode::unknot();
        assert_eq!(pd.crossing_count(), 0);
        assert_eq!(pd.edge_count(), 0);
    }

    #[test]
    fn figure_eight_validates() {
        let pd = figure_eight();
        assert_eq!(pd.crossing_count(), 4);
        assert_eq!(pd.edge_count(), 8);
        assert_eq!(pd.writhe(), 0);
        assert_eq!(pd.orientation_cycle(), vec![1, 2, 3, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn kink_resolves_deterministically() {
        let pd = PDCode::new(&[[1, 2, 2, 1]], None).unwrap();
        assert_eq!(pd.crossings()[0].over_dir(), OverDir::BToD);
        assert_eq!(pd.writhe(), -1);
    }

    #[test]
    fn triple_label_rejected() {
        let err = PDCode::new(&[[1, 1, 2, 1], [2, 3, 3, 4]], None).unwrap_err();
        assert_eq!(err, PdError::BadLabelCount { edge: 1, count: 3 });
    }

    #[test]
    fn two_component_link_rejected() {
        // Hopf-link-like tuples: two disjoint edge cycles {1,2} x {3,4}.
        let err = PDCode::new(
            &[[1, 3, 2, 4], [2, 4, 1, 3]],
            Some(&[1, 2, 3, 4]),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            PdError::OrientationConflict { .. } | PdError::MultiComponent
        ));
    }

    #[test]
    fn relabel_roundtrip() {
        let pd = figure_eight();
        let map: BTreeMap<Edge, Edge> = (1..=8).map(|e| (e, e * 10)).collect();
        let relabeled = pd.relabeled(&map).unwrap();
        assert_eq!(relabeled.crossing_count(), 4);
        assert_eq!(relabeled.writhe(), pd.writhe());
        let back: BTreeMap<Edge, Edge> = (1..=8).map(|e| (e * 10, e)).collect();
        assert_eq!(relabeled.relabeled(&back).unwrap(), pd);
    }
}
