//! Full-twist insertion along a disk transversal.
//!
//! A twist site names `2l` edges of the diagram that cross a disk, together
//! with a transversal direction per edge (`l` upward and `l` downward, so the
//! algebraic intersection number with the knot is zero) and a handedness.
//! Insertion cuts each named edge and splices in a full twist on the `2l`
//! strands, realized as the braid word `(s_1 s_2 ... s_{k-1})^k` with
//! `k = 2l`, which contributes `k(k-1)` crossings. With right handedness the
//! strand running lower-left to upper-right passes over at every band;
//! oriented crossing signs then follow from the strand directions.
//!
//! The site is combinatorial data: whether the named edges actually cobound
//! a disk in a given embedding is the caller's responsibility.

use std::collections::BTreeSet;

use super::{Crossing, Edge, OverDir, PDCode, PdError};

/// Transversal direction of a strand through the twist disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrandDir {
    Up,
    Down,
}

/// Handedness of the inserted full twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistSign {
    Right,
    Left,
}

/// A disk transversal: `2l` edges in boundary order with their directions.
#[derive(Clone, Debug)]
pub struct TwistSite {
    pub strands: Vec<(Edge, StrandDir)>,
    pub sign: TwistSign,
}

impl TwistSite {
    pub fn new(strands: Vec<(Edge, StrandDir)>, sign: TwistSign) -> Result<Self, PdError> {
        if strands.len() < 2 {
            return Err(PdError::SiteTooSmall);
        }
        let mut seen = BTreeSet::new();
        for &(e, _) in &strands {
            if !seen.insert(e) {
                return Err(PdError::DuplicateSiteEdge { edge: e });
            }
        }
        let up = strands.iter().filter(|(_, d)| *d == StrandDir::Up).count();
        let down = strands.len() - up;
        if up != down {
            return Err(PdError::OrientationImbalance { up, down });
        }
        Ok(TwistSite { strands, sign })
    }

    /// Number of strands `2l` through the disk.
    pub fn width(&self) -> usize {
        self.strands.len()
    }
}

/// Inserts a full twist at `site`, returning a new diagram with
/// `k(k-1)` extra crossings (`k` = site width). The input is unchanged.
pub fn insert_full_twist(pd: &PDCode, site: &TwistSite) -> Result<PDCode, PdError> {
    insert_full_twist_with_undo(pd, site).map(|(pd, _)| pd)
}

/// Like [`insert_full_twist`], but also returns the site of the parallel
/// disk just below the inserted box with the opposite handedness. Twisting
/// there cancels the insertion up to Reidemeister moves.
pub fn insert_full_twist_with_undo(
    pd: &PDCode,
    site: &TwistSite,
) -> Result<(PDCode, TwistSite), PdError> {
    for &(e, _) in &site.strands {
        if !pd.has_edge(e) {
            return Err(PdError::UnknownEdge { edge: e });
        }
    }
    let k = site.width();
    let steps = k * (k - 1);

    // Simulate the braid bottom-to-top and record, per strand, the events it
    // participates in (box order) and on which side it sits.
    #[derive(Clone, Copy)]
    struct Event {
        left_strand: usize,
        right_strand: usize,
    }
    let mut pos_strand: Vec<usize> = (0..k).collect();
    let mut events: Vec<Event> = Vec::with_capacity(steps);
    let mut strand_events: Vec<Vec<(usize, bool)>> = vec![Vec::new(); k]; // (event, is_left)
    for t in 0..steps {
        let g = t % (k - 1);
        let (sl, sr) = (pos_strand[g], pos_strand[g + 1]);
        strand_events[sl].push((t, true));
        strand_events[sr].push((t, false));
        events.push(Event { left_strand: sl, right_strand: sr });
        pos_strand.swap(g, g + 1);
    }
    // A full twist is a pure braid: strands return to their positions.
    debug_assert_eq!(pos_strand, (0..k).collect::<Vec<_>>());

    // Assign labels to the segments of each strand. Segment j (box order)
    // lies below event j of the strand; segment cnt is the top. Labels run
    // along the knot direction: the entry segment keeps the original edge
    // label and the rest get fresh labels, finishing with the segment that
    // reconnects to the head occurrence of the original edge.
    let mut next_label: Edge = pd.edges().max().unwrap_or(0) + 1;
    let mut seg_labels: Vec<Vec<Edge>> = Vec::with_capacity(k);
    let mut final_label: Vec<Edge> = Vec::with_capacity(k);
    for (s, &(e, dir)) in site.strands.iter().enumerate() {
        let cnt = strand_events[s].len();
        let mut labels = vec![0 as Edge; cnt + 1];
        match dir {
            StrandDir::Up => {
                labels[0] = e;
                for slot in labels.iter_mut().skip(1) {
                    *slot = next_label;
                    next_label += 1;
                }
                final_label.push(labels[cnt]);
            }
            StrandDir::Down => {
                labels[cnt] = e;
                for j in (0..cnt).rev() {
                    labels[j] = next_label;
                    next_label += 1;
                }
                final_label.push(labels[0]);
            }
        }
        seg_labels.push(labels);
    }

    // Emit one crossing per event.
    let dir_of = |s: usize| site.strands[s].1;
    let mut new_tuples: Vec<[Edge; 4]> = Vec::with_capacity(steps);
    let mut seg_counter = vec![0usize; k];
    for ev in &events {
        let (sl, sr) = (ev.left_strand, ev.right_strand);
        let (jl, jr) = (seg_counter[sl], seg_counter[sr]);
        seg_counter[sl] += 1;
        seg_counter[sr] += 1;
        let sw = seg_labels[sl][jl]; // lower-left end
        let se = seg_labels[sr][jr]; // lower-right end
        let ne = seg_labels[sl][jl + 1]; // upper-right end
        let nw = seg_labels[sr][jr + 1]; // upper-left end

        // Right-handed: the SW -> NE strand passes over.
        let under_is_right = site.sign == TwistSign::Right;
        let tuple = if under_is_right {
            // Under-strand runs SE -> NW.
            match dir_of(sr) {
                StrandDir::Up => [se, ne, nw, sw],
                StrandDir::Down => [nw, sw, se, ne],
            }
        } else {
            // Under-strand runs SW -> NE.
            match dir_of(sl) {
                StrandDir::Up => [sw, se, ne, nw],
                StrandDir::Down => [ne, nw, sw, se],
            }
        };
        new_tuples.push(tuple);
    }

    // Rewrite the head occurrence of each cut edge to the strand's final
    // segment, then rebuild with an explicit orientation cycle.
    let mut tuples: Vec<[Edge; 4]> = pd
        .crossings()
        .iter()
        .map(|c| c.slots())
        .collect();
    for (s, &(e, _)) in site.strands.iter().enumerate() {
        let (ci, slot) = head_occurrence(pd, e);
        tuples[ci][slot] = final_label[s];
    }
    tuples.extend(new_tuples);

    // Spliced successor map: e -> segments -> old successor of e.
    let mut succ: std::collections::BTreeMap<Edge, Edge> = pd
        .edges()
        .map(|e| (e, pd.next_edge(e).unwrap()))
        .collect();
    for (s, &(e, dir)) in site.strands.iter().enumerate() {
        let labels = &seg_labels[s];
        let knot_order: Vec<Edge> = match dir {
            StrandDir::Up => labels.clone(),
            StrandDir::Down => labels.iter().rev().copied().collect(),
        };
        let old_next = succ[&e];
        for w in knot_order.windows(2) {
            succ.insert(w[0], w[1]);
        }
        succ.insert(*knot_order.last().unwrap(), old_next);
    }
    let mut cycle = Vec::with_capacity(succ.len());
    let start = *succ.keys().next().unwrap();
    let mut cur = start;
    loop {
        cycle.push(cur);
        cur = succ[&cur];
        if cur == start {
            break;
        }
    }

    let out = PDCode::new(&tuples, Some(&cycle))?;

    // Bottom segment of each strand, in site order: that is where a disk
    // parallel to the twist disk, pushed below the box, meets the knot.
    let undo_strands: Vec<(Edge, StrandDir)> = site
        .strands
        .iter()
        .enumerate()
        .map(|(s, &(_, dir))| (seg_labels[s][0], dir))
        .collect();
    let undo_sign = match site.sign {
        TwistSign::Right => TwistSign::Left,
        TwistSign::Left => TwistSign::Right,
    };
    let undo = TwistSite::new(undo_strands, undo_sign)?;

    Ok((out, undo))
}

/// Locates the occurrence of `e` where the knot arrives (slot receiving the
/// edge), as opposed to the one where it departs.
fn head_occurrence(pd: &PDCode, e: Edge) -> (usize, usize) {
    for (ci, c) in pd.crossings().iter().enumerate() {
        if c.under_in() == e {
            return (ci, 0);
        }
        let over_in_slot = match c.over_dir() {
            OverDir::BToD => 1,
            OverDir::DToB => 3,
        };
        if c.slots()[over_in_slot] == e {
            return (ci, over_in_slot);
        }
    }
    unreachable!("validated edge has an incoming occurrence");
}

/// Convenience: all crossings a twist insertion added relative to `before`.
pub fn added_crossings<'a>(before: &PDCode, after: &'a PDCode) -> &'a [Crossing] {
    &after.crossings()[before.crossing_count()..]
}
