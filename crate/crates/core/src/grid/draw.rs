//! Planar drawing of a grid diagram as a PD code.
//!
//! Rows are drawn as horizontal segments from X to O, columns as vertical
//! segments from O to X; vertical strands pass over horizontal ones. The
//! drawing is flat (no torus wrap), so every crossing is an interior
//! intersection of a row span with a column span.
//!
//! Because the drawing comes with coordinates, it also yields genuine disk
//! transversals: a vertical line between two columns meets the knot in a
//! balanced set of horizontal strands, giving a planar twist site.

use crate::pd::twist::StrandDir;
use crate::pd::{Edge, PDCode, PdError};

use super::GridDiagram;

/// A drawn grid: the PD code plus enough geometry to cut disk transversals.
#[derive(Clone, Debug)]
pub struct GridDrawing {
    pub pd: PDCode,
    rows: Vec<RowInfo>,
}

#[derive(Clone, Debug)]
struct RowInfo {
    x_col: usize,
    o_col: usize,
    /// Edge label at the X end of the row.
    entry: Edge,
    /// Crossings along the row in travel order, with the outgoing label.
    passes: Vec<(usize, Edge)>,
}

/// Draws the grid, producing a validated PD code with sequential labels.
pub fn draw(g: &GridDiagram) -> Result<GridDrawing, PdError> {
    let n = g.size();

    // Crossing positions: vertical of column c against horizontal of row r.
    let mut crossing_id: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    let mut count = 0usize;
    for (r, row) in crossing_id.iter_mut().enumerate() {
        let (h_lo, h_hi) = ordered(g.x_col(r), g.o_col(r));
        for (c, slot) in row.iter_mut().enumerate().take(h_hi).skip(h_lo + 1) {
            let (v_lo, v_hi) = ordered(g.x_row(c), g.o_row(c));
            if v_lo < r && r < v_hi {
                *slot = Some(count);
                count += 1;
            }
        }
    }

    if count == 0 {
        let rows = (0..n)
            .map(|r| RowInfo {
                x_col: g.x_col(r),
                o_col: g.o_col(r),
                entry: 0,
                passes: Vec::new(),
            })
            .collect();
        return Ok(GridDrawing { pd: PDCode::unknot(), rows });
    }

    // Walk the knot from the X of row 0, labeling edges 1..2N in order.
    struct Pass {
        crossing: usize,
        vertical: bool,
        forward: bool, // east for rows, north for columns
        incoming: Edge,
        outgoing: Edge,
    }
    let mut passes: Vec<Pass> = Vec::with_capacity(2 * count);
    let mut rows: Vec<RowInfo> = (0..n)
        .map(|r| RowInfo { x_col: g.x_col(r), o_col: g.o_col(r), entry: 0, passes: Vec::new() })
        .collect();
    let total_edges = (2 * count) as Edge;
    let mut label: Edge = 1;
    let bump = |label: &mut Edge| {
        let incoming = *label;
        *label = *label % total_edges + 1;
        (incoming, *label)
    };

    let mut row = 0usize;
    loop {
        // Horizontal run: X -> O of `row`.
        rows[row].entry = label;
        let (xc, oc) = (g.x_col(row), g.o_col(row));
        let east = oc > xc;
        let cols: Vec<usize> = if east {
            (xc + 1..oc).collect()
        } else {
            (oc + 1..xc).rev().collect()
        };
        for c in cols {
            if let Some(id) = crossing_id[row][c] {
                let (incoming, outgoing) = bump(&mut label);
                passes.push(Pass { crossing: id, vertical: false, forward: east, incoming, outgoing });
                rows[row].passes.push((c, outgoing));
            }
        }
        // Vertical run: O of `row` up or down to the X of that column.
        let col = oc;
        let dest = g.x_row(col);
        let north = dest > row;
        let rws: Vec<usize> = if north {
            (row + 1..dest).collect()
        } else {
            (dest + 1..row).rev().collect()
        };
        for r in rws {
            if let Some(id) = crossing_id[r][col] {
                let (incoming, outgoing) = bump(&mut label);
                passes.push(Pass { crossing: id, vertical: true, forward: north, incoming, outgoing });
            }
        }
        row = dest;
        if row == 0 {
            break;
        }
    }
    debug_assert_eq!(passes.len(), 2 * count);
    debug_assert_eq!(label, 1, "walk must close up");

    // Assemble tuples counterclockwise from the incoming under-strand.
    let mut under: Vec<Option<(Edge, Edge, bool)>> = vec![None; count];
    let mut over: Vec<Option<(Edge, Edge, bool)>> = vec![None; count];
    for p in passes {
        let slot = (p.incoming, p.outgoing, p.forward);
        if p.vertical {
            over[p.crossing] = Some(slot);
        } else {
            under[p.crossing] = Some(slot);
        }
    }
    let mut tuples = Vec::with_capacity(count);
    for id in 0..count {
        let (ui, uo, east) = under[id].expect("crossing passed horizontally");
        let (vi, vo, north) = over[id].expect("crossing passed vertically");
        let (south, north_label) = if north { (vi, vo) } else { (vo, vi) };
        let tuple = if east {
            [ui, south, uo, north_label]
        } else {
            [ui, north_label, uo, south]
        };
        tuples.push(tuple);
    }

    let pd = PDCode::new(&tuples, None)?;
    Ok(GridDrawing { pd, rows })
}

impl GridDrawing {
    /// The horizontal strands crossing a vertical line between columns `gap`
    /// and `gap + 1` (0-based), bottom to top. Eastward strands count as
    /// upward through the disk. The result is a balanced planar twist site.
    pub fn vertical_cut(&self, gap: usize) -> Vec<(Edge, StrandDir)> {
        let mut out = Vec::new();
        for info in &self.rows {
            let (lo, hi) = ordered(info.x_col, info.o_col);
            if !(lo <= gap && gap < hi) {
                continue;
            }
            let east = info.o_col > info.x_col;
            let mut current = info.entry;
            for &(c, outgoing) in &info.passes {
                let before = if east { c <= gap } else { c > gap };
                if before {
                    current = outgoing;
                }
            }
            let dir = if east { StrandDir::Up } else { StrandDir::Down };
            out.push((current, dir));
        }
        out
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}
