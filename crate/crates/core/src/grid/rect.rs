//! Empty rectangles of the fully blocked grid complex.
//!
//! Two states `x`, `y` differing in exactly two columns are connected by the
//! two torus rectangles whose lower-left and upper-right corners are points
//! of `x`. A rectangle counts only when its open interior misses every X
//! marker, every O marker, and every point of `x`. Each empty rectangle
//! drops `mu` by one and preserves `A`; targets reached by both rectangles
//! cancel mod 2.

use super::{GridDiagram, GridState};

/// All differential targets of `x` with nonzero mod-2 coefficient.
pub fn empty_rectangles(g: &GridDiagram, x: &GridState) -> Vec<(GridState, u8)> {
    let mut out = Vec::new();
    for_each_target(g, &x.perm, |y, coeff| {
        out.push((GridState { perm: y.to_vec() }, coeff));
    });
    out
}

/// Core enumeration over raw permutation slices; `emit` receives each target
/// with coefficient 1 (targets whose two rectangles are both empty cancel and
/// are skipped).
pub(crate) fn for_each_target<F: FnMut(&[u8], u8)>(g: &GridDiagram, perm: &[u8], mut emit: F) {
    let n = g.size();
    let mut y = perm.to_vec();
    for c1 in 0..n {
        for c2 in c1 + 1..n {
            let r1 = perm[c1] as usize;
            let r2 = perm[c2] as usize;
            // Rectangle with west edge at c1: rows rise from r1 to r2.
            let h_a = (r2 + n - r1) % n;
            let a = rect_is_empty(g, perm, c1, c2 - c1, r1, h_a);
            // Complementary rectangle with west edge at c2.
            let b = rect_is_empty(g, perm, c2, c1 + n - c2, r2, n - h_a);
            let coeff = (a as u8) ^ (b as u8);
            if coeff == 1 {
                y[c1] = perm[c2];
                y[c2] = perm[c1];
                emit(&y, coeff);
                y[c1] = perm[c1];
                y[c2] = perm[c2];
            }
        }
    }
}

/// Checks emptiness of the open rectangle spanning `c_len` columns east of
/// `c_start` and `r_len` rows north of `r_start` (cyclically).
fn rect_is_empty(
    g: &GridDiagram,
    perm: &[u8],
    c_start: usize,
    c_len: usize,
    r_start: usize,
    r_len: usize,
) -> bool {
    let n = g.size();
    // Markers occupy cells; the rectangle covers cells `c_start..+c_len` by
    // `r_start..+r_len`.
    let row_in_cells = |row: usize| (row + n - r_start) % n < r_len;
    for i in 0..c_len {
        let col = (c_start + i) % n;
        if row_in_cells(g.x_row(col)) || row_in_cells(g.o_row(col)) {
            return false;
        }
    }
    // State points sit on grid lines; only interior lines matter.
    for i in 1..c_len {
        let col = (c_start + i) % n;
        let d = (perm[col] as usize + n - r_start) % n;
        if 0 < d && d < r_len {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot2_has_no_empty_rectangles() {
        // Every cell of a 2x2 grid holds a marker, so each of the four
        // candidate rectangles is blocked; the differential vanishes.
        let g = GridDiagram::new(&[2, 1], &[1, 2]).unwrap();
        for x in g.states() {
            assert!(empty_rectangles(&g, &x).is_empty());
        }
    }

    #[test]
    fn state_never_maps_to_itself() {
        let g = super::super::torus_knot_grid(5, 2).unwrap();
        for x in g.states() {
            for (y, _) in empty_rectangles(&g, &x) {
                assert_ne!(y, x);
            }
        }
    }

    #[test]
    fn rectangle_targets_drop_mu_by_one_and_keep_a() {
        let g = super::super::torus_knot_grid(5, 2).unwrap();
        for x in g.states() {
            let (mu, a) = g.gradings(&x);
            for (y, coeff) in empty_rectangles(&g, &x) {
                assert_eq!(coeff, 1);
                let (muy, ay) = g.gradings(&y);
                assert_eq!(muy, mu - 1);
                assert_eq!(ay, a);
            }
        }
    }
}
