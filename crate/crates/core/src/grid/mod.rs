//! Grid diagrams and the combinatorial chain complex built on them.
//!
//! A grid diagram of size `n` places one X and one O in each row and column
//! of an `n x n` grid on the torus. Rows and columns are indexed `0..n`
//! internally (the `.grd` text format is 1-based, rows listed bottom to top).
//! The knot runs from X to O horizontally in each row and from O to X
//! vertically in each column.
//!
//! Generators of the complex are states: bijections assigning a row to each
//! column, drawn as points on the grid lines. With markers placed at cell
//! centers, doubling all coordinates makes every quantity integral:
//! state points sit at `(2c, 2r)` and markers at `(2c + 1, 2r + 1)`.
//!
//! For point sets `P`, `Q` write `I(P, Q)` for the number of pairs
//! `(p, q)` with `p` strictly south-west of `q`. The gradings used here are
//!
//! ```text
//! M_O(x) = I(x,x) - I(x,O) - I(O,x) + I(O,O) + 1
//! M_X(x) = I(x,x) - I(x,X) - I(X,x) + I(X,X) + 1
//! mu(x)  = M_O(x)
//! A(x)   = (M_O(x) - M_X(x) - (n - 1)) / 2
//! ```
//!
//! all computed on the fundamental domain. `A` is an integer for every state
//! of a knot grid.

pub mod draw;
pub mod homology;
mod rect;

pub use homology::{tilde_homology, tilde_homology_with_limit, tilde_to_hat, BigradedDims};
pub use rect::empty_rectangles;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("grid size must be at least 2 (got {n})")]
    TooSmall { n: usize },
    #[error("{which} row is not a permutation of 1..={n}")]
    NonPermutation { which: char, n: usize },
    #[error("X and O collide in row {row}")]
    Collision { row: usize },
    #[error("grid describes a link with {components} components, not a knot")]
    MultiComponent { components: usize },
    #[error("grid size {n} exceeds the configured limit {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("differential does not square to zero at state {state}")]
    DifferentialSquare { state: u64 },
    #[error("bigraded dimensions are not divisible by the blocked factor at (mu, A) = ({mu}, {a})")]
    NotDivisible { mu: i32, a: i32 },
    #[error("grading of a rectangle target is off by (d_mu, d_A) = ({dmu}, {da})")]
    BadRectangleGrading { dmu: i32, da: i32 },
}

/// A validated knot grid diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridDiagram {
    n: usize,
    /// Column of the X in each row (0-based).
    xs: Vec<u8>,
    /// Column of the O in each row (0-based).
    os: Vec<u8>,
}

impl GridDiagram {
    /// Builds a grid from 1-based column positions, as in the `.grd` format.
    pub fn new(xs1: &[usize], os1: &[usize]) -> Result<Self, GridError> {
        let n = xs1.len();
        if n < 2 {
            return Err(GridError::TooSmall { n });
        }
        let check = |vals: &[usize], which: char| -> Result<Vec<u8>, GridError> {
            if vals.len() != n {
                return Err(GridError::NonPermutation { which, n });
            }
            let mut seen = vec![false; n];
            let mut out = Vec::with_capacity(n);
            for &v in vals {
                if v < 1 || v > n || seen[v - 1] {
                    return Err(GridError::NonPermutation { which, n });
                }
                seen[v - 1] = true;
                out.push((v - 1) as u8);
            }
            Ok(out)
        };
        let xs = check(xs1, 'X')?;
        let os = check(os1, 'O')?;
        for row in 0..n {
            if xs[row] == os[row] {
                return Err(GridError::Collision { row: row + 1 });
            }
        }
        let g = GridDiagram { n, xs, os };
        let components = g.component_count();
        if components != 1 {
            return Err(GridError::MultiComponent { components });
        }
        Ok(g)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Column of the X in `row` (0-based).
    pub fn x_col(&self, row: usize) -> usize {
        self.xs[row] as usize
    }

    pub fn o_col(&self, row: usize) -> usize {
        self.os[row] as usize
    }

    /// Row containing the X of `col`.
    pub fn x_row(&self, col: usize) -> usize {
        self.xs.iter().position(|&c| c as usize == col).expect("permutation")
    }

    pub fn o_row(&self, col: usize) -> usize {
        self.os.iter().position(|&c| c as usize == col).expect("permutation")
    }

    /// Number of link components traced through the markers.
    fn component_count(&self) -> usize {
        let n = self.n;
        // Row successor: follow X -> O along the row, then O -> X along the
        // column into the row holding that column's X.
        let mut x_row_of_col = vec![0usize; n];
        for (row, &c) in self.xs.iter().enumerate() {
            x_row_of_col[c as usize] = row;
        }
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut row = start;
            while !seen[row] {
                seen[row] = true;
                row = x_row_of_col[self.os[row] as usize];
            }
        }
        cycles
    }

    /// Rotates all rows cyclically upward by `k` (a torus translation).
    pub fn rotated_rows(&self, k: usize) -> GridDiagram {
        let n = self.n;
        let k = k % n;
        let mut xs = Vec::with_capacity(n);
        let mut os = Vec::with_capacity(n);
        for i in 0..n {
            xs.push(self.xs[(i + n - k) % n]);
            os.push(self.os[(i + n - k) % n]);
        }
        GridDiagram { n, xs, os }
    }

    /// Gradings `(mu, A)` of a state.
    pub fn gradings(&self, state: &GridState) -> (i32, i32) {
        let n = self.n as i64;
        let pts_state: Vec<(i64, i64)> = state
            .perm
            .iter()
            .enumerate()
            .map(|(c, &r)| (2 * c as i64, 2 * r as i64))
            .collect();
        let pts_o: Vec<(i64, i64)> = self
            .os
            .iter()
            .enumerate()
            .map(|(row, &c)| (2 * c as i64 + 1, 2 * row as i64 + 1))
            .collect();
        let pts_x: Vec<(i64, i64)> = self
            .xs
            .iter()
            .enumerate()
            .map(|(row, &c)| (2 * c as i64 + 1, 2 * row as i64 + 1))
            .collect();
        let m_o = bil(&pts_state, &pts_o);
        let m_x = bil(&pts_state, &pts_x);
        let a2 = m_o - m_x - (n - 1);
        assert!(a2 % 2 == 0, "Alexander grading must be integral on a knot grid");
        (m_o as i32, (a2 / 2) as i32)
    }

    /// All `n!` states, in lexicographic order of their permutations.
    pub fn states(&self) -> impl Iterator<Item = GridState> + '_ {
        let n = self.n;
        (0..factorial(n)).map(move |rank| GridState { perm: perm_unrank(rank, n) })
    }
}

/// `I(x,x) - I(x,m) - I(m,x) + I(m,m) + 1` for a marker set `m`.
fn bil(x: &[(i64, i64)], m: &[(i64, i64)]) -> i64 {
    count_sw(x, x) - count_sw(x, m) - count_sw(m, x) + count_sw(m, m) + 1
}

/// Number of pairs `(p, q)` with `p` strictly south-west of `q`.
fn count_sw(ps: &[(i64, i64)], qs: &[(i64, i64)]) -> i64 {
    let mut count = 0;
    for p in ps {
        for q in qs {
            if p.0 < q.0 && p.1 < q.1 {
                count += 1;
            }
        }
    }
    count
}

/// A generator of the grid complex: one point per column, `(c, perm[c])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridState {
    pub perm: Vec<u8>,
}

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Permutation with the given lexicographic rank.
pub(crate) fn perm_unrank(mut rank: u64, n: usize) -> Vec<u8> {
    let mut avail: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(avail.remove(idx));
    }
    out
}

/// Lexicographic rank of a permutation.
pub(crate) fn perm_rank(perm: &[u8]) -> u64 {
    let n = perm.len();
    let mut rank = 0u64;
    let mut avail: Vec<u8> = (0..n as u8).collect();
    for (i, &v) in perm.iter().enumerate() {
        let idx = avail.iter().position(|&a| a == v).expect("valid value") as u64;
        rank += idx * factorial(n - 1 - i);
        avail.retain(|&a| a != v);
    }
    rank
}

/// Parses the `.grd` format: a size line, then `X:` and `O:` rows of 1-based
/// column positions. `#` starts a comment.
pub fn parse_grid(text: &str) -> Result<GridDiagram, GridError> {
    let mut lines = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if !stripped.trim().is_empty() {
            lines.push((lineno + 1, stripped.trim().to_string()));
        }
    }
    if lines.len() != 3 {
        let line = lines.last().map(|(l, _)| *l).unwrap_or(1);
        return Err(GridError::Syntax {
            line,
            msg: format!("expected 3 content lines (size, X row, O row), found {}", lines.len()),
        });
    }
    let n: usize = lines[0].1.parse().map_err(|_| GridError::Syntax {
        line: lines[0].0,
        msg: format!("`{}` is not a grid size", lines[0].1),
    })?;
    let parse_row = |(line, text): &(usize, String), tag: &str| -> Result<Vec<usize>, GridError> {
        let rest = text
            .strip_prefix(tag)
            .or_else(|| text.strip_prefix(&tag.to_lowercase()))
            .ok_or_else(|| GridError::Syntax {
                line: *line,
                msg: format!("expected a `{tag}` row"),
            })?;
        rest.split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| GridError::Syntax {
                    line: *line,
                    msg: format!("`{tok}` is not a column index"),
                })
            })
            .collect()
    };
    let xs = parse_row(&lines[1], "X:")?;
    let os = parse_row(&lines[2], "O:")?;
    if xs.len() != n || os.len() != n {
        return Err(GridError::Syntax {
            line: lines[1].0,
            msg: format!("marker rows must list exactly {n} columns"),
        });
    }
    GridDiagram::new(&xs, &os)
}

/// The standard shifted grid: X on the diagonal, O shifted by `shift`
/// columns. For `gcd(shift, n) = 1` this is a torus knot grid; `shift = 2`
/// gives the trefoil at `n = 5`.
pub fn torus_knot_grid(n: usize, shift: usize) -> Result<GridDiagram, GridError> {
    let xs: Vec<usize> = (0..n).map(|i| i + 1).collect();
    let os: Vec<usize> = (0..n).map(|i| (i + shift) % n + 1).collect();
    GridDiagram::new(&xs, &os)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn unknot2() -> GridDiagram {
        GridDiagram::new(&[2, 1], &[1, 2]).unwrap()
    }

    #[test]
    fn parse_and_validate() {
        let g = parse_grid("# smallest grid\n2\nX: 2 1\nO: 1 2\n").unwrap();
        assert_eq!(g.size(), 2);
        assert_eq!(g.x_col(0), 1);
        assert_eq!(g.o_col(0), 0);
    }

    #[test]
    fn non_permutation_rejected() {
        assert_eq!(
            GridDiagram::new(&[1, 1], &[2, 1]).unwrap_err(),
            GridError::NonPermutation { which: 'X', n: 2 }
        );
    }

    #[test]
    fn collision_rejected() {
        assert_eq!(
            GridDiagram::new(&[1, 2, 3], &[1, 3, 2]).unwrap_err(),
            GridError::Collision { row: 1 }
        );
    }

    #[test]
    fn link_rejected() {
        // X and O shifted by 2 on a grid of even size: two components.
        assert_eq!(
            GridDiagram::new(&[1, 2, 3, 4], &[3, 4, 1, 2]).unwrap_err(),
            GridError::MultiComponent { components: 2 }
        );
    }

    #[test]
    fn trefoil_grid_is_a_knot() {
        let g = torus_knot_grid(5, 2).unwrap();
        assert_eq!(g.size(), 5);
    }

    #[test]
    fn unknot2_gradings() {
        let g = unknot2();
        let mut seen: Vec<(i32, i32)> = g.states().map(|s| g.gradings(&s)).collect();
        seen.sort();
        assert_eq!(seen, vec![(-1, -1), (0, 0)]);
    }

    #[test]
    fn grading_shift_under_row_rotation() {
        // Torus translations permute the states but preserve the multiset of
        // gradings.
        let g = torus_knot_grid(5, 2).unwrap();
        let h = g.rotated_rows(2);
        let mut a: Vec<(i32, i32)> = g.states().map(|s| g.gradings(&s)).collect();
        let mut b: Vec<(i32, i32)> = h.states().map(|s| h.gradings(&s)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn perm_rank_roundtrip() {
        for n in 1..=6 {
            for rank in 0..factorial(n) {
                let p = perm_unrank(rank, n);
                assert_eq!(perm_rank(&p), rank);
            }
        }
    }
}
