//! Homology of the fully blocked grid complex over F2.
//!
//! The differential preserves the Alexander grading and drops the Maslov
//! grading by one, so the complex splits into independent blocks per
//! Alexander grading. Within a block, states are grouped by Maslov grading
//! and the boundary matrices between adjacent groups are reduced over F2.
//! Homology dimensions follow from `dim H = dim C - rank(in) - rank(out)`;
//! that the composite of adjacent boundary maps vanishes is checked during
//! the computation, not assumed.
//!
//! Blocks are processed with rayon when the `parallel` feature is enabled
//! (the default); [`tilde_homology_sequential`] always runs single-threaded
//! and produces bit-identical results.

use std::collections::BTreeMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::rect::for_each_target;
use super::{factorial, perm_rank, perm_unrank, GridDiagram, GridError};
use crate::hfk::HfkTable;

/// Default cap on the grid size; `11!` states is past desk scale.
pub const DEFAULT_GRID_LIMIT: usize = 10;

/// Homology dimensions of one block, keyed by `(mu, A)`.
type BlockDims = Vec<((i32, i32), u64)>;

/// Bigraded dimensions of the fully blocked homology, tagged with the grid
/// size for the later division down to the hat flavor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedDims {
    pub dims: BTreeMap<(i32, i32), u64>,
    pub grid_size: usize,
}

impl BigradedDims {
    pub fn total_dim(&self) -> u64 {
        self.dims.values().sum()
    }
}

/// Computes the blocked homology with the default size limit.
pub fn tilde_homology(g: &GridDiagram) -> Result<BigradedDims, GridError> {
    tilde_homology_with_limit(g, DEFAULT_GRID_LIMIT)
}

/// Computes the blocked homology, rejecting grids larger than `limit`.
pub fn tilde_homology_with_limit(g: &GridDiagram, limit: usize) -> Result<BigradedDims, GridError> {
    compute(g, limit, cfg!(feature = "parallel"))
}

/// Single-threaded computation, identical output to [`tilde_homology`].
pub fn tilde_homology_sequential(g: &GridDiagram) -> Result<BigradedDims, GridError> {
    tilde_homology_sequential_with_limit(g, DEFAULT_GRID_LIMIT)
}

pub fn tilde_homology_sequential_with_limit(
    g: &GridDiagram,
    limit: usize,
) -> Result<BigradedDims, GridError> {
    compute(g, limit, false)
}

fn compute(g: &GridDiagram, limit: usize, parallel: bool) -> Result<BigradedDims, GridError> {
    let n = g.size();
    if n > limit {
        return Err(GridError::SizeLimit { n, limit });
    }
    let total = factorial(n);

    // Gradings of every state, indexed by permutation rank.
    let gradings = run_tasks(
        parallel,
        &(0..total).collect::<Vec<u64>>(),
        |&rank| {
            let perm = perm_unrank(rank, n);
            let (mu, a) = g.gradings(&super::GridState { perm });
            (mu as i16, a as i16)
        },
    );

    // States per (A, mu), ascending rank within each cell.
    let mut blocks: BTreeMap<i16, BTreeMap<i16, Vec<u32>>> = BTreeMap::new();
    for (rank, &(mu, a)) in gradings.iter().enumerate() {
        blocks
            .entry(a)
            .or_default()
            .entry(mu)
            .or_default()
            .push(rank as u32);
    }

    let tasks: Vec<(i16, BTreeMap<i16, Vec<u32>>)> = blocks.into_iter().collect();
    let results = run_tasks(parallel, &tasks, |(a, by_mu)| process_block(g, &gradings, *a, by_mu));

    let mut dims = BTreeMap::new();
    for res in results {
        for ((mu, a), d) in res? {
            if d > 0 {
                dims.insert((mu, a), d);
            }
        }
    }
    Ok(BigradedDims { dims, grid_size: n })
}

#[allow(clippy::type_complexity)]
fn run_tasks<T: Sync, U: Send, F: Fn(&T) -> U + Sync>(parallel: bool, items: &[T], f: F) -> Vec<U> {
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().map(&f).collect();
    }
    let _ = parallel;
    items.iter().map(&f).collect()
}

/// Homology dimensions of one Alexander block.
fn process_block(
    g: &GridDiagram,
    gradings: &[(i16, i16)],
    a: i16,
    by_mu: &BTreeMap<i16, Vec<u32>>,
) -> Result<BlockDims, GridError> {
    let n = g.size();
    let mut out = Vec::new();
    let mut rank_above = 0usize;
    let mut above: Option<Vec<Vec<u32>>> = None;

    let mus: Vec<i16> = by_mu.keys().rev().copied().collect();
    for mu in mus {
        let sources = &by_mu[&mu];
        let targets = by_mu.get(&(mu - 1)).map(Vec::as_slice).unwrap_or(&[]);

        // Boundary matrix: one sorted column of local target indices per
        // source state.
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(sources.len());
        let mut grading_error = None;
        for &src in sources {
            let perm = perm_unrank(src as u64, n);
            let mut col = Vec::new();
            for_each_target(g, &perm, |y, _| {
                let y_rank = perm_rank(y) as u32;
                let (ymu, ya) = gradings[y_rank as usize];
                if ymu != mu - 1 || ya != a {
                    grading_error = Some(GridError::BadRectangleGrading {
                        dmu: (ymu - mu) as i32,
                        da: (ya - a) as i32,
                    });
                    return;
                }
                let local = targets.binary_search(&y_rank).expect("state grouped by grading");
                col.push(local as u32);
            });
            if let Some(err) = grading_error.take() {
                return Err(err);
            }
            col.sort_unstable();
            cols.push(col);
        }

        // The composite with the previous boundary map must vanish.
        if let Some(above_cols) = &above {
            for (ci, up) in above_cols.iter().enumerate() {
                let mut acc: Vec<u32> = Vec::new();
                for &mid in up {
                    acc = xor_merge(&acc, &cols[mid as usize]);
                }
                if !acc.is_empty() {
                    let state = by_mu[&(mu + 1)][ci] as u64;
                    return Err(GridError::DifferentialSquare { state });
                }
            }
        }

        let rank_here = rank_f2(cols.clone(), targets.len());
        let dim = sources.len() as u64 - rank_here as u64 - rank_above as u64;
        out.push(((mu as i32, a as i32), dim));

        rank_above = rank_here;
        above = Some(cols);
    }
    Ok(out)
}

/// Rank of an F2 matrix given as sparse columns; columns are reduced in
/// order of increasing support (fewest nonzeros first).
fn rank_f2(mut cols: Vec<Vec<u32>>, rows: usize) -> usize {
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&i| (cols[i].len(), i));
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows];
    let mut rank = 0;
    for idx in order {
        let mut col = std::mem::take(&mut cols[idx]);
        while let Some(&low) = col.last() {
            match pivot_of_row[low as usize] {
                Some(p) => col = xor_merge(&col, &cols[p]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            cols[idx] = col;
            pivot_of_row[low as usize] = Some(idx);
            rank += 1;
        }
    }
    rank
}

/// Symmetric difference of two sorted index lists.
fn xor_merge(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Divides the blocked homology by `(1 + q^-1 t^-1)^(n-1)`, recovering the
/// hat-flavor table. The division must be exact.
pub fn tilde_to_hat(tilde: &BigradedDims) -> Result<HfkTable, GridError> {
    let mut dims: BTreeMap<(i32, i32), i64> =
        tilde.dims.iter().map(|(&k, &v)| (k, v as i64)).collect();
    for _ in 1..tilde.grid_size {
        dims = divide_once(&dims)?;
    }
    let total: i64 = dims.values().sum();
    assert!(total % 2 == 1, "hat-flavor total dimension must be odd");
    let cells: Vec<((i32, i32), u64)> = dims
        .into_iter()
        .filter(|&(_, d)| d != 0)
        .map(|((mu, a), d)| ((mu, a), d as u64))
        .collect();
    Ok(HfkTable::from_cells(cells))
}

/// One exact division by `(1 + q^-1 t^-1)`. The factor shifts both gradings
/// by -1, so the division decouples along diagonals of constant `mu - A` and
/// reduces to `p(A) = q(A) + q(A + 1)` solved top-down on each diagonal.
fn divide_once(dims: &BTreeMap<(i32, i32), i64>) -> Result<BTreeMap<(i32, i32), i64>, GridError> {
    let mut diagonals: BTreeMap<i32, BTreeMap<i32, i64>> = BTreeMap::new();
    for (&(mu, a), &d) in dims {
        diagonals.entry(mu - a).or_default().insert(a, d);
    }
    let mut out = BTreeMap::new();
    for (diff, line) in diagonals {
        let &a_max = line.keys().next_back().expect("nonempty diagonal");
        let &a_min = line.keys().next().expect("nonempty diagonal");
        let mut q_above = 0i64;
        for a in (a_min..=a_max).rev() {
            let p = line.get(&a).copied().unwrap_or(0);
            let q = p - q_above;
            if q < 0 {
                return Err(GridError::NotDivisible { mu: diff + a, a });
            }
            if q != 0 {
                out.insert((diff + a, a), q);
            }
            q_above = q;
        }
        if q_above != 0 {
            return Err(GridError::NotDivisible { mu: diff + a_min - 1, a: a_min - 1 });
        }
    }
    Ok(out)
}
