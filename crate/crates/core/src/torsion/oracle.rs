//! Brute-force reference for pairing feasibility.
//!
//! Enumerates pairings directly by recursion over grading classes: the first
//! class with remaining generators either donates the single free generator
//! or pairs one generator with a compatible partner class. Used by the test
//! suites to cross-check the flow-based feasibility decision; it shares no
//! code with that path.

use std::collections::HashMap;

/// Whether all generators except exactly one can be paired with offsets
/// `1..=n_max` between cells `(i, j)` and `(i + 2n - 1, j + n)`.
pub fn feasible(cells: &[((i32, i32), u64)], n_max: u32) -> bool {
    let cells: Vec<((i32, i32), u64)> = cells.iter().copied().filter(|&(_, d)| d > 0).collect();
    let total: u64 = cells.iter().map(|&(_, d)| d).sum();
    if total == 0 {
        return true;
    }
    if total.is_multiple_of(2) {
        return false;
    }
    // Partner classes of each class, as index pairs.
    let mut partners: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
    for (i, &((mu, a), _)) in cells.iter().enumerate() {
        for (j, &((mu2, a2), _)) in cells.iter().enumerate() {
            let n = a2 - a;
            if n >= 1 && n <= n_max as i32 && mu2 - mu == 2 * n - 1 {
                partners[i].push(j);
                partners[j].push(i);
            }
        }
    }
    for p in partners.iter_mut() {
        p.sort_unstable();
        p.dedup();
    }
    let mut dims: Vec<u64> = cells.iter().map(|&(_, d)| d).collect();
    let mut memo = HashMap::new();
    search(&mut dims, false, &partners, &mut memo)
}

fn search(
    dims: &mut Vec<u64>,
    free_used: bool,
    partners: &[Vec<usize>],
    memo: &mut HashMap<(Vec<u64>, bool), bool>,
) -> bool {
    let first = match dims.iter().position(|&d| d > 0) {
        None => return free_used,
        Some(i) => i,
    };
    let key = (dims.clone(), free_used);
    if let Some(&hit) = memo.get(&key) {
        return hit;
    }
    let mut ok = false;
    if !free_used {
        dims[first] -= 1;
        ok = search(dims, true, partners, memo);
        dims[first] += 1;
    }
    if !ok {
        for &j in &partners[first] {
            if dims[j] == 0 || j == first {
                continue;
            }
            dims[first] -= 1;
            dims[j] -= 1;
            if search(dims, free_used, partners, memo) {
                ok = true;
            }
            dims[first] += 1;
            dims[j] += 1;
            if ok {
                break;
            }
        }
    }
    memo.insert(key, ok);
    ok
}
