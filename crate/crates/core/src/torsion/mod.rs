//! Torsion-order bounds from a hat-flavor table.
//!
//! The graded module behind a hat table splits into one free summand and
//! two-step summands joining gradings `(i, j)` and `(i + 2n - 1, j + n)` for
//! some `n >= 1`. Any basis therefore pairs up all generators except exactly
//! one, with pair offsets of this shape. The largest `n` appearing in the
//! true decomposition is the maximal torsion order `t(K)`; optimizing the
//! maximal offset over all combinatorially consistent pairings brackets it:
//!
//! * the minimum over feasible pairings of the largest offset is a lower
//!   bound for `t(K)`,
//! * the maximum over feasible pairings of the largest offset is an upper
//!   bound.
//!
//! Pairings are modeled at the granularity of grading classes with
//! capacities; feasibility is an integral max-flow question on the bipartite
//! graph split by Maslov parity (pair offsets are odd in `mu`).

pub mod oracle;
mod flow;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::hfk::VerifiedTable;
use flow::FlowNetwork;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorsionError {
    #[error("no pairing with one free generator exists at any offset bound; the table is corrupt")]
    Infeasible,
    #[error("empty torsion interval: lower {lower} exceeds upper {upper}")]
    EmptyInterval { lower: u32, upper: u32 },
}

/// A pairing instance: grading cells with capacities, offsets bounded by the
/// Maslov span, exactly one generator left unpaired.
#[derive(Clone, Debug)]
pub struct PairingProblem {
    cells: Vec<((i32, i32), u64)>,
    total: u64,
}

impl PairingProblem {
    pub fn new(cells: Vec<((i32, i32), u64)>) -> Self {
        let mut map: BTreeMap<(i32, i32), u64> = BTreeMap::new();
        for ((mu, a), d) in cells {
            if d > 0 {
                *map.entry((mu, a)).or_insert(0) += d;
            }
        }
        let cells: Vec<_> = map.into_iter().collect();
        let total = cells.iter().map(|&(_, d)| d).sum();
        PairingProblem { cells, total }
    }

    pub fn from_table(tab: &VerifiedTable) -> Self {
        Self::new(tab.cells())
    }

    pub fn total_generators(&self) -> u64 {
        self.total
    }

    pub fn cells(&self) -> &[((i32, i32), u64)] {
        &self.cells
    }

    /// Largest offset that fits inside the Maslov span of the cells.
    pub fn offset_cap(&self) -> u32 {
        let mus: Vec<i32> = self.cells.iter().map(|&((mu, _), _)| mu).collect();
        match (mus.iter().min(), mus.iter().max()) {
            (Some(&lo), Some(&hi)) => (((hi - lo) + 1) / 2).max(0) as u32,
            _ => 0,
        }
    }

    /// All pair types `(lower, upper, n)` with `n <= n_max` and both ends
    /// populated, ordered by `(n, lower)`.
    fn pair_types(&self, n_max: u32) -> Vec<PairType> {
        let dims: BTreeMap<(i32, i32), u64> = self.cells.iter().copied().collect();
        let mut out = Vec::new();
        for n in 1..=n_max as i32 {
            for &((mu, a), _) in &self.cells {
                let upper = (mu + 2 * n - 1, a + n);
                if dims.contains_key(&upper) {
                    out.push(PairType { n: n as u32, lower: (mu, a), upper });
                }
            }
        }
        out
    }

    /// Whether all generators except exactly one can be paired with offsets
    /// `1..=n_max`.
    pub fn feasible(&self, n_max: u32) -> bool {
        if self.total <= 1 {
            return true;
        }
        if self.total.is_multiple_of(2) {
            return false;
        }
        let want = (self.total - 1) / 2;
        self.max_pairs(n_max) == want as i64
    }

    /// Size of the maximum pairing with offsets `1..=n_max`.
    fn max_pairs(&self, n_max: u32) -> i64 {
        // Bipartite by Maslov parity: source -> even cells -> odd cells -> sink.
        let index: BTreeMap<(i32, i32), usize> =
            self.cells.iter().enumerate().map(|(i, &(c, _))| (c, i)).collect();
        let nodes = self.cells.len() + 2;
        let source = self.cells.len();
        let sink = source + 1;
        let mut net = FlowNetwork::new(nodes);
        for (i, &((mu, _), d)) in self.cells.iter().enumerate() {
            if mu.rem_euclid(2) == 0 {
                net.add_edge(source, i, d as i64);
            } else {
                net.add_edge(i, sink, d as i64);
            }
        }
        for t in self.pair_types(n_max) {
            let li = index[&t.lower];
            let ui = index[&t.upper];
            let (from, to) = if t.lower.0.rem_euclid(2) == 0 { (li, ui) } else { (ui, li) };
            net.add_edge(from, to, i64::MAX / 4);
        }
        net.max_flow(source, sink)
    }

    /// Smallest offset bound admitting a pairing with one free generator.
    pub fn minmax(&self) -> Result<u32, TorsionError> {
        smallest_feasible_cap(self)
    }

    fn with_removed(&self, pairs: &[(PairType, u64)]) -> PairingProblem {
        let mut dims: BTreeMap<(i32, i32), u64> = self.cells.iter().copied().collect();
        for (t, count) in pairs {
            *dims.get_mut(&t.lower).expect("populated") -= count;
            *dims.get_mut(&t.upper).expect("populated") -= count;
        }
        PairingProblem::new(dims.into_iter().collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairType {
    pub n: u32,
    pub lower: (i32, i32),
    pub upper: (i32, i32),
}

/// A concrete pairing certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub pairs: Vec<(PairType, u64)>,
    pub free: (i32, i32),
    /// Largest offset used (0 when there are no pairs).
    pub max_n: u32,
}

impl Pairing {
    /// Independent validity check against the cell capacities: offsets of
    /// the required shape, every generator covered, exactly one free.
    pub fn validate(&self, problem: &PairingProblem) -> bool {
        let mut used: BTreeMap<(i32, i32), u64> = BTreeMap::new();
        for (t, count) in &self.pairs {
            let (i, j) = t.lower;
            let n = t.n as i32;
            if t.upper != (i + 2 * n - 1, j + n) || t.n == 0 || *count == 0 {
                return false;
            }
            *used.entry(t.lower).or_insert(0) += count;
            *used.entry(t.upper).or_insert(0) += count;
        }
        *used.entry(self.free).or_insert(0) += 1;
        let dims: BTreeMap<(i32, i32), u64> = problem.cells.iter().copied().collect();
        used == dims && self.pairs.iter().map(|(t, _)| t.n).max().unwrap_or(0) == self.max_n
    }
}

/// The diagonal-emptiness bound: the largest `l` such that the class at
/// `(0, 0)` has dimension at least 2 while the candidate partner cells
/// `(2n - 1, n)` and `(1 - 2n, -n)` are empty for all `n < l`. Some
/// generator at `(0, 0)` must then pair with offset at least `l`.
pub fn lemma_diagonal_check(tab: &VerifiedTable) -> LemmaReport {
    let d00 = tab.dim(0, 0);
    let green = ((0, 0), d00);
    if d00 < 2 {
        return LemmaReport { value: 0, green, red: Vec::new() };
    }
    let (mu_min, mu_max) = tab.mu_range().expect("nonempty table");
    let cap = ((mu_max + 1).max(1 - mu_min) / 2).max(1) as u32;
    let mut value = 1u32;
    while value <= cap {
        let n = value as i32;
        if tab.dim(2 * n - 1, n) == 0 && tab.dim(1 - 2 * n, -n) == 0 {
            value += 1;
        } else {
            break;
        }
    }
    // Red cells: the checked empty cells that lie inside the populated
    // bounding box of the table.
    let (a_min, a_max) = tab.a_range().expect("nonempty table");
    let in_box = |(mu, a): (i32, i32)| mu_min <= mu && mu <= mu_max && a_min <= a && a <= a_max;
    let mut red = Vec::new();
    for n in 1..value as i32 {
        for cell in [(1 - 2 * n, -n), (2 * n - 1, n)] {
            if in_box(cell) {
                red.push(cell);
            }
        }
    }
    red.sort_unstable();
    LemmaReport { value, green, red }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub value: u32,
    /// The `(0, 0)` cell and its dimension.
    pub green: ((i32, i32), u64),
    /// Checked-empty cells inside the table's bounding box.
    pub red: Vec<(i32, i32)>,
}

/// Minimum over feasible pairings of the largest offset used, with a
/// canonical certificate. A lower bound for the maximal torsion order.
pub fn minmax_torsion_bound(tab: &VerifiedTable) -> Result<(u32, Pairing), TorsionError> {
    let problem = PairingProblem::from_table(tab);
    let bound = smallest_feasible_cap(&problem)?;
    let certificate = canonical_pairing(&problem, bound);
    Ok((bound, certificate))
}

fn smallest_feasible_cap(problem: &PairingProblem) -> Result<u32, TorsionError> {
    if problem.total_generators() <= 1 {
        return Ok(0);
    }
    let cap = problem.offset_cap();
    if !problem.feasible(cap) {
        return Err(TorsionError::Infeasible);
    }
    let (mut lo, mut hi) = (1u32, cap);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if problem.feasible(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Maximum over feasible pairings of the largest offset used. An upper
/// bound for the maximal torsion order.
pub fn maxmax_torsion_bound(tab: &VerifiedTable) -> Result<u32, TorsionError> {
    let problem = PairingProblem::from_table(tab);
    if problem.total_generators() <= 1 {
        return Ok(0);
    }
    let cap = problem.offset_cap();
    if !problem.feasible(cap) {
        return Err(TorsionError::Infeasible);
    }
    for n in (1..=cap).rev() {
        for t in problem.pair_types(cap) {
            if t.n != n {
                continue;
            }
            let reduced = problem.with_removed(&[(t, 1)]);
            if reduced.feasible(cap) {
                return Ok(n);
            }
        }
    }
    Ok(0)
}

/// Canonical certificate at offset bound `n_max`: pair types are taken in
/// `(n, lower)` order, each at the largest multiplicity that keeps the rest
/// completable.
fn canonical_pairing(problem: &PairingProblem, n_max: u32) -> Pairing {
    let mut committed: Vec<(PairType, u64)> = Vec::new();
    for t in problem.pair_types(n_max) {
        let current = problem.with_removed(&committed);
        let dims: BTreeMap<(i32, i32), u64> = current.cells.iter().copied().collect();
        let capacity = dims.get(&t.lower).copied().unwrap_or(0).min(
            dims.get(&t.upper).copied().unwrap_or(0),
        );
        if capacity == 0 {
            continue;
        }
        // Largest multiplicity keeping the remainder feasible; feasibility
        // is monotone in the multiplicity, so binary search applies.
        let (mut lo, mut hi) = (0u64, capacity);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            committed.push((t, mid));
            let ok = problem.with_removed(&committed).feasible(n_max);
            committed.pop();
            if ok {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        if lo > 0 {
            committed.push((t, lo));
        }
    }
    let rest = problem.with_removed(&committed);
    debug_assert_eq!(rest.total_generators(), 1, "exactly one generator stays free");
    let free = rest.cells.first().map(|&(c, _)| c).unwrap_or((0, 0));
    let max_n = committed.iter().map(|(t, _)| t.n).max().unwrap_or(0);
    Pairing { pairs: committed, free, max_n }
}

/// Certified bracket on the maximal torsion order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionInterval {
    pub lower: u32,
    /// `None` means no finite upper bound is known.
    pub upper: Option<u32>,
    pub provenance: IntervalProvenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalProvenance {
    pub lemma: LemmaReport,
    pub minmax: u32,
    pub maxmax: u32,
    pub external_upper: Option<u32>,
    pub certificate: Pairing,
}

/// Combines the diagonal bound, the pairing optimization, and an optional
/// externally known upper bound (for instance an unknotting bound).
pub fn torsion_interval(
    tab: &VerifiedTable,
    external_upper: Option<u32>,
) -> Result<TorsionInterval, TorsionError> {
    let lemma = lemma_diagonal_check(tab);
    let (minmax, certificate) = minmax_torsion_bound(tab)?;
    let maxmax = maxmax_torsion_bound(tab)?;
    let lower = lemma.value.max(minmax);
    let upper = maxmax.min(external_upper.unwrap_or(u32::MAX));
    if lower > upper {
        return Err(TorsionError::EmptyInterval { lower, upper });
    }
    Ok(TorsionInterval {
        lower,
        upper: Some(upper),
        provenance: IntervalProvenance { lemma, minmax, maxmax, external_upper, certificate },
    })
}
