//! Differential testing of the flow-based pairing feasibility against the
//! brute-force oracle, plus the bound-dominance invariants on the bundled
//! tables.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use gridfloer::data;
use gridfloer::grid::homology::{tilde_homology, tilde_to_hat};
use gridfloer::grid::GridDiagram;
use gridfloer::torsion::{
    lemma_diagonal_check, maxmax_torsion_bound, minmax_torsion_bound, oracle, PairingProblem,
};

/// All valid knot grids of a given size.
fn all_knot_grids(n: usize) -> Vec<GridDiagram> {
    let perms = permutations(n);
    let mut out = Vec::new();
    for xs in &perms {
        for os in &perms {
            if let Ok(g) = GridDiagram::new(xs, os) {
                out.push(g);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (1..=n).collect(), &mut out);
    out
}

fn assert_flow_matches_oracle(problem: &PairingProblem) {
    let cap = problem.offset_cap();
    for n_max in 0..=cap + 1 {
        assert_eq!(
            problem.feasible(n_max),
            oracle::feasible(problem.cells(), n_max),
            "mismatch at n_max = {n_max} on {:?}",
            problem.cells()
        );
    }
}

#[test]
fn small_grids_agree_with_oracle() {
    let mut grids = 0;
    for n in 2..=4 {
        for g in all_knot_grids(n) {
            grids += 1;
            let hat = tilde_to_hat(&tilde_homology(&g).unwrap()).unwrap();
            // Grids this small can only present the unknot.
            assert_eq!(hat.cells(), vec![((0, 0), 1)]);
            assert_flow_matches_oracle(&PairingProblem::new(hat.cells()));
        }
    }
    // 2 + 12 + 144 valid grids across the three sizes.
    assert_eq!(grids, 158);
}

#[test]
fn random_tables_agree_with_oracle() {
    let mut rng = StdRng::seed_from_u64(0x9d2c_5681);
    let mut nontrivial = 0;
    for _ in 0..100 {
        let problem = random_problem(&mut rng, 9);
        if problem.total_generators() > 1 {
            nontrivial += 1;
        }
        assert_flow_matches_oracle(&problem);
    }
    assert!(nontrivial > 80);
}

fn random_problem(rng: &mut StdRng, max_total: u64) -> PairingProblem {
    let cells = rng.gen_range(1..=5);
    let mut out: Vec<((i32, i32), u64)> = Vec::new();
    let mut total = 0;
    for _ in 0..cells {
        let mu = rng.gen_range(-4..=4);
        let a = rng.gen_range(-3..=3);
        let dim = rng.gen_range(1..=3u64);
        let dim = dim.min(max_total - total);
        if dim == 0 {
            break;
        }
        total += dim;
        out.push(((mu, a), dim));
    }
    PairingProblem::new(out)
}

#[test]
fn bundled_tables_dominance_and_validity() {
    for ell in 1..=6usize {
        let tab = data::mm_table(ell).unwrap();
        let lemma = lemma_diagonal_check(&tab);
        let (minmax, cert) = minmax_torsion_bound(&tab).unwrap();
        let maxmax = maxmax_torsion_bound(&tab).unwrap();
        assert_eq!(lemma.value, ell as u32);
        assert!(minmax >= lemma.value, "MM{ell}: optimizer weaker than the diagonal bound");
        assert!(minmax <= maxmax, "MM{ell}: crossed bounds");
        assert!(cert.validate(&PairingProblem::from_table(&tab)), "MM{ell}: bad certificate");
        assert_eq!(cert.max_n, minmax, "MM{ell}: certificate does not realize the bound");
    }
}

#[test]
fn exhaustive_minmax_matches_on_mm1_and_mm2() {
    for ell in 1..=2usize {
        let tab = data::mm_table(ell).unwrap();
        let problem = PairingProblem::from_table(&tab);
        let (minmax, _) = minmax_torsion_bound(&tab).unwrap();
        let oracle_minmax = (1..=problem.offset_cap())
            .find(|&n| oracle::feasible(problem.cells(), n))
            .unwrap();
        assert_eq!(minmax, oracle_minmax);
        assert_eq!(minmax, ell as u32);
    }
}

#[test]
fn scaling_never_decreases_minmax() {
    // Doubling all dimensions and adding one generator at (0, 0) keeps any
    // feasible sub-pairing available, so the min-max bound cannot drop.
    // The scaled problem is infeasible whenever the extra generator has no
    // partner slack; those cases are skipped, so the generator draws cells
    // from the well-connected diagonals around (0, 0).
    let candidates: [(i32, i32); 8] =
        [(0, 0), (1, 1), (-1, -1), (3, 2), (-3, -2), (2, 1), (-2, -1), (4, 3)];
    let mut rng = StdRng::seed_from_u64(0x51ef_aa01);
    let mut compared = 0;
    for _ in 0..200 {
        let mut cells: Vec<((i32, i32), u64)> = candidates
            .iter()
            .filter_map(|&c| {
                let d = rng.gen_range(0..=3u64);
                (d > 0).then_some((c, d))
            })
            .collect();
        let total: u64 = cells.iter().map(|&(_, d)| d).sum();
        if total.is_multiple_of(2) {
            cells.push(((0, 0), 1));
        }
        let problem = PairingProblem::new(cells);
        let Ok(base) = problem.minmax() else { continue };
        let mut scaled_cells: Vec<((i32, i32), u64)> =
            problem.cells().iter().map(|&(c, d)| (c, 2 * d)).collect();
        scaled_cells.push(((0, 0), 1));
        let scaled = PairingProblem::new(scaled_cells);
        let Ok(scaled_minmax) = scaled.minmax() else { continue };
        compared += 1;
        assert!(
            scaled_minmax >= base,
            "scaling dropped minmax from {base} to {scaled_minmax} on {:?}",
            problem.cells()
        );
    }
    assert!(compared > 10, "only {compared} feasible scaled instances");
}

#[test]
fn mm_tables_scale_monotonically() {
    for ell in 1..=3usize {
        let tab = data::mm_table(ell).unwrap();
        let problem = PairingProblem::from_table(&tab);
        let base = problem.minmax().unwrap();
        let mut scaled_cells: Vec<((i32, i32), u64)> =
            problem.cells().iter().map(|&(c, d)| (c, 2 * d)).collect();
        scaled_cells.push(((0, 0), 1));
        let scaled = PairingProblem::new(scaled_cells);
        if let Ok(scaled_minmax) = scaled.minmax() {
            assert!(scaled_minmax >= base);
        }
    }
}
