//! Cross-checks between independent computation routes: Fox-calculus
//! Alexander polynomials against graded Euler characteristics of computed
//! homology, against a reduced-Burau oracle, and against twist insertion
//! along genuinely planar disk transversals cut from grid drawings.

use gridfloer::data;
use gridfloer::grid::draw::draw;
use gridfloer::grid::homology::{tilde_homology, tilde_to_hat};
use gridfloer::grid::parse_grid;
use gridfloer::hfk::euler_characteristic;
use gridfloer::pd::alexander::alexander_polynomial;
use gridfloer::pd::parse_pd;
use gridfloer::pd::twist::{insert_full_twist, insert_full_twist_with_undo, TwistSign, TwistSite};
use gridfloer::poly::LaurentPoly;

fn bundled(name: &str) -> &'static str {
    data::bundled(name).expect("bundled file")
}

fn fig8_poly() -> LaurentPoly {
    LaurentPoly::from_pairs([(-1, -1), (0, 3), (1, -1)])
}

fn trefoil_poly() -> LaurentPoly {
    LaurentPoly::from_pairs([(-1, 1), (0, -1), (1, 1)])
}

#[test]
fn figure_eight_pd_matches_mm1_euler_characteristic() {
    let pd = parse_pd(bundled("figure8.pd")).unwrap();
    let delta = alexander_polynomial(&pd).unwrap();
    let chi = euler_characteristic(&data::mm_table(1).unwrap());
    assert_eq!(delta, chi);
    assert_eq!(delta, fig8_poly());
}

#[test]
fn trefoil_pd_matches_grid_homology_euler_characteristic() {
    let pd = parse_pd(bundled("trefoil.pd")).unwrap();
    let delta = alexander_polynomial(&pd).unwrap();
    let grid = parse_grid(bundled("trefoil_5.grd")).unwrap();
    let hat = tilde_to_hat(&tilde_homology(&grid).unwrap()).unwrap();
    assert_eq!(delta, euler_characteristic(&hat));
    assert_eq!(delta, trefoil_poly());
}

#[test]
fn bundled_figure_eight_grid_reproduces_the_mm1_table() {
    let grid = parse_grid(bundled("figure8_6.grd")).unwrap();
    let tilde = tilde_homology(&grid).unwrap();
    assert_eq!(tilde.total_dim(), 5 * (1 << 5));
    // The blocked factor spreads the Alexander support downward by n - 1.
    let a_values: Vec<i32> = tilde.dims.keys().map(|&(_, a)| a).collect();
    assert_eq!(a_values.iter().min(), Some(&-6));
    assert_eq!(a_values.iter().max(), Some(&1));
    let hat = tilde_to_hat(&tilde).unwrap();
    assert_eq!(hat.cells(), data::mm_table(1).unwrap().cells());
    // Alexander-grading support of the hat table.
    assert_eq!(hat.a_range(), Some((-1, 1)));
}

#[test]
fn bundled_grid_draws_back_to_the_figure_eight() {
    let grid = parse_grid(bundled("figure8_6.grd")).unwrap();
    let d = draw(&grid).unwrap();
    assert_eq!(d.pd.crossing_count(), 4);
    assert_eq!(alexander_polynomial(&d.pd).unwrap(), fig8_poly());
}

/// Reduced-Burau oracle: for a braid word on 2 or 3 strands, the Alexander
/// polynomial of the closure satisfies
/// `det(rho(beta) - I) = unit * (1 + t + ... + t^(s-1)) * Delta`.
/// This route shares nothing with the Wirtinger/Fox implementation.
mod burau {
    use gridfloer::poly::LaurentPoly;

    type Mat = Vec<Vec<LaurentPoly>>;

    fn ident(s: usize) -> Mat {
        (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
                    .collect()
            })
            .collect()
    }

    fn mul(a: &Mat, b: &Mat) -> Mat {
        let s = a.len();
        let mut out = vec![vec![LaurentPoly::zero(); s]; s];
        for i in 0..s {
            for j in 0..s {
                for (k, bk) in b.iter().enumerate() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&bk[j]));
                }
            }
        }
        out
    }

    /// Reduced Burau matrices on 3 strands.
    fn gen3(g: i32) -> Mat {
        let t = LaurentPoly::monomial(1, 1);
        let tinv = LaurentPoly::monomial(-1, 1);
        match g {
            1 => vec![
                vec![t.neg(), LaurentPoly::one()],
                vec![LaurentPoly::zero(), LaurentPoly::one()],
            ],
            -1 => vec![
                vec![tinv.neg(), tinv.clone()],
                vec![LaurentPoly::zero(), LaurentPoly::one()],
            ],
            2 => vec![
                vec![LaurentPoly::one(), LaurentPoly::zero()],
                vec![t.clone(), t.neg()],
            ],
            -2 => vec![
                vec![LaurentPoly::one(), LaurentPoly::zero()],
                vec![LaurentPoly::one(), tinv.neg()],
            ],
            _ => panic!("unsupported generator"),
        }
    }

    fn det2(m: &Mat) -> LaurentPoly {
        m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]))
    }

    /// Canonical form up to multiplication by `±t^k`: lowest exponent 0,
    /// lowest coefficient positive.
    fn canonical(p: &LaurentPoly) -> LaurentPoly {
        if p.is_zero() {
            return p.clone();
        }
        let min = p.min_exp().unwrap();
        let shifted = p.shifted(-min);
        if shifted.coeff(0) < 0.into() {
            shifted.neg()
        } else {
            shifted
        }
    }

    pub fn closure_matches(word: &[i32], strands: usize, delta: &LaurentPoly) {
        let dim = strands - 1;
        let mut m = ident(dim);
        for &g in word {
            let gm = if strands == 2 {
                match g {
                    1 => vec![vec![LaurentPoly::monomial(1, -1)]],
                    -1 => vec![vec![LaurentPoly::monomial(-1, -1)]],
                    _ => panic!("unsupported generator"),
                }
            } else {
                gen3(g)
            };
            m = mul(&m, &gm);
        }
        let mut diff = m;
        for (i, row) in diff.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                if i == j {
                    *entry = entry.sub(&LaurentPoly::one());
                }
            }
        }
        let det = if dim == 1 { diff[0][0].clone() } else { det2(&diff) };
        let cyclotomic = LaurentPoly::from_pairs((0..strands as i64).map(|k| (k, 1)));
        assert_eq!(canonical(&det), canonical(&delta.mul(&cyclotomic)));
    }
}

#[test]
fn burau_oracle_confirms_trefoil_and_figure_eight() {
    burau::closure_matches(&[1, 1, 1], 2, &trefoil_poly());
    burau::closure_matches(&[1, -2, 1, -2], 3, &fig8_poly());
    // The closure of a single generator is the unknot.
    burau::closure_matches(&[1], 2, &LaurentPoly::one());
}

#[test]
fn planar_wide_twists_cancel() {
    // Vertical lines through grid drawings are genuine disk transversals,
    // so inserting a full twist and then its inverse on the parallel disk
    // is undone by Reidemeister moves. The Alexander polynomial witnesses
    // this. Cuts where a single edge crosses the line twice cannot be
    // expressed as a site and are skipped.
    let mut tested_widths = Vec::new();
    for name in ["trefoil_5.grd", "figure8_6.grd"] {
        let grid = parse_grid(bundled(name)).unwrap();
        let drawing = draw(&grid).unwrap();
        let base = alexander_polynomial(&drawing.pd).unwrap();
        for gap in 0..grid.size() - 1 {
            let cut = drawing.vertical_cut(gap);
            for sign in [TwistSign::Right, TwistSign::Left] {
                let Ok(site) = TwistSite::new(cut.clone(), sign) else { continue };
                tested_widths.push(cut.len());
                let (twisted, undo) = insert_full_twist_with_undo(&drawing.pd, &site).unwrap();
                // The intermediate is a genuine knot diagram, so its
                // polynomial normalizes.
                let mid = alexander_polynomial(&twisted).unwrap();
                assert!(mid.is_palindromic());
                let untwisted = insert_full_twist(&twisted, &undo).unwrap();
                assert_eq!(
                    untwisted.crossing_count(),
                    drawing.pd.crossing_count() + 2 * cut.len() * (cut.len() - 1)
                );
                assert_eq!(alexander_polynomial(&untwisted).unwrap(), base);
            }
        }
    }
    assert!(tested_widths.contains(&4), "expected a width-4 cut, got {tested_widths:?}");
    assert!(tested_widths.contains(&6), "expected a width-6 cut, got {tested_widths:?}");
}

#[test]
fn euler_characteristic_of_mm2_recomputes() {
    let chi = euler_characteristic(&data::mm_table(2).unwrap());
    assert_eq!(chi, LaurentPoly::from_pairs([(-1, -2), (0, 5), (1, -2)]));
    assert_eq!(chi.eval_at_one(), 1.into());
}

#[test]
fn table_bounds_flow_into_the_fact_store() {
    use gridfloer::engine::{BoundKind, Fact, FactStore, KnotId};
    use gridfloer::torsion::torsion_interval;

    // Bounds computed from the bundled MM1 table feed the rule engine: the
    // figure-eight has torsion order exactly 1, so its unknotting number is
    // at least 1.
    let tab = data::mm_table(1).unwrap();
    let interval = torsion_interval(&tab, None).unwrap();
    assert_eq!((interval.lower, interval.upper), (1, Some(1)));

    let mut store = FactStore::new();
    let knot = KnotId::new("MM1");
    store
        .assert_fact(Fact::from_torsion_interval(knot.clone(), &interval))
        .unwrap();
    store.derive().unwrap();
    store.audit().unwrap();
    assert_eq!(store.query(&knot, BoundKind::UnknottingGe).unwrap().value, "1");
}
