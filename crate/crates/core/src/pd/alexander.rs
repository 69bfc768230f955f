//! Alexander polynomial from a PD code.
//!
//! The computation runs through the Wirtinger presentation: arcs of the
//! diagram are the generators, each crossing contributes one relation, and
//! the Fox derivatives of the relations assemble the Alexander matrix over
//! Z[t, 1/t]. Any maximal minor determinant equals the Alexander polynomial
//! up to a unit; the result is normalized so that the exponent range is
//! symmetric and the value at t = 1 is +1.
//!
//! Determinants are computed with fraction-free Bareiss elimination over
//! Z[t] using exact big-integer arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{OverDir, PDCode, PdError};
use crate::poly::LaurentPoly;

/// Computes the normalized Alexander polynomial of a knot diagram.
///
/// The result satisfies `delta(1) = 1` and has a palindromic coefficient
/// list; the 0-crossing unknot yields the constant 1.
pub fn alexander_polynomial(pd: &PDCode) -> Result<LaurentPoly, PdError> {
    let n = pd.crossing_count();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }

    // Arcs: edges merged across over-strand passes.
    let arcs = ArcIndex::build(pd);
    debug_assert_eq!(arcs.count(), n);

    // Alexander matrix: rows = crossings, columns = arcs. The Fox derivative
    // rows are scaled by units so that all entries live in Z[t]:
    //   positive crossing: over: 1 - t, under-in: t, under-out: -1
    //   negative crossing: over: t - 1, under-in: 1, under-out: -t
    let t = ZPoly::t();
    let one = ZPoly::one();
    let mut matrix: Vec<Vec<ZPoly>> = vec![vec![ZPoly::zero(); n]; n];
    for (row, c) in pd.crossings().iter().enumerate() {
        let over = arcs.arc_of(c.over_in());
        let uin = arcs.arc_of(c.under_in());
        let uout = arcs.arc_of(c.under_out());
        match c.over_dir() {
            OverDir::DToB => {
                matrix[row][over] = matrix[row][over].add(&one.sub(&t));
                matrix[row][uin] = matrix[row][uin].add(&t);
                matrix[row][uout] = matrix[row][uout].sub(&one);
            }
            OverDir::BToD => {
                matrix[row][over] = matrix[row][over].add(&t.sub(&one));
                matrix[row][uin] = matrix[row][uin].add(&one);
                matrix[row][uout] = matrix[row][uout].sub(&t);
            }
        }
    }

    // Delete the last row and column, then take the determinant.
    let m = n - 1;
    let mut minor: Vec<Vec<ZPoly>> = matrix
        .into_iter()
        .take(m)
        .map(|row| row.into_iter().take(m).collect())
        .collect();
    let det = bareiss_det(&mut minor)
        .ok_or_else(|| PdError::AlexanderInternal("exact division failed".into()))?;

    normalize(det)
}

/// Symmetrizes the exponent range and fixes the sign so that `p(1) = 1`.
fn normalize(det: ZPoly) -> Result<LaurentPoly, PdError> {
    let mut p = LaurentPoly::zero();
    for (e, c) in det.0.iter().enumerate() {
        p.add_term(e as i64, c.clone());
    }
    if p.is_zero() {
        return Err(PdError::AlexanderInternal("zero determinant".into()));
    }
    let (min, max) = (p.min_exp().unwrap(), p.max_exp().unwrap());
    if (min + max).rem_euclid(2) != 0 {
        return Err(PdError::AlexanderInternal(
            "exponent span cannot be symmetrized".into(),
        ));
    }
    let mut p = p.shifted(-(min + max) / 2);
    let at_one = p.eval_at_one();
    if at_one == BigInt::from(-1) {
        p = p.neg();
    } else if !at_one.is_one() {
        return Err(PdError::AlexanderInternal(format!(
            "determinant evaluates to {at_one} at t = 1"
        )));
    }
    if !p.is_palindromic() {
        return Err(PdError::AlexanderInternal(
            "normalized polynomial is not palindromic".into(),
        ));
    }
    Ok(p)
}

/// Union-find over edges; edges joined when the over-strand passes through.
struct ArcIndex {
    arc_of_edge: BTreeMap<u32, usize>,
    arcs: usize,
}

impl ArcIndex {
    fn build(pd: &PDCode) -> Self {
        let edges: Vec<u32> = pd.edges().collect();
        let pos: BTreeMap<u32, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut parent: Vec<usize> = (0..edges.len()).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for c in pd.crossings() {
            let a = find(&mut parent, pos[&c.over_in()]);
            let b = find(&mut parent, pos[&c.over_out()]);
            parent[a.max(b)] = a.min(b);
        }
        // Number arcs by smallest contained edge position.
        let mut arc_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut arc_of_edge = BTreeMap::new();
        for (i, &e) in edges.iter().enumerate() {
            let root = find(&mut parent, i);
            let next = arc_ids.len();
            let id = *arc_ids.entry(root).or_insert(next);
            arc_of_edge.insert(e, id);
        }
        ArcIndex { arc_of_edge, arcs: arc_ids.len() }
    }

    fn arc_of(&self, e: u32) -> usize {
        self.arc_of_edge[&e]
    }

    fn count(&self) -> usize {
        self.arcs
    }
}

/// Dense polynomial over Z with big-integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ZPoly(Vec<BigInt>);

impl ZPoly {
    fn zero() -> Self {
        ZPoly(Vec::new())
    }

    fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    fn t() -> Self {
        ZPoly(vec![BigInt::zero(), BigInt::one()])
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.0.len().max(other.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        ZPoly(out).trim()
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.0.len().max(other.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] -= c;
        }
        ZPoly(out).trim()
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly(out).trim()
    }

    /// Exact division; returns `None` when the divisor does not divide.
    fn div_exact(&self, den: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if den.is_zero() || self.0.len() < den.0.len() {
            return None;
        }
        let mut rem = self.0.clone();
        let dl = den.0.len();
        let lead = &den.0[dl - 1];
        let qlen = rem.len() - dl + 1;
        let mut quo = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + dl - 1].clone();
            if top.is_zero() {
                continue;
            }
            if (&top % lead) != BigInt::zero() {
                return None;
            }
            let q = &top / lead;
            for (i, d) in den.0.iter().enumerate() {
                rem[k + i] -= &q * d;
            }
            quo[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ZPoly(quo).trim())
    }
}

/// Fraction-free Bareiss determinant over Z[t]. Returns `None` only when an
/// intermediate exact division fails, which cannot happen for matrices over
/// an integral domain unless the input is corrupted.
fn bareiss_det(m: &mut [Vec<ZPoly>]) -> Option<ZPoly> {
    let n = m.len();
    if n == 0 {
        return Some(ZPoly::one());
    }
    let mut sign_flip = false;
    let mut prev = ZPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Some(ZPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev)?;
            }
            m[i][k] = ZPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let mut det = m[n - 1][n - 1].clone();
    if sign_flip {
        det = ZPoly::zero().sub(&det);
    }
    Some(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pd::parse_pd;

    fn poly(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn unknot_is_one() {
        assert_eq!(alexander_polynomial(&PDCode::unknot()).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn kink_is_one() {
        let pd = PDCode::new(&[[1, 2, 2, 1]], None).unwrap();
        assert_eq!(alexander_polynomial(&pd).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn trefoil() {
        let pd = parse_pd("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n").unwrap();
        assert_eq!(
            alexander_polynomial(&pd).unwrap(),
            poly(&[(-1, 1), (0, -1), (1, 1)])
        );
    }

    #[test]
    fn figure_eight() {
        let pd = parse_pd("X 4 2 5 1\nX 8 6 1 5\nX 6 3 7 4\nX 2 7 3 8\n").unwrap();
        assert_eq!(
            alexander_polynomial(&pd).unwrap(),
            poly(&[(-1, -1), (0, 3), (1, -1)])
        );
    }

    #[test]
    fn invariant_under_relabeling() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;

        let pd = parse_pd("X 4 2 5 1\nX 8 6 1 5\nX 6 3 7 4\nX 2 7 3 8\n").unwrap();
        let base = alexander_polynomial(&pd).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(40);
        for _ in 0..8 {
            let mut images: Vec<u32> = (101..=108).collect();
            images.shuffle(&mut rng);
            let map: std::collections::BTreeMap<u32, u32> =
                (1..=8).zip(images).collect();
            let relabeled = pd.relabeled(&map).unwrap();
            assert_eq!(alexander_polynomial(&relabeled).unwrap(), base);
        }
    }

    #[test]
    fn zpoly_div_exact() {
        let a = ZPoly(vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)]); // t^2 - 1
        let b = ZPoly(vec![BigInt::from(1), BigInt::from(1)]); // t + 1
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, ZPoly(vec![BigInt::from(-1), BigInt::from(1)]));
        let c = ZPoly(vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]);
        assert!(c.div_exact(&b).is_none());
    }
}
