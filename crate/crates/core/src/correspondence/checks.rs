use super::{validate_rep, Representation};
use crate::atiyah::{check_cocycle, cocycle::default_degree_bound, LieMap};
use crate::error::{Error, Result};
use crate::formal::{MultiIndex, Scalar};
use crate::lie::derived_series;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderReport {
    pub order: u32,
    pub rank: usize,
    /// `rank + 1`, or `1` for line bundles.
    pub bound: u32,
    pub bound_ok: bool,
    pub tight: bool,
    /// Coefficients `(i, I)` with `wt(I)` above the bound.
    pub violations: Vec<(usize, MultiIndex)>,
}

/// Order of a Lie map against the bound `rank + 1` (`1` when `rank = 1`).
/// The map must satisfy the cocycle identity.
pub fn check_order_bound(l: &LieMap) -> Result<OrderReport> {
    let report = check_cocycle(l, default_degree_bound(l));
    if let Some(w) = report.witnesses.first() {
        let (a, b) = w.labels();
        return Err(Error::CocycleFailure(format!("identity fails on ({a}, {b})")));
    }
    let bound = if l.rank() == 1 { 1 } else { l.rank() as u32 + 1 };
    let violations: Vec<(usize, MultiIndex)> = l
        .coeffs()
        .filter(|(_, idx, _)| idx.weight() > bound)
        .map(|(i, idx, _)| (i, idx.clone()))
        .collect();
    let order = l.order();
    Ok(OrderReport {
        order,
        rank: l.rank(),
        bound,
        bound_ok: violations.is_empty(),
        tight: order == bound,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightRow {
    pub weight: u32,
    /// All basis vectors of this circle weight act by zero.
    pub vanishes: bool,
    /// `[ρ(ν), ρ(η)] = w ρ(η)` for every basis vector `η` of this weight.
    pub eigen_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma21Report {
    pub rank: usize,
    pub trunc: u32,
    /// Weights from here on are expected to act by zero: `rank + 1`, or `1`
    /// for rank one.
    pub vanishing_from: u32,
    pub rows: Vec<WeightRow>,
    /// Expected vanishing observed.
    pub holds: bool,
    pub eigen_identity: bool,
    /// `ρ` kills the derived subalgebra `[g, g]`.
    pub kills_derived: bool,
}

/// Support of a representation by circle weight, with the `ad ρ(ν)`
/// eigenvalue diagnostic.
///
/// Requires a valid representation on `g_d^N` with `N >= rank + 1`, so that
/// the expected vanishing range is visible.
pub fn check_lemma21(rep: &Representation) -> Result<Lemma21Report> {
    let alg = rep.algebra();
    let rank = rep.rank();
    if (alg.trunc() as usize) < rank + 1 {
        return Err(Error::TruncationTooSmall {
            trunc: alg.trunc(),
            detail: format!("need truncation at least rank + 1 = {}", rank + 1),
        });
    }
    if let Some(w) = validate_rep(rep).witnesses.first() {
        return Err(Error::InvalidRepresentation(format!(
            "bracket not preserved on ({}, {})",
            alg.symbol(w.a).label(),
            alg.symbol(w.b).label()
        )));
    }
    let nu = rep.euler_image();
    let rows: Vec<WeightRow> = (0..=alg.trunc())
        .map(|w| {
            let ks: Vec<usize> = alg.indices_of_weight(w).collect();
            let vanishes = ks.iter().all(|&k| rep.image(k).is_zero());
            let factor = Scalar::from_int(i64::from(w));
            let eigen_ok = ks.iter().all(|&k| {
                let img = rep.image(k);
                nu.commutator(img) == img.scale(&factor)
            });
            WeightRow { weight: w, vanishes, eigen_ok }
        })
        .collect();
    let vanishing_from = if rank == 1 { 1 } else { rank as u32 + 1 };
    let holds = rows.iter().filter(|r| r.weight >= vanishing_from).all(|r| r.vanishes);
    let eigen_identity = rows.iter().all(|r| r.eigen_ok);
    let kills_derived = derived_series(alg, 1).basis().all(|v| rep.image_of(v).is_zero());
    Ok(Lemma21Report { rank, trunc: alg.trunc(), vanishing_from, rows, holds, eigen_identity, kills_derived })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atiyah::MatrixPoly;
    use crate::formal::{sl2_triple, Poly, ScalarMatrix};
    use crate::lie::build_algebra;
    use std::sync::Arc;

    fn sl2_rep_on(trunc: u32) -> Representation {
        let (h, e, _) = sl2_triple();
        let alg = Arc::new(build_algebra(1, 2).unwrap());
        Representation::from_images(alg, 2, [(0, h), (2, e.scale(&Scalar::from_int(6)))])
            .unwrap()
            .extend_to(trunc)
            .unwrap()
    }

    #[test]
    fn sl2_lemma21() {
        let rep = sl2_rep_on(3);
        let report = check_lemma21(&rep).unwrap();
        assert!(report.holds && report.eigen_identity);
        assert_eq!(report.vanishing_from, 3);
        let vanish: Vec<bool> = report.rows.iter().map(|r| r.vanishes).collect();
        assert_eq!(vanish, [false, true, false, true]);
        let (h, e, _) = sl2_triple();
        assert_eq!(rep.euler_image(), h);
        let top = rep.image(2);
        assert_eq!(h.commutator(top), top.scale(&Scalar::from_int(2)));
        assert_eq!(top, &e.scale(&Scalar::from_int(6)));
    }

    #[test]
    fn lemma21_preconditions() {
        assert!(matches!(check_lemma21(&sl2_rep_on(2)), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn characters_kill_positive_weights() {
        let alg = Arc::new(build_algebra(2, 2).unwrap());
        let lambda = Scalar::from_ratio(7, 3);
        let mut rep = Representation::zero(alg.clone(), 1);
        for k in alg.euler().keys() {
            rep.set_image(*k, ScalarMatrix::identity(1).scale(&lambda)).unwrap();
        }
        let report = check_lemma21(&rep).unwrap();
        assert!(report.holds && report.kills_derived && report.eigen_identity);
        assert_eq!(report.vanishing_from, 1);
    }

    #[test]
    fn order_bounds() {
        let (h, e, _) = sl2_triple();
        let sl2 = LieMap::zero(1, 2)
            .with_coeff(0, MultiIndex::new(vec![1]), MatrixPoly::constant(1, &h))
            .unwrap()
            .with_coeff(0, MultiIndex::new(vec![3]), MatrixPoly::constant(1, &e))
            .unwrap();
        let r = check_order_bound(&sl2).unwrap();
        assert_eq!((r.order, r.rank, r.bound, r.bound_ok, r.tight), (3, 2, 3, true, true));

        let density = LieMap::zero(1, 1)
            .with_coeff(0, MultiIndex::new(vec![1]), MatrixPoly::identity(1, 1))
            .unwrap();
        let r = check_order_bound(&density).unwrap();
        assert_eq!((r.order, r.bound, r.tight), (1, 1, true));

        let bad = LieMap::zero(1, 1)
            .with_coeff(0, MultiIndex::new(vec![2]), MatrixPoly::scalar_function(&Poly::var(1, 0), 1))
            .unwrap();
        assert!(matches!(check_order_bound(&bad), Err(Error::CocycleFailure(_))));
    }
}
