//! The non-abelian cocycle identity
//!
//! ```text
//! L̃([η₀, η₁]) = η₀(L̃(η₁)) − η₁(L̃(η₀)) + [L̃(η₀), L̃(η₁)]
//! ```
//!
//! Both sides are bilinear over constants in `(η₀, η₁)`, so checking every
//! ordered pair of monomial fields `z^I ∂_i` with `wt(I) <= degree_bound`
//! certifies the identity on all polynomial fields of that degree.

use super::{LieMap, MatrixPoly};
use crate::error::Result;
use crate::formal::{monomial_label, MultiIndex, Scalar, VectorField};

/// A monomial pair on which the identity fails, with `lhs − rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleWitness {
    pub eta0: (MultiIndex, usize),
    pub eta1: (MultiIndex, usize),
    pub difference: MatrixPoly,
}

impl CocycleWitness {
    pub fn labels(&self) -> (String, String) {
        (monomial_label(&self.eta0.0, self.eta0.1), monomial_label(&self.eta1.0, self.eta1.1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub holds: bool,
    /// In enumeration order of the pairs.
    pub witnesses: Vec<CocycleWitness>,
    pub checked_pairs: usize,
    pub degree_bound: u32,
    /// When set, only terms of weight below this were compared.
    pub exact_below: Option<u32>,
}

/// `lhs − rhs` of the cocycle identity for one pair of fields.
pub fn cocycle_defect(l: &LieMap, eta0: &VectorField, eta1: &VectorField) -> Result<MatrixPoly> {
    let l0 = l.apply(eta0)?;
    let l1 = l.apply(eta1)?;
    defect_with(l, eta0, eta1, &l0, &l1)
}

fn defect_with(
    l: &LieMap,
    eta0: &VectorField,
    eta1: &VectorField,
    l0: &MatrixPoly,
    l1: &MatrixPoly,
) -> Result<MatrixPoly> {
    let lhs = l.apply(&eta0.bracket(eta1)?)?;
    let rhs = l1.derive(eta0)?.sub(&l0.derive(eta1)?).add(&l0.commutator(l1));
    Ok(lhs.sub(&rhs))
}

/// The defect through weight `top` only. Terms of `L̃(η)` above `top + 1`
/// cannot reach weight `top` after one derivative, so they are dropped first.
fn defect_through(
    l: &LieMap,
    eta0: &VectorField,
    eta1: &VectorField,
    l0: &MatrixPoly,
    l1: &MatrixPoly,
    top: u32,
) -> Result<MatrixPoly> {
    let (l0, l1) = (l0.truncate(top + 1), l1.truncate(top + 1));
    let lhs = l.apply(&eta0.bracket(eta1)?)?.truncate(top);
    let comm = l0.mul_truncated(&l1, top).sub(&l1.mul_truncated(&l0, top));
    let rhs = l1.derive(eta0)?.sub(&l0.derive(eta1)?).truncate(top).add(&comm);
    Ok(lhs.sub(&rhs))
}

/// Monomial fields `z^I ∂_i` with `wt(I) <= degree_bound`, ordered by `(wt(I), I, i)`.
pub fn monomial_fields(dim: usize, degree_bound: u32) -> Vec<(MultiIndex, usize)> {
    MultiIndex::up_to_weight(dim, 0, degree_bound)
        .into_iter()
        .flat_map(|idx| (0..dim).map(move |i| (idx.clone(), i)))
        .collect()
}

/// Exact check on all ordered monomial pairs up to `degree_bound`.
///
/// The certificate covers the map only when `degree_bound >= order(L) + 1`;
/// the customary choice is `order(L) + 2`.
pub fn check_cocycle(l: &LieMap, degree_bound: u32) -> CocycleReport {
    run(l, degree_bound, None)
}

/// Like [`check_cocycle`] but ignores terms of weight `>= exact_below` in the
/// defect. Used for maps that are only known modulo a weight cutoff (after a
/// gauge transformation with a truncated inverse frame).
pub fn check_cocycle_below(l: &LieMap, degree_bound: u32, exact_below: u32) -> CocycleReport {
    run(l, degree_bound, Some(exact_below))
}

pub fn default_degree_bound(l: &LieMap) -> u32 {
    l.order() + 2
}

fn run(l: &LieMap, degree_bound: u32, exact_below: Option<u32>) -> CocycleReport {
    let monos = monomial_fields(l.dim(), degree_bound);
    let fields: Vec<VectorField> = monos
        .iter()
        .map(|(idx, i)| VectorField::monomial(idx.clone(), *i, Scalar::from_int(1)))
        .collect();
    let images: Vec<MatrixPoly> = fields.iter().map(|f| l.apply(f).expect("dimension")).collect();

    let mut witnesses = Vec::new();
    let mut checked = 0;
    for a in 0..fields.len() {
        for b in 0..fields.len() {
            checked += 1;
            if a == b {
                continue;
            }
            let diff = match exact_below {
                None => defect_with(l, &fields[a], &fields[b], &images[a], &images[b]),
                Some(0) => Ok(MatrixPoly::zero(l.dim(), l.rank())),
                Some(w) => defect_through(l, &fields[a], &fields[b], &images[a], &images[b], w - 1),
            }
            .expect("dimension");
            if !diff.is_zero() {
                witnesses.push(CocycleWitness { eta0: monos[a].clone(), eta1: monos[b].clone(), difference: diff });
            }
        }
    }
    CocycleReport { holds: witnesses.is_empty(), witnesses, checked_pairs: checked, degree_bound, exact_below }
}
