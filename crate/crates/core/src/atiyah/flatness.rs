//! Flatness of the connection part and of the higher coefficients, and
//! gauge transformations.
//!
//! Specialising the cocycle identity to `η₀ = ∂_i` and `η₁ = f ∂_j` and
//! comparing coefficients of `∂^J f` gives, with the bracket convention of
//! [`super::AtiyahElement::bracket`]:
//!
//! * `J = 0`: `∂_i A^j_0 − ∂_j A^i_0 + [A^i_0, A^j_0] = 0`, flatness of
//!   `∇ = d + A_0`;
//! * `wt(J) > 0`: `∂_i A^j_J + [A^i_0, A^j_J] = 0`, i.e. `A^j_J` is a flat
//!   section of the adjoint connection.
//!
//! A gauge change by a frame `g` sends `L̃(η)` to `g L̃(η) g⁻¹ − η(g) g⁻¹`.

use std::collections::BTreeMap;

use super::{LieMap, MatrixPoly};
use crate::error::{Error, Result};
use crate::formal::MultiIndex;

/// `F_{ij} = ∂_i A^j − ∂_j A^i + [A^i, A^j]` for every `i < j` (0-based).
pub fn curvature(connection: &[MatrixPoly]) -> BTreeMap<(usize, usize), MatrixPoly> {
    let d = connection.len();
    let mut out = BTreeMap::new();
    for i in 0..d {
        for j in i + 1..d {
            let f = connection[j]
                .partial(i)
                .sub(&connection[i].partial(j))
                .add(&connection[i].commutator(&connection[j]));
            out.insert((i, j), f);
        }
    }
    out
}

pub fn is_flat(connection: &[MatrixPoly]) -> bool {
    curvature(connection).values().all(MatrixPoly::is_zero)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessWitness {
    /// Differentiation direction `i`.
    pub i: usize,
    /// Coefficient `A^j_J`.
    pub j: usize,
    pub index: MultiIndex,
    /// `∂_i A^j_J + [A^i_0, A^j_J]`.
    pub defect: MatrixPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessReport {
    pub holds: bool,
    pub witnesses: Vec<FlatnessWitness>,
    /// Number of `(i, j, J)` equations checked.
    pub checked: usize,
    pub connection_trivial: bool,
    /// Every coefficient with `wt(J) >= 1` is a constant matrix.
    pub higher_constant: bool,
}

/// Checks the adjoint flatness equations for every stored coefficient of
/// positive weight.
pub fn check_higher_flatness(l: &LieMap) -> FlatnessReport {
    let a0 = l.connection_part();
    let mut witnesses = Vec::new();
    let mut checked = 0;
    let mut higher_constant = true;
    for (j, idx, a) in l.coeffs() {
        if idx.is_zero() {
            continue;
        }
        higher_constant &= a.is_constant();
        for (i, conn) in a0.iter().enumerate() {
            checked += 1;
            let defect = a.partial(i).add(&conn.commutator(a));
            if !defect.is_zero() {
                witnesses.push(FlatnessWitness { i, j, index: idx.clone(), defect });
            }
        }
    }
    FlatnessReport {
        holds: witnesses.is_empty(),
        witnesses,
        checked,
        connection_trivial: l.has_trivial_connection(),
        higher_constant,
    }
}

/// Gauge change by the frame `g`, with `g⁻¹` expanded to weight `cutoff`.
///
/// Coefficients of positive weight are conjugated, `A^i_I ↦ g A^i_I g⁻¹`;
/// the connection part also picks up `−(∂_i g) g⁻¹`. All results are
/// truncated at `cutoff`. Because the connection term differentiates `g`,
/// the result is reliable on weights below `cutoff` when `g⁻¹` is not a
/// polynomial.
pub fn gauge_transform(l: &LieMap, g: &MatrixPoly, cutoff: u32) -> Result<LieMap> {
    if g.dim() != l.dim() {
        return Err(Error::DimensionMismatch { expected: l.dim(), found: g.dim() });
    }
    if g.rank() != l.rank() {
        return Err(Error::RankMismatch { expected: l.rank(), found: g.rank() });
    }
    let g_inv = g.inverse_series(cutoff)?;
    let mut out = l.map_coeffs(|_, _, a| g.mul_truncated(&a.mul_truncated(&g_inv, cutoff), cutoff));
    let zero_idx = MultiIndex::zero(l.dim());
    for i in 0..l.dim() {
        let shift = g.partial(i).mul_truncated(&g_inv, cutoff);
        if !shift.is_zero() {
            out.add_coeff(i, zero_idx.clone(), shift.scale(&-crate::formal::Scalar::from_int(1)))?;
        }
    }
    Ok(out)
}
