//! Matrix-valued differential operators on the trivial bundle `O^r`.
//!
//! On a polydisc the Atiyah algebra of `O^r` is the semidirect product of
//! vector fields with `gl_r(O)`: an element `(η, M)` acts on sections by
//! `s ↦ η(s) + M s`. A splitting of the symbol map is then a map
//! `η ↦ (η, L̃(η))`, and `L̃` is written as the operator
//! `Σ_{i,I} A^i_I dz_i ∂^I`, so that `L̃(Σ f_i ∂_i) = Σ A^i_I ∂^I(f_i)`.
//! The splitting is a Lie map exactly when `L̃` satisfies the non-abelian
//! cocycle identity, checked in [`cocycle`].

pub mod cocycle;
pub mod flatness;
mod matrix_poly;

use std::collections::BTreeMap;

pub use cocycle::{check_cocycle, check_cocycle_below, cocycle_defect, CocycleReport, CocycleWitness};
pub use flatness::{
    check_higher_flatness, curvature, gauge_transform, is_flat, FlatnessReport, FlatnessWitness,
};
pub use matrix_poly::MatrixPoly;

use crate::error::{Error, Result};
use crate::formal::{MultiIndex, VectorField};

/// A section `(η, M)` of the Atiyah algebra of `O^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtiyahElement {
    pub field: VectorField,
    pub matrix: MatrixPoly,
}

impl AtiyahElement {
    pub fn new(field: VectorField, matrix: MatrixPoly) -> Result<Self> {
        if field.dim() != matrix.dim() {
            return Err(Error::DimensionMismatch { expected: field.dim(), found: matrix.dim() });
        }
        Ok(AtiyahElement { field, matrix })
    }

    /// The symbol map `(η, M) ↦ η`.
    pub fn symbol(&self) -> &VectorField {
        &self.field
    }

    /// `[(η₀, M₀), (η₁, M₁)] = ([η₀, η₁], η₀(M₁) − η₁(M₀) + [M₀, M₁])`.
    pub fn bracket(&self, other: &AtiyahElement) -> Result<AtiyahElement> {
        if self.matrix.rank() != other.matrix.rank() {
            return Err(Error::RankMismatch { expected: self.matrix.rank(), found: other.matrix.rank() });
        }
        let field = self.field.bracket(&other.field)?;
        let matrix = other
            .matrix
            .derive(&self.field)?
            .sub(&self.matrix.derive(&other.field)?)
            .add(&self.matrix.commutator(&other.matrix));
        Ok(AtiyahElement { field, matrix })
    }
}

/// Candidate Lie map `L̃ = Σ_{i,I} A^i_I dz_i ∂^I` (direction `i` is 0-based).
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieMap {
    dim: usize,
    rank: usize,
    coeffs: BTreeMap<(usize, MultiIndex), MatrixPoly>,
}

impl LieMap {
    pub fn zero(dim: usize, rank: usize) -> Self {
        LieMap { dim, rank, coeffs: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds `m` to the coefficient `A^i_I`.
    pub fn add_coeff(&mut self, i: usize, index: MultiIndex, m: MatrixPoly) -> Result<()> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange { index: i + 1, bound: self.dim });
        }
        if index.dim() != self.dim || m.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: index.dim().max(m.dim()) });
        }
        if m.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: m.rank() });
        }
        let key = (i, index);
        let sum = match self.coeffs.remove(&key) {
            Some(old) => old.add(&m),
            None => m,
        };
        if !sum.is_zero() {
            self.coeffs.insert(key, sum);
        }
        Ok(())
    }

    pub fn with_coeff(mut self, i: usize, index: MultiIndex, m: MatrixPoly) -> Result<Self> {
        self.add_coeff(i, index, m)?;
        Ok(self)
    }

    pub fn coeff(&self, i: usize, index: &MultiIndex) -> Option<&MatrixPoly> {
        self.coeffs.get(&(i, index.clone()))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &MultiIndex, &MatrixPoly)> {
        self.coeffs.iter().map(|((i, idx), m)| (*i, idx, m))
    }

    /// Highest `wt(I)` with a nonzero coefficient (0 for the zero map).
    pub fn order(&self) -> u32 {
        self.coeffs.keys().map(|(_, idx)| idx.weight()).max().unwrap_or(0)
    }

    /// `A_0 = (A^i_0)_i`, the connection part.
    pub fn connection_part(&self) -> Vec<MatrixPoly> {
        let zero_idx = MultiIndex::zero(self.dim);
        (0..self.dim)
            .map(|i| self.coeff(i, &zero_idx).cloned().unwrap_or_else(|| MatrixPoly::zero(self.dim, self.rank)))
            .collect()
    }

    pub fn has_trivial_connection(&self) -> bool {
        self.coeffs.keys().all(|(_, idx)| !idx.is_zero())
    }

    pub fn is_constant_coefficient(&self) -> bool {
        self.coeffs.values().all(MatrixPoly::is_constant)
    }

    /// Maximal polynomial degree among the coefficients.
    pub fn coefficient_degree(&self) -> u32 {
        self.coeffs.values().filter_map(MatrixPoly::degree).max().unwrap_or(0)
    }

    /// `L̃(η) = Σ A^i_I ∂^I(η_i)`; the Lie derivative on sections is `η + L̃(η)`.
    pub fn apply(&self, field: &VectorField) -> Result<MatrixPoly> {
        if field.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: field.dim() });
        }
        let mut out = MatrixPoly::zero(self.dim, self.rank);
        for ((i, idx), a) in &self.coeffs {
            let f = field.component(*i).partial_multi(idx);
            if !f.is_zero() {
                out = out.add(&a.mul_function(&f));
            }
        }
        Ok(out)
    }

    /// The Atiyah element `(η, L̃(η))`.
    pub fn lift(&self, field: &VectorField) -> Result<AtiyahElement> {
        Ok(AtiyahElement { field: field.clone(), matrix: self.apply(field)? })
    }

    pub fn map_coeffs(&self, f: impl Fn(usize, &MultiIndex, &MatrixPoly) -> MatrixPoly) -> LieMap {
        let mut out = LieMap::zero(self.dim, self.rank);
        for ((i, idx), m) in &self.coeffs {
            out.add_coeff(*i, idx.clone(), f(*i, idx, m)).expect("shape preserved");
        }
        out
    }

    pub fn truncate(&self, max_weight: u32) -> LieMap {
        self.map_coeffs(|_, _, m| m.truncate(max_weight))
    }
}
