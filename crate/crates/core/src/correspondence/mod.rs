//! Finite-dimensional representations of `g_d^N` and their relation to
//! constant-coefficient Lie maps.
//!
//! A Lie map restricted to fields vanishing at the origin and evaluated at
//! the origin is a representation: on `z^J ∂_j` it gives `J! A^j_J(0)`.
//! Conversely a representation yields the constant-coefficient map with
//! `A^j_J = ρ(z^J ∂_j) / J!` and trivial connection part.

mod checks;
mod library;

use std::sync::Arc;


pub use checks::{check_lemma21, check_order_bound, Lemma21Report, OrderReport, WeightRow};
pub use library::{example_library, standard_suite, Example, NamedExample};

use crate::atiyah::{check_cocycle, cocycle::default_degree_bound, LieMap, MatrixPoly};
use crate::error::{Error, Result};
use crate::formal::ScalarMatrix;
use crate::lie::{build_algebra, SparseVector, TruncatedLieAlgebra};

/// Assignment of an `r × r` matrix to each basis vector of `g_d^N`.
#[derive(Clone, Debug)]
pub struct Representation {
    algebra: Arc<TruncatedLieAlgebra>,
    rank: usize,
    images: Vec<ScalarMatrix>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.ambient() == other.algebra.ambient() && self.rank == other.rank && self.images == other.images
    }
}

impl Eq for Representation {}

impl Representation {
    pub fn zero(algebra: Arc<TruncatedLieAlgebra>, rank: usize) -> Self {
        let images = vec![ScalarMatrix::zero(rank); algebra.dim()];
        Representation { algebra, rank, images }
    }

    /// Images given for some basis indices; the rest are zero.
    pub fn from_images<I>(algebra: Arc<TruncatedLieAlgebra>, rank: usize, images: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, ScalarMatrix)>,
    {
        let mut rep = Representation::zero(algebra, rank);
        for (k, m) in images {
            rep.set_image(k, m)?;
        }
        Ok(rep)
    }

    pub fn set_image(&mut self, k: usize, m: ScalarMatrix) -> Result<()> {
        if k >= self.images.len() {
            return Err(Error::IndexOutOfRange { index: k + 1, bound: self.images.len() });
        }
        if m.size() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: m.size() });
        }
        self.images[k] = m;
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<TruncatedLieAlgebra> {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn image(&self, k: usize) -> &ScalarMatrix {
        &self.images[k]
    }

    pub fn images(&self) -> &[ScalarMatrix] {
        &self.images
    }

    /// Linear extension to an arbitrary element.
    pub fn image_of(&self, x: &SparseVector) -> ScalarMatrix {
        x.iter()
            .fold(ScalarMatrix::zero(self.rank), |acc, (&k, c)| acc.add(&self.images[k].scale(c)))
    }

    /// `ρ(ν)` for the Euler field.
    pub fn euler_image(&self) -> ScalarMatrix {
        self.image_of(&self.algebra.euler())
    }

    /// Pullback along `g_d^M → g_d^N` for `M >= N`: basis vectors of weight
    /// above `N` act by zero.
    pub fn extend_to(&self, trunc: u32) -> Result<Representation> {
        if trunc < self.algebra.trunc() {
            return Err(Error::TruncationTooSmall {
                trunc,
                detail: format!("cannot extend a representation of truncation {}", self.algebra.trunc()),
            });
        }
        let big = Arc::new(build_algebra(self.algebra.d(), trunc)?);
        let mut out = Representation::zero(big.clone(), self.rank);
        for (k, m) in self.images.iter().enumerate() {
            let t = big.index_of(self.algebra.symbol(k)).expect("smaller basis embeds");
            out.images[t] = m.clone();
        }
        Ok(out)
    }

    /// `x ↦ P ρ(x) P⁻¹`.
    pub fn conjugate(&self, p: &ScalarMatrix) -> Result<Representation> {
        if p.size() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: p.size() });
        }
        let p_inv = p.inverse()?;
        Ok(Representation {
            algebra: self.algebra.clone(),
            rank: self.rank,
            images: self.images.iter().map(|m| p.mul(m).mul(&p_inv)).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepWitness {
    pub a: usize,
    pub b: usize,
    /// `ρ([a, b]) − [ρ(a), ρ(b)]`.
    pub difference: ScalarMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepReport {
    pub holds: bool,
    pub witnesses: Vec<RepWitness>,
    /// Unordered basis pairs `a < b`; the remaining pairs follow by antisymmetry.
    pub checked_pairs: usize,
}

/// Checks `ρ([a, b]) = [ρ(a), ρ(b)]` on every pair of basis vectors.
pub fn validate_rep(rep: &Representation) -> RepReport {
    let alg = &rep.algebra;
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for a in 0..alg.dim() {
        for b in a + 1..alg.dim() {
            checked += 1;
            let lhs = alg
                .structure_constants(a, b)
                .into_iter()
                .fold(ScalarMatrix::zero(rep.rank), |acc, (c, v)| acc.add(&rep.images[c].scale(&v)));
            let rhs = rep.images[a].commutator(&rep.images[b]);
            let difference = lhs.sub(&rhs);
            if !difference.is_zero() {
                witnesses.push(RepWitness { a, b, difference });
            }
        }
    }
    RepReport { holds: witnesses.is_empty(), witnesses, checked_pairs: checked }
}

/// Constant-coefficient Lie map with `A^j_J = ρ(z^J ∂_j) / J!` and `A_0 = 0`.
pub fn rep_to_liemap(rep: &Representation) -> Result<LieMap> {
    let report = validate_rep(rep);
    if let Some(w) = report.witnesses.first() {
        return Err(Error::InvalidRepresentation(format!(
            "bracket not preserved on ({}, {})",
            rep.algebra.symbol(w.a).label(),
            rep.algebra.symbol(w.b).label()
        )));
    }
    let d = rep.algebra.d();
    let mut l = LieMap::zero(d, rep.rank);
    for (k, m) in rep.images.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        let s = rep.algebra.symbol(k);
        let inv_fact = s.index.factorial().inv().expect("factorial is nonzero");
        l.add_coeff(s.dir, s.index.clone(), MatrixPoly::constant(d, &m.scale(&inv_fact)))?;
    }
    Ok(l)
}

/// `ρ(z^J ∂_j) = J! A^j_J(0)` on the basis of `g_d^N`, without checking the
/// cocycle identity.
///
/// Fails if some coefficient of weight above `N + 1` is nonzero at the
/// origin, since the result would then not factor through `g_d^N`.
pub fn evaluate_at_origin(l: &LieMap, trunc: u32) -> Result<Representation> {
    let alg = Arc::new(build_algebra(l.dim(), trunc)?);
    let mut rep = Representation::zero(alg.clone(), l.rank());
    for (j, idx, a) in l.coeffs() {
        if idx.is_zero() {
            continue;
        }
        let value = a.eval_at_0();
        if value.is_zero() {
            continue;
        }
        if idx.weight() > trunc + 1 {
            return Err(Error::TruncationTooSmall {
                trunc,
                detail: format!("coefficient of weight {} is nonzero at the origin", idx.weight()),
            });
        }
        let k = alg
            .index_of(&crate::lie::BasisSymbol { index: idx.clone(), dir: j })
            .expect("weight within range");
        rep.images[k] = value.scale(&idx.factorial());
    }
    Ok(rep)
}

/// The representation of `g_d^N` obtained by evaluating `L̃` at the origin;
/// requires the cocycle identity.
pub fn extract_rep(l: &LieMap, trunc: u32) -> Result<Representation> {
    let report = check_cocycle(l, default_degree_bound(l));
    if let Some(w) = report.witnesses.first() {
        let (a, b) = w.labels();
        return Err(Error::CocycleFailure(format!("identity fails on ({a}, {b})")));
    }
    evaluate_at_origin(l, trunc)
}

/// `extract_rep` at the default truncation `N = order(L)`.
pub fn extract_rep_default(l: &LieMap) -> Result<Representation> {
    extract_rep(l, l.order())
}
