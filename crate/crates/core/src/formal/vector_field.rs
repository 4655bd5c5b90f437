use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::{MultiIndex, Poly, Scalar};
use crate::error::{Error, Result};

/// Polynomial vector field `Σ_j f_j ∂_j` on the polydisc.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    components: Vec<Poly>,
}

impl VectorField {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        let dim = components.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        for c in &components {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
            }
        }
        Ok(VectorField { components })
    }

    pub fn zero(dim: usize) -> Self {
        VectorField { components: vec![Poly::zero(dim); dim] }
    }

    /// `c·z^index ∂_dir` (0-based `dir`).
    pub fn monomial(index: MultiIndex, dir: usize, c: Scalar) -> Self {
        let dim = index.dim();
        let mut v = VectorField::zero(dim);
        v.components[dir] = Poly::monomial(dim, index, c);
        v
    }

    /// `∂_dir`.
    pub fn coordinate(dim: usize, dir: usize) -> Self {
        VectorField::monomial(MultiIndex::zero(dim), dir, Scalar::one())
    }

    /// `f ∂_dir`.
    pub fn along(f: Poly, dir: usize) -> Self {
        let dim = f.dim();
        let mut v = VectorField::zero(dim);
        v.components[dir] = f;
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &Poly {
        &self.components[j]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    fn check_dim(&self, other: &VectorField) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.check_dim(other)?;
        Ok(VectorField {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.check_dim(other)?;
        Ok(VectorField {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> VectorField {
        VectorField { components: self.components.iter().map(|p| p.scale(c)).collect() }
    }

    /// Multiplies every component by the function `f`.
    pub fn mul_function(&self, f: &Poly) -> Result<VectorField> {
        Ok(VectorField {
            components: self.components.iter().map(|p| p.try_mul(f)).collect::<Result<_>>()?,
        })
    }

    /// The derivation applied to a function: `η(f) = Σ_j η_j ∂_j f`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: f.dim() });
        }
        let mut out = Poly::zero(self.dim());
        for (j, c) in self.components.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &(c * &f.partial(j)?);
            }
        }
        Ok(out)
    }

    /// Lie bracket `[x, y]_k = x(y_k) − y(x_k)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.check_dim(other)?;
        let components = (0..self.dim())
            .map(|k| Ok(&self.apply(&other.components[k])? - &other.apply(&self.components[k])?))
            .collect::<Result<_>>()?;
        Ok(VectorField { components })
    }

    pub fn truncate(&self, max_weight: u32) -> VectorField {
        VectorField { components: self.components.iter().map(|p| p.truncate(max_weight)).collect() }
    }

    /// All monomial pieces `(I, j, c)` with `c·z^I ∂_j` a term of the field.
    pub fn monomials(&self) -> impl Iterator<Item = (&MultiIndex, usize, &Scalar)> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(j, p)| p.terms().map(move |(i, c)| (i, j, c)))
    }

    /// Splits the field into circle-weight pieces: `z^I ∂_j` has weight
    /// `wt(I) − 1`, the eigenvalue of `[ν, −]` on it.
    pub fn weight_components(&self) -> BTreeMap<i64, VectorField> {
        let mut out: BTreeMap<i64, VectorField> = BTreeMap::new();
        let dim = self.dim();
        for (i, j, c) in self.monomials() {
            let w = i64::from(i.weight()) - 1;
            let entry = out.entry(w).or_insert_with(|| VectorField::zero(dim));
            entry.components[j].add_term(i.clone(), c.clone());
        }
        out
    }
}

/// The Euler field `ν = Σ_i z_i ∂_i`.
pub fn euler_field(dim: usize) -> VectorField {
    assert!(dim >= 1, "euler_field needs d >= 1");
    VectorField { components: (0..dim).map(|i| Poly::var(dim, i)).collect() }
}

/// Label for `z^I ∂_j` such as `z1^2*d1` (`d2` when `I = 0`).
pub fn monomial_label(index: &MultiIndex, dir: usize) -> String {
    if index.is_zero() {
        format!("d{}", dir + 1)
    } else {
        format!("{index}*d{}", dir + 1)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(j, p)| format!("({p})*d{}", j + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
