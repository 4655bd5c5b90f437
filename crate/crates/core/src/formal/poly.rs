use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{MultiIndex, Scalar};
use crate::error::{Error, Result};

/// Sparse polynomial in `z_1, ..., z_d` over the Gaussian rationals.
///
/// No zero coefficient is ever stored, so derived `PartialEq` is equality
/// of polynomials. Binary operators panic on dimension mismatch; the
/// `try_*` methods report it instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        Poly::monomial(dim, MultiIndex::zero(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Poly::constant(dim, Scalar::one())
    }

    pub fn monomial(dim: usize, index: MultiIndex, c: Scalar) -> Self {
        assert_eq!(index.dim(), dim, "multi-index dimension");
        let mut p = Poly::zero(dim);
        p.add_term(index, c);
        p
    }

    /// The coordinate function `z_j` (0-based `j`).
    pub fn var(dim: usize, j: usize) -> Self {
        Poly::monomial(dim, MultiIndex::unit(dim, j), Scalar::one())
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Scalar)>,
    {
        let mut p = Poly::zero(dim);
        for (idx, c) in terms {
            if idx.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: idx.dim() });
            }
            p.add_term(idx, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, index: &MultiIndex) -> Scalar {
        self.terms.get(index).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::weight).max()
    }

    /// Lowest weight carrying a nonzero term.
    pub fn order_at_zero(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::weight).min()
    }

    /// Value at the origin, i.e. the constant term.
    pub fn eval_at_0(&self) -> Scalar {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    /// Adds `c·z^index` in place, keeping the term map zero-free.
    pub fn add_term(&mut self, index: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Poly) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(i.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_dim(other)?;
        let mut out = Poly::zero(self.dim);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                out.add_term(i.add(j), a * b);
            }
        }
        Ok(out)
    }

    /// Product with every term of weight above `max_weight` discarded.
    pub fn mul_truncated(&self, other: &Poly, max_weight: u32) -> Poly {
        assert_eq!(self.dim, other.dim, "polynomial dimension mismatch");
        let mut out = Poly::zero(self.dim);
        for (i, a) in &self.terms {
            let wi = i.weight();
            if wi > max_weight {
                continue;
            }
            for (j, b) in &other.terms {
                if wi + j.weight() <= max_weight {
                    out.add_term(i.add(j), a * b);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.dim);
        }
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(i, a)| (i.clone(), a * c)).collect(),
        }
    }

    /// `∂_j p` for 0-based `j`.
    pub fn partial(&self, j: usize) -> Result<Poly> {
        if j >= self.dim {
            return Err(Error::IndexOutOfRange { index: j + 1, bound: self.dim });
        }
        let mut out = Poly::zero(self.dim);
        for (i, c) in &self.terms {
            let e = i.get(j);
            if let Some(lower) = i.with_decrement(j) {
                out.add_term(lower, c * &Scalar::from_int(i64::from(e)));
            }
        }
        Ok(out)
    }

    /// `∂^J p`.
    pub fn partial_multi(&self, by: &MultiIndex) -> Poly {
        assert_eq!(by.dim(), self.dim, "multi-index dimension");
        let mut out = Poly::zero(self.dim);
        for (i, c) in &self.terms {
            if let Some((f, rest)) = i.falling_factorial(by) {
                out.add_term(rest, c * &f);
            }
        }
        out
    }

    /// Drops every term of weight above `max_weight`.
    pub fn truncate(&self, max_weight: u32) -> Poly {
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.weight() <= max_weight)
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient, dropping results that vanish.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (i, c) in &self.terms {
            out.add_term(i.clone(), f(c));
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Scalar::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, c)| match (i.is_zero(), c == &Scalar::one()) {
                (true, _) => c.to_string(),
                (false, true) => i.to_string(),
                (false, false) => format!("{c}*{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
