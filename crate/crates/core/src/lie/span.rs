use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{SparseVector, TruncatedLieAlgebra};
use crate::error::{Error, Result};
use crate::formal::Scalar;

/// Identifies the algebra a span lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ambient {
    pub d: usize,
    pub trunc: u32,
    pub dim: usize,
}

/// Subspace of a truncated Lie algebra in reduced row-echelon form.
///
/// Each row is keyed by its pivot (lowest basis index), the pivot entry is
/// one and no other row has a nonzero entry in a pivot column. The form is
/// unique, so derived `PartialEq` decides equality of subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    ambient: Ambient,
    rows: BTreeMap<usize, SparseVector>,
}

impl Span {
    pub fn zero(alg: &TruncatedLieAlgebra) -> Self {
        Span { ambient: alg.ambient(), rows: BTreeMap::new() }
    }

    pub fn full(alg: &TruncatedLieAlgebra) -> Self {
        let rows = (0..alg.dim())
            .map(|k| (k, SparseVector::from([(k, Scalar::one())])))
            .collect();
        Span { ambient: alg.ambient(), rows }
    }

    pub fn from_vectors<I>(alg: &TruncatedLieAlgebra, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = SparseVector>,
    {
        let mut s = Span::zero(alg);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Echelon basis, ordered by pivot.
    pub fn basis(&self) -> impl Iterator<Item = &SparseVector> {
        self.rows.values()
    }

    fn check_vector(&self, v: &SparseVector) -> Result<()> {
        match v.keys().next_back() {
            Some(&k) if k >= self.ambient.dim => {
                Err(Error::IndexOutOfRange { index: k + 1, bound: self.ambient.dim })
            }
            _ => Ok(()),
        }
    }

    fn check_ambient(&self, other: &Span) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// Reduces `v` against the echelon rows; the remainder is zero iff `v`
    /// lies in the span.
    fn reduce(&self, mut v: SparseVector) -> SparseVector {
        let hits: Vec<usize> = v.keys().copied().filter(|k| self.rows.contains_key(k)).collect();
        for p in hits {
            let Some(c) = v.get(&p).cloned() else { continue };
            for (k, a) in &self.rows[&p] {
                axpy(&mut v, *k, &(&c * a), true);
            }
        }
        v
    }

    /// Adds a vector to the span. Returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVector) -> Result<bool> {
        self.check_vector(&v)?;
        let mut v = self.reduce(strip_zeros(v));
        let Some((&pivot, lead)) = v.iter().next() else {
            return Ok(false);
        };
        let lead_inv = lead.inv().expect("nonzero lead");
        for a in v.values_mut() {
            *a = &*a * &lead_inv;
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                for (k, a) in &v {
                    axpy(row, *k, &(&c * a), true);
                }
            }
        }
        self.rows.insert(pivot, std::mem::take(&mut v));
        Ok(true)
    }

    pub fn contains(&self, v: &SparseVector) -> Result<bool> {
        self.check_vector(v)?;
        Ok(self.reduce(strip_zeros(v.clone())).is_empty())
    }

    pub fn sum(&self, other: &Span) -> Result<Span> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for row in other.rows.values() {
            out.insert(row.clone())?;
        }
        Ok(out)
    }

    pub fn equals(&self, other: &Span) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self == other)
    }

    pub fn is_subspace_of(&self, other: &Span) -> Result<bool> {
        self.check_ambient(other)?;
        for row in self.rows.values() {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `span{[x, y] : x ∈ a, y ∈ b}`.
    pub fn bracket_span(alg: &TruncatedLieAlgebra, a: &Span, b: &Span) -> Result<Span> {
        a.check_ambient(b)?;
        if a.ambient != alg.ambient() {
            return Err(Error::AmbientMismatch);
        }
        let mut out = Span::zero(alg);
        let rows_a: Vec<&SparseVector> = a.rows.values().collect();
        let rows_b: Vec<&SparseVector> = b.rows.values().collect();
        for (ia, x) in rows_a.iter().enumerate() {
            for (ib, y) in rows_b.iter().enumerate() {
                // with a == b the pair (y, x) only contributes −[x, y]
                if std::ptr::eq(a, b) && ib <= ia {
                    continue;
                }
                if out.dim() == alg.dim() {
                    return Ok(out);
                }
                out.insert(alg.bracket(x, y))?;
            }
        }
        Ok(out)
    }
}

/// `v[k] -= c` (or `+= c` when `subtract` is false), dropping zeros.
fn axpy(v: &mut SparseVector, k: usize, c: &Scalar, subtract: bool) {
    use std::collections::btree_map::Entry;
    match v.entry(k) {
        Entry::Vacant(e) => {
            e.insert(if subtract { -c } else { c.clone() });
        }
        Entry::Occupied(mut e) => {
            if subtract {
                *e.get_mut() -= c;
            } else {
                *e.get_mut() += c;
            }
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn strip_zeros(mut v: SparseVector) -> SparseVector {
    v.retain(|_, c| !c.is_zero());
    v
}
