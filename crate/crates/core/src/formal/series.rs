use num_traits::Zero;

use super::{MultiIndex, Poly, Scalar};
use crate::error::{Error, Result};

/// Power series known modulo terms of weight greater than `cutoff`.
///
/// Binary operations return a series whose cutoff is the smaller of the
/// two operand cutoffs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    cutoff: u32,
    poly: Poly,
}

impl TruncatedSeries {
    pub fn new(poly: &Poly, cutoff: u32) -> Self {
        TruncatedSeries { cutoff, poly: poly.truncate(cutoff) }
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn as_poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        let cutoff = self.cutoff.min(other.cutoff);
        Ok(TruncatedSeries { cutoff, poly: self.poly.try_add(&other.poly)?.truncate(cutoff) })
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        let cutoff = self.cutoff.min(other.cutoff);
        Ok(TruncatedSeries { cutoff, poly: self.poly.try_sub(&other.poly)?.truncate(cutoff) })
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let cutoff = self.cutoff.min(other.cutoff);
        Ok(TruncatedSeries { cutoff, poly: self.poly.mul_truncated(&other.poly, cutoff) })
    }

    /// Multiplicative inverse at the same cutoff.
    ///
    /// Writes `p = c(1 + q)` with `q(0) = 0` and sums `c⁻¹ Σ (−q)^k`; the sum
    /// is finite because `q^k` has no terms below weight `k`.
    pub fn inverse(&self) -> Result<TruncatedSeries> {
        let dim = self.dim();
        let c = self.poly.eval_at_0();
        let c_inv = c
            .inv()
            .ok_or_else(|| Error::NotInvertible("series has zero constant term".into()))?;
        let mut minus_q = self.poly.scale(&-&c_inv);
        minus_q.add_term(MultiIndex::zero(dim), Scalar::from_int(1));
        debug_assert!(minus_q.eval_at_0().is_zero());

        let mut sum = Poly::one(dim);
        let mut power = Poly::one(dim);
        for _ in 0..self.cutoff {
            power = power.mul_truncated(&minus_q, self.cutoff);
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(TruncatedSeries { cutoff: self.cutoff, poly: sum.scale(&c_inv) })
    }
}
