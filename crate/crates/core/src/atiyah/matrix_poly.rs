use std::fmt;


use crate::error::{Error, Result};
use crate::formal::{MultiIndex, Poly, Scalar, ScalarMatrix, VectorField};

/// `r × r` matrix of polynomials in `d` variables: an element of `gl_r(O)`.
///
/// Arithmetic methods panic on shape mismatch; callers that take user
/// input validate shapes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixPoly {
    dim: usize,
    rank: usize,
    entries: Vec<Poly>,
}

impl MatrixPoly {
    pub fn zero(dim: usize, rank: usize) -> Self {
        MatrixPoly { dim, rank, entries: vec![Poly::zero(dim); rank * rank] }
    }

    pub fn identity(dim: usize, rank: usize) -> Self {
        MatrixPoly::scalar_function(&Poly::one(dim), rank)
    }

    /// `f · I_r`.
    pub fn scalar_function(f: &Poly, rank: usize) -> Self {
        let mut m = MatrixPoly::zero(f.dim(), rank);
        for i in 0..rank {
            m.entries[i * rank + i] = f.clone();
        }
        m
    }

    pub fn constant(dim: usize, m: &ScalarMatrix) -> Self {
        let rank = m.size();
        let entries = m
            .rows()
            .flat_map(|row| row.iter().map(|c| Poly::constant(dim, c.clone())))
            .collect();
        MatrixPoly { dim, rank, entries }
    }

    pub fn from_rows(dim: usize, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let rank = rows.len();
        let mut entries = Vec::with_capacity(rank * rank);
        for row in rows {
            if row.len() != rank {
                return Err(Error::RankMismatch { expected: rank, found: row.len() });
            }
            for p in row {
                if p.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
                }
                entries.push(p);
            }
        }
        Ok(MatrixPoly { dim, rank, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.rank + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.dim(), self.dim, "entry dimension");
        self.entries[i * self.rank + j] = p;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Poly]> {
        self.entries.chunks(self.rank.max(1)).take(self.rank)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(Poly::is_constant)
    }

    pub fn degree(&self) -> Option<u32> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    pub fn eval_at_0(&self) -> ScalarMatrix {
        let rows = self.rows().map(|r| r.iter().map(Poly::eval_at_0).collect()).collect();
        ScalarMatrix::from_rows(rows).expect("square")
    }

    fn same_shape(&self, other: &MatrixPoly) {
        assert!(
            self.dim == other.dim && self.rank == other.rank,
            "matrix shape mismatch: ({}, {}) vs ({}, {})",
            self.dim,
            self.rank,
            other.dim,
            other.rank
        );
    }

    pub fn add(&self, other: &MatrixPoly) -> MatrixPoly {
        self.same_shape(other);
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &MatrixPoly) -> MatrixPoly {
        self.same_shape(other);
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &MatrixPoly, f: impl Fn(&Poly, &Poly) -> Poly) -> MatrixPoly {
        MatrixPoly {
            dim: self.dim,
            rank: self.rank,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn map(&self, f: impl Fn(&Poly) -> Poly) -> MatrixPoly {
        MatrixPoly { dim: self.dim, rank: self.rank, entries: self.entries.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> MatrixPoly {
        self.map(|p| p.scale(c))
    }

    /// Multiplies every entry by the function `f`.
    pub fn mul_function(&self, f: &Poly) -> MatrixPoly {
        self.map(|p| p * f)
    }

    pub fn mul(&self, other: &MatrixPoly) -> MatrixPoly {
        self.mul_impl(other, None)
    }

    /// Product with every term of weight above `max_weight` discarded.
    pub fn mul_truncated(&self, other: &MatrixPoly, max_weight: u32) -> MatrixPoly {
        self.mul_impl(other, Some(max_weight))
    }

    fn mul_impl(&self, other: &MatrixPoly, cap: Option<u32>) -> MatrixPoly {
        self.same_shape(other);
        let r = self.rank;
        let mut out = MatrixPoly::zero(self.dim, r);
        for i in 0..r {
            for k in 0..r {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..r {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = match cap {
                        Some(w) => a.mul_truncated(b, w),
                        None => a * b,
                    };
                    out.entries[i * r + j] = &out.entries[i * r + j] + &prod;
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &MatrixPoly) -> MatrixPoly {
        self.mul(other).sub(&other.mul(self))
    }

    /// Entrywise `η(M)`: the natural action of vector fields on `gl_r(O)`.
    pub fn derive(&self, field: &VectorField) -> Result<MatrixPoly> {
        Ok(MatrixPoly {
            dim: self.dim,
            rank: self.rank,
            entries: self.entries.iter().map(|p| field.apply(p)).collect::<Result<_>>()?,
        })
    }

    /// Entrywise `∂_i` (0-based).
    pub fn partial(&self, i: usize) -> MatrixPoly {
        self.map(|p| p.partial(i).expect("index in range"))
    }

    pub fn partial_multi(&self, by: &MultiIndex) -> MatrixPoly {
        self.map(|p| p.partial_multi(by))
    }

    pub fn truncate(&self, max_weight: u32) -> MatrixPoly {
        self.map(|p| p.truncate(max_weight))
    }

    /// Inverse modulo weight above `cutoff`, for a frame whose value at the
    /// origin is invertible: with `g = g(0)(1 + X)`, `g⁻¹ = Σ_k (−X)^k g(0)⁻¹`.
    pub fn inverse_series(&self, cutoff: u32) -> Result<MatrixPoly> {
        let g0_inv = self
            .eval_at_0()
            .inverse()
            .map_err(|_| Error::NotInvertible("frame is singular at the origin".into()))?;
        let g0_inv = MatrixPoly::constant(self.dim, &g0_inv);
        let one = MatrixPoly::identity(self.dim, self.rank);
        let minus_x = one.sub(&g0_inv.mul_truncated(self, cutoff));
        debug_assert!(minus_x.eval_at_0().is_zero());

        let mut sum = one.clone();
        let mut power = one;
        for _ in 0..cutoff {
            power = power.mul_truncated(&minus_x, cutoff);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        Ok(sum.mul_truncated(&g0_inv, cutoff))
    }
}

impl fmt::Display for MatrixPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[[{}]]", rows.join("], ["))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn z(d: usize, j: usize) -> Poly {
        Poly::var(d, j)
    }

    #[test]
    fn commutator_of_units() {
        let e12 = MatrixPoly::constant(1, &ScalarMatrix::unit(2, 0, 1));
        let e21 = MatrixPoly::constant(1, &ScalarMatrix::unit(2, 1, 0));
        let h = MatrixPoly::constant(1, &crate::formal::sl2_triple().0);
        assert_eq!(e12.commutator(&e21), h);
    }

    #[test]
    fn derivative_obeys_leibniz() {
        let d = 2;
        let a = MatrixPoly::from_rows(d, vec![vec![z(d, 0), Poly::one(d)], vec![z(d, 1), &z(d, 0) * &z(d, 1)]]).unwrap();
        let b = MatrixPoly::from_rows(d, vec![vec![Poly::one(d), &z(d, 1) * &z(d, 1)], vec![Poly::zero(d), z(d, 0)]]).unwrap();
        let eta = VectorField::new(vec![z(d, 1), &z(d, 0) * &z(d, 0)]).unwrap();
        let lhs = a.mul(&b).derive(&eta).unwrap();
        let rhs = a.derive(&eta).unwrap().mul(&b).add(&a.mul(&b.derive(&eta).unwrap()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_inverse_of_unipotent_frame() {
        // g = 1 + z E_12 has exact inverse 1 − z E_12
        let mut g = MatrixPoly::identity(1, 2);
        g.set(0, 1, z(1, 0));
        let inv = g.inverse_series(5).unwrap();
        let mut expected = MatrixPoly::identity(1, 2);
        expected.set(0, 1, -z(1, 0));
        assert_eq!(inv, expected);
    }

    #[test]
    fn series_inverse_truncates() {
        let d = 1;
        let g = MatrixPoly::from_rows(
            d,
            vec![vec![&Poly::one(d) + &z(d, 0), z(d, 0)], vec![Poly::zero(d), Poly::constant(d, Scalar::from_int(2))]],
        )
        .unwrap();
        let inv = g.inverse_series(4).unwrap();
        assert_eq!(g.mul_truncated(&inv, 4), MatrixPoly::identity(d, 2));
        assert_eq!(inv.mul_truncated(&g, 4), MatrixPoly::identity(d, 2));
    }

    #[test]
    fn singular_frame() {
        let g = MatrixPoly::scalar_function(&z(1, 0), 2);
        assert!(matches!(g.inverse_series(3), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn ragged_rows() {
        assert!(MatrixPoly::from_rows(1, vec![vec![Poly::one(1)], vec![]]).is_err());
        let _ = Scalar::one();
    }
}
