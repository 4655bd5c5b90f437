use std::fmt;

use num_traits::{One, Zero};

use super::Scalar;
use crate::error::{Error, Result};

/// Dense square matrix over the Gaussian rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarMatrix {
    n: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zero(n: usize) -> Self {
        ScalarMatrix { n, data: vec![Scalar::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ScalarMatrix::zero(n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    /// Matrix unit `E_{ij}` (0-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = ScalarMatrix::zero(n);
        m.data[i * n + j] = Scalar::one();
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            data.extend(row);
        }
        Ok(ScalarMatrix { n, data })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        ScalarMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
            .expect("square integer matrix")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        ScalarMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        ScalarMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> ScalarMatrix {
        ScalarMatrix { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = ScalarMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &ScalarMatrix) -> ScalarMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.n).map(|i| self.data[i * self.n + i].clone()).sum()
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<ScalarMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = ScalarMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| Error::NotInvertible("singular matrix".into()))?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p_inv = a.get(col, col).inv().expect("nonzero pivot");
            for j in 0..n {
                a.data[col * n + j] *= &p_inv;
                inv.data[col * n + j] *= &p_inv;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let da = &f * a.get(col, j);
                    let di = &f * inv.get(col, j);
                    a.data[r * n + j] -= &da;
                    inv.data[r * n + j] -= &di;
                }
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[[{}]]", rows.join("], ["))
    }
}

/// `h = diag(1, −1)`, `e = E_12`, `f = E_21`.
pub fn sl2_triple() -> (ScalarMatrix, ScalarMatrix, ScalarMatrix) {
    (
        ScalarMatrix::from_ints(&[&[1, 0], &[0, -1]]),
        ScalarMatrix::unit(2, 0, 1),
        ScalarMatrix::unit(2, 1, 0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_relations() {
        let (h, e, f) = sl2_triple();
        assert_eq!(h.commutator(&e), e.scale(&Scalar::from_int(2)));
        assert_eq!(h.commutator(&f), f.scale(&Scalar::from_int(-2)));
        assert_eq!(e.commutator(&f), h);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = ScalarMatrix::from_ints(&[&[0, 2, 1], &[1, 1, 0], &[3, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ScalarMatrix::identity(3));
        assert_eq!(inv.mul(&m), ScalarMatrix::identity(3));
    }

    #[test]
    fn singular_is_rejected() {
        let m = ScalarMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(matches!(m.inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::one()]];
        assert!(ScalarMatrix::from_rows(rows).is_err());
    }
}
