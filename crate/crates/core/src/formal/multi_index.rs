use std::cmp::Ordering;
use std::fmt;

use num_traits::One;

use super::Scalar;

/// Exponent vector `I = (i_1, ..., i_d)` of a monomial `z^I` or of `∂^I`.
///
/// Ordered graded-lexicographically: first by weight, then so that higher
/// powers of earlier variables come first (`z1 < z2`, `z1^2 < z1 z2 < z2^2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The unit index `e_j` (0-based `j`).
    pub fn unit(dim: usize, j: usize) -> Self {
        let mut v = vec![0; dim];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `I! = Π_j i_j!`
    pub fn factorial(&self) -> Scalar {
        self.0.iter().map(|&i| Scalar::factorial(i)).product()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&i| i == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn with_decrement(&self, j: usize) -> Option<MultiIndex> {
        let mut v = self.0.clone();
        v[j] = v[j].checked_sub(1)?;
        Some(MultiIndex(v))
    }

    pub fn with_increment(&self, j: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[j] += 1;
        MultiIndex(v)
    }

    /// Coefficient of `z^{I-J}` in `∂^J z^I`: `Π_j i_j! / (i_j - k_j)!`,
    /// or `None` when the derivative vanishes.
    pub fn falling_factorial(&self, by: &MultiIndex) -> Option<(Scalar, MultiIndex)> {
        let rest = self.checked_sub(by)?;
        let mut c = Scalar::one();
        for (&i, &k) in self.0.iter().zip(&by.0) {
            for t in 0..k {
                c *= &Scalar::from_int(i64::from(i - t));
            }
        }
        Some((c, rest))
    }

    /// All multi-indices of dimension `dim` with exactly the given weight,
    /// in ascending order.
    pub fn of_weight(dim: usize, weight: u32) -> Vec<MultiIndex> {
        fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == dim {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=left).rev() {
                prefix.push(first);
                rec(dim, left - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if dim == 0 {
            return out;
        }
        rec(dim, weight, &mut Vec::with_capacity(dim), &mut out);
        out
    }

    /// All multi-indices with weight in `lo..=hi`, ascending.
    pub fn up_to_weight(dim: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
        (lo..=hi).flat_map(|w| MultiIndex::of_weight(dim, w)).collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders `z1^2*z3`; the zero index renders as `1`.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| if e == 1 { format!("z{}", j + 1) } else { format!("z{}^{}", j + 1, e) })
            .collect();
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}
