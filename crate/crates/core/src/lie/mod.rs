//! Truncated Lie algebras `g_d^N` of formal vector fields vanishing at the
//! origin, modulo fields vanishing to order `N + 2`.
//!
//! The basis consists of the monomial fields `z^I ∂_j` with
//! `1 <= wt(I) <= N + 1`, ordered by `(wt(I), I, j)`. The circle weight of
//! `z^I ∂_j` is `wt(I) − 1`, so the algebra is graded in weights `0..=N`
//! and truncation deletes everything of weight above `N`.

mod span;

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

pub use span::{Ambient, Span};

use crate::error::{Error, Result};
use crate::formal::{monomial_label, MultiIndex, Poly, Scalar, VectorField};

/// Sparse coordinate vector with respect to an algebra basis.
pub type SparseVector = BTreeMap<usize, Scalar>;

/// Default cap on the dimension of a constructed algebra.
pub const DEFAULT_MAX_DIM: usize = 5000;

/// Basis vector `z^I ∂_dir` (0-based `dir`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisSymbol {
    pub index: MultiIndex,
    pub dir: usize,
}

impl BasisSymbol {
    /// Eigenvalue of `[ν, −]`: `wt(I) − 1`.
    pub fn circle_weight(&self) -> u32 {
        self.index.weight() - 1
    }

    pub fn to_field(&self) -> VectorField {
        VectorField::monomial(self.index.clone(), self.dir, Scalar::from_int(1))
    }

    pub fn label(&self) -> String {
        monomial_label(&self.index, self.dir)
    }
}

/// One nonzero entry of the bracket table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureEntry {
    pub a: usize,
    pub b: usize,
    pub terms: Vec<(usize, Scalar)>,
}

#[derive(Clone, Debug)]
pub struct TruncatedLieAlgebra {
    d: usize,
    trunc: u32,
    basis: Vec<BasisSymbol>,
    lookup: HashMap<BasisSymbol, usize>,
    // only pairs with a < b; the rest follows by antisymmetry
    structure: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
}

/// `d·(C(N+1+d, d) − 1)`, computed without overflow for the guard check.
pub fn algebra_dimension(d: usize, trunc: u32) -> u128 {
    let n = trunc as u128 + 1 + d as u128;
    let mut binom: u128 = 1;
    for k in 0..d as u128 {
        binom = binom * (n - k) / (k + 1);
    }
    d as u128 * (binom - 1)
}

pub fn build_algebra(d: usize, trunc: u32) -> Result<TruncatedLieAlgebra> {
    build_algebra_with_limit(d, trunc, DEFAULT_MAX_DIM)
}

/// Builds `g_d^N`, refusing if its dimension exceeds `max_dim`.
pub fn build_algebra_with_limit(d: usize, trunc: u32, max_dim: usize) -> Result<TruncatedLieAlgebra> {
    if d == 0 {
        return Err(Error::Unsupported("algebra dimension d must be at least 1".into()));
    }
    let expected = algebra_dimension(d, trunc);
    if expected > max_dim as u128 {
        return Err(Error::ResourceLimit { dim: usize::try_from(expected).unwrap_or(usize::MAX), limit: max_dim });
    }
    let basis: Vec<BasisSymbol> = MultiIndex::up_to_weight(d, 1, trunc + 1)
        .into_iter()
        .flat_map(|index| (0..d).map(move |dir| BasisSymbol { index: index.clone(), dir }))
        .collect();
    debug_assert_eq!(basis.len() as u128, expected);
    let lookup: HashMap<BasisSymbol, usize> = basis.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();

    let mut structure = BTreeMap::new();
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            let terms = monomial_bracket(&basis[a], &basis[b], trunc, &lookup);
            if !terms.is_empty() {
                structure.insert((a, b), terms);
            }
        }
    }
    Ok(TruncatedLieAlgebra { d, trunc, basis, lookup, structure })
}

/// `[z^I ∂_i, z^J ∂_j] = J_i z^{I+J−e_i} ∂_j − I_j z^{I+J−e_j} ∂_i`, with
/// terms of weight above `trunc` deleted.
fn monomial_bracket(
    x: &BasisSymbol,
    y: &BasisSymbol,
    trunc: u32,
    lookup: &HashMap<BasisSymbol, usize>,
) -> Vec<(usize, Scalar)> {
    let sum = x.index.add(&y.index);
    if sum.weight() - 1 > trunc + 1 {
        return Vec::new();
    }
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    let mut push = |index: MultiIndex, dir: usize, c: i64| {
        if c == 0 {
            return;
        }
        let k = lookup[&BasisSymbol { index, dir }];
        let e = acc.entry(k).or_insert_with(Scalar::zero);
        *e += &Scalar::from_int(c);
    };
    let ji = y.index.get(x.dir);
    if ji > 0 {
        push(sum.with_decrement(x.dir).expect("positive exponent"), y.dir, i64::from(ji));
    }
    let ij = x.index.get(y.dir);
    if ij > 0 {
        push(sum.with_decrement(y.dir).expect("positive exponent"), x.dir, -i64::from(ij));
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl TruncatedLieAlgebra {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> Ambient {
        Ambient { d: self.d, trunc: self.trunc, dim: self.dim() }
    }

    pub fn basis(&self) -> &[BasisSymbol] {
        &self.basis
    }

    pub fn symbol(&self, k: usize) -> &BasisSymbol {
        &self.basis[k]
    }

    pub fn index_of(&self, symbol: &BasisSymbol) -> Option<usize> {
        self.lookup.get(symbol).copied()
    }

    /// Basis indices of the given circle weight.
    pub fn indices_of_weight(&self, w: u32) -> impl Iterator<Item = usize> + '_ {
        self.basis.iter().enumerate().filter(move |(_, s)| s.circle_weight() == w).map(|(k, _)| k)
    }

    /// Structure constants of `[basis_a, basis_b]`.
    pub fn structure_constants(&self, a: usize, b: usize) -> Vec<(usize, Scalar)> {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => Vec::new(),
            Less => self.structure.get(&(a, b)).cloned().unwrap_or_default(),
            Greater => self
                .structure
                .get(&(b, a))
                .map(|ts| ts.iter().map(|(c, v)| (*c, -v)).collect())
                .unwrap_or_default(),
        }
    }

    /// Every nonzero bracket with `a < b`.
    pub fn structure_table(&self) -> impl Iterator<Item = StructureEntry> + '_ {
        self.structure.iter().map(|(&(a, b), terms)| StructureEntry { a, b, terms: terms.clone() })
    }

    /// Bracket of two elements in coordinates.
    pub fn bracket(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (&a, xa) in x {
            for (&b, yb) in y {
                if a == b {
                    continue;
                }
                let (lo, hi, sign) = if a < b { (a, b, false) } else { (b, a, true) };
                if let Some(terms) = self.structure.get(&(lo, hi)) {
                    let f = xa * yb;
                    for (c, v) in terms {
                        let t = &f * v;
                        let e = out.entry(*c).or_insert_with(Scalar::zero);
                        if sign {
                            *e -= &t;
                        } else {
                            *e += &t;
                        }
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn to_field(&self, x: &SparseVector) -> VectorField {
        let mut comps = vec![Poly::zero(self.d); self.d];
        for (&k, c) in x {
            let s = &self.basis[k];
            comps[s.dir].add_term(s.index.clone(), c.clone());
        }
        VectorField::new(comps).expect("consistent dimensions")
    }

    /// Image of a polynomial field vanishing at the origin in `g_d^N`
    /// (terms of weight above `N` are dropped).
    pub fn project_field(&self, x: &VectorField) -> Result<SparseVector> {
        if x.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: x.dim() });
        }
        let mut out = SparseVector::new();
        for (i, j, c) in x.monomials() {
            if i.is_zero() {
                return Err(Error::Unsupported(format!(
                    "field {} does not vanish at the origin",
                    monomial_label(i, j)
                )));
            }
            if let Some(k) = self.index_of(&BasisSymbol { index: i.clone(), dir: j }) {
                out.insert(k, c.clone());
            }
        }
        Ok(out)
    }

    /// Coordinates of an element of `self` mapped into the quotient `target`
    /// (`target.trunc() <= self.trunc()`); basis vectors of too-high weight map to zero.
    pub fn project_to(&self, x: &SparseVector, target: &TruncatedLieAlgebra) -> Result<SparseVector> {
        if target.d != self.d || target.trunc > self.trunc {
            return Err(Error::AmbientMismatch);
        }
        Ok(x.iter()
            .filter_map(|(&k, c)| target.index_of(&self.basis[k]).map(|t| (t, c.clone())))
            .collect())
    }

    pub fn unit(&self, k: usize) -> SparseVector {
        SparseVector::from([(k, Scalar::from_int(1))])
    }

    /// Coordinates of the Euler field `ν = Σ_i z_i ∂_i`.
    pub fn euler(&self) -> SparseVector {
        (0..self.d)
            .map(|i| {
                let k = self.index_of(&BasisSymbol { index: MultiIndex::unit(self.d, i), dir: i });
                (k.expect("weight-0 basis"), Scalar::from_int(1))
            })
            .collect()
    }
}

/// `D^0 = g`, `D^{m+1} = [D^m, D^m]`, returning `D^k`.
pub fn derived_series(alg: &TruncatedLieAlgebra, k: usize) -> Span {
    let mut cur = Span::full(alg);
    for _ in 0..k {
        let next = Span::bracket_span(alg, &cur, &cur).expect("same ambient");
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// All terms of the derived series up to stabilisation (the last entry is
/// the first repeated one, so a solvable algebra ends in the zero span).
pub fn derived_series_until_stable(alg: &TruncatedLieAlgebra) -> Vec<Span> {
    let mut out = vec![Span::full(alg)];
    loop {
        let cur = out.last().expect("nonempty");
        let next = Span::bracket_span(alg, cur, cur).expect("same ambient");
        if &next == cur {
            return out;
        }
        out.push(next);
    }
}

pub fn is_solvable(alg: &TruncatedLieAlgebra) -> bool {
    derived_series_until_stable(alg).last().is_some_and(Span::is_zero)
}

/// `g / [g, g]` described by the derived span and a set of basis
/// representatives for the quotient.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub derived: Span,
    pub quotient_dim: usize,
    /// Non-pivot basis indices of the echelon form of `[g, g]`.
    pub representatives: Vec<usize>,
    /// Every basis vector of nonzero circle weight lies in `[g, g]`.
    pub weight_zero_support: bool,
}

pub fn abelianization(alg: &TruncatedLieAlgebra) -> Abelianization {
    let derived = derived_series(alg, 1);
    let pivots: std::collections::BTreeSet<usize> = derived.pivots().collect();
    let representatives: Vec<usize> = (0..alg.dim()).filter(|k| !pivots.contains(k)).collect();
    let weight_zero_support = (0..alg.dim())
        .filter(|&k| alg.symbol(k).circle_weight() != 0)
        .all(|k| derived.contains(&alg.unit(k)).expect("in range"));
    Abelianization {
        quotient_dim: alg.dim() - derived.dim(),
        derived,
        representatives,
        weight_zero_support,
    }
}
