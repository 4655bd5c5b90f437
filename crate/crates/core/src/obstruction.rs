//! Gluing order-1 structures on a line bundle over a two-chart `P¹`.
//!
//! Charts: `U₀` with coordinate `z`, `U₁` with `w = 1/z`, overlap ring the
//! Laurent polynomials in `z`. The bundle `O(n)` has frames `e₀`, `e₁` with
//! `e₁ = zⁿ e₀`, so a section `s₀ e₀ = s₁ e₁` has `s₀ = zⁿ s₁`.
//!
//! On each chart a rank-one Lie map of order at most one is
//! `L̃(f ∂) = ρ f′ + a f` with `ρ` constant and `a` a polynomial; every such
//! pair satisfies the cocycle identity.
//!
//! # Transport from chart 1
//!
//! A field is `f(z) ∂_z = g(w) ∂_w` with `g(w) = −w² f(1/w)`, since
//! `∂_z = −w² ∂_w`. Differentiating, `g′(w) = f′(z) − 2 f(z)/z`. In the
//! frame `e₁` the lift acts on `s₁` by `η(s₁) + L̃₁(η) s₁`; rewriting in
//! `e₀` by `s₀ = zⁿ s₁` (the gauge law with frame `zⁿ`) subtracts
//! `η(zⁿ)/zⁿ = n f/z`. Altogether
//!
//! ```text
//! L̃₁ in chart 0:  ρ f′ + ã f,   ã(z) = −(n + 2ρ)/z − z⁻² a₁(1/z).
//! ```
//!
//! The mismatch one-form is `m = a₀ − ã = a₀(z) + z⁻² a₁(1/z) + (n + 2ρ) z⁻¹`.
//! Adding a polynomial `b₀` to `a₀` moves exponents `>= 0`, adding `b₁` to
//! `a₁` moves exponents `<= −2`; nothing reaches `z⁻¹`. The obstruction is
//! therefore the residue `n + 2ρ`.
//!
//! Sign check: `ω = O(−2)` with `L_{f∂}(g dz) = (f g)′ dz` has `ρ = 1`, and
//! `T = O(2)` with the bracket `(f g′ − f′ g) ∂` has `ρ = −1`; both give
//! residue zero. For `ρ = 0` the residue is `n`.
//!
//! [`transport`] does not use the closed form above: it pushes the test
//! fields `∂_z` and `z ∂_z` through the chart change and reads off `ρ` and
//! `ã`, so the formula is an independent check.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::atiyah::{LieMap, MatrixPoly};
use crate::error::{Error, Result};
use crate::formal::{MultiIndex, Poly, Scalar};

/// Finite Laurent polynomial in one variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn monomial(exp: i64, c: Scalar) -> Self {
        let mut out = LaurentPoly::zero();
        out.add_term(exp, c);
        out
    }

    /// `n z⁻¹`, the logarithmic derivative of `zⁿ`.
    pub fn dlog_power(n: i64) -> Self {
        LaurentPoly::monomial(-1, Scalar::from_int(n))
    }

    /// From a polynomial in one variable.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        if p.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: p.dim() });
        }
        let mut out = LaurentPoly::zero();
        for (idx, c) in p.terms() {
            out.add_term(i64::from(idx.get(0)), c.clone());
        }
        Ok(out)
    }

    /// The polynomial part, if there are no negative exponents.
    pub fn to_poly(&self) -> Option<Poly> {
        if self.min_exponent().is_some_and(|e| e < 0) {
            return None;
        }
        let mut p = Poly::zero(1);
        for (&e, c) in &self.terms {
            p.add_term(MultiIndex::new(vec![e as u32]), c.clone());
        }
        Some(p)
    }

    pub fn add_term(&mut self, exp: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn residue(&self) -> Scalar {
        self.coeff(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, v) in self.terms() {
            out.add_term(e, v * c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    /// `p(1/z)`.
    pub fn invert_variable(&self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect() }
    }

    pub fn derivative(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, c) in self.terms() {
            out.add_term(e - 1, c * &Scalar::from_int(e));
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| match e {
                0 => format!("({c})"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Field components under `w = 1/z`: `η^w(w) = −w² η^z(1/w)`. The same
/// formula maps chart-1 components back to chart 0.
pub fn change_chart_field(component: &LaurentPoly) -> LaurentPoly {
    component.invert_variable().shift(2).scale(&-Scalar::one())
}

/// Order-1 rank-1 data `L̃(f ∂) = ρ f′ + a f` in the coordinate of `chart`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalLineData {
    pub chart: u8,
    pub rho: Scalar,
    pub a: Poly,
}

impl LocalLineData {
    pub fn new(chart: u8, rho: Scalar, a: Poly) -> Result<Self> {
        if chart > 1 {
            return Err(Error::IndexOutOfRange { index: usize::from(chart), bound: 2 });
        }
        if a.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: a.dim() });
        }
        Ok(LocalLineData { chart, rho, a })
    }

    pub fn to_liemap(&self) -> LieMap {
        LieMap::zero(1, 1)
            .with_coeff(0, MultiIndex::new(vec![0]), MatrixPoly::scalar_function(&self.a, 1))
            .and_then(|l| {
                l.with_coeff(0, MultiIndex::new(vec![1]), MatrixPoly::scalar_function(&Poly::constant(1, self.rho.clone()), 1))
            })
            .expect("rank one in one variable")
    }

    /// Inverse of [`Self::to_liemap`]; the first-order coefficient must be constant.
    pub fn from_liemap(chart: u8, l: &LieMap) -> Result<Self> {
        if l.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: l.dim() });
        }
        if l.rank() != 1 {
            return Err(Error::RankMismatch { expected: 1, found: l.rank() });
        }
        if l.order() > 1 {
            return Err(Error::Unsupported(format!("order {} above 1", l.order())));
        }
        let first = l.coeff(0, &MultiIndex::new(vec![1])).map(|m| m.get(0, 0).clone()).unwrap_or_else(|| Poly::zero(1));
        if !first.is_constant() {
            return Err(Error::CocycleFailure("first-order coefficient is not constant".into()));
        }
        let a = l.coeff(0, &MultiIndex::new(vec![0])).map(|m| m.get(0, 0).clone()).unwrap_or_else(|| Poly::zero(1));
        LocalLineData::new(chart, first.eval_at_0(), a)
    }

    fn apply(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        let a = LaurentPoly::from_poly(&self.a)?;
        Ok(f.derivative().scale(&self.rho).add(&a.mul(f)))
    }
}

/// `O(n)` on the two-chart `P¹` with local order-1 data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechP1Model {
    pub degree: i64,
    pub chart0: LocalLineData,
    pub chart1: LocalLineData,
}

impl CechP1Model {
    pub fn new(degree: i64, chart0: LocalLineData, chart1: LocalLineData) -> Result<Self> {
        if chart0.chart != 0 || chart1.chart != 1 {
            return Err(Error::Unsupported("local data must be given for charts 0 and 1 in order".into()));
        }
        Ok(CechP1Model { degree, chart0, chart1 })
    }

    /// Both charts carry `ρ` and `a = 0`.
    pub fn standard(degree: i64, rho: Scalar) -> Self {
        CechP1Model {
            degree,
            chart0: LocalLineData { chart: 0, rho: rho.clone(), a: Poly::zero(1) },
            chart1: LocalLineData { chart: 1, rho, a: Poly::zero(1) },
        }
    }
}

/// Result of [`transport`]: the chart-1 data seen in chart 0, and the
/// mismatch with the chart-0 data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transported {
    pub rho: Scalar,
    /// `ã`, the order-0 coefficient in the `z` coordinate and frame `e₀`.
    pub a: LaurentPoly,
    /// `a₀ − ã`.
    pub mismatch: LaurentPoly,
}

/// Rewrites the chart-1 data of `model` in the chart-0 coordinate and frame.
pub fn transport(model: &CechP1Model) -> Result<Transported> {
    let dlog = LaurentPoly::dlog_power(model.degree);
    // L̃₀(f ∂_z) for a test component f, computed through chart 1
    let through_chart1 = |f: &LaurentPoly| -> Result<LaurentPoly> {
        let g = change_chart_field(f);
        let in_w = model.chart1.apply(&g)?;
        Ok(in_w.invert_variable().sub(&dlog.mul(f)))
    };
    let one = LaurentPoly::monomial(0, Scalar::one());
    let z = LaurentPoly::monomial(1, Scalar::one());
    let a = through_chart1(&one)?;
    // L̃₀(z ∂_z) = ρ + ã z
    let rho_part = through_chart1(&z)?.sub(&a.mul(&z));
    let rho = match rho_part.max_exponent() {
        None => Scalar::zero(),
        Some(0) if rho_part.min_exponent() == Some(0) => rho_part.coeff(0),
        _ => unreachable!("an order-1 map transports to an order-1 map"),
    };
    let mismatch = LaurentPoly::from_poly(&model.chart0.a)?.sub(&a);
    Ok(Transported { rho, a, mismatch })
}

/// Residue of the mismatch one-form.
pub fn obstruction(model: &CechP1Model) -> Result<Scalar> {
    let t = transport(model)?;
    if t.rho != model.chart0.rho {
        return Err(Error::RhoMismatch { chart0: model.chart0.rho.to_string(), chart1: t.rho.to_string() });
    }
    Ok(t.mismatch.residue())
}

/// `n + 2ρ`.
pub fn obstruction_closed_form(degree: i64, rho: &Scalar) -> Scalar {
    Scalar::from_int(degree) + rho * &Scalar::from_int(2)
}

pub fn default_split_bound(degree: i64) -> u32 {
    degree.unsigned_abs() as u32 + 4
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitOutcome {
    /// Corrections `b₀(z)`, `b₁(w)`; `a₀ + b₀` and `a₁ + b₁` glue exactly.
    Split { b0: Poly, b1: Poly, glued: Box<CechP1Model> },
    /// No splitting: the residue is nonzero.
    Obstructed { residue: Scalar },
    /// The residue vanishes but the mismatch needs corrections of degree above the bound.
    BoundTooSmall { needed: u32 },
}

/// Searches for polynomial corrections of degree `<= degree_bound` that
/// remove the mismatch, by solving the coefficient equations exactly.
pub fn split_cocycle(model: &CechP1Model, degree_bound: u32) -> Result<SplitOutcome> {
    let t = transport(model)?;
    if t.rho != model.chart0.rho {
        return Err(Error::RhoMismatch { chart0: model.chart0.rho.to_string(), chart1: t.rho.to_string() });
    }
    let m = &t.mismatch;
    let db = i64::from(degree_bound);
    // unknowns: b0_0..b0_D, then b1_0..b1_D; b1_k contributes to z^{-2-k}
    let unknowns = 2 * (degree_bound as usize + 1);
    let lo = m.min_exponent().unwrap_or(0).min(-2 - db);
    let hi = m.max_exponent().unwrap_or(0).max(db);
    let mut rows: Vec<(Vec<Scalar>, Scalar)> = Vec::new();
    for e in lo..=hi {
        let mut row = vec![Scalar::zero(); unknowns];
        if (0..=db).contains(&e) {
            row[e as usize] = Scalar::one();
        }
        let k = -2 - e;
        if (0..=db).contains(&k) {
            row[degree_bound as usize + 1 + k as usize] = Scalar::one();
        }
        rows.push((row, -m.coeff(e)));
    }
    let Some(x) = solve(rows, unknowns) else {
        let residue = m.residue();
        if !residue.is_zero() {
            return Ok(SplitOutcome::Obstructed { residue });
        }
        let needed = m.max_exponent().unwrap_or(0).max(-2 - m.min_exponent().unwrap_or(0));
        return Ok(SplitOutcome::BoundTooSmall { needed: needed as u32 });
    };
    let poly_from = |cs: &[Scalar]| {
        let mut p = Poly::zero(1);
        for (k, c) in cs.iter().enumerate() {
            p.add_term(MultiIndex::new(vec![k as u32]), c.clone());
        }
        p
    };
    let split_at = degree_bound as usize + 1;
    let b0 = poly_from(&x[..split_at]);
    let b1 = poly_from(&x[split_at..]);
    let glued = CechP1Model {
        degree: model.degree,
        chart0: LocalLineData { a: &model.chart0.a + &b0, ..model.chart0.clone() },
        chart1: LocalLineData { a: &model.chart1.a + &b1, ..model.chart1.clone() },
    };
    let check = transport(&glued)?;
    if !check.mismatch.is_zero() || check.rho != glued.chart0.rho {
        return Err(Error::CocycleFailure(format!("splitting did not glue, mismatch {}", check.mismatch)));
    }
    Ok(SplitOutcome::Split { b0, b1, glued: Box::new(glued) })
}

/// Gaussian elimination over `Scalar`; free variables are set to zero.
fn solve(mut rows: Vec<(Vec<Scalar>, Scalar)>, n: usize) -> Option<Vec<Scalar>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r].0[col].inv().expect("nonzero pivot");
        let (row, rhs) = &mut rows[r];
        row.iter_mut().for_each(|c| *c = &*c * &inv);
        *rhs = &*rhs * &inv;
        let (pivot_row, pivot_rhs) = rows[r].clone();
        for (i, (row, rhs)) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (c, p) in row.iter_mut().zip(&pivot_row) {
                *c = &*c - &(&f * p);
            }
            *rhs = &*rhs - &(&f * &pivot_rhs);
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return None;
    }
    let mut x = vec![Scalar::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i].1.clone();
    }
    Some(x)
}
