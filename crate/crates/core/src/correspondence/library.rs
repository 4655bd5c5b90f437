//! Named infeq structures with their representations.
//!
//! Each Lie map is written down from its geometric description and each
//! representation is computed separately (usually by evaluating the action
//! at the origin), so that round-trip tests compare two independent
//! constructions.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::Representation;
use crate::atiyah::{LieMap, MatrixPoly};
use crate::error::{Error, Result};
use crate::formal::{sl2_triple, MultiIndex, Poly, Scalar, ScalarMatrix, VectorField};
use crate::lie::build_algebra;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Example {
    /// `λ`-densities, `L̃(η) = λ div η`, rank 1.
    Densities { lambda: Scalar, d: usize },
    /// Lie derivative on one-forms, rank `d`.
    Omega1 { d: usize },
    /// Commutator action on differential operators of order `<= n` (`d = 1`), rank `n + 1`.
    Jets { n: u32 },
    /// `h ∂ + e ∂³` on `O²` over the disc.
    Sl2Order3,
    /// A flat connection `d + A_0` in a non-trivial gauge, zero representation.
    Flat { rank: usize, d: usize },
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Example::Densities { lambda, d } => write!(f, "densities(lambda={lambda}, d={d})"),
            Example::Omega1 { d } => write!(f, "omega1(d={d})"),
            Example::Jets { n } => write!(f, "jets(n={n})"),
            Example::Sl2Order3 => write!(f, "sl2_order3"),
            Example::Flat { rank, d } => write!(f, "flat(r={rank}, d={d})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedExample {
    pub name: String,
    pub rep: Representation,
    pub liemap: LieMap,
}

const MAX_D: usize = 3;
const MAX_N: u32 = 6;

fn check_d(d: usize) -> Result<()> {
    if !(1..=MAX_D).contains(&d) {
        return Err(Error::Unsupported(format!("dimension d = {d} outside 1..={MAX_D}")));
    }
    Ok(())
}

pub fn example_library(example: &Example) -> Result<NamedExample> {
    let (rep, liemap) = match example {
        Example::Densities { lambda, d } => densities(lambda, *d)?,
        Example::Omega1 { d } => omega1(*d)?,
        Example::Jets { n } => jets(*n)?,
        Example::Sl2Order3 => sl2_order3()?,
        Example::Flat { rank, d } => flat(*rank, *d)?,
    };
    Ok(NamedExample { name: example.to_string(), rep, liemap })
}

/// The examples exercised by the test suites.
pub fn standard_suite() -> Vec<Example> {
    let mut out: Vec<Example> = [
        Scalar::zero(),
        Scalar::one(),
        Scalar::from_ratio(-1, 2),
        Scalar::from_int(3),
        Scalar::gaussian((2, 3), (1, 1)),
    ]
    .into_iter()
    .map(|lambda| Example::Densities { lambda, d: 1 })
    .collect();
    out.push(Example::Densities { lambda: Scalar::from_ratio(1, 3), d: 2 });
    out.extend((1..=3).map(|d| Example::Omega1 { d }));
    out.extend((0..=4).map(|n| Example::Jets { n }));
    out.push(Example::Sl2Order3);
    out.extend([(1, 1), (2, 1), (2, 2), (3, 1)].map(|(rank, d)| Example::Flat { rank, d }));
    out
}

fn densities(lambda: &Scalar, d: usize) -> Result<(Representation, LieMap)> {
    check_d(d)?;
    let mut l = LieMap::zero(d, 1);
    for i in 0..d {
        l.add_coeff(i, MultiIndex::unit(d, i), MatrixPoly::constant(d, &ScalarMatrix::identity(1).scale(lambda)))?;
    }
    // ρ(η) = λ·(div η)(0)
    let alg = Arc::new(build_algebra(d, 2)?);
    let mut rep = Representation::zero(alg.clone(), 1);
    for (k, s) in alg.basis().iter().enumerate() {
        let field = s.to_field();
        let div: Scalar = (0..d).map(|i| field.component(i).partial(i).expect("in range").eval_at_0()).sum();
        rep.set_image(k, ScalarMatrix::identity(1).scale(&(lambda * &div)))?;
    }
    Ok((rep, l))
}

/// Matrix part of the Lie derivative on `Σ s_k dz_k`:
/// `L_η(dz_k) = d(η_k) = Σ_a (∂_a η_k) dz_a`, so `M_{ak} = ∂_a η_k`.
fn one_form_action(field: &VectorField) -> MatrixPoly {
    let d = field.dim();
    let rows = (0..d)
        .map(|a| (0..d).map(|k| field.component(k).partial(a).expect("in range")).collect())
        .collect();
    MatrixPoly::from_rows(d, rows).expect("square")
}

fn omega1(d: usize) -> Result<(Representation, LieMap)> {
    check_d(d)?;
    // M_{ak} = ∂_a η_k  ⇒  A^k_{e_a} = E_{ak}
    let mut l = LieMap::zero(d, d);
    for a in 0..d {
        for k in 0..d {
            l.add_coeff(k, MultiIndex::unit(d, a), MatrixPoly::constant(d, &ScalarMatrix::unit(d, a, k)))?;
        }
    }
    let alg = Arc::new(build_algebra(d, d as u32 + 1)?);
    let mut rep = Representation::zero(alg.clone(), d);
    for (k, s) in alg.basis().iter().enumerate() {
        rep.set_image(k, one_form_action(&s.to_field()).eval_at_0())?;
    }
    Ok((rep, l))
}

/// One-variable differential operator `Σ_k c_k ∂^k` with polynomial coefficients.
#[derive(Clone, Debug)]
struct DiffOp1(Vec<Poly>);

impl DiffOp1 {
    fn derivative_power(k: usize) -> Self {
        let mut c = vec![Poly::zero(1); k + 1];
        c[k] = Poly::one(1);
        DiffOp1(c)
    }

    fn vector_field(f: Poly) -> Self {
        DiffOp1(vec![Poly::zero(1), f])
    }

    /// `(a ∂^i)(b ∂^j) = Σ_t C(i, t) a b^{(t)} ∂^{i + j − t}`.
    fn compose(&self, other: &DiffOp1) -> DiffOp1 {
        let len = self.0.len() + other.0.len() - 1;
        let mut out = vec![Poly::zero(1); len];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                let mut bt = b.clone();
                for t in 0..=i {
                    if bt.is_zero() {
                        break;
                    }
                    let c = Scalar::binomial(i as u32, t as u32);
                    out[i + j - t] = &out[i + j - t] + &(a * &bt).scale(&c);
                    bt = bt.partial(0).expect("d = 1");
                }
            }
        }
        DiffOp1(out)
    }

    fn sub(&self, other: &DiffOp1) -> DiffOp1 {
        let len = self.0.len().max(other.0.len());
        let get = |v: &Vec<Poly>, k: usize| v.get(k).cloned().unwrap_or_else(|| Poly::zero(1));
        DiffOp1((0..len).map(|k| &get(&self.0, k) - &get(&other.0, k)).collect())
    }

    fn coeff(&self, k: usize) -> Poly {
        self.0.get(k).cloned().unwrap_or_else(|| Poly::zero(1))
    }
}

fn jets(n: u32) -> Result<(Representation, LieMap)> {
    if n > MAX_N {
        return Err(Error::Unsupported(format!("jets order n = {n} above {MAX_N}")));
    }
    let rank = n as usize + 1;
    // [f∂, ∂^k] = −Σ_{m=1}^{k} C(k, m) f^{(m)} ∂^{k−m+1}
    let mut l = LieMap::zero(1, rank);
    for m in 1..=n {
        let mut a = ScalarMatrix::zero(rank);
        for k in m..=n {
            let row = (k - m + 1) as usize;
            a.set(row, k as usize, -Scalar::binomial(k, m));
        }
        l.add_coeff(0, MultiIndex::new(vec![m]), MatrixPoly::constant(1, &a))?;
    }
    // the representation: [z^m ∂, ∂^k] expanded symbolically, read at z = 0
    let alg = Arc::new(build_algebra(1, n + 2)?);
    let mut rep = Representation::zero(alg.clone(), rank);
    for (idx, s) in alg.basis().iter().enumerate() {
        let x = DiffOp1::vector_field(s.to_field().component(0).clone());
        let mut img = ScalarMatrix::zero(rank);
        for k in 0..rank {
            let dk = DiffOp1::derivative_power(k);
            let comm = x.compose(&dk).sub(&dk.compose(&x));
            for row in 0..rank {
                img.set(row, k, comm.coeff(row).eval_at_0());
            }
        }
        rep.set_image(idx, img)?;
    }
    Ok((rep, l))
}

fn sl2_order3() -> Result<(Representation, LieMap)> {
    let (h, e, _) = sl2_triple();
    let l = LieMap::zero(1, 2)
        .with_coeff(0, MultiIndex::new(vec![1]), MatrixPoly::constant(1, &h))?
        .with_coeff(0, MultiIndex::new(vec![3]), MatrixPoly::constant(1, &e))?;
    let alg = Arc::new(build_algebra(1, 2)?);
    let rep = Representation::from_images(alg, 2, [(0, h), (2, e.scale(&Scalar::from_int(6)))])?;
    Ok((rep.extend_to(3)?, l))
}

/// `A^i_0 = z_i·I − (∂_i g) g⁻¹` with the unipotent frame
/// `g = I + Σ_k z_{k mod d} E_{k,k+1}`: a pure-gauge connection plus the
/// closed central form `d(Σ z_i²/2)·I`.
fn flat(rank: usize, d: usize) -> Result<(Representation, LieMap)> {
    check_d(d)?;
    if !(1..=MAX_N as usize).contains(&rank) {
        return Err(Error::Unsupported(format!("rank r = {rank} outside 1..={MAX_N}")));
    }
    let mut g = MatrixPoly::identity(d, rank);
    for k in 0..rank.saturating_sub(1) {
        g.set(k, k + 1, Poly::var(d, k % d));
    }
    // g − I is nilpotent of degree < rank, so the series inverse is exact
    let g_inv = g.inverse_series(rank as u32)?;
    debug_assert_eq!(g.mul(&g_inv), MatrixPoly::identity(d, rank));
    let mut l = LieMap::zero(d, rank);
    for i in 0..d {
        let a = MatrixPoly::scalar_function(&Poly::var(d, i), rank).sub(&g.partial(i).mul(&g_inv));
        l.add_coeff(i, MultiIndex::zero(d), a)?;
    }
    let alg = Arc::new(build_algebra(d, rank as u32 + 1)?);
    Ok((Representation::zero(alg, rank), l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atiyah::{check_cocycle, check_higher_flatness, cocycle::default_degree_bound, is_flat};
    use crate::correspondence::{evaluate_at_origin, rep_to_liemap, validate_rep};

    #[test]
    fn every_example_is_consistent() {
        for ex in standard_suite() {
            let NamedExample { name, rep, liemap } = example_library(&ex).unwrap();
            assert!(validate_rep(&rep).holds, "{name}: rep");
            assert!(check_cocycle(&liemap, default_degree_bound(&liemap)).holds, "{name}: cocycle");
            let back = evaluate_at_origin(&liemap, rep.algebra().trunc()).unwrap();
            assert_eq!(back, rep, "{name}: extracted rep");
            if liemap.has_trivial_connection() {
                assert_eq!(rep_to_liemap(&rep).unwrap(), liemap, "{name}: rebuilt map");
            }
        }
    }

    #[test]
    fn jets_have_expected_shape() {
        for n in 0..=4 {
            let ex = example_library(&Example::Jets { n }).unwrap();
            assert_eq!(ex.liemap.rank(), n as usize + 1);
            assert_eq!(ex.liemap.order(), n);
        }
    }

    #[test]
    fn jets_first_order_action() {
        // [f∂, p0 + p1∂] has ∂-coefficient −f' p1: A_1 = −E_{11}
        let ex = example_library(&Example::Jets { n: 1 }).unwrap();
        let a1 = ex.liemap.coeff(0, &MultiIndex::new(vec![1])).unwrap();
        assert_eq!(a1, &MatrixPoly::constant(1, &ScalarMatrix::from_ints(&[&[0, 0], &[0, -1]])));
    }

    #[test]
    fn omega1_rep_is_standard() {
        let ex = example_library(&Example::Omega1 { d: 1 }).unwrap();
        assert_eq!(ex.rep.image(0), &ScalarMatrix::identity(1));
        let ex = example_library(&Example::Omega1 { d: 2 }).unwrap();
        let alg = ex.rep.algebra().clone();
        for k in alg.indices_of_weight(0) {
            let s = alg.symbol(k);
            let j = s.index.entries().iter().position(|&e| e == 1).unwrap();
            assert_eq!(ex.rep.image(k), &ScalarMatrix::unit(2, j, s.dir));
        }
    }

    #[test]
    fn flat_examples_are_flat_and_nontrivial() {
        let ex = example_library(&Example::Flat { rank: 3, d: 1 }).unwrap();
        assert!(!ex.liemap.connection_part()[0].is_constant());
        let ex = example_library(&Example::Flat { rank: 2, d: 2 }).unwrap();
        assert!(is_flat(&ex.liemap.connection_part()));
        assert!(check_higher_flatness(&ex.liemap).holds);
    }

    #[test]
    fn parameter_validation() {
        assert!(example_library(&Example::Jets { n: 7 }).is_err());
        assert!(example_library(&Example::Omega1 { d: 4 }).is_err());
        assert!(example_library(&Example::Densities { lambda: Scalar::one(), d: 0 }).is_err());
        assert!(example_library(&Example::Flat { rank: 0, d: 1 }).is_err());
    }

    #[test]
    fn composition_matches_commutator_formula() {
        // [z²∂, ∂²] = −2·(2z)∂² − 1·2·∂ ... checked against the closed form
        let x = DiffOp1::vector_field(Poly::monomial(1, MultiIndex::new(vec![2]), Scalar::one()));
        let d2 = DiffOp1::derivative_power(2);
        let c = x.compose(&d2).sub(&d2.compose(&x));
        assert_eq!(c.coeff(2), Poly::var(1, 0).scale(&Scalar::from_int(-4)));
        assert_eq!(c.coeff(1), Poly::constant(1, Scalar::from_int(-2)));
        assert!(c.coeff(0).is_zero());
        assert!(c.coeff(3).is_zero());
    }
}
