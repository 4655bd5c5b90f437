//! Seeded generators and from-scratch oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use infeq::atiyah::MatrixPoly;
use infeq::correspondence::{example_library, standard_suite, Representation};
use infeq::formal::{MultiIndex, Poly, Scalar, ScalarMatrix, VectorField};
use infeq::lie::build_algebra;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational, Gaussian about one time in five.
pub fn scalar(r: &mut ChaCha8Rng) -> Scalar {
    let re = Scalar::from_ratio(r.gen_range(-5..=5), r.gen_range(1..=4));
    if r.gen_bool(0.2) {
        re + Scalar::from_ratio(r.gen_range(-3..=3), r.gen_range(1..=3)) * Scalar::i()
    } else {
        re
    }
}

pub fn nonzero_rational(r: &mut ChaCha8Rng) -> Scalar {
    let mut n = 0;
    while n == 0 {
        n = r.gen_range(-6..=6);
    }
    Scalar::from_ratio(n, r.gen_range(1..=5))
}

pub fn multi_index(r: &mut ChaCha8Rng, dim: usize, max_deg: u32) -> MultiIndex {
    let w = r.gen_range(0..=max_deg);
    let mut e = vec![0u32; dim];
    for _ in 0..w {
        e[r.gen_range(0..dim)] += 1;
    }
    MultiIndex::new(e)
}

pub fn poly(r: &mut ChaCha8Rng, dim: usize, max_deg: u32, max_terms: usize) -> Poly {
    let mut p = Poly::zero(dim);
    for _ in 0..r.gen_range(0..=max_terms) {
        p.add_term(multi_index(r, dim, max_deg), scalar(r));
    }
    p
}

pub fn field(r: &mut ChaCha8Rng, dim: usize, max_deg: u32) -> VectorField {
    VectorField::new((0..dim).map(|_| poly(r, dim, max_deg, 3)).collect()).unwrap()
}

pub fn matrix_poly(r: &mut ChaCha8Rng, dim: usize, rank: usize, max_deg: u32) -> MatrixPoly {
    let rows = (0..rank).map(|_| (0..rank).map(|_| poly(r, dim, max_deg, 2)).collect()).collect();
    MatrixPoly::from_rows(dim, rows).unwrap()
}

pub fn matrix(r: &mut ChaCha8Rng, rank: usize) -> ScalarMatrix {
    ScalarMatrix::from_rows((0..rank).map(|_| (0..rank).map(|_| scalar(r)).collect()).collect()).unwrap()
}

/// Random constant matrix, redrawn until it inverts.
pub fn invertible(r: &mut ChaCha8Rng, rank: usize) -> ScalarMatrix {
    loop {
        let m = matrix(r, rank);
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// `D L U` with `D` diagonal with small nonzero (possibly Gaussian) entries
/// and `L`, `U` unit triangular with small integer entries. Invertible by
/// construction, with an inverse of comparable size.
pub fn conjugator(r: &mut ChaCha8Rng, rank: usize) -> ScalarMatrix {
    let mut diag = ScalarMatrix::identity(rank);
    for i in 0..rank {
        let mut c = scalar(r);
        while c.is_zero() {
            c = scalar(r);
        }
        diag.set(i, i, c);
    }
    diag.mul(&unimodular(r, rank))
}

fn unimodular(r: &mut ChaCha8Rng, rank: usize) -> ScalarMatrix {
    let mut lower = ScalarMatrix::identity(rank);
    let mut upper = ScalarMatrix::identity(rank);
    for i in 0..rank {
        for j in 0..i {
            lower.set(i, j, Scalar::from_int(r.gen_range(-2..=2)));
            upper.set(j, i, Scalar::from_int(r.gen_range(-2..=2)));
        }
    }
    lower.mul(&upper)
}

/// Frame `C + N(z)` with `C` an integer matrix of determinant one and `N`
/// integer polynomials without constant term, so the inverse series has
/// integer coefficients.
pub fn integer_frame(r: &mut ChaCha8Rng, dim: usize, rank: usize, max_deg: u32) -> MatrixPoly {
    let mut g = MatrixPoly::constant(dim, &unimodular(r, rank));
    for i in 0..rank {
        for j in 0..rank {
            let mut p = g.get(i, j).clone();
            for _ in 0..2 {
                let mut idx = multi_index(r, dim, max_deg);
                if idx.is_zero() {
                    idx = MultiIndex::unit(dim, r.gen_range(0..dim));
                }
                p.add_term(idx, Scalar::from_int(r.gen_range(-2..=2)));
            }
            g.set(i, j, p);
        }
    }
    g
}

/// Block-diagonal sum on the larger of the two truncations.
pub fn direct_sum(a: &Representation, b: &Representation) -> Representation {
    let trunc = a.algebra().trunc().max(b.algebra().trunc());
    let (a, b) = (a.extend_to(trunc).unwrap(), b.extend_to(trunc).unwrap());
    let (ra, rb) = (a.rank(), b.rank());
    let mut out = Representation::zero(a.algebra().clone(), ra + rb);
    for k in 0..a.algebra().dim() {
        let mut m = ScalarMatrix::zero(ra + rb);
        for i in 0..ra {
            for j in 0..ra {
                m.set(i, j, a.image(k).get(i, j).clone());
            }
        }
        for i in 0..rb {
            for j in 0..rb {
                m.set(ra + i, ra + j, b.image(k).get(i, j).clone());
            }
        }
        out.set_image(k, m).unwrap();
    }
    out
}

/// Characters of `g_d^N`: `ρ(z_i ∂_i) = λ` on the diagonal weight-0 vectors, zero elsewhere.
pub fn character(d: usize, trunc: u32, lambda: &Scalar) -> Representation {
    let alg = Arc::new(build_algebra(d, trunc).unwrap());
    let mut rep = Representation::zero(alg.clone(), 1);
    for k in alg.indices_of_weight(0) {
        let s = alg.symbol(k);
        if s.index.get(s.dir) == 1 {
            rep.set_image(k, ScalarMatrix::identity(1).scale(lambda)).unwrap();
        }
    }
    rep
}

pub fn library_reps() -> Vec<(String, Representation)> {
    standard_suite()
        .iter()
        .map(|ex| {
            let e = example_library(ex).unwrap();
            (e.name, e.rep)
        })
        .collect()
}

/// Conjugates of library representations by random invertible matrices,
/// plus random direct sums in one variable.
pub fn random_reps(seed: u64, count: usize) -> Vec<Representation> {
    let mut r = rng(seed);
    let lib = library_reps();
    let one_var: Vec<&Representation> =
        lib.iter().map(|(_, rep)| rep).filter(|rep| rep.algebra().d() == 1 && rep.rank() <= 2).collect();
    let mut out = Vec::new();
    while out.len() < count {
        let rep = if r.gen_bool(0.25) {
            let a = one_var[r.gen_range(0..one_var.len())];
            let b = one_var[r.gen_range(0..one_var.len())];
            direct_sum(a, b)
        } else {
            lib[r.gen_range(0..lib.len())].1.clone()
        };
        if rep.rank() > 4 {
            continue;
        }
        let p = conjugator(&mut r, rep.rank());
        out.push(rep.conjugate(&p).unwrap());
    }
    out
}

/// Number of basis vectors of `g_d^N` by enumerating exponent tuples.
pub fn dimension_by_enumeration(d: usize, trunc: u32) -> usize {
    let top = trunc + 1;
    let mut count = 0;
    let mut e = vec![0u32; d];
    loop {
        let w: u32 = e.iter().sum();
        if (1..=top).contains(&w) {
            count += d;
        }
        // odometer over {0..=top}^d
        let mut i = 0;
        while i < d {
            if e[i] < top {
                e[i] += 1;
                break;
            }
            e[i] = 0;
            i += 1;
        }
        if i == d {
            return count;
        }
    }
}

/// Circle weights spanning `D^k(g_1^N)`: `D^{m+1}` is generated by
/// `a + b` for distinct `a, b ∈ D^m` with `a + b <= N`, since
/// `[z^{a+1}∂, z^{b+1}∂] = (b − a) z^{a+b+1}∂`.
pub fn derived_weights_g1(trunc: u32, k: usize) -> BTreeSet<u32> {
    let mut cur: BTreeSet<u32> = (0..=trunc).collect();
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for &a in &cur {
            for &b in &cur {
                if a != b && a + b <= trunc {
                    next.insert(a + b);
                }
            }
        }
        cur = next;
    }
    cur
}
