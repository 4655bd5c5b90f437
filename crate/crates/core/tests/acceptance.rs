//! One line per acceptance criterion. Every comparison is exact.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use infeq::atiyah::{
    check_cocycle, check_higher_flatness, cocycle::default_degree_bound, cocycle_defect, is_flat, LieMap,
    MatrixPoly,
};
use infeq::correspondence::{
    check_lemma21, check_order_bound, example_library, extract_rep, rep_to_liemap, standard_suite, validate_rep, Example,
    Representation,
};
use infeq::formal::{MultiIndex, Poly, Scalar, ScalarMatrix, VectorField};
use infeq::lie::{abelianization, algebra_dimension, build_algebra, derived_series};
use infeq::obstruction::{default_split_bound, obstruction, split_cocycle, transport, CechP1Model, SplitOutcome};
use num_traits::Zero;
use rand::Rng;

type Check = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn suite() -> Vec<(String, Representation)> {
    let mut reps = common::library_reps();
    for (k, rep) in common::random_reps(31, 60).into_iter().enumerate() {
        reps.push((format!("random #{k}"), rep));
    }
    let mut r = common::rng(32);
    for d in 1..=3 {
        let lambda = common::scalar(&mut r);
        reps.push((format!("character d={d} λ={lambda}"), common::character(d, 2, &lambda)));
    }
    reps
}

fn lie_core() -> Check {
    let mut r = common::rng(11);
    for t in 0..200 {
        let d = r.gen_range(1..=3);
        let (x, y, z) = (common::field(&mut r, d, 4), common::field(&mut r, d, 4), common::field(&mut r, d, 4));
        let br = |a: &VectorField, b: &VectorField| a.bracket(b).unwrap();
        let jac = br(&br(&x, &y), &z).add(&br(&br(&y, &z), &x)).unwrap().add(&br(&br(&z, &x), &y)).unwrap();
        ensure!(jac.is_zero(), "Jacobi fails on triple {t}");
        ensure!(br(&x, &y).add(&br(&y, &x)).unwrap().is_zero(), "antisymmetry fails on triple {t}");
    }
    for d in 1..=3 {
        for n in 0..=5 {
            let formula = d * (binomial(n as usize + 1 + d, d) - 1);
            let built = build_algebra(d, n).map_err(|e| e.to_string())?.dim();
            ensure!(built == formula && algebra_dimension(d, n) == formula as u128, "dim g_{d}^{n}: {built} vs {formula}");
            ensure!(common::dimension_by_enumeration(d, n) == formula, "enumeration disagrees at d={d} N={n}");
        }
    }
    let g17 = build_algebra(1, 7).unwrap();
    let expected: [&[u32]; 4] = [&[1, 2, 3, 4, 5, 6, 7], &[3, 4, 5, 6, 7], &[7], &[]];
    for (k, weights) in expected.iter().enumerate() {
        let oracle: Vec<u32> = common::derived_weights_g1(7, k + 1).into_iter().collect();
        ensure!(oracle == *weights, "closure oracle gives {oracle:?} at step {}", k + 1);
        let span = derived_series(&g17, k + 1);
        ensure!(span.dim() == weights.len(), "derived step {} has dim {}", k + 1, span.dim());
        for &w in *weights {
            for idx in g17.indices_of_weight(w) {
                ensure!(span.contains(&g17.unit(idx)).unwrap(), "weight {w} missing at step {}", k + 1);
            }
        }
    }
    for d in 1..=3 {
        for n in 0..=4 {
            let alg = build_algebra(d, n).unwrap();
            let ab = abelianization(&alg);
            ensure!(ab.quotient_dim == 1 && ab.weight_zero_support, "abelianization of g_{d}^{n}");
            ensure!(ab.representatives.iter().all(|&k| alg.symbol(k).circle_weight() == 0), "support of g_{d}^{n}");
        }
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn order_zero(a: &[MatrixPoly]) -> LieMap {
    let d = a.len();
    let mut l = LieMap::zero(d, a[0].rank());
    for (i, ai) in a.iter().enumerate() {
        l.add_coeff(i, MultiIndex::zero(d), ai.clone()).unwrap();
    }
    l
}

fn cocycle_engine() -> Check {
    for (p, q) in [(0, 1), (1, 1), (-1, 2), (3, 1), (7, 5)] {
        let lambda = Scalar::from_ratio(p, q);
        let ex = example_library(&Example::Densities { lambda, d: 1 }).unwrap();
        ensure!(check_cocycle(&ex.liemap, 4).holds, "{} fails", ex.name);
    }
    let sl2 = example_library(&Example::Sl2Order3).unwrap();
    ensure!(check_cocycle(&sl2.liemap, default_degree_bound(&sl2.liemap)).holds, "sl2 map fails");

    let planted = LieMap::zero(1, 1)
        .with_coeff(0, MultiIndex::new(vec![2]), MatrixPoly::scalar_function(&Poly::var(1, 0), 1))
        .unwrap();
    let report = check_cocycle(&planted, 3);
    ensure!(!report.holds, "z·f'' passes");
    let w = report.witnesses.first().ok_or("no witness for z·f''")?;
    let eta0 = VectorField::monomial(w.eta0.0.clone(), w.eta0.1, Scalar::from_int(1));
    let eta1 = VectorField::monomial(w.eta1.0.clone(), w.eta1.1, Scalar::from_int(1));
    ensure!(cocycle_defect(&planted, &eta0, &eta1).unwrap() == w.difference, "witness does not reproduce");

    let mut r = common::rng(21);
    let (mut flat_seen, mut curved_seen) = (0, 0);
    for round in 0..40 {
        let d = r.gen_range(1..=2);
        let rank = r.gen_range(1..=3);
        let a: Vec<MatrixPoly> = if round % 2 == 0 {
            (0..d).map(|_| common::matrix_poly(&mut r, d, rank, 2)).collect()
        } else {
            let phi = common::poly(&mut r, d, 3, 3);
            (0..d).map(|i| MatrixPoly::scalar_function(&phi.partial(i).unwrap(), rank)).collect()
        };
        let flat = is_flat(&a);
        ensure!(check_cocycle(&order_zero(&a), 2).holds == flat, "order-0 round {round}: flat={flat}");
        if flat {
            flat_seen += 1;
        } else {
            curved_seen += 1;
        }
    }
    let e12 = MatrixPoly::constant(2, &ScalarMatrix::unit(2, 0, 1));
    let e21 = MatrixPoly::constant(2, &ScalarMatrix::unit(2, 1, 0));
    ensure!(!check_cocycle(&order_zero(&[e12.clone(), e21]), 2).holds, "curved constant pair passes");
    ensure!(check_cocycle(&order_zero(&[e12.clone(), e12]), 2).holds, "commuting constant pair fails");
    ensure!(flat_seen > 0 && curved_seen > 0, "{flat_seen} flat and {curved_seen} curved samples");
    Ok(())
}

fn flatness_and_order(suite: &[(String, Representation)]) -> Check {
    for (name, rep) in suite {
        let l = rep_to_liemap(rep).map_err(|e| format!("{name}: {e}"))?;
        let flat = check_higher_flatness(&l);
        ensure!(flat.holds && flat.higher_constant && flat.connection_trivial, "{name}: nonconstant coefficients");
        let order = check_order_bound(&l).unwrap();
        ensure!(order.bound_ok, "{name}: order {} above bound {}", order.order, order.bound);
    }
    for ex in standard_suite() {
        let ex = example_library(&ex).unwrap();
        ensure!(check_higher_flatness(&ex.liemap).holds, "{}", ex.name);
        ensure!(check_order_bound(&ex.liemap).unwrap().bound_ok, "{}", ex.name);
    }
    let density = example_library(&Example::Densities { lambda: Scalar::from_ratio(2, 3), d: 1 }).unwrap();
    let o = check_order_bound(&density.liemap).unwrap();
    ensure!((o.order, o.bound, o.tight) == (1, 1, true), "densities: order {} bound {}", o.order, o.bound);
    let sl2 = example_library(&Example::Sl2Order3).unwrap();
    let o = check_order_bound(&sl2.liemap).unwrap();
    ensure!((o.order, o.bound, o.tight) == (3, 3, true), "sl2: order {} bound {}", o.order, o.bound);
    for n in 0..=4 {
        let jets = example_library(&Example::Jets { n }).unwrap();
        let o = check_order_bound(&jets.liemap).unwrap();
        ensure!((o.rank, o.order) == (n as usize + 1, n), "jets({n}): rank {} order {}", o.rank, o.order);
    }
    Ok(())
}

fn round_trip(suite: &[(String, Representation)]) -> Check {
    let random = suite.iter().filter(|(name, _)| name.starts_with("random")).count();
    ensure!(random >= 50, "only {random} random conjugates");
    for (name, rep) in suite {
        ensure!(validate_rep(rep).holds, "{name} is not a representation");
        let l = rep_to_liemap(rep).map_err(|e| format!("{name}: {e}"))?;
        ensure!(check_cocycle(&l, default_degree_bound(&l)).holds, "{name}: image fails the cocycle check");
        let back = extract_rep(&l, rep.algebra().trunc()).map_err(|e| format!("{name}: {e}"))?;
        ensure!(back == *rep, "{name}: round trip changes the representation");
    }
    Ok(())
}

fn weight_vanishing(suite: &[(String, Representation)]) -> Check {
    for (name, rep) in suite {
        let r = rep.rank();
        let rep = rep.extend_to(rep.algebra().trunc().max(r as u32 + 1)).unwrap();
        let alg = rep.algebra();
        let nu = rep.euler_image();
        for k in 0..alg.dim() {
            let w = alg.symbol(k).circle_weight();
            let img = rep.image(k);
            ensure!(w < r as u32 + 1 || img.is_zero(), "{name}: {} acts nontrivially", alg.symbol(k).label());
            ensure!(nu.commutator(img) == img.scale(&Scalar::from_int(i64::from(w))), "{name}: eigen identity");
        }
        let report = check_lemma21(&rep).map_err(|e| format!("{name}: {e}"))?;
        ensure!(report.holds && report.eigen_identity, "{name}: report disagrees");
        if r == 1 {
            ensure!(derived_series(alg, 1).basis().all(|v| rep.image_of(v).is_zero()), "{name}: derived part survives");
            ensure!(report.kills_derived, "{name}: report misses the derived part");
        }
    }
    Ok(())
}

fn obstruction_grid() -> Check {
    let rhos: Vec<Scalar> = [(-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1)].iter().map(|&(p, q)| Scalar::from_ratio(p, q)).collect();
    let ob = |n: i64, rho: &Scalar| obstruction(&CechP1Model::standard(n, rho.clone())).unwrap();
    let base = ob(0, &Scalar::zero());
    let alpha = ob(1, &Scalar::zero()) - base.clone();
    let beta = ob(0, &Scalar::from_int(1)) - base.clone();
    for n in -3..=3 {
        for rho in &rhos {
            let value = ob(n, rho);
            let linear = base.clone() + alpha.clone() * Scalar::from_int(n) + beta.clone() * rho.clone();
            ensure!(value == linear, "not linear at ({n}, {rho}): {value}");
            let model = CechP1Model::standard(n, rho.clone());
            match split_cocycle(&model, default_split_bound(n)).unwrap() {
                SplitOutcome::Split { glued, .. } => {
                    ensure!(value.is_zero(), "({n}, {rho}) splits with obstruction {value}");
                    ensure!(transport(&glued).unwrap().mismatch.is_zero(), "({n}, {rho}): splitting does not glue");
                }
                SplitOutcome::Obstructed { residue } => {
                    ensure!(!value.is_zero() && residue == value, "({n}, {rho}) refused with residue {residue}");
                }
                SplitOutcome::BoundTooSmall { needed } => return Err(format!("({n}, {rho}) needs degree {needed}")),
            }
        }
    }
    for (n, rho) in [(-2, 1), (2, -1), (0, 0)] {
        ensure!(ob(n, &Scalar::from_int(rho)).is_zero(), "nonzero at ({n}, {rho})");
    }
    for n in [-2, -1, 1, 2] {
        ensure!(!ob(n, &Scalar::zero()).is_zero(), "zero at ({n}, 0)");
    }
    Ok(())
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn cli() -> Check {
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_infeq")).args(args).output().map_err(|e| e.to_string());
    let golden: [(Vec<String>, &str, i32); 3] = [
        (vec!["liemap".into(), "cocycle".into(), "--in".into(), data("sl2_liemap.json")], "cocycle_sl2.json", 0),
        (
            vec!["liemap".into(), "cocycle".into(), "--in".into(), data("z_fpp.json"), "--degree-bound".into(), "2".into()],
            "cocycle_z_fpp.json",
            1,
        ),
        (vec!["liemap".into(), "cocycle".into(), "--in".into(), data("malformed.json")], "malformed.json", 2),
    ];
    for (args, file, code) in &golden {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&args)?;
        let second = run(&args)?;
        ensure!(first.status.code() == Some(*code), "{file}: exit {:?}, expected {code}", first.status.code());
        ensure!(first.stdout == second.stdout, "{file}: output differs between runs");
        let expected = std::fs::read(data(&format!("golden/{file}"))).map_err(|e| e.to_string())?;
        ensure!(first.stdout == expected, "{file}: output differs from the golden file");
    }
    let z_fpp = String::from_utf8(run(&["liemap", "cocycle", "--in", &data("z_fpp.json"), "--degree-bound", "2"])?.stdout)
        .map_err(|e| e.to_string())?;
    ensure!(z_fpp.contains("\"witnesses\"") && z_fpp.contains("\"eta0\""), "failing check prints no witness");
    for args in [&["examples", "jets", "--n", "3"][..], &["algebra", "brackets", "--dim", "2", "--trunc", "1"]] {
        ensure!(run(args)?.stdout == run(args)?.stdout, "{args:?} differs between runs");
    }
    Ok(())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let shared = suite();
    let criteria: [Criterion; 7] = [
        ("Lie algebra core", Box::new(lie_core)),
        ("cocycle engine", Box::new(cocycle_engine)),
        ("constant higher coefficients and order bound", Box::new(|| flatness_and_order(&shared))),
        ("representation round trip", Box::new(|| round_trip(&shared))),
        ("weight vanishing of representations", Box::new(|| weight_vanishing(&shared))),
        ("projective line obstruction", Box::new(obstruction_grid)),
        ("command line", Box::new(cli)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(result) => result,
            Err(payload) => Err(payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("[PASS] {}. {name} ({secs:.2}s)", k + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {msg} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!("{} of 7 criteria passed in {:.2}s", 7 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
