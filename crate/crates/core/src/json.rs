//! JSON encoding of the library objects and reports.
//!
//! Output is canonical: object keys are sorted (serde_json's default map),
//! rationals are always written `"p/q"` in lowest terms, a scalar with zero
//! imaginary part is a single string and otherwise `{"re": .., "im": ..}`.
//! On input a scalar may also be a JSON integer or any string accepted by
//! [`Scalar::from_str`](std::str::FromStr).
//!
//! Coordinate directions (`dir`, `i`) are 1-based, matching the labels
//! `z1`, `d1`. Basis positions `k` are 0-based positions in the basis list.
//!
//! Decoding errors carry the path of the offending field, e.g.
//! `coeffs[0].matrix[1][0].terms[2].coeff`.

use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::atiyah::{CocycleReport, FlatnessReport, LieMap, MatrixPoly};
use crate::correspondence::{Lemma21Report, NamedExample, OrderReport, RepReport, Representation};
use crate::error::{Error, Result};
use crate::formal::{monomial_label, MultiIndex, Poly, Scalar, ScalarMatrix, VectorField};
use crate::lie::{
    abelianization, build_algebra_with_limit, derived_series_until_stable, is_solvable, BasisSymbol,
    TruncatedLieAlgebra,
};
use crate::obstruction::SplitOutcome;

/// Canonical text form: pretty-printed with sorted keys.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values built here always serialize")
}

pub fn parse_str(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Format { path: "$".into(), message: e.to_string() })
}

// ---------------------------------------------------------------- encoding

fn rational(q: &BigRational) -> Value {
    Value::String(Scalar::format_rational(q))
}

pub fn scalar_to_json(c: &Scalar) -> Value {
    if c.is_real() {
        rational(c.re())
    } else {
        json!({ "re": rational(c.re()), "im": rational(c.im()) })
    }
}

fn index_to_json(idx: &MultiIndex) -> Value {
    json!(idx.entries())
}

pub fn poly_to_json(p: &Poly) -> Value {
    let terms: Vec<Value> =
        p.terms().map(|(idx, c)| json!({ "index": index_to_json(idx), "coeff": scalar_to_json(c) })).collect();
    json!({ "terms": terms })
}

pub fn vector_field_to_json(v: &VectorField) -> Value {
    json!({ "dim": v.dim(), "components": v.components().iter().map(poly_to_json).collect::<Vec<_>>() })
}

pub fn scalar_matrix_to_json(m: &ScalarMatrix) -> Value {
    Value::Array(m.rows().map(|row| Value::Array(row.iter().map(scalar_to_json).collect())).collect())
}

pub fn matrix_poly_to_json(m: &MatrixPoly) -> Value {
    Value::Array(m.rows().map(|row| Value::Array(row.iter().map(poly_to_json).collect())).collect())
}

pub fn liemap_to_json(l: &LieMap) -> Value {
    let coeffs: Vec<Value> = l
        .coeffs()
        .map(|(i, idx, a)| json!({ "dir": i + 1, "index": index_to_json(idx), "matrix": matrix_poly_to_json(a) }))
        .collect();
    json!({ "dim": l.dim(), "rank": l.rank(), "coeffs": coeffs })
}

fn symbol_json(s: &BasisSymbol) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("index".into(), index_to_json(&s.index));
    m.insert("dir".into(), json!(s.dir + 1));
    m.insert("label".into(), json!(s.label()));
    m
}

/// Nonzero images only.
pub fn rep_to_json(rep: &Representation) -> Value {
    let alg = rep.algebra();
    let images: Vec<Value> = rep
        .images()
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(k, m)| {
            let mut o = symbol_json(alg.symbol(k));
            o.insert("matrix".into(), scalar_matrix_to_json(m));
            Value::Object(o)
        })
        .collect();
    json!({ "d": alg.d(), "trunc": alg.trunc(), "rank": rep.rank(), "images": images })
}

pub fn example_to_json(ex: &NamedExample) -> Value {
    json!({ "name": ex.name, "rep": rep_to_json(&ex.rep), "liemap": liemap_to_json(&ex.liemap) })
}

pub fn algebra_info_json(alg: &TruncatedLieAlgebra) -> Value {
    let weights: Vec<usize> = (0..=alg.trunc()).map(|w| alg.indices_of_weight(w).count()).collect();
    json!({ "d": alg.d(), "trunc": alg.trunc(), "dim": alg.dim(), "weight_dims": weights })
}

pub fn algebra_basis_json(alg: &TruncatedLieAlgebra) -> Value {
    let basis: Vec<Value> = alg
        .basis()
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut o = symbol_json(s);
            o.insert("k".into(), json!(k));
            o.insert("weight".into(), json!(s.circle_weight()));
            Value::Object(o)
        })
        .collect();
    json!({ "d": alg.d(), "trunc": alg.trunc(), "basis": basis })
}

fn sparse_terms(terms: &[(usize, Scalar)]) -> Value {
    Value::Array(terms.iter().map(|(k, c)| json!({ "k": k, "coeff": scalar_to_json(c) })).collect())
}

/// Nonzero brackets `[b_a, b_b]` with `a < b`.
pub fn algebra_brackets_json(alg: &TruncatedLieAlgebra) -> Value {
    let table: Vec<Value> =
        alg.structure_table().map(|e| json!({ "a": e.a, "b": e.b, "terms": sparse_terms(&e.terms) })).collect();
    json!({ "d": alg.d(), "trunc": alg.trunc(), "brackets": table })
}

/// Dimensions of `D^0, D^1, ...` until stable, or only up to `depth`.
pub fn algebra_derived_json(alg: &TruncatedLieAlgebra, depth: Option<usize>) -> Value {
    let series = derived_series_until_stable(alg);
    let mut dims: Vec<usize> = series.iter().map(|s| s.dim()).collect();
    if let Some(k) = depth {
        let last = *dims.last().expect("nonempty");
        dims.resize(k + 1, last);
    }
    json!({ "d": alg.d(), "trunc": alg.trunc(), "dims": dims, "solvable": is_solvable(alg) })
}

pub fn algebra_abelianization_json(alg: &TruncatedLieAlgebra) -> Value {
    let ab = abelianization(alg);
    let reps: Vec<Value> = ab.representatives.iter().map(|&k| Value::Object(symbol_json(alg.symbol(k)))).collect();
    json!({
        "d": alg.d(),
        "trunc": alg.trunc(),
        "derived_dim": ab.derived.dim(),
        "quotient_dim": ab.quotient_dim,
        "representatives": reps,
        "weight_zero_support": ab.weight_zero_support,
    })
}

pub fn rep_report_to_json(rep: &Representation, r: &RepReport) -> Value {
    let alg = rep.algebra();
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "a": alg.symbol(w.a).label(),
                "b": alg.symbol(w.b).label(),
                "difference": scalar_matrix_to_json(&w.difference),
            })
        })
        .collect();
    json!({ "holds": r.holds, "checked_pairs": r.checked_pairs, "witnesses": witnesses })
}

pub fn cocycle_report_to_json(r: &CocycleReport) -> Value {
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            let (a, b) = w.labels();
            json!({ "eta0": a, "eta1": b, "difference": matrix_poly_to_json(&w.difference) })
        })
        .collect();
    let mut o = json!({
        "holds": r.holds,
        "checked_pairs": r.checked_pairs,
        "degree_bound": r.degree_bound,
        "witnesses": witnesses,
    });
    if let Some(c) = r.exact_below {
        o["exact_below"] = json!(c);
    }
    o
}

pub fn order_report_to_json(r: &OrderReport) -> Value {
    let violations: Vec<Value> = r.violations.iter().map(|(i, idx)| json!(monomial_label(idx, *i))).collect();
    json!({
        "order": r.order,
        "rank": r.rank,
        "bound": r.bound,
        "bound_ok": r.bound_ok,
        "tight": r.tight,
        "violations": violations,
    })
}

pub fn flatness_report_to_json(r: &FlatnessReport) -> Value {
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "i": w.i + 1,
                "dir": w.j + 1,
                "index": index_to_json(&w.index),
                "defect": matrix_poly_to_json(&w.defect),
            })
        })
        .collect();
    json!({
        "holds": r.holds,
        "checked": r.checked,
        "connection_trivial": r.connection_trivial,
        "higher_constant": r.higher_constant,
        "witnesses": witnesses,
    })
}

pub fn lemma21_report_to_json(r: &Lemma21Report) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|w| json!({ "weight": w.weight, "vanishes": w.vanishes, "eigen_ok": w.eigen_ok }))
        .collect();
    json!({
        "rank": r.rank,
        "trunc": r.trunc,
        "vanishing_from": r.vanishing_from,
        "rows": rows,
        "holds": r.holds,
        "eigen_identity": r.eigen_identity,
        "kills_derived": r.kills_derived,
    })
}

pub fn split_outcome_to_json(s: &SplitOutcome) -> Value {
    match s {
        SplitOutcome::Split { b0, b1, .. } => json!({ "status": "split", "b0": poly_to_json(b0), "b1": poly_to_json(b1) }),
        SplitOutcome::Obstructed { residue } => json!({ "status": "obstructed", "residue": scalar_to_json(residue) }),
        SplitOutcome::BoundTooSmall { needed } => json!({ "status": "bound_too_small", "needed": needed }),
    }
}

// ---------------------------------------------------------------- decoding

/// A JSON value with the path that led to it.
#[derive(Clone, Copy)]
struct Node<'a> {
    v: &'a Value,
    path: &'a str,
}

impl<'a> Node<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        let path = if self.path.is_empty() { "$".to_string() } else { self.path.to_string() };
        Error::Format { path, message: message.into() }
    }

    fn join(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn obj(&self) -> Result<&'a Map<String, Value>> {
        self.v.as_object().ok_or_else(|| self.err("expected an object"))
    }

    fn field(&self, key: &str) -> Result<(&'a Value, String)> {
        let path = self.join(key);
        match self.obj()?.get(key) {
            Some(v) => Ok((v, path)),
            None => Err(Error::Format { path, message: "missing field".into() }),
        }
    }

    fn opt_field(&self, key: &str) -> Result<Option<(&'a Value, String)>> {
        Ok(self.obj()?.get(key).map(|v| (v, self.join(key))))
    }

    fn array(&self) -> Result<&'a Vec<Value>> {
        self.v.as_array().ok_or_else(|| self.err("expected an array"))
    }

    fn u64(&self) -> Result<u64> {
        self.v.as_u64().ok_or_else(|| self.err("expected a non-negative integer"))
    }
}

fn item_path(base: &str, i: usize) -> String {
    format!("{base}[{i}]")
}

fn with_field<T>(node: Node<'_>, key: &str, f: impl FnOnce(Node<'_>) -> Result<T>) -> Result<T> {
    let (v, path) = node.field(key)?;
    f(Node { v, path: &path })
}

fn each<T>(node: Node<'_>, mut f: impl FnMut(usize, Node<'_>) -> Result<T>) -> Result<Vec<T>> {
    let items = node.array()?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let p = item_path(node.path, i);
            f(i, Node { v, path: &p })
        })
        .collect()
}

fn usize_field(node: Node<'_>, key: &str) -> Result<usize> {
    with_field(node, key, |n| n.u64().map(|x| x as usize))
}

fn rational_from(node: Node<'_>) -> Result<BigRational> {
    match node.v {
        Value::String(s) => Scalar::parse_rational(s).map_err(|m| node.err(m)),
        Value::Number(n) => n.as_i64().map(|k| BigRational::from_integer(BigInt::from(k))).ok_or_else(|| node.err("expected an integer or a \"p/q\" string")),
        _ => Err(node.err("expected a rational \"p/q\"")),
    }
}

fn scalar_from(node: Node<'_>) -> Result<Scalar> {
    match node.v {
        Value::String(s) => Scalar::from_str(s).map_err(|e| match e {
            Error::Format { message, .. } => node.err(message),
            other => node.err(other.to_string()),
        }),
        Value::Number(_) => rational_from(node).map(Scalar::real),
        Value::Object(_) => {
            let re = with_field(node, "re", rational_from)?;
            let im = match node.opt_field("im")? {
                Some((v, p)) => rational_from(Node { v, path: &p })?,
                None => BigRational::zero(),
            };
            Ok(Scalar::new(re, im))
        }
        _ => Err(node.err("expected a scalar")),
    }
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    scalar_from(Node { v, path: "" })
}

fn index_from(node: Node<'_>, dim: usize) -> Result<MultiIndex> {
    let entries = each(node, |_, n| n.u64().and_then(|x| u32::try_from(x).map_err(|_| n.err("exponent too large"))))?;
    if entries.len() != dim {
        return Err(node.err(format!("expected {dim} exponents, found {}", entries.len())));
    }
    Ok(MultiIndex::new(entries))
}

fn poly_from(node: Node<'_>, dim: usize) -> Result<Poly> {
    let mut p = Poly::zero(dim);
    let mut seen = BTreeSet::new();
    with_field(node, "terms", |terms| {
        each(terms, |_, t| {
            let idx = with_field(t, "index", |n| index_from(n, dim))?;
            if !seen.insert(idx.clone()) {
                return Err(t.err("repeated monomial"));
            }
            let c = with_field(t, "coeff", scalar_from)?;
            p.add_term(idx, c);
            Ok(())
        })
    })?;
    Ok(p)
}

pub fn poly_from_json(v: &Value, dim: usize) -> Result<Poly> {
    poly_from(Node { v, path: "" }, dim)
}

pub fn vector_field_from_json(v: &Value) -> Result<VectorField> {
    let node = Node { v, path: "" };
    let dim = usize_field(node, "dim")?;
    let comps = with_field(node, "components", |n| each(n, |_, c| poly_from(c, dim)))?;
    if comps.len() != dim {
        return Err(Error::Format { path: "components".into(), message: format!("expected {dim} components") });
    }
    VectorField::new(comps)
}

fn square<T>(node: Node<'_>, size: usize, mut f: impl FnMut(Node<'_>) -> Result<T>) -> Result<Vec<Vec<T>>> {
    let rows = each(node, |_, row| {
        let r = each(row, |_, e| f(e))?;
        if r.len() != size {
            return Err(row.err(format!("expected {size} entries, found {}", r.len())));
        }
        Ok(r)
    })?;
    if rows.len() != size {
        return Err(node.err(format!("expected {size} rows, found {}", rows.len())));
    }
    Ok(rows)
}

fn matrix_poly_from(node: Node<'_>, dim: usize, rank: usize) -> Result<MatrixPoly> {
    let rows = square(node, rank, |e| poly_from(e, dim))?;
    MatrixPoly::from_rows(dim, rows)
}

fn scalar_matrix_from(node: Node<'_>, rank: usize) -> Result<ScalarMatrix> {
    ScalarMatrix::from_rows(square(node, rank, scalar_from)?)
}

fn dir_from(node: Node<'_>, d: usize) -> Result<usize> {
    with_field(node, "dir", |n| {
        let k = n.u64()? as usize;
        if k == 0 || k > d {
            return Err(n.err(format!("direction {k} outside 1..={d}")));
        }
        Ok(k - 1)
    })
}

pub fn liemap_from_json(v: &Value) -> Result<LieMap> {
    let node = Node { v, path: "" };
    let dim = usize_field(node, "dim")?;
    let rank = usize_field(node, "rank")?;
    if dim == 0 {
        return Err(Error::Format { path: "dim".into(), message: "must be positive".into() });
    }
    if rank == 0 {
        return Err(Error::Format { path: "rank".into(), message: "must be positive".into() });
    }
    let mut l = LieMap::zero(dim, rank);
    let mut seen = BTreeSet::new();
    with_field(node, "coeffs", |coeffs| {
        each(coeffs, |_, c| {
            let i = dir_from(c, dim)?;
            let idx = with_field(c, "index", |n| index_from(n, dim))?;
            if !seen.insert((i, idx.clone())) {
                return Err(c.err("repeated coefficient"));
            }
            let m = with_field(c, "matrix", |n| matrix_poly_from(n, dim, rank))?;
            l.add_coeff(i, idx, m)
        })
    })?;
    Ok(l)
}

/// The `{"matrix": [[poly, ...], ...]}` frame file for a gauge change.
pub fn frame_from_json(v: &Value, dim: usize, rank: usize) -> Result<MatrixPoly> {
    with_field(Node { v, path: "" }, "matrix", |n| matrix_poly_from(n, dim, rank))
}

pub fn frame_to_json(g: &MatrixPoly) -> Value {
    json!({ "matrix": matrix_poly_to_json(g) })
}

/// Builds the algebra (subject to `max_dim`) and fills in the listed images.
pub fn rep_from_json(v: &Value, max_dim: usize) -> Result<Representation> {
    let node = Node { v, path: "" };
    let d = usize_field(node, "d")?;
    let trunc = usize_field(node, "trunc")?;
    let rank = usize_field(node, "rank")?;
    if d == 0 {
        return Err(Error::Format { path: "d".into(), message: "must be positive".into() });
    }
    if rank == 0 {
        return Err(Error::Format { path: "rank".into(), message: "must be positive".into() });
    }
    let trunc = u32::try_from(trunc).map_err(|_| Error::Format { path: "trunc".into(), message: "too large".into() })?;
    let alg = Arc::new(build_algebra_with_limit(d, trunc, max_dim)?);
    let mut rep = Representation::zero(alg.clone(), rank);
    let mut seen = BTreeSet::new();
    with_field(node, "images", |images| {
        each(images, |_, im| {
            let dir = dir_from(im, d)?;
            let index = with_field(im, "index", |n| index_from(n, d))?;
            let symbol = BasisSymbol { index, dir };
            let k = alg.index_of(&symbol).ok_or_else(|| {
                im.err(format!("{} is not a basis vector of the truncated algebra", symbol.label()))
            })?;
            if !seen.insert(k) {
                return Err(im.err("repeated basis vector"));
            }
            let m = with_field(im, "matrix", |n| scalar_matrix_from(n, rank))?;
            rep.set_image(k, m)
        })
    })?;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::{example_library, standard_suite};
    use crate::lie::DEFAULT_MAX_DIM;

    #[test]
    fn scalars() {
        assert_eq!(scalar_to_json(&Scalar::from_int(3)), json!("3/1"));
        assert_eq!(scalar_to_json(&Scalar::gaussian((1, 2), (-2, 4))), json!({"re": "1/2", "im": "-1/2"}));
        for text in [json!("6/4"), json!(-5), json!("2/3-1/7i"), json!({"re": "1", "im": "-2/6"})] {
            let c = scalar_from_json(&text).unwrap();
            assert_eq!(scalar_from_json(&scalar_to_json(&c)).unwrap(), c);
        }
        assert_eq!(scalar_from_json(&json!("6/4")).unwrap(), Scalar::from_ratio(3, 2));
        assert!(scalar_from_json(&json!("1/0")).is_err());
        assert!(scalar_from_json(&json!(true)).is_err());
    }

    #[test]
    fn liemaps_round_trip() {
        for ex in standard_suite() {
            let ex = example_library(&ex).unwrap();
            let v = liemap_to_json(&ex.liemap);
            assert_eq!(liemap_from_json(&v).unwrap(), ex.liemap);
            let r = rep_to_json(&ex.rep);
            assert_eq!(rep_from_json(&r, DEFAULT_MAX_DIM).unwrap(), ex.rep);
        }
    }

    #[test]
    fn sl2_liemap_json() {
        let ex = example_library(&crate::correspondence::Example::Sl2Order3).unwrap();
        let text = to_canonical_string(&liemap_to_json(&ex.liemap));
        assert!(text.contains("\"rank\": 2"));
        // h = diag(1, −1) and e at z∂³
        assert!(text.contains("\"-1/1\""));
        assert!(text.contains("\"index\": [\n        3\n      ]"));
    }

    #[test]
    fn error_paths() {
        let bad = json!({
            "dim": 1,
            "rank": 2,
            "coeffs": [{"dir": 1, "index": [1], "matrix": [
                [{"terms": []}, {"terms": []}],
                [{"terms": [{"index": [0], "coeff": "1/0"}]}, {"terms": []}]
            ]}]
        });
        match liemap_from_json(&bad) {
            Err(Error::Format { path, .. }) => assert_eq!(path, "coeffs[0].matrix[1][0].terms[0].coeff"),
            other => panic!("{other:?}"),
        }
        match liemap_from_json(&json!({"dim": 1, "rank": 1, "coeffs": [{"dir": 2, "index": [0], "matrix": [[{"terms": []}]]}]})) {
            Err(Error::Format { path, .. }) => assert_eq!(path, "coeffs[0].dir"),
            other => panic!("{other:?}"),
        }
        match liemap_from_json(&json!({"rank": 1, "coeffs": []})) {
            Err(Error::Format { path, .. }) => assert_eq!(path, "dim"),
            other => panic!("{other:?}"),
        }
        match rep_from_json(&json!({"d": 1, "trunc": 1, "rank": 1, "images": [{"dir": 1, "index": [4], "matrix": [["1"]]}]}), 100) {
            Err(Error::Format { path, .. }) => assert_eq!(path, "images[0]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_str("{"), Err(Error::Format { .. })));
    }

    #[test]
    fn vector_fields_round_trip() {
        let v = VectorField::new(vec![Poly::var(2, 1), &Poly::var(2, 0) * &Poly::var(2, 0)]).unwrap();
        assert_eq!(vector_field_from_json(&vector_field_to_json(&v)).unwrap(), v);
    }

    #[test]
    fn canonical_output_is_stable() {
        let ex = example_library(&crate::correspondence::Example::Omega1 { d: 2 }).unwrap();
        let a = to_canonical_string(&example_to_json(&ex));
        let reparsed = parse_str(&a).unwrap();
        assert_eq!(to_canonical_string(&reparsed), a);
    }
}
