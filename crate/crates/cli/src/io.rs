//! JSON forms of norms, reflections and root systems.
//!
//! Coordinates are 1-based in every document; rationals are `"n"` or `"n/d"`
//! strings; `p = ∞` is the string `"inf"`.

use std::path::Path;

use reflect_core::coxeter::RootSystem;
use reflect_core::fixtures::{fixture, Entry, Fixture};
use reflect_core::rational::{format_rational, parse_rational, QVector};
use reflect_core::reflections::{make_exact_reflection, make_reflection, Reflection};
use reflect_core::spaces::{Exponent, Functional, NormKind, NormSpec, Slot, Vector};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

/// A parsed input document.
#[derive(Debug, Clone)]
pub enum Input {
    Spec(NormSpec),
    Reflections(Vec<Reflection>),
    Roots(RootSystem),
}

impl Input {
    pub fn into_spec(self) -> CliResult<NormSpec> {
        match self {
            Input::Spec(s) => Ok(s),
            _ => Err(CliError::input("expected a norm specification")),
        }
    }
}

/// Reads `fixture:NAME` or a JSON file.
pub fn load(arg: &str) -> CliResult<Input> {
    if let Some(name) = arg.strip_prefix("fixture:") {
        return Ok(match fixture(name)?.entry {
            Entry::Norm(s) => Input::Spec(s),
            Entry::Reflections(r) => Input::Reflections(r),
            Entry::Roots(r) => Input::Roots(r),
        });
    }
    let text = std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::input(format!("{arg}: {e}")))?;
    parse_document(&text)
}

pub fn parse_document(text: &str) -> CliResult<Input> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("variant").is_some() {
        Ok(Input::Spec(spec_from_json(&v)?))
    } else if v.get("reflections").is_some() {
        Ok(Input::Reflections(reflections_from_json(&v)?))
    } else if v.get("roots").is_some() {
        Ok(Input::Roots(roots_from_json(&v)?))
    } else {
        Err(CliError::input("document has neither `variant`, `reflections` nor `roots`"))
    }
}

fn exponent_to_json(p: Exponent) -> Value {
    match p {
        Exponent::Finite(p) => json!(p),
        Exponent::Infinity => json!("inf"),
    }
}

fn exponent_from_json(v: &Value) -> CliResult<Exponent> {
    match v {
        Value::String(s) if s == "inf" => Ok(Exponent::Infinity),
        Value::Number(n) => n.as_f64().map(Exponent::Finite).ok_or_else(|| CliError::input("bad exponent")),
        _ => Err(CliError::input(format!("exponent must be a number or \"inf\", got {v}"))),
    }
}

fn one_based(coords: &[usize]) -> Vec<usize> {
    coords.iter().map(|c| c + 1).collect()
}

pub fn spec_to_json(spec: &NormSpec) -> Value {
    let mut m = Map::new();
    let variant = match spec.kind() {
        NormKind::Lp(_) => "lp",
        NormKind::WeightedLp { .. } => "weighted_lp",
        NormKind::Nested { .. } => "nested",
        NormKind::OrliczNakano(_) => "orlicz_nakano",
        NormKind::Polytope(_) => "polytope",
    };
    m.insert("variant".into(), json!(variant));
    m.insert("dim".into(), json!(spec.dim()));
    match spec.kind() {
        NormKind::Lp(p) => {
            m.insert("p".into(), exponent_to_json(*p));
        }
        NormKind::WeightedLp { p, weights } => {
            m.insert("p".into(), exponent_to_json(*p));
            m.insert("weights".into(), json!(weights));
        }
        NormKind::OrliczNakano(ps) => {
            m.insert("exponents".into(), json!(ps));
        }
        NormKind::Nested { outer, slots } => {
            m.insert("outer".into(), spec_to_json(outer));
            let slots: Vec<Value> = slots
                .iter()
                .map(|s| match s {
                    Slot::Block { spec, coords } => json!({"coords": one_based(coords), "norm": spec_to_json(spec)}),
                    Slot::Raw(c) => json!({"coord": c + 1}),
                })
                .collect();
            m.insert("slots".into(), Value::Array(slots));
        }
        NormKind::Polytope(p) => {
            let pts: Vec<Value> = p.points().iter().map(qvector_to_json).collect();
            m.insert("vertices".into(), Value::Array(pts));
        }
    }
    Value::Object(m)
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| CliError::input(format!("missing field `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> CliResult<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| CliError::input(format!("`{what}` must be a non-negative integer")))
}

fn f64_array(v: &Value, what: &str) -> CliResult<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| CliError::input(format!("`{what}` must be an array")))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| CliError::input(format!("`{what}` entries must be numbers"))))
        .collect()
}

fn coords_from_json(v: &Value, what: &str) -> CliResult<Vec<usize>> {
    let raw = v.as_array().ok_or_else(|| CliError::input(format!("`{what}` must be an array")))?;
    raw.iter().map(|c| coord_from_json(c, what)).collect()
}

fn coord_from_json(v: &Value, what: &str) -> CliResult<usize> {
    match as_usize(v, what)? {
        0 => Err(CliError::input(format!("`{what}` indices are 1-based"))),
        c => Ok(c - 1),
    }
}

pub fn spec_from_json(v: &Value) -> CliResult<NormSpec> {
    let variant = field(v, "variant")?.as_str().ok_or_else(|| CliError::input("`variant` must be a string"))?;
    let dim = as_usize(field(v, "dim")?, "dim")?;
    let spec = match variant {
        "lp" => NormSpec::lp(dim, exponent_from_json(field(v, "p")?)?)?,
        "weighted_lp" => {
            NormSpec::weighted_lp(exponent_from_json(field(v, "p")?)?, f64_array(field(v, "weights")?, "weights")?)?
        }
        "orlicz_nakano" => NormSpec::orlicz_nakano(f64_array(field(v, "exponents")?, "exponents")?)?,
        "nested" => {
            let outer = spec_from_json(field(v, "outer")?)?;
            let slots = field(v, "slots")?
                .as_array()
                .ok_or_else(|| CliError::input("`slots` must be an array"))?
                .iter()
                .map(|s| {
                    if let Some(c) = s.get("coord") {
                        Ok(Slot::Raw(coord_from_json(c, "coord")?))
                    } else {
                        Ok(Slot::Block {
                            spec: spec_from_json(field(s, "norm")?)?,
                            coords: coords_from_json(field(s, "coords")?, "coords")?,
                        })
                    }
                })
                .collect::<CliResult<Vec<_>>>()?;
            NormSpec::nested(dim, outer, slots)?
        }
        "polytope" => {
            let pts = field(v, "vertices")?
                .as_array()
                .ok_or_else(|| CliError::input("`vertices` must be an array"))?
                .iter()
                .map(qvector_from_json)
                .collect::<CliResult<Vec<_>>>()?;
            NormSpec::polytope(dim, pts)?
        }
        other => return Err(CliError::input(format!("unknown variant `{other}`"))),
    };
    if spec.dim() != dim {
        return Err(CliError::input(format!("`dim` is {dim} but the norm acts on R^{}", spec.dim())));
    }
    Ok(spec)
}

fn qvector_to_json(v: &QVector) -> Value {
    Value::Array(v.0.iter().map(|x| Value::String(format_rational(x))).collect())
}

fn qvector_from_json(v: &Value) -> CliResult<QVector> {
    let items = v.as_array().ok_or_else(|| CliError::input("rational vectors must be arrays"))?;
    let q = items
        .iter()
        .map(|x| match x {
            Value::String(s) => Ok(parse_rational(s)?),
            Value::Number(n) if n.is_i64() => Ok(parse_rational(&n.to_string())?),
            _ => Err(CliError::input(format!("expected an \"n/d\" rational, got {x}"))),
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(QVector(q))
}

pub fn reflection_to_json(r: &Reflection) -> Value {
    match r.exact_data() {
        Some((e, f)) => json!({"e": qvector_to_json(e), "e_star": qvector_to_json(f)}),
        None => json!({"e": r.e().0, "e_star": r.e_star().0}),
    }
}

pub fn reflections_to_json(dim: usize, refl: &[Reflection]) -> Value {
    json!({"dim": dim, "reflections": refl.iter().map(reflection_to_json).collect::<Vec<_>>()})
}

fn reflection_from_json(v: &Value) -> CliResult<Reflection> {
    let (e, f) = (field(v, "e")?, field(v, "e_star")?);
    let all_strings = |x: &Value| x.as_array().is_some_and(|a| a.iter().all(Value::is_string));
    if all_strings(e) && all_strings(f) {
        return Ok(make_exact_reflection(qvector_from_json(e)?, qvector_from_json(f)?)?);
    }
    Ok(make_reflection(Vector(f64_array(e, "e")?), Functional(f64_array(f, "e_star")?))?)
}

pub fn reflections_from_json(v: &Value) -> CliResult<Vec<Reflection>> {
    let dim = as_usize(field(v, "dim")?, "dim")?;
    let refl = field(v, "reflections")?
        .as_array()
        .ok_or_else(|| CliError::input("`reflections` must be an array"))?
        .iter()
        .map(reflection_from_json)
        .collect::<CliResult<Vec<_>>>()?;
    if refl.is_empty() {
        return Err(CliError::input("no reflections given"));
    }
    if let Some(r) = refl.iter().find(|r| r.dim() != dim) {
        return Err(CliError::input(format!("reflection of dimension {} in a file with dim {dim}", r.dim())));
    }
    Ok(refl)
}

pub fn roots_to_json(r: &RootSystem) -> Value {
    json!({"index_set": one_based(&r.index_set), "roots": r.roots})
}

fn roots_from_json(v: &Value) -> CliResult<RootSystem> {
    let index_set = coords_from_json(field(v, "index_set")?, "index_set")?;
    let roots = field(v, "roots")?
        .as_array()
        .ok_or_else(|| CliError::input("`roots` must be an array"))?
        .iter()
        .map(|r| f64_array(r, "roots"))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(RootSystem::new(index_set, roots)?)
}

/// The document a fixture is stored as.
pub fn entry_to_json(f: &Fixture) -> Value {
    match &f.entry {
        Entry::Norm(s) => spec_to_json(s),
        Entry::Reflections(r) => reflections_to_json(r[0].dim(), r),
        Entry::Roots(r) => roots_to_json(r),
    }
}

pub fn entry_kind(f: &Fixture) -> &'static str {
    match f.entry {
        Entry::Norm(_) => "norm",
        Entry::Reflections(_) => "reflections",
        Entry::Roots(_) => "roots",
    }
}

/// Vector as a plain JSON array.
pub fn vector(v: &[f64]) -> Value {
    json!(v)
}
