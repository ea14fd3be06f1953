//! JSON forms for matroids, matrices and contexts.
//!
//! A matroid is one of
//! `{"ground": [...], "bases": [[...], ...]}`,
//! `{"construct": "uniform", "args": [2, 4]}` or
//! `{"matrix": {"field": "GF(3)", "rows": [...], "cols": [...], "entries": [[...]]}}`.
//! Matrix entries may be JSON numbers or strings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fragility::Context;
use crate::matroid::{self, Matroid};
use crate::pfield::PartialField;
use crate::pmatrix::PMatrix;
use crate::Label;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasesJson {
    pub ground: Vec<Label>,
    pub bases: Vec<Vec<Label>>,
}

pub fn matroid_to_json(m: &Matroid) -> Value {
    serde_json::to_value(BasesJson { ground: m.ground().to_vec(), bases: m.bases() }).expect("serializable")
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field_of<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing `{key}`")))
}

fn labels(v: &Value) -> Result<Vec<Label>> {
    serde_json::from_value(v.clone()).map_err(|e| parse_err(e.to_string()))
}

fn label(v: &Value, key: &str) -> Result<Label> {
    serde_json::from_value(field_of(v, key)?.clone()).map_err(|e| parse_err(format!("`{key}`: {e}")))
}

fn usize_args(v: &Value) -> Result<Vec<usize>> {
    match v.get("args") {
        None => Ok(Vec::new()),
        Some(a) => serde_json::from_value(a.clone()).map_err(|e| parse_err(format!("`args`: {e}"))),
    }
}

/// Builds a named matroid: `uniform(r, n)`, `wheel(r)`, `whirl(r)`, `mk4`,
/// `fano`, `nonfano`.
pub fn construct(name: &str, args: &[usize]) -> Result<Matroid> {
    let want = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(parse_err(format!("`{name}` takes {k} argument(s), got {}", args.len())))
        }
    };
    match name {
        "uniform" => {
            want(2)?;
            matroid::uniform(args[0], args[1])
        }
        "wheel" => {
            want(1)?;
            matroid::wheel(args[0])
        }
        "whirl" => {
            want(1)?;
            matroid::whirl(args[0])
        }
        "mk4" => want(0).map(|_| matroid::mk4()),
        "fano" => want(0).map(|_| matroid::fano()),
        "nonfano" => want(0).map(|_| matroid::nonfano()),
        other => Err(parse_err(format!("unknown construction `{other}`"))),
    }
}

pub fn pmatrix_from_value(v: &Value) -> Result<PMatrix> {
    let field_name: String = serde_json::from_value(field_of(v, "field")?.clone()).map_err(|e| parse_err(e.to_string()))?;
    let field = PartialField::parse(&field_name)?;
    let rows = labels(field_of(v, "rows")?)?;
    let cols = labels(field_of(v, "cols")?)?;
    let raw = field_of(v, "entries")?.as_array().ok_or_else(|| parse_err("`entries` must be an array"))?;
    let mut entries: Vec<Vec<String>> = Vec::with_capacity(raw.len());
    for row in raw {
        let row = row.as_array().ok_or_else(|| parse_err("matrix rows must be arrays"))?;
        let cells = row
            .iter()
            .map(|c| match c {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(parse_err("matrix entries must be numbers or strings")),
            })
            .collect::<Result<Vec<_>>>()?;
        entries.push(cells);
    }
    PMatrix::parse(field, rows, cols, &entries)
}

pub fn matroid_from_value(v: &Value) -> Result<Matroid> {
    if let Some(name) = v.get("construct") {
        let name = name.as_str().ok_or_else(|| parse_err("`construct` must be a string"))?;
        return construct(name, &usize_args(v)?);
    }
    if let Some(mat) = v.get("matrix") {
        return pmatrix_from_value(mat)?.matroid();
    }
    if v.get("bases").is_some() {
        let ground = labels(field_of(v, "ground")?)?;
        let bases: Vec<Vec<Label>> = serde_json::from_value(v["bases"].clone()).map_err(|e| parse_err(e.to_string()))?;
        return Matroid::from_bases(&ground, &bases);
    }
    Err(parse_err("expected one of `bases`, `construct` or `matrix`"))
}

pub fn parse_matroid(text: &str) -> Result<Matroid> {
    matroid_from_value(&serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?)
}

pub fn parse_pmatrix(text: &str) -> Result<PMatrix> {
    pmatrix_from_value(&serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?)
}

/// `{"matroid": ..., "N": ..., "a": .., "b": .., "B": [...], "A": <matrix>, "x": .., "y": ..}`
pub fn context_from_value(v: &Value) -> Result<Context> {
    let m = matroid_from_value(field_of(v, "matroid")?)?;
    let n = matroid_from_value(field_of(v, "N")?)?;
    let basis = labels(field_of(v, "B")?)?;
    let a = pmatrix_from_value(field_of(v, "A")?)?;
    Context::new(m, n, label(v, "a")?, label(v, "b")?, basis, a, label(v, "x")?, label(v, "y")?)
}

pub fn parse_context(text: &str) -> Result<Context> {
    context_from_value(&serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?)
}

pub fn context_to_json(ctx: &Context) -> Value {
    serde_json::json!({
        "matroid": matroid_to_json(&ctx.matroid),
        "N": matroid_to_json(&ctx.n),
        "a": ctx.a,
        "b": ctx.b,
        "B": ctx.basis,
        "A": ctx.matrix.to_json(),
        "x": ctx.x,
        "y": ctx.y,
    })
}
