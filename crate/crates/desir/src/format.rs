//! JSON file formats for spaces, gambles, assessments and polynomials.
//!
//! Rationals are written as strings, `"3"` or `"-1/3"`; plain JSON integers
//! are accepted as well. Sequence keys are concatenated category labels
//! (`"bw"`), count keys are comma-separated counts (`"2,0"`), and anonymous
//! outcomes are numbered from `"0"`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use desir_core::bernstein::BernsteinPoly;
use desir_core::rational::{int, parse_rational};
use desir_core::{CountSpace, Domain, Gamble, Rational, SequenceSpace};
use serde_json::{Map, Value};

use crate::error::CliError;

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| CliError::schema(field, "expected an object"))
}

pub(crate) fn reject_unknown(map: &Map<String, Value>, field: &str, allowed: &[&str]) -> Result<(), CliError> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(CliError::schema(&join(field, k), "unknown field")),
        None => Ok(()),
    }
}

pub(crate) fn join(field: &str, key: &str) -> String {
    if field.is_empty() {
        key.to_string()
    } else {
        format!("{field}.{key}")
    }
}

fn required<'a>(map: &'a Map<String, Value>, field: &str, key: &str) -> Result<&'a Value, CliError> {
    map.get(key).ok_or_else(|| CliError::schema(&join(field, key), "missing field"))
}

pub(crate) fn usize_field(v: &Value, field: &str) -> Result<usize, CliError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| CliError::schema(field, "expected a nonnegative integer"))
}

pub fn rational(v: &Value, field: &str) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| CliError::schema(field, e)),
        Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| CliError::schema(field, "numbers must be integers; write fractions as \"p/q\"")),
        _ => Err(CliError::schema(field, "expected a rational such as \"-1/3\"")),
    }
}

fn categories(v: &Value, field: &str) -> Result<Vec<String>, CliError> {
    let list = v
        .as_array()
        .ok_or_else(|| CliError::schema(field, "expected a list of category labels"))?;
    list.iter()
        .enumerate()
        .map(|(i, c)| {
            c.as_str()
                .map(str::to_string)
                .ok_or_else(|| CliError::schema(&format!("{field}[{i}]"), "expected a string"))
        })
        .collect()
}

/// `{"categories": [...], "length": N}` for sequences, `"total": n` for
/// count vectors, or `{"size": n}` for anonymous outcomes.
pub fn parse_space(v: &Value, field: &str) -> Result<Domain, CliError> {
    let map = object(v, field)?;
    reject_unknown(map, field, &["categories", "length", "total", "size"])?;
    let kinds: Vec<&str> = ["length", "total", "size"]
        .into_iter()
        .filter(|k| map.contains_key(*k))
        .collect();
    let domain = match kinds.as_slice() {
        ["length"] => {
            let cats = categories(required(map, field, "categories")?, &join(field, "categories"))?;
            let length = usize_field(&map["length"], &join(field, "length"))?;
            Domain::from(SequenceSpace::new(cats, length).map_err(|e| CliError::schema(field, e))?)
        }
        ["total"] => {
            let cats = categories(required(map, field, "categories")?, &join(field, "categories"))?;
            let total = usize_field(&map["total"], &join(field, "total"))?;
            Domain::from(CountSpace::new(cats, total).map_err(|e| CliError::schema(field, e))?)
        }
        ["size"] => {
            if map.contains_key("categories") {
                return Err(CliError::schema(&join(field, "categories"), "not used with \"size\""));
            }
            Domain::Outcomes(usize_field(&map["size"], &join(field, "size"))?)
        }
        _ => {
            return Err(CliError::schema(
                field,
                "give exactly one of \"length\", \"total\" or \"size\"",
            ))
        }
    };
    key_index(&domain, field)?;
    Ok(domain)
}

/// Key lookup for a domain; fails if two elements share a key, which can
/// happen with multi-character labels.
fn key_index(domain: &Domain, field: &str) -> Result<BTreeMap<String, usize>, CliError> {
    let mut index = BTreeMap::new();
    for (i, k) in domain.keys().into_iter().enumerate() {
        if let Some(j) = index.insert(k.clone(), i) {
            let _ = j;
            return Err(CliError::schema(field, format!("category labels make key {k:?} ambiguous")));
        }
    }
    Ok(index)
}

pub fn index_of_key(domain: &Domain, key: &str, field: &str) -> Result<usize, CliError> {
    key_index(domain, field)?
        .get(key)
        .copied()
        .ok_or_else(|| CliError::schema(field, format!("unknown key {key:?}")))
}

/// A `{key: rational}` map covering every element of `domain`.
pub fn parse_values(domain: &Domain, v: &Value, field: &str) -> Result<Gamble, CliError> {
    let map = object(v, field)?;
    let index = key_index(domain, field)?;
    let mut values: Vec<Option<Rational>> = vec![None; domain.size()];
    for (key, raw) in map {
        let entry = format!("{field}[{key:?}]");
        let i = *index
            .get(key)
            .ok_or_else(|| CliError::schema(&entry, "key is not an element of the space"))?;
        values[i] = Some(rational(raw, &entry)?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| CliError::schema(field, format!("missing value for key {:?}", domain.key(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Gamble::new(domain.clone(), values)?)
}

/// A full gamble `{"space": ..., "values": {...}}`, or, when `default` is
/// given, a bare values map on that domain.
pub fn parse_gamble(v: &Value, field: &str, default: Option<&Domain>) -> Result<Gamble, CliError> {
    let map = object(v, field)?;
    if map.contains_key("space") || map.contains_key("values") {
        reject_unknown(map, field, &["space", "values"])?;
        let domain = parse_space(required(map, field, "space")?, &join(field, "space"))?;
        return parse_values(&domain, required(map, field, "values")?, &join(field, "values"));
    }
    match default {
        Some(domain) => parse_values(domain, v, field),
        None => Err(CliError::schema(&join(field, "space"), "missing field")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lineality {
    None,
    /// The kernel of the symmetrising projection on a sequence space.
    Exchangeable,
    Gambles(Vec<Gamble>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assessment {
    pub domain: Domain,
    pub generators: Vec<Gamble>,
    pub lineality: Lineality,
}

impl Assessment {
    pub fn empty(domain: Domain) -> Self {
        Self {
            domain,
            generators: Vec::new(),
            lineality: Lineality::None,
        }
    }
}

/// `{"space": ..., "generators": [...], "lineality": "exchangeable" | [...]}`.
/// Generators and lineality gambles may be full gambles or bare value maps.
pub fn parse_assessment(v: &Value, field: &str) -> Result<Assessment, CliError> {
    let map = object(v, field)?;
    reject_unknown(map, field, &["space", "generators", "lineality"])?;
    let domain = parse_space(required(map, field, "space")?, &join(field, "space"))?;
    let gambles = |key: &str| -> Result<Vec<Gamble>, CliError> {
        let list_field = join(field, key);
        let list = map[key]
            .as_array()
            .ok_or_else(|| CliError::schema(&list_field, "expected a list of gambles"))?;
        list.iter()
            .enumerate()
            .map(|(i, g)| {
                let entry = format!("{list_field}[{i}]");
                let gamble = parse_gamble(g, &entry, Some(&domain))?;
                if *gamble.domain() != domain {
                    return Err(CliError::schema(&entry, "space differs from the assessment space"));
                }
                Ok(gamble)
            })
            .collect()
    };
    let generators = if map.contains_key("generators") {
        gambles("generators")?
    } else {
        Vec::new()
    };
    let lineality = match map.get("lineality") {
        None | Some(Value::Null) => Lineality::None,
        Some(Value::String(s)) if s == "exchangeable" => {
            if !matches!(domain, Domain::Sequences(_)) {
                return Err(CliError::schema(
                    &join(field, "lineality"),
                    "\"exchangeable\" needs a sequence space",
                ));
            }
            Lineality::Exchangeable
        }
        Some(Value::String(s)) if s == "none" => Lineality::None,
        Some(Value::Array(_)) => Lineality::Gambles(gambles("lineality")?),
        Some(_) => {
            return Err(CliError::schema(
                &join(field, "lineality"),
                "expected \"exchangeable\", \"none\" or a list of gambles",
            ))
        }
    };
    Ok(Assessment {
        domain,
        generators,
        lineality,
    })
}

/// `{"categories": [...], "degree": n, "coefficients": {"2,0": "-3", ...}}`.
pub fn parse_polynomial(v: &Value, field: &str) -> Result<BernsteinPoly, CliError> {
    let map = object(v, field)?;
    reject_unknown(map, field, &["categories", "degree", "coefficients"])?;
    let cats = categories(required(map, field, "categories")?, &join(field, "categories"))?;
    let degree = usize_field(required(map, field, "degree")?, &join(field, "degree"))?;
    let space = CountSpace::new(cats, degree).map_err(|e| CliError::schema(field, e))?;
    let coefficients = parse_values(
        &Domain::from(space),
        required(map, field, "coefficients")?,
        &join(field, "coefficients"),
    )?;
    Ok(BernsteinPoly::new(coefficients)?)
}
