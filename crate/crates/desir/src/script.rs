//! Query scripts: one model, a list of queries, one report.
//!
//! ```json
//! {
//!   "space": {"categories": ["b", "w"], "length": 2},
//!   "model": {"assessment": "assessment.json", "lineality": "exchangeable", "cap": 32},
//!   "queries": [
//!     {"op": "check"},
//!     {"op": "lpr", "gamble": {"bb": "1", "bw": "0", "wb": "0", "ww": "1"}},
//!     {"op": "extend-finite", "by": 1}
//!   ]
//! }
//! ```
//!
//! Operands are inline JSON or a path string, resolved against the script's
//! directory. Bare value maps are read on the declared space.

use std::path::{Path, PathBuf};

use desir_core::Domain;
use serde_json::{Map, Value};

use crate::commands::{bernstein_eval, bernstein_expand, bernstein_range, bernstein_raise, Output, Session};
use crate::error::CliError;
use crate::format::{
    object, parse_assessment, parse_gamble, parse_polynomial, parse_space, rational, read_json, reject_unknown,
    usize_field, Assessment,
};
use crate::report::Style;

struct Operands<'a> {
    map: &'a Map<String, Value>,
    field: String,
    base: &'a Path,
}

impl Operands<'_> {
    fn get(&self, key: &str) -> Result<Value, CliError> {
        let field = format!("{}.{key}", self.field);
        match self.map.get(key) {
            None => Err(CliError::schema(&field, "missing field")),
            Some(v) => resolve(v, self.base),
        }
    }

    fn field(&self, key: &str) -> String {
        format!("{}.{key}", self.field)
    }
}

/// A string operand names a file; anything else is inline.
fn resolve(v: &Value, base: &Path) -> Result<Value, CliError> {
    match v {
        Value::String(path) => read_json(&base.join(path)),
        other => Ok(other.clone()),
    }
}

pub struct Script {
    session: Session,
    queries: Vec<Value>,
    base: PathBuf,
}

impl Script {
    pub fn load(path: &Path, cap: usize, style: Style) -> Result<Self, CliError> {
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let root = read_json(path)?;
        Self::from_value(&root, base, cap, style)
    }

    pub fn from_value(root: &Value, base: PathBuf, cap: usize, style: Style) -> Result<Self, CliError> {
        let map = object(root, "script")?;
        reject_unknown(map, "script", &["space", "model", "queries"])?;
        let declared: Option<Domain> = map.get("space").map(|s| parse_space(s, "space")).transpose()?;
        let mut cap = cap;
        let mut exchangeable = false;
        let mut assessment: Option<Assessment> = None;
        if let Some(model) = map.get("model") {
            let m = object(model, "model")?;
            reject_unknown(m, "model", &["assessment", "lineality", "cap"])?;
            if let Some(a) = m.get("assessment") {
                assessment = Some(parse_assessment(&resolve(a, &base)?, "model.assessment")?);
            }
            match m.get("lineality") {
                None => {}
                Some(Value::String(s)) if s == "exchangeable" => exchangeable = true,
                Some(Value::String(s)) if s == "none" => {}
                Some(_) => return Err(CliError::schema("model.lineality", "expected \"exchangeable\" or \"none\"")),
            }
            if let Some(c) = m.get("cap") {
                cap = usize_field(c, "model.cap")?;
            }
        }
        let assessment = match (assessment, declared) {
            (Some(a), Some(d)) if a.domain != d => {
                return Err(CliError::schema("model.assessment.space", "differs from the declared space"))
            }
            (Some(a), _) => a,
            (None, Some(d)) => Assessment::empty(d),
            (None, None) => return Err(CliError::schema("space", "missing field")),
        };
        let queries = map
            .get("queries")
            .ok_or_else(|| CliError::schema("queries", "missing field"))?
            .as_array()
            .ok_or_else(|| CliError::schema("queries", "expected a list"))?
            .clone();
        Ok(Self {
            session: Session::new(assessment, exchangeable, cap, style)?,
            queries,
            base,
        })
    }

    /// Runs every query in order. Stops at the first error, after reporting
    /// what ran before it.
    pub fn run(&self) -> (Vec<String>, Result<i32, CliError>) {
        let mut report = Vec::new();
        let mut code = 0;
        for (i, q) in self.queries.iter().enumerate() {
            let field = format!("queries[{i}]");
            let op = q.get("op").and_then(Value::as_str).unwrap_or("?");
            report.push(format!("[{}] {op}", i + 1));
            match self.query(q, &field) {
                Ok(out) => {
                    report.extend(out.lines.into_iter().map(|l| format!("  {l}")));
                    code = code.max(out.code);
                }
                Err(e) => return (report, Err(e)),
            }
        }
        (report, Ok(code))
    }

    fn query(&self, q: &Value, field: &str) -> Result<Output, CliError> {
        let map = object(q, field)?;
        let op = map
            .get("op")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::schema(&format!("{field}.op"), "missing operation name"))?;
        let ops = Operands {
            map,
            field: field.to_string(),
            base: &self.base,
        };
        let s = &self.session;
        let gamble = || parse_gamble(&ops.get("gamble")?, &ops.field("gamble"), Some(s.domain()));
        let polynomial = || parse_polynomial(&ops.get("polynomial")?, &ops.field("polynomial"));
        let allowed: &[&str] = match op {
            "check" | "extend-infinite" => &["op"],
            "member" | "lpr" | "upr" | "marginal" | "bernstein-expand" => &["op", "gamble"],
            "update" => &["op", "gamble", "sample", "counts", "event"],
            "extend-finite" => &["op", "by"],
            "bernstein-raise" => &["op", "polynomial", "to"],
            "bernstein-range" => &["op", "polynomial", "degree"],
            "bernstein-eval" => &["op", "polynomial", "at"],
            other => return Err(CliError::schema(&format!("{field}.op"), format!("unknown operation {other:?}"))),
        };
        reject_unknown(map, field, allowed)?;
        match op {
            "check" => s.check(),
            "member" => s.member(&gamble()?),
            "lpr" => s.prevision(&gamble()?, false),
            "upr" => s.prevision(&gamble()?, true),
            "marginal" => s.marginal(&gamble()?),
            "update" => self.update(&ops),
            "extend-finite" => s.extend_finite(usize_field(&ops.get("by")?, &ops.field("by"))?),
            "extend-infinite" => s.extend_infinite(),
            "bernstein-expand" => {
                let v = ops.get("gamble")?;
                bernstein_expand(&parse_gamble(&v, &ops.field("gamble"), None)?, &s.style)
            }
            "bernstein-raise" => bernstein_raise(&polynomial()?, usize_field(&ops.get("to")?, &ops.field("to"))?, &s.style),
            "bernstein-range" => {
                let degree = map.get("degree").map(|d| usize_field(d, &ops.field("degree"))).transpose()?;
                bernstein_range(&polynomial()?, degree, &s.style)
            }
            _ => {
                let at = ops.get("at")?;
                let theta = at
                    .as_array()
                    .ok_or_else(|| CliError::schema(&ops.field("at"), "expected a list of rationals"))?
                    .iter()
                    .enumerate()
                    .map(|(i, t)| rational(t, &format!("{}[{i}]", ops.field("at"))))
                    .collect::<Result<Vec<_>, _>>()?;
                bernstein_eval(&polynomial()?, theta, &s.style)
            }
        }
    }

    /// Exactly one of `sample`, `counts` or `event`. For `sample` and
    /// `counts` the gamble lives on the remaining variables, so it must
    /// carry its own space.
    fn update(&self, ops: &Operands) -> Result<Output, CliError> {
        let s = &self.session;
        let given: Vec<&str> = ["sample", "counts", "event"]
            .into_iter()
            .filter(|k| ops.map.contains_key(*k))
            .collect();
        let text = |key: &str| -> Result<String, CliError> {
            ops.map[key]
                .as_str()
                .map(str::to_string)
                .ok_or_else(|| CliError::schema(&ops.field(key), "expected a string"))
        };
        match given.as_slice() {
            ["sample"] => s.update_sample(&text("sample")?, &parse_gamble(&ops.get("gamble")?, &ops.field("gamble"), None)?),
            ["counts"] => s.update_counts(&text("counts")?, &parse_gamble(&ops.get("gamble")?, &ops.field("gamble"), None)?),
            ["event"] => {
                let keys = ops.map["event"]
                    .as_array()
                    .ok_or_else(|| CliError::schema(&ops.field("event"), "expected a list of keys"))?
                    .iter()
                    .map(|k| {
                        k.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| CliError::schema(&ops.field("event"), "keys must be strings"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let f = parse_gamble(&ops.get("gamble")?, &ops.field("gamble"), Some(s.domain()))?;
                s.update_event(&keys, &f)
            }
            _ => Err(CliError::schema(
                &ops.field("sample"),
                "give exactly one of \"sample\", \"counts\" or \"event\"",
            )),
        }
    }
}
