//! Structure files: JSON documents describing a finite structure.
//!
//! Tables are either objects keyed by tuple (the point label for unary
//! symbols, `""` for nullary ones, labels joined by `,` otherwise) or arrays
//! listing every tuple in lexicographic order.

use std::collections::HashMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use redprod_core::semantics::{
    discrete_metrization, tuple_at, tuple_count, validate_structure, ClassicalStructure, FiniteMetricStructure,
};
use redprod_core::syntax::{ClassicalSignature, FunctionSymbol, PredicateSymbol};
use redprod_core::{Rational, Signature};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureFile {
    #[serde(default)]
    classical: bool,
    signature: SignatureBlock,
    points: Vec<String>,
    dist: Option<Vec<Vec<Rational>>>,
    #[serde(default)]
    preds: Map<String, Value>,
    #[serde(default)]
    funcs: Map<String, Value>,
    #[serde(default)]
    consts: HashMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureBlock {
    dmax: Option<Rational>,
    #[serde(default)]
    constants: Vec<String>,
    #[serde(default)]
    functions: Vec<FunctionDecl>,
    #[serde(default)]
    predicates: Vec<PredicateDecl>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionDecl {
    name: String,
    arity: usize,
    lipschitz: Option<Rational>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredicateDecl {
    name: String,
    arity: usize,
    lo: Option<Rational>,
    hi: Option<Rational>,
    lipschitz: Option<Rational>,
}

fn required<T>(value: Option<T>, what: &str, name: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("{what} of `{name}` is required unless the structure is classical"))
}

impl SignatureBlock {
    fn metric(&self) -> Result<Signature> {
        let mut sig = Signature::new(self.dmax.ok_or_else(|| anyhow!("signature.dmax is required"))?);
        sig.constants = self.constants.clone();
        for f in &self.functions {
            sig.functions.push(FunctionSymbol {
                name: f.name.clone(),
                arity: f.arity,
                lipschitz: required(f.lipschitz, "lipschitz", &f.name)?,
            });
        }
        for p in &self.predicates {
            sig.predicates.push(PredicateSymbol {
                name: p.name.clone(),
                arity: p.arity,
                lo: required(p.lo, "lo", &p.name)?,
                hi: required(p.hi, "hi", &p.name)?,
                lipschitz: required(p.lipschitz, "lipschitz", &p.name)?,
            });
        }
        Ok(sig)
    }

    fn classical(&self) -> ClassicalSignature {
        ClassicalSignature {
            constants: self.constants.clone(),
            functions: self.functions.iter().map(|f| (f.name.clone(), f.arity)).collect(),
            relations: self.predicates.iter().map(|p| (p.name.clone(), p.arity)).collect(),
        }
    }
}

fn tuple_key(labels: &[String], tuple: &[usize]) -> String {
    tuple.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(",")
}

/// Maps each object key to its tuple index, or `None` when two tuples share
/// a key.
fn key_index(labels: &[String], arity: usize) -> Option<HashMap<String, usize>> {
    let n = labels.len();
    let mut out = HashMap::new();
    for t in 0..tuple_count(n, arity) {
        if out.insert(tuple_key(labels, &tuple_at(n, arity, t)), t).is_some() {
            return None;
        }
    }
    Some(out)
}

/// Reads one table into a vector of entries in tuple order. Missing object
/// entries are filled by `default`.
fn read_table<T>(
    labels: &[String],
    arity: usize,
    name: &str,
    value: &Value,
    entry: impl Fn(&Value) -> Result<T>,
    default: Option<T>,
) -> Result<Vec<T>>
where
    T: Clone,
{
    let count = tuple_count(labels.len(), arity);
    match value {
        Value::Array(items) => {
            if items.len() != count {
                bail!("table `{name}` has {} entries, expected {count}", items.len());
            }
            items
                .iter()
                .map(|v| entry(v).with_context(|| format!("in table `{name}`")))
                .collect()
        }
        Value::Object(map) => {
            let index = key_index(labels, arity)
                .ok_or_else(|| anyhow!("tuple keys of `{name}` are ambiguous; list its values as an array"))?;
            let mut out: Vec<Option<T>> = vec![None; count];
            for (k, v) in map {
                let t = *index.get(k).ok_or_else(|| anyhow!("table `{name}` has no tuple `{k}`"))?;
                out[t] = Some(entry(v).with_context(|| format!("at `{name}({k})`"))?);
            }
            out.into_iter()
                .enumerate()
                .map(|(t, v)| {
                    v.or_else(|| default.clone()).ok_or_else(|| {
                        anyhow!("table `{name}` has no value for ({})", tuple_key(labels, &tuple_at(labels.len(), arity, t)))
                    })
                })
                .collect()
        }
        _ => bail!("table `{name}` must be an object or an array"),
    }
}

fn rational(v: &Value) -> Result<Rational> {
    Ok(serde_json::from_value(v.clone())?)
}

fn boolean(v: &Value) -> Result<bool> {
    v.as_bool().ok_or_else(|| anyhow!("expected true or false, got {v}"))
}

fn point(labels: &[String]) -> impl Fn(&Value) -> Result<usize> + '_ {
    move |v| {
        let label = v.as_str().ok_or_else(|| anyhow!("expected a point label, got {v}"))?;
        labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| anyhow!("no point labelled `{label}`"))
    }
}

fn unknown<'a>(what: &str, mut keys: impl Iterator<Item = &'a String>, known: impl Fn(&str) -> bool) -> Result<()> {
    match keys.find(|k| !known(k)) {
        Some(k) => bail!("{what} `{k}` is not declared in the signature"),
        None => Ok(()),
    }
}

impl StructureFile {
    fn build(self) -> Result<FiniteMetricStructure> {
        let labels = self.points;
        let mut sorted = labels.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            bail!("point `{}` is listed twice", w[0]);
        }
        let sig = &self.signature;
        unknown("predicate", self.preds.keys(), |k| sig.predicates.iter().any(|p| p.name == k))?;
        unknown("function", self.funcs.keys(), |k| sig.functions.iter().any(|f| f.name == k))?;
        unknown("constant", self.consts.keys(), |k| sig.constants.iter().any(|c| c == k))?;
        let funcs = sig
            .functions
            .iter()
            .map(|f| {
                let table = self
                    .funcs
                    .get(&f.name)
                    .ok_or_else(|| anyhow!("function `{}` has no table", f.name))?;
                read_table(&labels, f.arity, &f.name, table, point(&labels), None)
            })
            .collect::<Result<Vec<_>>>()?;
        let consts = sig
            .constants
            .iter()
            .map(|c| {
                let label = self.consts.get(c).ok_or_else(|| anyhow!("constant `{c}` is not interpreted"))?;
                point(&labels)(&Value::String(label.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        if self.classical {
            if self.dist.is_some() {
                bail!("a classical structure carries the discrete metric; drop `dist`");
            }
            let relations = sig
                .predicates
                .iter()
                .map(|p| match self.preds.get(&p.name) {
                    Some(table) => read_table(&labels, p.arity, &p.name, table, boolean, Some(false)),
                    None => Ok(vec![false; tuple_count(labels.len(), p.arity)]),
                })
                .collect::<Result<Vec<_>>>()?;
            let m = ClassicalStructure {
                signature: sig.classical(),
                labels,
                relations,
                funcs,
                consts,
            };
            return Ok(discrete_metrization(&m));
        }
        let signature = sig.metric()?;
        let n = labels.len();
        let dist = match self.dist {
            Some(d) => d,
            None => (0..n)
                .map(|a| (0..n).map(|b| if a == b { Rational::ZERO } else { signature.dmax }).collect())
                .collect(),
        };
        let preds = signature
            .predicates
            .iter()
            .map(|p| {
                let table = self
                    .preds
                    .get(&p.name)
                    .ok_or_else(|| anyhow!("predicate `{}` has no table", p.name))?;
                read_table(&labels, p.arity, &p.name, table, rational, None)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteMetricStructure {
            signature,
            labels,
            dist,
            preds,
            funcs,
            consts,
        })
    }
}

/// Parses a structure document and checks every structure invariant.
pub fn parse_structure(text: &str, strict_lipschitz: bool) -> Result<(FiniteMetricStructure, Vec<String>)> {
    let file: StructureFile = serde_json::from_str(text)?;
    let m = file.build()?;
    let report = validate_structure(&m, strict_lipschitz);
    if !report.is_valid() {
        let lines: Vec<String> = report.errors.iter().map(|v| format!("  {v}")).collect();
        bail!("invalid structure:\n{}", lines.join("\n"));
    }
    Ok((m, report.warnings.iter().map(ToString::to_string).collect()))
}

pub fn load_structure(path: &Path, strict_lipschitz: bool) -> Result<FiniteMetricStructure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let (m, warnings) = parse_structure(&text, strict_lipschitz).with_context(|| format!("in {}", path.display()))?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(m)
}

fn table_json<T: Clone + Into<Value>>(labels: &[String], arity: usize, values: &[T]) -> Value {
    if key_index(labels, arity).is_none() {
        return Value::Array(values.iter().cloned().map(Into::into).collect());
    }
    let n = labels.len();
    let map: Map<String, Value> = values
        .iter()
        .enumerate()
        .map(|(t, v)| (tuple_key(labels, &tuple_at(n, arity, t)), v.clone().into()))
        .collect();
    Value::Object(map)
}

/// The structure file describing `m`, in the continuous form.
pub fn structure_json(m: &FiniteMetricStructure) -> Value {
    let sig = &m.signature;
    let text = |r: &Rational| Value::String(r.to_string());
    let labels = &m.labels;
    let preds: Map<String, Value> = sig
        .predicates
        .iter()
        .zip(&m.preds)
        .map(|(p, t)| {
            let values: Vec<Value> = t.iter().map(text).collect();
            (p.name.clone(), table_json(labels, p.arity, &values))
        })
        .collect();
    let funcs: Map<String, Value> = sig
        .functions
        .iter()
        .zip(&m.funcs)
        .map(|(f, t)| {
            let values: Vec<Value> = t.iter().map(|&i| Value::String(labels[i].clone())).collect();
            (f.name.clone(), table_json(labels, f.arity, &values))
        })
        .collect();
    let consts: Map<String, Value> = sig
        .constants
        .iter()
        .zip(&m.consts)
        .map(|(c, &i)| (c.clone(), Value::String(labels[i].clone())))
        .collect();
    json!({
        "signature": {
            "dmax": text(&sig.dmax),
            "constants": sig.constants,
            "functions": sig.functions.iter().map(|f| json!({
                "name": f.name, "arity": f.arity, "lipschitz": text(&f.lipschitz),
            })).collect::<Vec<_>>(),
            "predicates": sig.predicates.iter().map(|p| json!({
                "name": p.name, "arity": p.arity, "lo": text(&p.lo), "hi": text(&p.hi),
                "lipschitz": text(&p.lipschitz),
            })).collect::<Vec<_>>(),
        },
        "points": labels,
        "dist": m.dist.iter().map(|row| row.iter().map(text).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "preds": preds,
        "funcs": funcs,
        "consts": consts,
    })
}
