//! JSON files for algebras and free models.
//!
//! ```text
//! {"signature": <name or DSL>, "carrier": [labels],
//!  "ops": {symbol: nested row-major table of labels},
//!  "join": symbol?, "zero": label?, "unit": label?}
//! ```
//!
//! A table for an n-ary symbol is nested n deep, outermost index = first
//! argument; a constant is a bare label. When `signature` is only a name,
//! the symbols and arities are read off the tables. Free models add
//! `"generators": {name: label}` and `"decomposition": {label: [term]}`.

use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use crate::algebra::{for_each_tuple, ConstantRole, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::free::FreeModel;
use crate::parse::{parse_signature, parse_term};
use crate::signature::Signature;
use crate::slo::SloAlgebra;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidAlgebra(msg.into())
}

fn nested(alg: &FiniteAlgebra, op: usize, prefix: &mut Vec<Elem>) -> Value {
    if prefix.len() == alg.arity(op) {
        return Value::String(alg.label(alg.apply(op, prefix)).to_string());
    }
    let rows = (0..alg.size())
        .map(|a| {
            prefix.push(a);
            let v = nested(alg, op, prefix);
            prefix.pop();
            v
        })
        .collect();
    Value::Array(rows)
}

pub fn algebra_to_json(alg: &FiniteAlgebra) -> Value {
    let sig = alg.signature();
    let mut obj = Map::new();
    obj.insert("signature".into(), Value::String(sig.to_dsl()));
    obj.insert(
        "carrier".into(),
        Value::Array(alg.labels().iter().cloned().map(Value::String).collect()),
    );
    let mut ops = Map::new();
    for (i, (s, _)) in sig.ops().iter().enumerate() {
        ops.insert(s.clone(), nested(alg, i, &mut Vec::new()));
    }
    obj.insert("ops".into(), Value::Object(ops));
    if let Some(j) = sig.join_symbol() {
        obj.insert("join".into(), Value::String(j.to_string()));
    }
    if let Some(z) = alg.zero() {
        obj.insert("zero".into(), Value::String(alg.label(z).to_string()));
    }
    if let Some(u) = alg.unit() {
        obj.insert("unit".into(), Value::String(alg.label(u).to_string()));
    }
    Value::Object(obj)
}

fn depth(v: &Value) -> Result<usize> {
    match v {
        Value::String(_) => Ok(0),
        Value::Array(rows) => match rows.first() {
            Some(r) => Ok(1 + depth(r)?),
            None => Err(invalid("cannot infer the arity of an empty table")),
        },
        _ => Err(invalid("table entries must be labels or arrays")),
    }
}

fn flatten(
    v: &Value,
    arity: usize,
    n: usize,
    labels: &dyn Fn(&str) -> Result<Elem>,
    out: &mut Vec<Elem>,
) -> Result<()> {
    match (arity, v) {
        (0, Value::String(s)) => {
            out.push(labels(s)?);
            Ok(())
        }
        (k, Value::Array(rows)) if k > 0 => {
            if rows.len() != n {
                return Err(invalid(format!("table row has {} entries, expected {n}", rows.len())));
            }
            rows.iter().try_for_each(|r| flatten(r, k - 1, n, labels, out))
        }
        _ => Err(invalid("table nesting does not match the arity")),
    }
}

pub fn algebra_from_json(v: &Value) -> Result<FiniteAlgebra> {
    let obj = v.as_object().ok_or_else(|| invalid("expected a JSON object"))?;
    let carrier: Vec<String> = obj
        .get("carrier")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("missing `carrier` array"))?
        .iter()
        .map(|l| {
            l.as_str()
                .map(str::to_string)
                .ok_or_else(|| invalid("carrier labels must be strings"))
        })
        .collect::<Result<_>>()?;
    let n = carrier.len();
    let lookup = |s: &str| {
        carrier
            .iter()
            .position(|c| c == s)
            .ok_or_else(|| Error::UnknownElement(s.to_string()))
    };
    let empty = Map::new();
    let ops = match obj.get("ops") {
        Some(Value::Object(m)) => m,
        None => &empty,
        Some(_) => return Err(invalid("`ops` must be an object")),
    };
    let sig_text = obj.get("signature").and_then(Value::as_str).unwrap_or("");
    let mut sig = if sig_text.trim_start().starts_with("signature") {
        parse_signature(sig_text)?
    } else {
        let mut s = Signature::new(if sig_text.is_empty() { "A" } else { sig_text });
        for (sym, t) in ops {
            s.push_op(sym.clone(), depth(t)?)?;
        }
        s
    };
    if let Some(j) = obj.get("join") {
        let j = j.as_str().ok_or_else(|| invalid("`join` must be a symbol"))?;
        sig.designate_join(j)?;
    }
    if let Some(sym) = ops.keys().find(|k| sig.arity(k).is_none()) {
        return Err(Error::UnknownSymbol(sym.clone()));
    }
    let constant_label = |key: &str| -> Result<Option<Elem>> {
        match obj.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => lookup(s).map(Some),
            Some(_) => Err(invalid(format!("`{key}` must be a label"))),
        }
    };
    let zero = constant_label("zero")?;
    let unit = constant_label("unit")?;

    let mut tables = Vec::new();
    for (sym, arity) in sig.ops() {
        let mut data = Vec::with_capacity(n.pow(*arity as u32));
        match ops.get(sym) {
            Some(t) => flatten(t, *arity, n, &lookup, &mut data)?,
            None if sig.zero_symbol() == Some(sym) && zero.is_some() => data.push(zero.unwrap()),
            None if sig.unit_symbol() == Some(sym) && unit.is_some() => data.push(unit.unwrap()),
            None => return Err(invalid(format!("no table for `{sym}`"))),
        }
        tables.push(data);
    }
    let mut alg = FiniteAlgebra::from_flat(sig, carrier, tables)?;
    for (role, given, current, base) in [
        (ConstantRole::Zero, zero, alg.zero(), "zero"),
        (ConstantRole::Unit, unit, alg.unit(), "one"),
    ] {
        match (given, current) {
            (Some(g), Some(c)) if g != c => {
                return Err(invalid(format!(
                    "`{base}` label disagrees with the designated constant"
                )));
            }
            (Some(g), None) => {
                let sym = match role {
                    ConstantRole::Zero => alg.signature().zero_symbol(),
                    ConstantRole::Unit => alg.signature().unit_symbol(),
                }
                .map(str::to_string)
                .unwrap_or_else(|| alg.signature().fresh_symbol(base));
                alg = alg.with_designated_constant(role, &sym, g)?;
            }
            _ => {}
        }
    }
    Ok(alg)
}

pub fn read_algebra(path: impl AsRef<Path>) -> Result<FiniteAlgebra> {
    let text = fs::read_to_string(path)?;
    algebra_from_json(&serde_json::from_str(&text)?)
}

pub fn write_algebra(path: impl AsRef<Path>, alg: &FiniteAlgebra) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&algebra_to_json(alg))? + "\n")?;
    Ok(())
}

pub fn free_model_to_json(m: &FreeModel) -> Value {
    let alg = m.algebra();
    let mut v = algebra_to_json(alg);
    let obj = v.as_object_mut().unwrap();
    let gens = m
        .generators()
        .iter()
        .map(|(g, e)| (g.clone(), Value::String(alg.label(*e).to_string())))
        .collect();
    obj.insert("generators".into(), Value::Object(gens));
    let dec = (0..m.size())
        .map(|e| {
            let parts = m
                .decomposition(e)
                .iter()
                .map(|t| Value::String(t.to_string()))
                .collect();
            (alg.label(e).to_string(), Value::Array(parts))
        })
        .collect();
    obj.insert("decomposition".into(), Value::Object(dec));
    v
}

/// Reads a free model; the algebra must be a valid SLO under its designations.
pub fn free_model_from_json(v: &Value) -> Result<FreeModel> {
    let alg = algebra_from_json(v)?;
    let slo = SloAlgebra::from_designated(&alg).map_err(|viol| invalid(viol.to_string()))?;
    let obj = v.as_object().unwrap();
    let gens = obj
        .get("generators")
        .and_then(Value::as_object)
        .ok_or_else(|| invalid("missing `generators` object"))?
        .iter()
        .map(|(g, l)| {
            let l = l.as_str().ok_or_else(|| invalid("generator images must be labels"))?;
            Ok((g.clone(), alg.element(l)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let dec_obj = obj
        .get("decomposition")
        .and_then(Value::as_object)
        .ok_or_else(|| invalid("missing `decomposition` object"))?;
    let mut dec = Vec::with_capacity(alg.size());
    for label in alg.labels() {
        let parts = dec_obj
            .get(label)
            .and_then(Value::as_array)
            .ok_or_else(|| invalid(format!("no decomposition for `{label}`")))?;
        dec.push(
            parts
                .iter()
                .map(|p| {
                    parse_term(
                        p.as_str().ok_or_else(|| invalid("terms must be strings"))?,
                        alg.signature(),
                    )
                })
                .collect::<Result<Vec<_>>>()?,
        );
    }
    FreeModel::new(slo, gens, dec)
}

pub fn read_free_model(path: impl AsRef<Path>) -> Result<FreeModel> {
    let text = fs::read_to_string(path)?;
    free_model_from_json(&serde_json::from_str(&text)?)
}

pub fn write_free_model(path: impl AsRef<Path>, m: &FreeModel) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&free_model_to_json(m))? + "\n")?;
    Ok(())
}

/// Whether two algebras have the same labels and tables up to relabelling
/// order: the carriers are matched by label and every table compared.
pub fn same_by_labels(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    if a.size() != b.size() || a.signature().ops().len() != b.signature().ops().len() {
        return false;
    }
    let to_b: Option<Vec<Elem>> = a.labels().iter().map(|l| b.element(l).ok()).collect();
    let Some(to_b) = to_b else { return false };
    a.signature().ops().iter().enumerate().all(|(i, (s, k))| {
        let Ok(j) = b.op_index(s) else { return false };
        if b.arity(j) != *k {
            return false;
        }
        let mut ok = true;
        for_each_tuple(a.size(), *k, |args| {
            if ok {
                let mapped: Vec<Elem> = args.iter().map(|&x| to_b[x]).collect();
                ok = to_b[a.apply(i, args)] == b.apply(j, &mapped);
            }
        });
        ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::free::free_cdis;
    use crate::limits::Limits;
    use serde_json::json;

    #[test]
    fn round_trip_catalog() {
        for alg in [
            catalog::fan_semilattice(),
            catalog::chain_lattice(3),
            catalog::unary_identity(2),
        ] {
            let back = algebra_from_json(&algebra_to_json(&alg)).unwrap();
            assert_eq!(back, alg);
        }
    }

    #[test]
    fn infers_signature_from_tables() {
        let v = json!({
            "signature": "Chain2",
            "carrier": ["0", "1"],
            "ops": {"mul": [["0", "0"], ["0", "1"]], "join": [["0", "1"], ["1", "1"]]},
            "join": "join",
            "zero": "0",
            "unit": "1"
        });
        let alg = algebra_from_json(&v).unwrap();
        assert_eq!(alg.signature().arity("mul"), Some(2));
        assert_eq!(alg.zero(), Some(0));
        assert_eq!(alg.unit(), Some(1));
        assert!(SloAlgebra::from_designated(&alg).is_ok());
    }

    #[test]
    fn rejects_bad_tables() {
        let short = json!({"signature": "S", "carrier": ["a", "b"], "ops": {"mul": [["a"], ["a", "b"]]}});
        assert!(algebra_from_json(&short).is_err());
        let unknown = json!({"signature": "S", "carrier": ["a"], "ops": {"mul": [["c"]]}});
        assert!(matches!(algebra_from_json(&unknown), Err(Error::UnknownElement(_))));
        let missing =
            json!({"signature": "signature S op mul:2 op f:1 end", "carrier": ["a"], "ops": {"mul": [["a"]]}});
        assert!(algebra_from_json(&missing).is_err());
    }

    #[test]
    fn free_model_round_trip() {
        let m = free_cdis(&["x"], &Limits::default()).unwrap();
        let v = free_model_to_json(&m);
        assert_eq!(v["generators"]["x"], "⟨x⟩");
        assert_eq!(v["decomposition"]["⟨x⟩+1"], json!(["x", "one"]));
        let back = free_model_from_json(&v).unwrap();
        assert_eq!(back.algebra(), m.algebra());
        assert_eq!(back.decomposition(3), m.decomposition(3));
    }
}
