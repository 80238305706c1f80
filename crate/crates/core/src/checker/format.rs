//! JSON proof files. Each node is an object with `goal`, `rule`, `args` and
//! `premises`; keys are written sorted and pretty-printed.

use std::path::Path as FsPath;

use serde_json::{json, Map, Value};
use thiserror::Error;

use super::Proof;
use crate::calculus::{Args, RuleApp, RuleId};
use crate::syntax::{parse_formula, parse_hypersequent, parse_sequent, ParseError, Sequent};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parse error in {field}: {err}")]
    Parse { field: String, err: ParseError },
    #[error("malformed proof node at {path:?}: {msg}")]
    Malformed { path: Vec<usize>, msg: String },
}

const OPEN: &str = "open";

fn usizes(v: &[usize]) -> Value {
    if v.len() == 1 {
        json!(v[0])
    } else {
        json!(v)
    }
}

fn args_to_json(rule: RuleId, a: &Args) -> Value {
    let mut m = Map::new();
    if !a.seq.is_empty() {
        m.insert("seq".into(), usizes(&a.seq));
    }
    if !a.idx.is_empty() {
        m.insert("idx".into(), usizes(&a.idx));
    }
    if let Some(side) = rule.side() {
        let s = if side == crate::syntax::Side::Left { "l" } else { "r" };
        m.insert("side".into(), json!(s));
    }
    if let Some(f) = &a.formula {
        m.insert("formula".into(), json!(f.to_string()));
    }
    if let Some(s) = &a.sequent {
        m.insert("sequent".into(), json!(s.to_string()));
    }
    if let Some((ante, succ)) = &a.split {
        m.insert("split".into(), json!({ "ante": ante, "succ": succ }));
    }
    Value::Object(m)
}

pub fn proof_to_json(p: &Proof) -> Value {
    let mut m = Map::new();
    m.insert("goal".into(), json!(p.conclusion.to_string()));
    match &p.app {
        Some(app) => {
            m.insert("rule".into(), json!(app.rule.name()));
            m.insert("args".into(), args_to_json(app.rule, &app.args));
        }
        None => {
            m.insert("rule".into(), json!(OPEN));
        }
    }
    m.insert(
        "premises".into(),
        Value::Array(p.premises.iter().map(proof_to_json).collect()),
    );
    Value::Object(m)
}

fn malformed<T>(path: &[usize], msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Malformed {
        path: path.to_vec(),
        msg: msg.into(),
    })
}

fn read_usizes(path: &[usize], v: &Value, field: &str) -> Result<Vec<usize>, FormatError> {
    let one = |x: &Value| x.as_u64().map(|n| n as usize);
    match v {
        Value::Array(xs) => xs
            .iter()
            .map(|x| one(x).ok_or(()))
            .collect::<Result<Vec<_>, _>>()
            .or_else(|_| malformed(path, format!("`{field}` must hold non-negative integers"))),
        x => match one(x) {
            Some(n) => Ok(vec![n]),
            None => malformed(path, format!("`{field}` must be an integer or an array")),
        },
    }
}

fn parse_err(field: &str, err: ParseError) -> FormatError {
    FormatError::Parse {
        field: field.to_string(),
        err,
    }
}

fn args_from_json(path: &[usize], rule: RuleId, v: Option<&Value>) -> Result<Args, FormatError> {
    let mut a = Args::default();
    let m = match v {
        None | Some(Value::Null) => return Ok(a),
        Some(Value::Object(m)) => m,
        Some(_) => return malformed(path, "`args` must be an object"),
    };
    for (k, x) in m {
        match k.as_str() {
            "seq" => a.seq = read_usizes(path, x, "seq")?,
            "idx" => a.idx = read_usizes(path, x, "idx")?,
            "side" => {
                let want = rule.side().map(|s| if s == crate::syntax::Side::Left { "l" } else { "r" });
                if x.as_str() != want {
                    return malformed(path, format!("`side` does not match rule {rule}"));
                }
            }
            "formula" => {
                let s = x.as_str().ok_or(()).or_else(|_| malformed(path, "`formula` must be a string"))?;
                a.formula = Some(parse_formula(s).map_err(|e| parse_err("formula", e))?);
            }
            "sequent" => {
                let s = x.as_str().ok_or(()).or_else(|_| malformed(path, "`sequent` must be a string"))?;
                a.sequent = Some(parse_sequent(s).map_err(|e| parse_err("sequent", e))?);
            }
            "split" => {
                let ante = x.get("ante").map(|y| read_usizes(path, y, "split.ante")).transpose()?;
                let succ = x.get("succ").map(|y| read_usizes(path, y, "split.succ")).transpose()?;
                a.split = Some((ante.unwrap_or_default(), succ.unwrap_or_default()));
            }
            other => return malformed(path, format!("unknown argument `{other}`")),
        }
    }
    Ok(a)
}

/// The sequent added by an `ew` step, when the file leaves it implicit.
fn infer_ew(goal: &crate::syntax::Hypersequent, prem: &crate::syntax::Hypersequent) -> Option<Sequent> {
    let mut rest: Vec<Sequent> = goal.canonical();
    for s in prem.canonical() {
        let k = rest.iter().position(|t| *t == s)?;
        rest.remove(k);
    }
    if rest.len() == 1 {
        rest.pop()
    } else {
        None
    }
}

fn node_from_json(path: &mut Vec<usize>, v: &Value) -> Result<Proof, FormatError> {
    let m = match v {
        Value::Object(m) => m,
        _ => return malformed(path, "proof node must be an object"),
    };
    let goal = match m.get("goal").and_then(Value::as_str) {
        Some(g) => parse_hypersequent(g).map_err(|e| parse_err("goal", e))?,
        None => return malformed(path, "missing `goal`"),
    };
    let mut premises = vec![];
    if let Some(ps) = m.get("premises") {
        let ps = match ps {
            Value::Array(ps) => ps,
            _ => return malformed(path, "`premises` must be an array"),
        };
        for (k, q) in ps.iter().enumerate() {
            path.push(k);
            premises.push(node_from_json(path, q)?);
            path.pop();
        }
    }
    let rule_name = match m.get("rule").and_then(Value::as_str) {
        Some(r) => r,
        None => return malformed(path, "missing `rule`"),
    };
    if rule_name == OPEN {
        if !premises.is_empty() {
            return malformed(path, "open leaves have no premises");
        }
        return Ok(Proof::open(goal));
    }
    let rule: RuleId = match rule_name.parse() {
        Ok(r) => r,
        Err(_) => return malformed(path, format!("unknown rule `{rule_name}`")),
    };
    let mut args = args_from_json(path, rule, m.get("args"))?;
    if rule == RuleId::Ew && args.sequent.is_none() {
        if let Some(p) = premises.first() {
            args.sequent = infer_ew(&goal, &p.conclusion);
        }
    }
    Ok(Proof {
        conclusion: goal,
        app: Some(RuleApp::new(rule, args)),
        premises,
    })
}

pub fn proof_from_json(v: &Value) -> Result<Proof, FormatError> {
    node_from_json(&mut vec![], v)
}

/// Parse a proof file. Deep proofs are accepted: the JSON nesting limit is
/// lifted.
pub fn proof_from_str(text: &str) -> Result<Proof, FormatError> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let mut values = de.into_iter::<Value>();
    let v = match values.next() {
        Some(v) => v?,
        None => return proof_from_json(&Value::Null),
    };
    if let Some(extra) = values.next() {
        extra?;
        return Err(FormatError::Malformed { path: vec![], msg: "trailing data after the proof".into() });
    }
    proof_from_json(&v)
}

pub fn proof_to_string(p: &Proof) -> String {
    let mut s = serde_json::to_string_pretty(&proof_to_json(p)).expect("json values serialize");
    s.push('\n');
    s
}

pub fn read_proof(path: impl AsRef<FsPath>) -> Result<Proof, FormatError> {
    proof_from_str(&std::fs::read_to_string(path)?)
}

pub fn write_proof(path: impl AsRef<FsPath>, p: &Proof) -> Result<(), FormatError> {
    std::fs::write(path, proof_to_string(p))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::SystemId;
    use crate::checker::{axiom_template, check_proof, AxiomName};
    use crate::syntax::f;

    #[test]
    fn round_trip_templates() {
        for name in AxiomName::ALL {
            let args: Vec<_> = ["p & q", "box r"][..name.arity()].iter().map(|s| f(s)).collect();
            let t = axiom_template(name, &args).unwrap();
            let back = proof_from_str(&proof_to_string(&t)).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn keys_are_sorted_and_stable() {
        let t = axiom_template(AxiomName::Four, &[f("p")]).unwrap();
        let s = proof_to_string(&t);
        let (a, g, pr, r) = (s.find("\"args\"").unwrap(), s.find("\"goal\"").unwrap(), s.find("\"premises\"").unwrap(), s.find("\"rule\"").unwrap());
        assert!(a < g && g < pr && pr < r);
        assert_eq!(s, proof_to_string(&proof_from_str(&s).unwrap()));
    }

    #[test]
    fn ew_sequent_is_inferred() {
        let text = r#"{"goal": "p -> p || q =>", "rule": "ew", "premises": [
            {"goal": "p -> p", "rule": "ax", "premises": []}]}"#;
        let p = proof_from_str(text).unwrap();
        assert!(check_proof(&p, SystemId::K).ok);
    }

    #[test]
    fn bad_goal_is_a_parse_error() {
        let text = r#"{"goal": "p -> (", "rule": "ax", "premises": []}"#;
        assert!(matches!(proof_from_str(text), Err(FormatError::Parse { .. })));
        let text = r#"{"goal": "p -> p", "rule": "frobnicate", "premises": []}"#;
        assert!(matches!(proof_from_str(text), Err(FormatError::Malformed { .. })));
    }
}
