//! Structured verifier output: both sides of every identity plus the first
//! disagreement, rendered as deterministic JSON or text.

use serde::Serialize;
use serde_json::{json, Value};

use crate::exactalg::Elem;
use crate::multifunc::{basis_words, fmt_word, CumulantFamily};
use crate::rational::{fmt_q, serialize_vec, Q};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub identity: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<String>,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

pub fn elem_json(e: &Elem) -> Value {
    json!(serialize_vec(&e.0))
}

/// Words in order, each with its table over basis words.
pub fn family_json(f: &CumulantFamily) -> Value {
    let coeffs: Vec<Value> = f
        .coeffs
        .iter()
        .map(|(w, c)| {
            let table: Vec<Value> = c.table.iter().map(elem_json).collect();
            json!({ "word": w.iter().map(|i| i + 1).collect::<Vec<_>>(), "table": table })
        })
        .collect();
    json!({ "s": f.s, "degree": f.degree, "base_dim": f.base.dim(), "coeffs": coeffs })
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), pass: true, checks: vec![] }
    }

    pub fn push(&mut self, identity: impl Into<String>, pass: bool, diff: Option<String>, lhs: Value, rhs: Value) {
        self.pass &= pass;
        self.checks.push(Check { identity: identity.into(), pass, first_difference: diff, lhs, rhs });
    }

    pub fn families(&mut self, identity: impl Into<String>, lhs: &CumulantFamily, rhs: &CumulantFamily) {
        let diff = if lhs.s != rhs.s || lhs.degree != rhs.degree {
            Some(format!("shape {}x{} vs {}x{}", lhs.s, lhs.degree, rhs.s, rhs.degree))
        } else {
            lhs.first_difference(rhs).map(|(w, bw)| describe(lhs, rhs, &w, &bw))
        };
        self.push(identity, diff.is_none(), diff, family_json(lhs), family_json(rhs));
    }

    pub fn elems(&mut self, identity: impl Into<String>, lhs: &Elem, rhs: &Elem) {
        let pass = lhs == rhs;
        let diff = (!pass).then(|| "values differ".to_string());
        self.push(identity, pass, diff, elem_json(lhs), elem_json(rhs));
    }

    pub fn scalars(&mut self, identity: impl Into<String>, lhs: &Q, rhs: &Q) {
        let pass = lhs == rhs;
        let diff = (!pass).then(|| format!("{} ≠ {}", fmt_q(lhs), fmt_q(rhs)));
        self.push(identity, pass, diff, json!(fmt_q(lhs)), json!(fmt_q(rhs)));
    }

    /// A yes/no property with an explanation on failure.
    pub fn flag(&mut self, identity: impl Into<String>, pass: bool, detail: Option<String>) {
        self.push(identity, pass, detail, json!(pass), json!(true));
    }

    /// Appends another report's checks, prefixing their identities.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.push(format!("{prefix}: {}", c.identity), c.pass, c.first_difference, c.lhs, c.rhs);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} [{}]\n", self.name, if self.pass { "PASS" } else { "FAIL" });
        for c in &self.checks {
            s.push_str(&format!("  {} {}", if c.pass { "ok  " } else { "FAIL" }, c.identity));
            if let Some(d) = &c.first_difference {
                s.push_str(&format!("  ({d})"));
            }
            s.push('\n');
        }
        s
    }
}

fn describe(lhs: &CumulantFamily, rhs: &CumulantFamily, w: &[usize], bw: &[usize]) -> String {
    let d = lhs.base.dim();
    let k = basis_words(d, w.len() - 1).iter().position(|b| b == bw).unwrap_or(0);
    let show = |f: &CumulantFamily| {
        f.coeffs.get(w).map_or("missing".to_string(), |c| format!("[{}]", serialize_vec(&c.table[k].0).join(", ")))
    };
    let args: Vec<String> = bw.iter().map(|j| format!("e{}", j + 1)).collect();
    format!("word {} at ({}): {} vs {}", fmt_word(w), args.join(","), show(lhs), show(rhs))
}
