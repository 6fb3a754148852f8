//! Run reports: one structure serialized either as machine-readable JSON or
//! as an indented human listing with identical numeric content.
//!
//! Representation: command-specific payloads are `serde_json::Value` trees.
//! Maps inside values are sorted (serde_json's BTreeMap backing) and struct
//! fields serialize in declaration order, so equal reports are byte-identical
//! across runs. Rationals and Laurent polynomials appear as strings; every
//! other number is a plain integer.

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::linalg::Rat;
use crate::motivic::{Atom, AtomKind, Base, CellReport, MotClass};
use crate::oracle::nondegeneracy_probe;
use crate::poly::{Dims, SparsePoly};
use crate::polyhedron::NewtonPolyhedron;

// --- report structure ---

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    /// "pass" or "fail".
    pub status: String,
    pub detail: String,
}

impl HypothesisCheck {
    pub fn pass(name: &str, detail: impl Into<String>) -> Self {
        HypothesisCheck { name: name.into(), status: "pass".into(), detail: detail.into() }
    }

    pub fn fail(name: &str, detail: impl Into<String>) -> Self {
        HypothesisCheck { name: name.into(), status: "fail".into(), detail: detail.into() }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Echo of the invoked command and its arguments.
    pub command: String,
    /// Echo of the parsed input (dims, polynomial, options).
    pub input: Value,
    pub hypotheses: Vec<HypothesisCheck>,
    /// Command-specific primary result.
    pub result: Value,
    /// Appendix of brute-force counts backing the result.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Value>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            input: Value::Null,
            hypotheses: Vec::new(),
            result: Value::Null,
            oracle: None,
            diagnostics: Vec::new(),
        }
    }

    /// Machine form: pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human form: an indented listing of the same data.
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        render_entry("command", &Value::String(self.command.clone()), 0, &mut out);
        render_entry("input", &self.input, 0, &mut out);
        let hyp = serde_json::to_value(&self.hypotheses).expect("checks serialize");
        render_entry("hypotheses", &hyp, 0, &mut out);
        render_entry("result", &self.result, 0, &mut out);
        if let Some(oracle) = &self.oracle {
            render_entry("oracle", oracle, 0, &mut out);
        }
        let diag = serde_json::to_value(&self.diagnostics).expect("strings serialize");
        render_entry("diagnostics", &diag, 0, &mut out);
        out
    }
}

// --- generic value rendering ---

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Scalars, flat arrays, and arrays of flat arrays render on one line.
fn inline_ok(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| match x {
            Value::Array(ys) => ys.iter().all(is_scalar),
            other => is_scalar(other),
        }),
        other => is_scalar(other),
    }
}

fn render_inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => {
            let parts: Vec<String> = xs.iter().map(render_inline).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn render_entry(key: &str, v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    if inline_ok(v) {
        out.push_str(&format!("{pad}{key}: {}\n", render_inline(v)));
    } else {
        out.push_str(&format!("{pad}{key}:\n"));
        render_block(v, indent + 2, out);
    }
}

fn render_block(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                render_entry(k, val, indent, out);
            }
        }
        Value::Array(xs) => {
            for x in xs {
                if inline_ok(x) {
                    out.push_str(&format!("{pad}- {}\n", render_inline(x)));
                } else {
                    // Render the element indented two deeper, then splice the
                    // list marker into the first line's padding.
                    let mut chunk = String::new();
                    render_block(x, indent + 2, &mut chunk);
                    let mut first = true;
                    for line in chunk.lines() {
                        if first {
                            out.push_str(&format!("{pad}- {}\n", &line[indent + 2..]));
                            first = false;
                        } else {
                            out.push_str(line);
                            out.push('\n');
                        }
                    }
                }
            }
        }
        other => {
            out.push_str(&format!("{pad}{}\n", render_inline(other)));
        }
    }
}

// --- value builders ---

pub fn rat_string(r: &Rat) -> String {
    r.to_string()
}

fn usize_array(xs: impl IntoIterator<Item = usize>) -> Value {
    Value::Array(xs.into_iter().map(|x| Value::from(x as u64)).collect())
}

pub fn atom_value(atom: &Atom) -> Value {
    let kind = match atom.kind {
        AtomKind::TorusFiber => "torus_fiber",
        AtomKind::TorusZero => "torus_zero",
        AtomKind::Unit => "unit",
    };
    let face: Vec<Value> = atom
        .face
        .iter()
        .map(|e| Value::Array(e.iter().map(|&x| Value::from(x)).collect()))
        .collect();
    let lean = match &atom.lean {
        Some(set) => usize_array(set.iter().copied()),
        None => Value::Null,
    };
    serde_json::json!({
        "kind": kind,
        "zero_vars": usize_array(atom.zero_vars.iter().copied()),
        "face": face,
        "lean": lean,
    })
}

pub fn class_value(class: &MotClass) -> Value {
    let base = match class.base {
        Base::Section => "section",
        Base::Angular => "angular",
    };
    let terms: Vec<Value> = class
        .terms
        .iter()
        .map(|(atom, coef)| {
            let mut v = atom_value(atom);
            v.as_object_mut()
                .expect("atom value is an object")
                .insert("coefficient".into(), Value::String(coef.to_string()));
            v
        })
        .collect();
    serde_json::json!({
        "base": base,
        "n_vars": class.n_vars,
        "terms": terms,
    })
}

pub fn cell_value(cell: &CellReport) -> Value {
    let vertices: Vec<Value> = cell
        .face_vertices
        .iter()
        .map(|v| Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect()))
        .collect();
    serde_json::json!({
        "zero_vars": usize_array(cell.zero_vars.iter().copied()),
        "face_vertices": vertices,
        "lean": usize_array(cell.lean.iter().copied()),
        "binding": usize_array(cell.binding.iter().copied()),
        "clean": cell.clean,
        "cone_dim": cell.cone_dim,
        "sign": cell.sign,
    })
}

// --- hypothesis checklist ---

/// The standard five-point checklist reported by every polynomial command.
/// `block1` is the number of leading variables forming the base block;
/// failures are recorded, not raised (commands decide which are fatal).
pub fn hypothesis_checklist(
    dims: &Dims,
    g: &SparsePoly,
    gamma: &NewtonPolyhedron,
    block1: usize,
    primes: &[u64],
    budget: u64,
) -> Result<Vec<HypothesisCheck>> {
    let mut checks = Vec::new();

    let weights = dims.weights();
    checks.push(match g.balance_violation(&weights) {
        None => HypothesisCheck::pass(
            "balance",
            format!("weights {:?} vanish on every exponent", weights),
        ),
        Some(exp) => HypothesisCheck::fail(
            "balance",
            format!("exponent {:?} has nonzero weight under {:?}", exp, weights),
        ),
    });

    checks.push(if g.vanishes_at_origin() {
        HypothesisCheck::pass("origin", "no constant term")
    } else {
        HypothesisCheck::fail("origin", "constant term present")
    });

    let mut face_polys = Vec::new();
    for f in gamma.compact_faces() {
        face_polys.push(g.face_poly(&gamma.face_support_exps(f)?));
    }
    let probe = nondegeneracy_probe(g, &face_polys, primes, budget)?;
    checks.push(match &probe.falsified {
        None => {
            let mut detail = format!("not falsified at q in {:?}", probe.checked);
            if !probe.skipped.is_empty() {
                detail.push_str(&format!(" (skipped: {:?})", probe.skipped));
            }
            detail.push_str(&format!("; {} evaluations", probe.evaluations));
            HypothesisCheck::pass("nondegeneracy", detail)
        }
        Some(w) => HypothesisCheck::fail(
            "nondegeneracy",
            format!(
                "compact face {} singular at torus point {:?} over q = {}",
                w.face_index, w.point, w.q
            ),
        ),
    });

    checks.push(if gamma.vertex_positivity() {
        HypothesisCheck::pass("vertex-positivity", "every vertex is strictly positive")
    } else {
        let witness = gamma
            .vertices
            .iter()
            .find(|v| v.iter().any(|c| c == &crate::linalg::Int::from(0)))
            .expect("some vertex has a zero coordinate");
        HypothesisCheck::fail(
            "vertex-positivity",
            format!("vertex {:?} lies in a coordinate hyperplane", witness),
        )
    });

    let offending = g
        .support()
        .into_iter()
        .find(|exp| exp.iter().enumerate().all(|(i, &e)| e == 0 || i < block1));
    checks.push(match offending {
        None => HypothesisCheck::pass(
            "base-in-zero-locus",
            "every monomial involves a variable outside the first block",
        ),
        Some(exp) => HypothesisCheck::fail(
            "base-in-zero-locus",
            format!("monomial with exponent {:?} uses only first-block variables", exp),
        ),
    });

    Ok(checks)
}
