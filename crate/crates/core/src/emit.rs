//! Text renderings of a run: csv rows, a dot graph of branches, and a json
//! report. Output depends only on the run, so equal runs give equal bytes.

use std::fmt::Write;

use serde_json::{json, Map, Value};

use crate::analyzer::{RunTrace, Verdict};
use crate::circuit::format_word;
use crate::orchestrate::RunOutput;

pub const JSON_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Dot,
    Json,
}

/// `%g` with 12 significant digits: fixed notation for exponents in
/// `-4..12`, otherwise scientific with a two-digit exponent.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..12).contains(&exp) {
        let fixed = format!("{x:.*}", (11 - exp) as usize);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn rounded(x: f64) -> Value {
    format_float(x).parse::<f64>().ok().map(Value::from).unwrap_or(Value::Null)
}

pub fn emit(out: &RunOutput, format: Format) -> String {
    match format {
        Format::Csv => csv(&out.traces),
        Format::Dot => dot(&out.traces),
        Format::Json => json_report(out),
    }
}

/// Columns `t,b,weight,engine,link`; `link` is empty for unlinked rows.
pub fn csv(traces: &[RunTrace]) -> String {
    let mut s = String::from("t,b,weight,engine,link\n");
    for tr in traces {
        for r in &tr.rows {
            let link = r.link.map(|l| l.to_string()).unwrap_or_default();
            writeln!(s, "{},{},{},{},{link}", r.t, r.b, format_float(r.weight), tr.engine).unwrap();
        }
    }
    s
}

/// One node per `(t, b)` labelled with the state and weight, one edge per
/// link, and one rank per time.
pub fn dot(traces: &[RunTrace]) -> String {
    let mut s = String::from("digraph branches {\n  rankdir=LR;\n  node [shape=box];\n");
    for tr in traces {
        let e = tr.engine.name();
        let node = |t: usize, b: u64| format!("{e}_t{t}_b{b}");
        writeln!(s, "  subgraph cluster_{e} {{").unwrap();
        writeln!(s, "    label=\"{e}\";").unwrap();
        for r in &tr.rows {
            writeln!(
                s,
                "    {} [label=\"t={} {}\\nw={}\"];",
                node(r.t, r.b),
                r.t,
                format_word(r.b, tr.width),
                format_float(r.weight)
            )
            .unwrap();
        }
        for t in 0..=tr.steps {
            let names: Vec<String> = tr.at(t).map(|r| node(r.t, r.b)).collect();
            if !names.is_empty() {
                writeln!(s, "    {{ rank=same; {}; }}", names.join("; ")).unwrap();
            }
        }
        for r in &tr.rows {
            if let Some(l) = r.link {
                writeln!(s, "    {} -> {};", node(r.t, r.b), node(r.t + 1, l)).unwrap();
            }
        }
        writeln!(s, "  }}").unwrap();
    }
    s.push_str("}\n");
    s
}

fn trace_value(tr: &RunTrace, tolerance: f64) -> Value {
    let rows: Vec<Value> = tr
        .rows
        .iter()
        .map(|r| json!({ "t": r.t, "b": r.b, "weight": rounded(r.weight), "link": r.link }))
        .collect();
    json!({
        "engine": tr.engine.name(),
        "width": tr.width,
        "steps": tr.steps,
        "metadata": { "tolerance": tolerance, "seed": null },
        "rows": rows,
    })
}

fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n.as_f64().map(rounded).unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(round_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_numbers(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

/// The full report, keys sorted, floats rounded to 12 significant digits.
pub fn json_report(out: &RunOutput) -> String {
    let classicality = out.classicality.as_ref().map(|vs| {
        vs.iter()
            .map(|v| {
                let (permutation, witness) = match &v.verdict {
                    Verdict::Classical(f) => (json!(f.table()), Value::Null),
                    Verdict::NonClassical(w) => (Value::Null, serde_json::to_value(w).expect("witness serializes")),
                };
                json!({
                    "step": v.step,
                    "classical": v.is_classical(),
                    "permutation": permutation,
                    "witness": witness,
                    "residual": v.residual,
                })
            })
            .collect::<Vec<_>>()
    });
    let analyses: Vec<Value> = out
        .analyses
        .iter()
        .map(|a| {
            json!({
                "name": a.name,
                "expected": a.expected.name(),
                "passed": a.passed,
                "as_expected": a.as_expected(),
                "automatic": a.automatic,
                "detail": a.detail,
            })
        })
        .collect();
    let report = json!({
        "schema_version": JSON_SCHEMA_VERSION,
        "width": out.width,
        "steps": out.steps,
        "engines": out.engines.iter().map(|e| e.name()).collect::<Vec<_>>(),
        "tolerance": out.options.tolerance,
        "max_qubits": out.options.max_qubits,
        "warnings": out.warnings,
        "traces": out.traces.iter().map(|t| trace_value(t, out.options.tolerance)).collect::<Vec<_>>(),
        "classicality": classicality,
        "analyses": analyses,
        "checks_hold": out.checks_hold(),
    });
    let mut s = serde_json::to_string_pretty(&round_numbers(report)).expect("json serializes");
    s.push('\n');
    s
}
