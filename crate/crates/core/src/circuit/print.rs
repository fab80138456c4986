use std::fmt::Write;

use crate::heisenberg::QuantumGate;
use crate::linalg::{format_complex, Matrix};

use super::{CircuitDocument, InitialCondition};

/// `0b` followed by exactly `width` binary digits.
pub fn format_word(b: u64, width: usize) -> String {
    format!("0b{b:0width$b}")
}

fn format_rows(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| format!("[{}]", r.iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join(",")))
        .collect();
    format!("rows=[{}]", rows.join(","))
}

fn format_gate(g: &QuantumGate) -> String {
    match g {
        QuantumGate::Toffoli(k, l, m) => format!("toffoli {k} {l} {m}"),
        QuantumGate::CNot(m, n) => format!("cnot {m} {n}"),
        QuantumGate::Not(k) => format!("not {k}"),
        QuantumGate::Swap(k, l) => format!("swap {k} {l}"),
        QuantumGate::Delay { qubit, phase } if *phase == 0.0 => format!("delay {qubit}"),
        QuantumGate::Delay { qubit, phase } => format!("delay {qubit} phase={phase:?}"),
        QuantumGate::Unitary { qubits, matrix } => {
            let q: Vec<String> = qubits.iter().map(|k| k.to_string()).collect();
            format!("unitary q=[{}] {}", q.join(","), format_rows(matrix))
        }
        QuantumGate::Conditional { control, f, u } => {
            let p: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            format!("cond control={control} f=perm({}) U={}", p.join(","), format_rows(u))
        }
    }
}

/// The canonical text of a document. Comments and blank lines are not kept.
pub fn print(doc: &CircuitDocument) -> String {
    let mut out = String::new();
    let n = doc.width;
    writeln!(out, "qubits {n}").unwrap();
    if let Some(engines) = &doc.engines {
        let names: Vec<&str> = engines.iter().map(|e| e.name()).collect();
        writeln!(out, "engine {}", names.join(" ")).unwrap();
    }
    match &doc.init {
        InitialCondition::Basis(b) => writeln!(out, "init basis {}", format_word(b.value(), n)).unwrap(),
        InitialCondition::Ensemble(entries) => {
            let items: Vec<String> = entries.iter().map(|(b, m)| format!("{}:{m}", format_word(*b, n))).collect();
            writeln!(out, "init ensemble {}", items.join(" ")).unwrap();
        }
        InitialCondition::State(entries) => {
            let items: Vec<String> = entries
                .iter()
                .map(|(b, a)| format!("{}:{}", format_word(*b, n), format_complex(*a)))
                .collect();
            writeln!(out, "init state {}", items.join(" ")).unwrap();
        }
    }
    for gates in &doc.steps {
        if gates.is_empty() {
            writeln!(out, "step").unwrap();
        } else {
            let g: Vec<String> = gates.iter().map(format_gate).collect();
            writeln!(out, "step {}", g.join(" ; ")).unwrap();
        }
    }
    for a in &doc.analyses {
        writeln!(out, "analyze {a}").unwrap();
    }
    out
}
