//! Branch histories: the weight of every state at every time, linked across
//! steps that perform a classical computation.

use std::fmt;

use serde::Serialize;

use crate::classical::{run, BitWord, NetworkProgram, StepPermutation};
use crate::ensemble::Ensemble;
use crate::error::Result;
use crate::heisenberg::QuantumHistory;

use super::classicality::ClassicalityVerdict;
use super::correspondence::proportions;

/// Quantum weights at or below this are treated as absent branches.
pub const WEIGHT_CUTOFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Classical,
    Ensemble,
    Quantum,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Classical, Engine::Ensemble, Engine::Quantum];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Classical => "classical",
            Engine::Ensemble => "ensemble",
            Engine::Quantum => "quantum",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown engine `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: usize,
    pub b: u64,
    pub weight: f64,
    /// The state this branch holds at `t + 1`, when step `t` is classical.
    pub link: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunTrace {
    pub engine: Engine,
    pub width: usize,
    /// Number of steps; times run from 0 to `steps`.
    pub steps: usize,
    /// Ordered by time, then state.
    pub rows: Vec<TraceRow>,
}

impl RunTrace {
    pub fn at(&self, t: usize) -> impl Iterator<Item = &TraceRow> {
        self.rows.iter().filter(move |r| r.t == t)
    }

    pub fn branch_count(&self, t: usize) -> usize {
        self.at(t).count()
    }

    pub fn total_weight(&self, t: usize) -> f64 {
        self.at(t).map(|r| r.weight).sum()
    }

    /// Whether every branch alive at `t` is linked to `t + 1`.
    pub fn step_linked(&self, t: usize) -> bool {
        let mut rows = self.at(t).peekable();
        rows.peek().is_some() && rows.all(|r| r.link.is_some())
    }
}

fn rows_from(weights: &[Vec<f64>], links: &[Option<StepPermutation>]) -> Vec<TraceRow> {
    let mut rows = Vec::new();
    for (t, w) in weights.iter().enumerate() {
        for (b, &weight) in w.iter().enumerate() {
            if weight > WEIGHT_CUTOFF {
                let link = links.get(t).and_then(|f| f.as_ref()).map(|f| f.apply(b as u64));
                rows.push(TraceRow {
                    t,
                    b: b as u64,
                    weight,
                    link,
                });
            }
        }
    }
    rows
}

/// A single computer: one branch of weight one, linked at every step.
pub fn classical_trace(program: &NetworkProgram, b0: BitWord) -> Result<RunTrace> {
    let states = run(program, b0)?;
    let rows = states
        .windows(2)
        .enumerate()
        .map(|(t, w)| TraceRow {
            t,
            b: w[0].value(),
            weight: 1.0,
            link: Some(w[1].value()),
        })
        .chain(std::iter::once(TraceRow {
            t: program.len(),
            b: states.last().unwrap().value(),
            weight: 1.0,
            link: None,
        }))
        .collect();
    Ok(RunTrace {
        engine: Engine::Classical,
        width: program.width(),
        steps: program.len(),
        rows,
    })
}

/// Proportions `mu_b(t) / M`, linked by the step permutations.
pub fn ensemble_trace(history: &[Ensemble], perms: &[StepPermutation]) -> RunTrace {
    let weights: Vec<Vec<f64>> = history.iter().map(proportions).collect();
    let links: Vec<Option<StepPermutation>> = perms.iter().cloned().map(Some).collect();
    RunTrace {
        engine: Engine::Ensemble,
        width: history[0].width(),
        steps: perms.len(),
        rows: rows_from(&weights, &links),
    }
}

/// Weights `<P_b(t)>`, linked only across steps with a classical verdict.
pub fn quantum_trace(history: &QuantumHistory, verdicts: &[ClassicalityVerdict]) -> RunTrace {
    let links: Vec<Option<StepPermutation>> = verdicts.iter().map(|v| v.permutation().cloned()).collect();
    RunTrace {
        engine: Engine::Quantum,
        width: history.program.width(),
        steps: history.program.len(),
        rows: rows_from(&history.probability_history(), &links),
    }
}
