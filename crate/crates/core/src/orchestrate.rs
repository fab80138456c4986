//! Runs a circuit document: the requested engines, then the requested
//! analyses.

use serde_json::{json, Value};

use crate::analyzer::{
    check_autonomy, check_correspondence, classical_law, classical_trace, classify_run, ensemble_trace, gate_list_law,
    measurement_robustness_check, quantum_trace, ClassicalityVerdict, Engine, RunTrace, Selector, UpdateLaw,
};
use crate::circuit::{AnalysisKind, AnalysisRequest, CircuitDocument, Expectation, InitialCondition, LawChoice};
use crate::config::{Tolerances, DEFAULT_MAX_QUBITS};
use crate::ensemble::{evolve_program, Ensemble};
use crate::error::{Error, Result};
use crate::heisenberg::{run_quantum, HeisenbergNetwork, QuantumHistory};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub tolerance: f64,
    pub max_qubits: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            tolerance: Tolerances::default().products,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisOutcome {
    /// The request as written, without its expectation.
    pub name: String,
    pub expected: Expectation,
    pub passed: bool,
    /// Appended because both the quantum and ensemble engines ran.
    pub automatic: bool,
    pub detail: Value,
}

impl AnalysisOutcome {
    pub fn as_expected(&self) -> bool {
        self.passed == (self.expected == Expectation::Pass)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub width: usize,
    pub steps: usize,
    pub engines: Vec<Engine>,
    pub traces: Vec<RunTrace>,
    /// Per-step verdicts of the quantum run, when there is one.
    pub classicality: Option<Vec<ClassicalityVerdict>>,
    pub analyses: Vec<AnalysisOutcome>,
    pub warnings: Vec<String>,
    pub options: RunOptions,
}

impl RunOutput {
    /// Whether every analysis came out as the document expects.
    pub fn checks_hold(&self) -> bool {
        self.analyses.iter().all(AnalysisOutcome::as_expected)
    }
}

struct Runs<'a> {
    doc: &'a CircuitDocument,
    options: RunOptions,
    quantum: Option<(QuantumHistory, Vec<ClassicalityVerdict>)>,
    ensembles: Option<Vec<Ensemble>>,
}

impl Runs<'_> {
    fn quantum(&mut self) -> Result<&(QuantumHistory, Vec<ClassicalityVerdict>)> {
        if self.quantum.is_none() {
            let width = self.doc.width;
            let net = HeisenbergNetwork::from_state(width, self.doc.init.state(width)?, self.options.max_qubits)?;
            let history = run_quantum(&self.doc.quantum_program()?, net)?;
            let verdicts = classify_run(&history, self.options.tolerance);
            self.quantum = Some((history, verdicts));
        }
        Ok(self.quantum.as_ref().unwrap())
    }

    fn ensembles(&mut self) -> Result<&Vec<Ensemble>> {
        if self.ensembles.is_none() {
            let program = self.doc.classical_program()?;
            self.ensembles = Some(evolve_program(&self.doc.init.ensemble(self.doc.width)?, &program)?);
        }
        Ok(self.ensembles.as_ref().unwrap())
    }

    fn analyze(&mut self, request: &AnalysisRequest) -> Result<(bool, Value)> {
        let tol = self.options.tolerance;
        match &request.kind {
            AnalysisKind::Correspondence => {
                if self.doc.quantum_program()?.classical().is_none() {
                    return Err(Error::Invalid(
                        "correspondence needs a circuit of classical-analogue gates".into(),
                    ));
                }
                let ensembles = self.ensembles()?.clone();
                let (history, _) = self.quantum()?;
                let r = check_correspondence(history, &ensembles, tol)?;
                Ok((
                    r.passed,
                    json!({
                        "max_deviation": r.max_deviation,
                        "first_failure": r.first_failure,
                        "tolerance": r.tolerance,
                    }),
                ))
            }
            AnalysisKind::Autonomy { selector, law } => {
                let width = self.doc.width;
                let bits = matches!(selector, Selector::AllZ | Selector::ControlledZ { .. });
                let law = match law.unwrap_or(if bits { LawChoice::Classical } else { LawChoice::Algebra }) {
                    LawChoice::Algebra => UpdateLaw::GeneratedAlgebra,
                    LawChoice::Classical => {
                        let laws = self
                            .doc
                            .steps
                            .iter()
                            .map(|g| gate_list_law(selector, g, width, tol))
                            .collect();
                        classical_law(selector.clone(), laws)?
                    }
                };
                let (history, _) = self.quantum()?;
                let r = check_autonomy(history, selector, &law, 0, history.program.len(), tol)?;
                let detail = serde_json::to_value(&r).expect("report serializes");
                Ok((r.autonomous, detail))
            }
            AnalysisKind::Robustness { monitor } => {
                let program = self.doc.quantum_program()?;
                let state = self.doc.init.state(self.doc.width)?;
                let r = measurement_robustness_check(&program, &state, monitor, self.options.max_qubits, tol)?;
                Ok((
                    r.correspondence.passed,
                    json!({
                        "ancillas": r.ancillas,
                        "max_deviation": r.correspondence.max_deviation,
                        "first_failure": r.correspondence.first_failure,
                        "x_descriptor_divergence": r.x_descriptor_divergence,
                    }),
                ))
            }
        }
    }
}

fn strip_expectation(request: &AnalysisRequest) -> String {
    AnalysisRequest {
        kind: request.kind.clone(),
        expect: None,
    }
    .to_string()
}

pub fn orchestrate(doc: &CircuitDocument, options: &RunOptions) -> Result<RunOutput> {
    doc.validate()?;
    let engines = doc.requested_engines();
    let mut runs = Runs {
        doc,
        options: *options,
        quantum: None,
        ensembles: None,
    };
    let mut traces = Vec::new();
    for &e in &engines {
        traces.push(match e {
            Engine::Classical => {
                let InitialCondition::Basis(b) = doc.init else {
                    return Err(Error::Invalid("the classical engine needs a basis initial condition".into()));
                };
                classical_trace(&doc.classical_program()?, b)?
            }
            Engine::Ensemble => {
                let perms = doc.classical_program()?.permutations()?;
                ensemble_trace(runs.ensembles()?, &perms)
            }
            Engine::Quantum => {
                let (history, verdicts) = runs.quantum()?;
                quantum_trace(history, verdicts)
            }
        });
    }

    let mut requests: Vec<(AnalysisRequest, bool)> = doc.analyses.iter().cloned().map(|r| (r, false)).collect();
    let both = engines.contains(&Engine::Quantum) && engines.contains(&Engine::Ensemble);
    if both && !doc.analyses.iter().any(|r| r.kind == AnalysisKind::Correspondence) {
        requests.push((
            AnalysisRequest {
                kind: AnalysisKind::Correspondence,
                expect: None,
            },
            true,
        ));
    }
    let mut analyses = Vec::new();
    for (request, automatic) in requests {
        let (passed, detail) = runs.analyze(&request)?;
        analyses.push(AnalysisOutcome {
            name: strip_expectation(&request),
            expected: request.expected(),
            passed,
            automatic,
            detail,
        });
    }

    let classicality = engines
        .contains(&Engine::Quantum)
        .then(|| runs.quantum.as_ref().map(|(_, v)| v.clone()))
        .flatten();
    Ok(RunOutput {
        width: doc.width,
        steps: doc.steps.len(),
        engines,
        traces,
        classicality,
        analyses,
        warnings: doc.warnings.clone(),
        options: *options,
    })
}
