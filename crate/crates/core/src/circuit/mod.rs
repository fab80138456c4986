//! Line-oriented circuit documents: `qubits`, `engine`, `init`, `step` and
//! `analyze` lines. See `docs/formats.md` for the grammar.

mod parse;
mod print;

use std::fmt;

use num_traits::Signed;

use crate::analyzer::{Engine, Selector};
use crate::classical::{BitWord, NetworkProgram};
use crate::ensemble::{Ensemble, Multiplicity};
use crate::error::{Error, Result};
use crate::heisenberg::{QuantumGate, QuantumProgram};
use crate::linalg::{StateVector, C64, ZERO};

pub use parse::parse;
pub use print::{format_word, print};

/// Amplitude lists whose norm is further than this from one are rescaled on
/// load.
pub const RENORMALIZE_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    Basis(BitWord),
    /// `(b, mu_b)` in document order.
    Ensemble(Vec<(u64, Multiplicity)>),
    /// `(b, amplitude)` in document order.
    State(Vec<(u64, C64)>),
}

impl InitialCondition {
    pub fn default_engine(&self) -> Engine {
        match self {
            InitialCondition::Basis(_) => Engine::Classical,
            InitialCondition::Ensemble(_) => Engine::Ensemble,
            InitialCondition::State(_) => Engine::Quantum,
        }
    }

    pub fn ensemble(&self, width: usize) -> Result<Ensemble> {
        match self {
            InitialCondition::Basis(b) => Ok(Ensemble::homogeneous(*b)),
            InitialCondition::Ensemble(entries) => Ensemble::new(width, entries.iter().cloned()),
            InitialCondition::State(entries) => {
                let mut out = Vec::new();
                for &(b, a) in entries {
                    let p = Multiplicity::from_float(a.norm_sqr())
                        .ok_or_else(|| Error::Invalid(format!("amplitude {a} of state {b} is not finite")))?;
                    out.push((b, p));
                }
                Ensemble::new(width, out)
            }
        }
    }

    /// The Heisenberg state: amplitudes as given, or `sqrt(mu_b / M)`.
    pub fn state(&self, width: usize) -> Result<StateVector> {
        let mut psi = StateVector::from_element(1 << width, ZERO);
        match self {
            InitialCondition::State(entries) => {
                for &(b, a) in entries {
                    psi[b as usize] += a;
                }
            }
            _ => psi = crate::analyzer::ensemble_matched_state(&self.ensemble(width)?),
        }
        Ok(psi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Pass,
    Fail,
}

impl Expectation {
    pub fn name(self) -> &'static str {
        match self {
            Expectation::Pass => "pass",
            Expectation::Fail => "fail",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawChoice {
    /// The classical law read from each step's gates.
    Classical,
    /// Membership in the algebra generated by the family.
    Algebra,
}

impl LawChoice {
    pub fn name(self) -> &'static str {
        match self {
            LawChoice::Classical => "classical",
            LawChoice::Algebra => "algebra",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnalysisKind {
    Correspondence,
    Autonomy { selector: Selector, law: Option<LawChoice> },
    Robustness { monitor: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisRequest {
    pub kind: AnalysisKind,
    /// `None` when the document does not say; a check is then expected to
    /// pass.
    pub expect: Option<Expectation>,
}

impl AnalysisRequest {
    pub fn expected(&self) -> Expectation {
        self.expect.unwrap_or(Expectation::Pass)
    }
}

impl fmt::Display for AnalysisRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AnalysisKind::Correspondence => write!(f, "correspondence")?,
            AnalysisKind::Autonomy { selector, law } => {
                write!(f, "autonomy selector={selector}")?;
                if let Some(l) = law {
                    write!(f, " law={}", l.name())?;
                }
            }
            AnalysisKind::Robustness { monitor } => {
                let list: Vec<String> = monitor.iter().map(|k| k.to_string()).collect();
                write!(f, "robustness monitor={}", list.join(","))?;
            }
        }
        if let Some(e) = self.expect {
            write!(f, " expect={}", e.name())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitDocument {
    pub width: usize,
    /// Engines named on an `engine` line, if any.
    pub engines: Option<Vec<Engine>>,
    pub init: InitialCondition,
    pub steps: Vec<Vec<QuantumGate>>,
    pub analyses: Vec<AnalysisRequest>,
    /// Non-fatal remarks from loading, such as amplitude renormalisation.
    pub warnings: Vec<String>,
}

impl CircuitDocument {
    /// Engines to run: those named, or the one implied by the initial
    /// condition.
    pub fn requested_engines(&self) -> Vec<Engine> {
        let mut e = self.engines.clone().unwrap_or_else(|| vec![self.init.default_engine()]);
        e.sort();
        e.dedup();
        e
    }

    pub fn quantum_program(&self) -> Result<QuantumProgram> {
        QuantumProgram::new(self.width, self.steps.clone())
    }

    /// The program as a classical network, if every gate has a classical
    /// analogue.
    pub fn classical_program(&self) -> Result<NetworkProgram> {
        self.quantum_program()?
            .classical()
            .ok_or_else(|| Error::Invalid("the circuit has gates without a classical analogue".into()))
    }

    /// Consistency of engines, initial condition and gates.
    pub fn validate(&self) -> Result<()> {
        self.quantum_program()?;
        for e in self.requested_engines() {
            match (e, &self.init) {
                (Engine::Classical, InitialCondition::Basis(_)) | (Engine::Quantum, _) => {}
                (Engine::Ensemble, InitialCondition::Basis(_) | InitialCondition::Ensemble(_)) => {}
                (Engine::Classical, init) | (Engine::Ensemble, init) => {
                    return Err(Error::Invalid(format!(
                        "the {e} engine cannot start from {} initial condition",
                        match init {
                            InitialCondition::Ensemble(_) => "an ensemble",
                            _ => "an amplitude",
                        }
                    )))
                }
            }
            if e != Engine::Quantum {
                self.classical_program()?;
            }
        }
        if let InitialCondition::Ensemble(entries) = &self.init {
            if let Some((b, m)) = entries.iter().find(|(_, m)| !m.is_positive()) {
                return Err(Error::Invalid(format!("multiplicity {m} of state {b} is not positive")));
            }
        }
        Ok(())
    }
}
