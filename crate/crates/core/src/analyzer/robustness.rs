//! Monitoring z-observables with measurement gates on fresh ancillas.

use crate::error::{Error, Result};
use crate::heisenberg::{run_quantum, Axis, HeisenbergNetwork, QuantumGate, QuantumHistory, QuantumProgram};
use crate::linalg::{self, StateVector, ZERO};

use super::correspondence::{compare_weights, CorrespondenceReport};

#[derive(Clone, Debug)]
pub struct RobustnessReport {
    pub correspondence: CorrespondenceReport,
    pub ancillas: usize,
    /// The widened run with measurement steps.
    pub monitored: QuantumHistory,
    /// The widened run with the measurement steps left empty.
    pub isolated: QuantumHistory,
    /// Largest `|| b_kx(monitored) - b_kx(isolated) ||` over the original
    /// qubits at the final time.
    pub x_descriptor_divergence: f64,
}

/// Fixes a gate's qubit list so that it survives widening the network.
fn pinned(g: &QuantumGate, width: usize) -> QuantumGate {
    match g {
        QuantumGate::Conditional { .. } => QuantumGate::Unitary {
            qubits: g.qubits(width),
            matrix: g.local_matrix(),
        },
        other => other.clone(),
    }
}

/// Original time `t` of a widened run.
pub fn widened_time(t: usize) -> usize {
    if t == 0 {
        0
    } else {
        2 * t - 1
    }
}

/// Runs `program` with a measurement gate from every monitored qubit onto a
/// fresh ancilla between consecutive steps, and compares the weights over
/// the original qubits with those of the unmonitored run.
pub fn measurement_robustness_check(
    program: &QuantumProgram,
    state: &StateVector,
    monitored: &[usize],
    cap: usize,
    tol: f64,
) -> Result<RobustnessReport> {
    let width = program.width();
    for (i, &k) in monitored.iter().enumerate() {
        if k == 0 || k > width {
            return Err(Error::IndexOutOfRange { index: k, width });
        }
        if monitored[..i].contains(&k) {
            return Err(Error::RepeatedIndex { index: k });
        }
    }
    let gaps = program.len().saturating_sub(1);
    let ancillas = gaps * monitored.len();
    let wide = width + ancillas;
    if wide > cap {
        return Err(Error::ResourceLimit {
            what: "monitored network",
            requested: wide,
            cap,
        });
    }
    let mut monitored_steps = Vec::new();
    let mut isolated_steps = Vec::new();
    let mut next_ancilla = width + 1;
    for (t, gates) in program.steps().iter().enumerate() {
        let layer: Vec<QuantumGate> = gates.iter().map(|g| pinned(g, width)).collect();
        monitored_steps.push(layer.clone());
        isolated_steps.push(layer);
        if t + 1 < program.len() {
            let measure = monitored
                .iter()
                .map(|&k| {
                    next_ancilla += 1;
                    QuantumGate::CNot(k, next_ancilla - 1)
                })
                .collect();
            monitored_steps.push(measure);
            isolated_steps.push(Vec::new());
        }
    }
    let mut padded = StateVector::from_element(1 << wide, ZERO);
    padded.rows_mut(0, state.len()).copy_from(state);
    let start = HeisenbergNetwork::from_state(wide, padded, cap)?;
    let monitored_run = run_quantum(&QuantumProgram::new(wide, monitored_steps)?, start.clone())?;
    let isolated_run = run_quantum(&QuantumProgram::new(wide, isolated_steps)?, start)?;
    let plain = run_quantum(program, HeisenbergNetwork::from_state(width, state.clone(), cap)?)?;

    let originals: Vec<usize> = (1..=width).collect();
    let watched: Vec<Vec<f64>> = (0..=program.len())
        .map(|t| monitored_run.at(widened_time(t)).marginal_probabilities(&originals))
        .collect();
    let correspondence = compare_weights(&plain.probability_history(), &watched, tol)?;
    let (m, i) = (monitored_run.final_network(), isolated_run.final_network());
    let x_descriptor_divergence = originals
        .iter()
        .map(|&k| linalg::distance(&m.component(k, Axis::X), &i.component(k, Axis::X)))
        .fold(0.0, f64::max);
    Ok(RobustnessReport {
        correspondence,
        ancillas,
        monitored: monitored_run,
        isolated: isolated_run,
        x_descriptor_divergence,
    })
}
