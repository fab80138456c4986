//! Schrodinger-picture state-vector simulation, used to cross-check the
//! Heisenberg engine. Step unitaries are assembled as full matrices.

use crate::error::{Error, Result};
use crate::heisenberg::QuantumProgram;
use crate::linalg::{self, Matrix, StateVector};

#[derive(Clone, Debug)]
pub struct OracleRun {
    /// `psi(t)` for every time.
    pub states: Vec<StateVector>,
    /// `|<b|psi(t)>|^2` for every time and state.
    pub distributions: Vec<Vec<f64>>,
}

/// The full unitary of one step.
pub fn step_unitary(program: &QuantumProgram, t: usize) -> Matrix {
    let n = program.width();
    program.steps()[t].iter().fold(linalg::identity(1 << n), |acc, g| {
        linalg::embed_operator(&g.local_matrix(), &g.qubits(n), n) * acc
    })
}

pub fn schrodinger_oracle(program: &QuantumProgram, psi0: &StateVector) -> Result<OracleRun> {
    if psi0.len() != 1 << program.width() {
        return Err(Error::WidthMismatch {
            expected: 1 << program.width(),
            found: psi0.len(),
        });
    }
    let mut states = vec![psi0.clone()];
    for t in 0..program.len() {
        let next = step_unitary(program, t) * states.last().unwrap();
        states.push(next);
    }
    let distributions = states
        .iter()
        .map(|s| s.iter().map(|a| a.norm_sqr()).collect())
        .collect();
    Ok(OracleRun {
        states,
        distributions,
    })
}
