//! Quantum networks in the Heisenberg picture.

mod descriptor;
mod gates;
mod network;

pub use descriptor::{
    cnot_closed_form, relation_residuals, toffoli_closed_form, Axis, Descriptor, RelationResiduals,
};
pub use gates::{check_step, conditional_gate_unitary, step_candidate, QuantumGate};
pub use network::{
    b_hat_from, basis_state, initial_component, projector_from, run_quantum, HeisenbergNetwork,
    QuantumHistory, QuantumProgram, VALIDATION_TOLERANCE,
};

#[cfg(test)]
mod tests;
