use crate::classical::{BitWord, NetworkProgram};
use crate::config::DEFAULT_MAX_QUBITS;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, StateVector, C64, ONE, ZERO};

use super::descriptor::{Axis, Descriptor};
use super::gates::{check_step, QuantumGate};

/// Tolerance used when validating gate matrices and input states.
pub const VALIDATION_TOLERANCE: f64 = 1e-9;

/// The component `(1 - sigma_axis)/2` of qubit `k` at time zero, on `width`
/// qubits.
pub fn initial_component(width: usize, k: usize, axis: Axis) -> Matrix {
    let local = (linalg::identity(2) - linalg::pauli(axis.index())) * C64::new(0.5, 0.0);
    linalg::embed_operator(&local, &[k], width)
}

/// A quantum network in the Heisenberg picture.
///
/// The state vector is fixed at construction. The network keeps the
/// cumulative step unitary `W(t) = U_t ... U_1`; every descriptor component
/// at time `t` is `W(t)^dagger b(0) W(t)`, computed on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergNetwork {
    width: usize,
    state: StateVector,
    unitary: Matrix,
    time: usize,
}

fn check_width(width: usize, cap: usize) -> Result<()> {
    if width == 0 {
        return Err(Error::Invalid("a network needs at least one qubit".into()));
    }
    if width > cap {
        return Err(Error::ResourceLimit {
            what: "Heisenberg network",
            requested: width,
            cap,
        });
    }
    Ok(())
}

impl HeisenbergNetwork {
    /// A fresh network in basis state `initial`, under the default size cap.
    pub fn new(initial: BitWord) -> Result<Self> {
        HeisenbergNetwork::with_cap(initial, DEFAULT_MAX_QUBITS)
    }

    pub fn with_cap(initial: BitWord, cap: usize) -> Result<Self> {
        let width = initial.width();
        check_width(width, cap)?;
        let mut state = StateVector::zeros(1 << width);
        state[initial.value() as usize] = ONE;
        Ok(HeisenbergNetwork {
            width,
            state,
            unitary: linalg::identity(1 << width),
            time: 0,
        })
    }

    /// A fresh network with an arbitrary Heisenberg state, normalised if its
    /// norm is within `1e-9` of one.
    pub fn from_state(width: usize, state: StateVector, cap: usize) -> Result<Self> {
        check_width(width, cap)?;
        if state.len() != 1 << width {
            return Err(Error::WidthMismatch {
                expected: 1 << width,
                found: state.len(),
            });
        }
        let norm = state.norm();
        if (norm - 1.0).abs() > VALIDATION_TOLERANCE {
            return Err(Error::Invalid(format!("state has norm {norm}, expected 1")));
        }
        Ok(HeisenbergNetwork {
            width,
            state: state / C64::new(norm, 0.0),
            unitary: linalg::identity(1 << width),
            time: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// The cumulative unitary `W(t)`.
    pub fn unitary(&self) -> &Matrix {
        &self.unitary
    }

    /// Applies one step of gates acting on disjoint qubits.
    pub fn step(&self, gates: &[QuantumGate]) -> Result<Self> {
        let mut next = self.clone();
        next.step_mut(gates)?;
        Ok(next)
    }

    pub fn step_mut(&mut self, gates: &[QuantumGate]) -> Result<()> {
        check_step(gates, self.width, self.time, VALIDATION_TOLERANCE)?;
        for g in gates {
            let qubits = g.qubits(self.width);
            linalg::apply_local(&g.local_matrix(), &qubits, &mut self.unitary);
        }
        self.time += 1;
        Ok(())
    }

    /// `W(t) |psi>`: the Schrodinger-picture state the descriptors describe.
    pub fn evolved_state(&self) -> StateVector {
        &self.unitary * &self.state
    }

    /// `W^dagger A W` for an operator `A` in the time-zero frame.
    pub fn evolve_operator(&self, a: &Matrix) -> Matrix {
        self.unitary.adjoint() * a * &self.unitary
    }

    pub fn component(&self, k: usize, axis: Axis) -> Matrix {
        let local = (linalg::identity(2) - linalg::pauli(axis.index())) * C64::new(0.5, 0.0);
        let mut aw = self.unitary.clone();
        linalg::apply_local(&local, &[k], &mut aw);
        self.unitary.adjoint() * aw
    }

    pub fn descriptor(&self, k: usize) -> Descriptor {
        Descriptor {
            x: self.component(k, Axis::X),
            y: self.component(k, Axis::Y),
            z: self.component(k, Axis::Z),
        }
    }

    pub fn descriptors(&self) -> Vec<Descriptor> {
        (1..=self.width).map(|k| self.descriptor(k)).collect()
    }

    pub fn z_components(&self) -> Vec<Matrix> {
        (1..=self.width).map(|k| self.component(k, Axis::Z)).collect()
    }

    /// `sum_k 2^(k-1) b_kz(t)`.
    pub fn b_hat(&self) -> Matrix {
        b_hat_from(&self.z_components())
    }

    /// `P_b(t) = prod_k [b_k b_kz + (1 - b_k)(1 - b_kz)]`.
    pub fn projector_b(&self, b: u64) -> Matrix {
        projector_from(&self.z_components(), b)
    }

    /// Product of z-projectors of `qubits` onto the bits of `value` (the first
    /// listed qubit carries the least significant bit).
    pub fn projector_on(&self, qubits: &[usize], value: u64) -> Matrix {
        let zs: Vec<Matrix> = qubits.iter().map(|&k| self.component(k, Axis::Z)).collect();
        projector_from(&zs, value)
    }

    /// `<psi| X |psi>` for Hermitian `X`.
    pub fn expectation(&self, x: &Matrix) -> Result<f64> {
        if x.nrows() != self.dim() || x.ncols() != self.dim() {
            return Err(Error::WidthMismatch {
                expected: self.dim(),
                found: x.nrows(),
            });
        }
        let scale = x.norm().max(1.0);
        let residual = linalg::hermiticity_residual(x);
        if residual > VALIDATION_TOLERANCE * scale {
            return Err(Error::NotHermitian { residual });
        }
        Ok(self.state.dotc(&(x * &self.state)).re)
    }

    /// `<P_b(t)>` for every `b`, read from `W(t)|psi>`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.evolved_state().iter().map(|a| a.norm_sqr()).collect()
    }

    /// Weights of the values of a subset of qubits (first listed is least
    /// significant).
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << qubits.len()];
        for (b, p) in self.probabilities().into_iter().enumerate() {
            let local = qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &q)| acc | (((b >> (q - 1)) & 1) << j));
            out[local] += p;
        }
        out
    }

    /// `b_cz P_k X P_k b_cz`, where `P_k` projects the qubits other than
    /// `control` onto the value `k`.
    pub fn branch_observable(&self, control: usize, k: u64, x: &Matrix) -> Matrix {
        let others: Vec<usize> = (1..=self.width).filter(|&q| q != control).collect();
        let pk = self.projector_on(&others, k);
        let bz = self.component(control, Axis::Z);
        let sandwich = &bz * &pk;
        &sandwich * x * sandwich.adjoint()
    }
}

pub fn b_hat_from(z_components: &[Matrix]) -> Matrix {
    let dim = z_components[0].nrows();
    z_components
        .iter()
        .enumerate()
        .fold(Matrix::zeros(dim, dim), |acc, (i, z)| acc + z * C64::new((1u64 << i) as f64, 0.0))
}

pub fn projector_from(z_components: &[Matrix], b: u64) -> Matrix {
    let dim = z_components[0].nrows();
    let id = linalg::identity(dim);
    z_components
        .iter()
        .enumerate()
        .fold(id.clone(), |acc, (i, z)| {
            if (b >> i) & 1 == 1 {
                acc * z
            } else {
                acc * (&id - z)
            }
        })
}

/// Gates of a quantum network, one disjoint set per step.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumProgram {
    width: usize,
    steps: Vec<Vec<QuantumGate>>,
}

impl QuantumProgram {
    pub fn new(width: usize, steps: Vec<Vec<QuantumGate>>) -> Result<Self> {
        if width == 0 {
            return Err(Error::Invalid("a network needs at least one qubit".into()));
        }
        for (t, gates) in steps.iter().enumerate() {
            check_step(gates, width, t, VALIDATION_TOLERANCE)?;
        }
        Ok(QuantumProgram { width, steps })
    }

    pub fn from_classical(program: &NetworkProgram) -> Self {
        QuantumProgram {
            width: program.width(),
            steps: program
                .steps()
                .iter()
                .map(|gates| gates.iter().copied().map(QuantumGate::from).collect())
                .collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn steps(&self) -> &[Vec<QuantumGate>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The classical program with the same gates, if every gate has a
    /// classical analogue.
    pub fn classical(&self) -> Option<NetworkProgram> {
        let steps = self
            .steps
            .iter()
            .map(|gates| gates.iter().map(QuantumGate::classical_analogue).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        NetworkProgram::new(self.width, steps).ok()
    }
}

/// Snapshots of a network at every integer time of a program.
#[derive(Clone, Debug)]
pub struct QuantumHistory {
    pub program: QuantumProgram,
    pub snapshots: Vec<HeisenbergNetwork>,
}

impl QuantumHistory {
    pub fn at(&self, t: usize) -> &HeisenbergNetwork {
        &self.snapshots[t]
    }

    pub fn final_network(&self) -> &HeisenbergNetwork {
        self.snapshots.last().expect("history holds the initial network")
    }

    /// `<P_b(t)>` for every time and state.
    pub fn probability_history(&self) -> Vec<Vec<f64>> {
        self.snapshots.iter().map(HeisenbergNetwork::probabilities).collect()
    }
}

pub fn run_quantum(program: &QuantumProgram, initial: HeisenbergNetwork) -> Result<QuantumHistory> {
    if initial.width() != program.width() {
        return Err(Error::WidthMismatch {
            expected: program.width(),
            found: initial.width(),
        });
    }
    let mut snapshots = vec![initial];
    for gates in program.steps() {
        let next = snapshots.last().unwrap().step(gates)?;
        snapshots.push(next);
    }
    Ok(QuantumHistory {
        program: program.clone(),
        snapshots,
    })
}

/// Basis state `|b>` on `width` qubits.
pub fn basis_state(width: usize, b: u64) -> StateVector {
    let mut s = StateVector::from_element(1 << width, ZERO);
    s[b as usize] = ONE;
    s
}
