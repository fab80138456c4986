//! Random circuits, states and unitaries for property tests and the
//! acceptance suite.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::classical::{ClassicalGate, NetworkProgram};
use crate::heisenberg::{Descriptor, HeisenbergNetwork, QuantumGate, QuantumProgram};
use crate::linalg::{Matrix, StateVector, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// A Haar-random unitary (QR of a complex Gaussian matrix with the phases of
/// `R`'s diagonal removed).
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    let g = Matrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let v = StateVector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

pub fn random_permutation<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Vec<u64> {
    let mut v: Vec<u64> = (0..size as u64).collect();
    v.shuffle(rng);
    v
}

fn distinct<R: Rng + ?Sized>(free: &mut Vec<usize>, count: usize, rng: &mut R) -> Option<Vec<usize>> {
    if free.len() < count {
        return None;
    }
    free.shuffle(rng);
    Some(free.split_off(free.len() - count))
}

/// A random classical gate on distinct bits drawn from `free` (which loses
/// the bits used).
pub fn random_classical_gate<R: Rng + ?Sized>(free: &mut Vec<usize>, rng: &mut R) -> Option<ClassicalGate> {
    let kinds = match free.len() {
        0 => return None,
        1 => 2,
        2 => 4,
        _ => 5,
    };
    Some(match rng.random_range(0..kinds) {
        0 => ClassicalGate::Not(distinct(free, 1, rng)?[0]),
        1 => ClassicalGate::Delay(distinct(free, 1, rng)?[0]),
        2 => {
            let b = distinct(free, 2, rng)?;
            ClassicalGate::CNot(b[0], b[1])
        }
        3 => {
            let b = distinct(free, 2, rng)?;
            ClassicalGate::Swap(b[0], b[1])
        }
        _ => {
            let b = distinct(free, 3, rng)?;
            ClassicalGate::Toffoli(b[0], b[1], b[2])
        }
    })
}

/// Random synchronous layers of classical gates; each step holds between one
/// and `max_gates_per_step` disjoint gates.
pub fn random_classical_program<R: Rng + ?Sized>(
    width: usize,
    steps: usize,
    max_gates_per_step: usize,
    rng: &mut R,
) -> NetworkProgram {
    let layers = (0..steps)
        .map(|_| {
            let mut free: Vec<usize> = (1..=width).collect();
            let count = rng.random_range(1..=max_gates_per_step.max(1));
            (0..count).filter_map(|_| random_classical_gate(&mut free, rng)).collect()
        })
        .collect();
    NetworkProgram::new(width, layers).expect("disjoint by construction")
}

/// Gate families drawn by [`random_quantum_program`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateMix {
    /// Toffoli, CNot and Delay-class phases.
    ClassicalAnalogue,
    /// Toffoli, CNot, Delay-class phases and Haar single-qubit unitaries.
    Mixed,
}

pub fn random_quantum_gate<R: Rng + ?Sized>(free: &mut Vec<usize>, mix: GateMix, rng: &mut R) -> Option<QuantumGate> {
    let kinds = match (free.len(), mix) {
        (0, _) => return None,
        (1, GateMix::ClassicalAnalogue) => 1,
        (1, GateMix::Mixed) => 2,
        (2, _) => 3,
        _ => 4,
    };
    let pick = rng.random_range(0..kinds);
    Some(match (pick, mix) {
        (0, _) => QuantumGate::Delay {
            qubit: distinct(free, 1, rng)?[0],
            phase: rng.random_range(0.0..std::f64::consts::TAU),
        },
        (1, GateMix::Mixed) => QuantumGate::Unitary {
            qubits: distinct(free, 1, rng)?,
            matrix: haar_unitary(2, rng),
        },
        (1, GateMix::ClassicalAnalogue) | (2, _) => {
            let b = distinct(free, 2, rng)?;
            QuantumGate::CNot(b[0], b[1])
        }
        _ => {
            let b = distinct(free, 3, rng)?;
            QuantumGate::Toffoli(b[0], b[1], b[2])
        }
    })
}

/// A random program of exactly `gates` gates packed into synchronous steps
/// of at most `max_gates_per_step` gates.
pub fn random_quantum_program<R: Rng + ?Sized>(
    width: usize,
    gates: usize,
    max_gates_per_step: usize,
    mix: GateMix,
    rng: &mut R,
) -> QuantumProgram {
    let mut steps = Vec::new();
    let mut remaining = gates;
    while remaining > 0 {
        let mut free: Vec<usize> = (1..=width).collect();
        let want = rng.random_range(1..=max_gates_per_step.max(1)).min(remaining);
        let layer: Vec<QuantumGate> = (0..want)
            .filter_map(|_| random_quantum_gate(&mut free, mix, rng))
            .collect();
        remaining -= layer.len();
        steps.push(layer);
    }
    QuantumProgram::new(width, steps).expect("valid by construction")
}

/// Descriptors `W^dagger b(0) W` for a Haar-random `W`: valid descriptors
/// that are not those of a fresh network.
pub fn random_descriptors<R: Rng + ?Sized>(width: usize, rng: &mut R) -> (Matrix, Vec<Descriptor>) {
    let w = haar_unitary(1 << width, rng);
    let fresh = HeisenbergNetwork::new(crate::classical::BitWord::new(0, width).unwrap())
        .expect("width within cap");
    let ds = fresh.descriptors().iter().map(|d| d.conjugated(&w)).collect();
    (w, ds)
}

/// Steps of one conditional gate each, controlled by the last qubit, with a
/// random permutation of the other qubits and a Haar-random unitary on them.
/// Also returns the permutations as step laws.
pub fn random_conditional_program<R: Rng + ?Sized>(
    width: usize,
    steps: usize,
    rng: &mut R,
) -> (QuantumProgram, Vec<crate::classical::StepPermutation>) {
    let sub = 1usize << (width - 1);
    let mut laws = Vec::with_capacity(steps);
    let layers = (0..steps)
        .map(|_| {
            let f = random_permutation(sub, rng);
            laws.push(crate::classical::StepPermutation::from_table(width - 1, f.clone()).expect("a permutation"));
            vec![QuantumGate::Conditional {
                control: width,
                f,
                u: haar_unitary(sub, rng),
            }]
        })
        .collect();
    (QuantumProgram::new(width, layers).expect("valid by construction"), laws)
}
