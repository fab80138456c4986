use std::collections::HashSet;

use crate::classical::{invert_table, ClassicalGate, StepPermutation};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, C64, ONE, ZERO};

/// A gate of a quantum network. Qubit indices are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumGate {
    /// Controls `k`, `l`; target `m`.
    Toffoli(usize, usize, usize),
    /// Control, target. Also the measurement gate.
    CNot(usize, usize),
    Not(usize),
    Swap(usize, usize),
    /// `diag(1, e^{i phase})`: leaves the z-component of the qubit alone.
    Delay { qubit: usize, phase: f64 },
    /// An arbitrary unitary; the first listed qubit is the least significant
    /// bit of the matrix index.
    Unitary { qubits: Vec<usize>, matrix: Matrix },
    /// If `control` is 1, apply the permutation `f` to the other qubits,
    /// otherwise apply `u` to them. The other qubits are taken in increasing
    /// order, the lowest being the least significant.
    Conditional { control: usize, f: Vec<u64>, u: Matrix },
}

impl From<ClassicalGate> for QuantumGate {
    fn from(g: ClassicalGate) -> Self {
        match g {
            ClassicalGate::Toffoli(k, l, m) => QuantumGate::Toffoli(k, l, m),
            ClassicalGate::CNot(m, n) => QuantumGate::CNot(m, n),
            ClassicalGate::Not(k) => QuantumGate::Not(k),
            ClassicalGate::Swap(k, l) => QuantumGate::Swap(k, l),
            ClassicalGate::Delay(k) => QuantumGate::Delay { qubit: k, phase: 0.0 },
        }
    }
}

impl QuantumGate {
    pub fn delay(qubit: usize) -> Self {
        QuantumGate::Delay { qubit, phase: 0.0 }
    }

    /// The classical gate with the same action on basis states, for the
    /// gates that have one by construction.
    pub fn classical_analogue(&self) -> Option<ClassicalGate> {
        match *self {
            QuantumGate::Toffoli(k, l, m) => Some(ClassicalGate::Toffoli(k, l, m)),
            QuantumGate::CNot(m, n) => Some(ClassicalGate::CNot(m, n)),
            QuantumGate::Not(k) => Some(ClassicalGate::Not(k)),
            QuantumGate::Swap(k, l) => Some(ClassicalGate::Swap(k, l)),
            QuantumGate::Delay { qubit, .. } => Some(ClassicalGate::Delay(qubit)),
            _ => None,
        }
    }

    /// Qubits the gate acts on, in local-index order.
    pub fn qubits(&self, width: usize) -> Vec<usize> {
        match self {
            QuantumGate::Unitary { qubits, .. } => qubits.clone(),
            QuantumGate::Conditional { control, .. } => {
                let mut q: Vec<usize> = (1..=width).filter(|k| k != control).collect();
                q.push(*control);
                q
            }
            other => other.classical_analogue().map(|g| g.bits()).unwrap_or_default(),
        }
    }

    pub fn validate(&self, width: usize, tol: f64) -> Result<()> {
        let qubits = self.qubits(width);
        let mut seen = HashSet::new();
        for &q in &qubits {
            if q == 0 || q > width {
                return Err(Error::IndexOutOfRange { index: q, width });
            }
            if !seen.insert(q) {
                return Err(Error::RepeatedIndex { index: q });
            }
        }
        match self {
            QuantumGate::Unitary { qubits, matrix } => {
                if qubits.is_empty() {
                    return Err(Error::Invalid("unitary gate acts on no qubits".into()));
                }
                check_unitary(matrix, 1 << qubits.len(), tol)
            }
            QuantumGate::Conditional { f, u, .. } => {
                if width < 2 {
                    return Err(Error::Invalid("conditional gate needs at least 2 qubits".into()));
                }
                let sub = 1usize << (width - 1);
                if f.len() != sub {
                    return Err(Error::NotBijective(format!(
                        "conditional permutation has {} entries, expected {sub}",
                        f.len()
                    )));
                }
                invert_table(f)?;
                check_unitary(u, sub, tol)
            }
            QuantumGate::Delay { phase, .. } if !phase.is_finite() => {
                Err(Error::Invalid(format!("delay phase {phase} is not finite")))
            }
            _ => Ok(()),
        }
    }

    /// The gate's unitary on its own qubits (see [`QuantumGate::qubits`]).
    pub fn local_matrix(&self) -> Matrix {
        match self {
            QuantumGate::Unitary { matrix, .. } => matrix.clone(),
            QuantumGate::Conditional { f, u, .. } => conditional_gate_unitary_unchecked(f, u),
            QuantumGate::Delay { phase, .. } => Matrix::from_row_slice(
                2,
                2,
                &[ONE, ZERO, ZERO, C64::from_polar(1.0, *phase)],
            ),
            other => {
                let g = other.classical_analogue().expect("classical gate");
                linalg::permutation_matrix(&local_classical_table(&g))
            }
        }
    }

    /// The permutation of local basis states realised by the gate, when its
    /// matrix is a permutation up to phases.
    pub fn local_permutation(&self, tol: f64) -> Option<Vec<u64>> {
        match self.classical_analogue() {
            Some(g) => Some(local_classical_table(&g)),
            None => linalg::monomial_permutation(&self.local_matrix(), tol),
        }
    }
}

fn local_classical_table(g: &ClassicalGate) -> Vec<u64> {
    let local = match *g {
        ClassicalGate::Toffoli(..) => ClassicalGate::Toffoli(1, 2, 3),
        ClassicalGate::CNot(..) => ClassicalGate::CNot(1, 2),
        ClassicalGate::Swap(..) => ClassicalGate::Swap(1, 2),
        ClassicalGate::Not(_) => ClassicalGate::Not(1),
        ClassicalGate::Delay(_) => ClassicalGate::Delay(1),
    };
    let size = 1u64 << g.bits().len();
    (0..size).map(|v| local.apply_to_value(v)).collect()
}

fn check_unitary(m: &Matrix, dim: usize, tol: f64) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::Invalid(format!(
            "matrix is {}x{}, expected {dim}x{dim}",
            m.nrows(),
            m.ncols()
        )));
    }
    let residual = linalg::unitarity_residual(m);
    if residual > tol {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// Checks that the gates of one step act on disjoint qubits and are valid.
pub fn check_step(gates: &[QuantumGate], width: usize, step: usize, tol: f64) -> Result<()> {
    let mut used = HashSet::new();
    for g in gates {
        g.validate(width, tol)?;
        for q in g.qubits(width) {
            if !used.insert(q) {
                return Err(Error::OverlappingGates { step, index: q });
            }
        }
    }
    Ok(())
}

/// `V = b_Nz sum_b |f(b)><b| + (1 - b_Nz) U` on `N` qubits, with qubit `N`
/// as the control and `f`, `U` acting on qubits `1..N-1`.
pub fn conditional_gate_unitary(f: &[u64], u: &Matrix, tol: f64) -> Result<Matrix> {
    let sub = f.len();
    if !sub.is_power_of_two() || sub == 0 {
        return Err(Error::NotBijective(format!("permutation of {sub} entries")));
    }
    invert_table(f)?;
    check_unitary(u, sub, tol)?;
    Ok(conditional_gate_unitary_unchecked(f, u))
}

fn conditional_gate_unitary_unchecked(f: &[u64], u: &Matrix) -> Matrix {
    let sub = f.len();
    let mut v = Matrix::zeros(2 * sub, 2 * sub);
    v.view_mut((0, 0), (sub, sub)).copy_from(u);
    for (b, &fb) in f.iter().enumerate() {
        v[(sub + fb as usize, sub + b)] = ONE;
    }
    v
}

/// The step's map on basis states, when every gate permutes basis states
/// (up to phases).
pub fn step_candidate(gates: &[QuantumGate], width: usize, tol: f64) -> Option<StepPermutation> {
    let locals: Vec<(Vec<usize>, Vec<u64>)> = gates
        .iter()
        .map(|g| Some((g.qubits(width), g.local_permutation(tol)?)))
        .collect::<Option<_>>()?;
    let table = (0..1u64 << width)
        .map(|v| {
            locals.iter().fold(v, |acc, (qubits, perm)| {
                let local = qubits
                    .iter()
                    .enumerate()
                    .fold(0u64, |l, (j, &q)| l | (((acc >> (q - 1)) & 1) << j));
                let image = perm[local as usize];
                qubits.iter().enumerate().fold(acc, |out, (j, &q)| {
                    let mask = 1u64 << (q - 1);
                    if (image >> j) & 1 == 1 {
                        out | mask
                    } else {
                        out & !mask
                    }
                })
            })
        })
        .collect();
    StepPermutation::from_table(width, table).ok()
}
