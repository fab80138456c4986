//! Whether a step of a quantum network performs a classical computation:
//! `b(t+1) = f(b(t))` as a matrix identity on the z-components.

use serde::Serialize;

use crate::classical::StepPermutation;
use crate::heisenberg::{b_hat_from, step_candidate, QuantumHistory};
use crate::linalg::{self, Matrix, C64};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two z-components at time `t` fail to commute.
    NonCommuting { qubits: (usize, usize), residual: f64 },
    /// The lifted identity fails on the eigenspace of state `b` at time `t`.
    Mismatch { b: u64, residual: f64 },
    /// The sector's images of distinct states coincide or the family is not
    /// a set of bits.
    NoCandidate,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Classical(StepPermutation),
    NonClassical(Witness),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalityVerdict {
    pub step: usize,
    pub verdict: Verdict,
    /// `|| b(t+1) - f(b(t)) ||_F` for the candidate examined, if any.
    pub residual: Option<f64>,
}

impl ClassicalityVerdict {
    pub fn is_classical(&self) -> bool {
        matches!(self.verdict, Verdict::Classical(_))
    }

    pub fn permutation(&self) -> Option<&StepPermutation> {
        match &self.verdict {
            Verdict::Classical(f) => Some(f),
            Verdict::NonClassical(_) => None,
        }
    }
}

fn commutation_witness(z: &[Matrix], tol: f64) -> Option<Witness> {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let residual = linalg::norm(&linalg::commutator(&z[i], &z[j]));
            if residual > tol {
                return Some(Witness::NonCommuting {
                    qubits: (i + 1, j + 1),
                    residual,
                });
            }
        }
    }
    None
}

/// Projectors `S prod_k [c_k z_k + (1 - c_k)(S - z_k)]` of a sector `S`
/// whose z-family `z` already lies inside it (`S z_k = z_k`).
pub fn sector_projectors(sector: &Matrix, z: &[Matrix]) -> Vec<Matrix> {
    (0..1u64 << z.len())
        .map(|c| {
            z.iter().enumerate().fold(sector.clone(), |acc, (k, zk)| {
                if (c >> k) & 1 == 1 {
                    acc * zk
                } else {
                    acc * (sector - zk)
                }
            })
        })
        .collect()
}

fn lifted(projectors: &[Matrix], f: &StepPermutation) -> Matrix {
    let dim = projectors[0].nrows();
    projectors
        .iter()
        .enumerate()
        .fold(Matrix::zeros(dim, dim), |acc, (c, p)| acc + p * C64::new(f.apply(c as u64) as f64, 0.0))
}

fn scaled(tol: f64, m: &Matrix) -> f64 {
    tol * (1.0 + linalg::norm(m))
}

/// Checks `b(t+1) = f(b(t))` given the z-components at `t` and `t + 1`.
pub fn verify_classical_step(
    step: usize,
    before: &[Matrix],
    after: &[Matrix],
    candidate: &StepPermutation,
    tol: f64,
) -> ClassicalityVerdict {
    if let Some(w) = commutation_witness(before, tol) {
        return ClassicalityVerdict {
            step,
            verdict: Verdict::NonClassical(w),
            residual: None,
        };
    }
    let dim = before[0].nrows();
    let projectors = sector_projectors(&linalg::identity(dim), before);
    let target = b_hat_from(after);
    let diff = &target - lifted(&projectors, candidate);
    let residual = linalg::norm(&diff);
    if residual <= scaled(tol, &target) {
        return ClassicalityVerdict {
            step,
            verdict: Verdict::Classical(candidate.clone()),
            residual: Some(residual),
        };
    }
    let (b, worst) = projectors
        .iter()
        .enumerate()
        .map(|(c, p)| (c as u64, linalg::norm(&(&diff * p))))
        .fold((0, 0.0), |best, x| if x.1 > best.1 { x } else { best });
    ClassicalityVerdict {
        step,
        verdict: Verdict::NonClassical(Witness::Mismatch { b, residual: worst }),
        residual: Some(residual),
    }
}

/// Looks for a permutation `f` with `S b(t+1) = f(S b(t))` inside a sector
/// `S`, where `before`/`after` are the sector's z-family (`S z_k`). The
/// identity decomposes over the eigenspaces of `b(t)`, so each `f(c)` is
/// determined independently; the images must be distinct.
pub fn search_sector_law(
    sector: &Matrix,
    before: &[Matrix],
    after: &[Matrix],
    tol: f64,
) -> Result<StepPermutation, Witness> {
    if let Some(w) = commutation_witness(before, tol) {
        return Err(w);
    }
    let projectors = sector_projectors(sector, before);
    let target = b_hat_from(after);
    let size = 1u64 << before.len();
    let mut table = Vec::with_capacity(size as usize);
    let mut used = vec![false; size as usize];
    for (c, p) in projectors.iter().enumerate() {
        let tp = &target * p;
        let (b, residual) = (0..size)
            .map(|b| (b, linalg::norm(&(&tp - p * C64::new(b as f64, 0.0)))))
            .fold((0, f64::INFINITY), |best, x| if x.1 < best.1 { x } else { best });
        if residual > scaled(tol, &target) || used[b as usize] {
            return Err(Witness::Mismatch {
                b: c as u64,
                residual,
            });
        }
        used[b as usize] = true;
        table.push(b);
    }
    StepPermutation::from_table(before.len(), table).map_err(|_| Witness::NoCandidate)
}

/// Verdict for step `t -> t + 1` of a run. The candidate comes from the
/// gate list, or else from the step unitary when it permutes basis states.
/// The lift of `f` is evaluated spectrally: `P_c(t) = W(t)^dagger |c><c| W(t)`.
pub fn classify_step(history: &QuantumHistory, t: usize, tol: f64) -> ClassicalityVerdict {
    let width = history.program.width();
    let (now, next) = (history.at(t), history.at(t + 1));
    let w = now.unitary();
    let step_unitary = next.unitary() * w.adjoint();
    let candidate = step_candidate(&history.program.steps()[t], width, tol).or_else(|| {
        linalg::monomial_permutation(&step_unitary, tol)
            .and_then(|table| StepPermutation::from_table(width, table).ok())
    });
    let target = next.b_hat();
    match candidate {
        Some(f) => {
            let diag = Matrix::from_diagonal(&crate::linalg::StateVector::from_iterator(
                1 << width,
                (0..1u64 << width).map(|c| C64::new(f.apply(c) as f64, 0.0)),
            ));
            let residual = linalg::distance(&target, &(w.adjoint() * diag * w));
            if residual <= scaled(tol, &target) {
                ClassicalityVerdict {
                    step: t,
                    verdict: Verdict::Classical(f),
                    residual: Some(residual),
                }
            } else {
                mismatch_in_frame(t, &step_unitary, width, Some(residual))
            }
        }
        None => mismatch_in_frame(t, &step_unitary, width, None),
    }
}

/// In the frame of time `t`, `b(t+1)` is `U^dagger B U` with `B` the diagonal
/// of state values; `b(t+1)` is a function of `b(t)` only if that matrix is
/// diagonal. The witness is the state whose column leaks the most.
fn mismatch_in_frame(t: usize, u: &Matrix, width: usize, residual: Option<f64>) -> ClassicalityVerdict {
    let values = crate::linalg::StateVector::from_iterator(1 << width, (0..1u64 << width).map(|c| C64::new(c as f64, 0.0)));
    let d = u.adjoint() * Matrix::from_diagonal(&values) * u;
    let (b, worst) = (0..1usize << width)
        .map(|c| {
            let leak: f64 = (0..1usize << width)
                .filter(|&r| r != c)
                .map(|r| d[(r, c)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            (c as u64, leak)
        })
        .fold((0, 0.0), |best, x| if x.1 > best.1 { x } else { best });
    ClassicalityVerdict {
        step: t,
        verdict: Verdict::NonClassical(Witness::Mismatch { b, residual: worst }),
        residual,
    }
}

pub fn classify_run(history: &QuantumHistory, tol: f64) -> Vec<ClassicalityVerdict> {
    (0..history.program.len()).map(|t| classify_step(history, t, tol)).collect()
}
