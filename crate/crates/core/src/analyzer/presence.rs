//! Whether a subsystem holds information about a parameter, judged from a
//! family of runs that differ only in that parameter.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heisenberg::{Axis, HeisenbergNetwork, QuantumHistory};
use crate::linalg::{self, Matrix};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Presence {
    /// Measurement `measurement` has a probability that differs across the
    /// family by `spread`.
    ContainsInfo { measurement: usize, spread: f64 },
    /// Every descriptor component of the subsystem is the same matrix for
    /// every member of the family.
    ContainsNone,
    Inconclusive,
}

/// Components `(qubit, axis)` making up a subsystem.
#[derive(Clone, Debug, PartialEq)]
pub struct Subsystem {
    pub components: Vec<(usize, Axis)>,
}

impl Subsystem {
    /// All three components of each qubit.
    pub fn qubits(qubits: &[usize]) -> Self {
        Subsystem {
            components: qubits.iter().flat_map(|&k| Axis::ALL.map(|a| (k, a))).collect(),
        }
    }

    /// One component of each qubit.
    pub fn sector(qubits: &[usize], axis: Axis) -> Self {
        Subsystem {
            components: qubits.iter().map(|&k| (k, axis)).collect(),
        }
    }

    fn matrices(&self, net: &HeisenbergNetwork) -> Result<Vec<Matrix>> {
        self.components
            .iter()
            .map(|&(k, a)| {
                if k == 0 || k > net.width() {
                    Err(Error::IndexOutOfRange {
                        index: k,
                        width: net.width(),
                    })
                } else {
                    Ok(net.component(k, a))
                }
            })
            .collect()
    }
}

/// A Boolean measurement on the subsystem: the product of the listed
/// components (on distinct qubits).
pub type Measurement = Vec<(usize, Axis)>;

fn observable(net: &HeisenbergNetwork, m: &Measurement) -> Matrix {
    m.iter()
        .fold(linalg::identity(net.dim()), |acc, &(k, a)| acc * net.component(k, a))
}

/// Evaluates the family at its final time. `runs[i]` is the run for the
/// `i`-th parameter value.
pub fn information_presence_test(
    runs: &[QuantumHistory],
    subsystem: &Subsystem,
    measurements: &[Measurement],
    tol: f64,
) -> Result<Presence> {
    if runs.len() < 2 {
        return Err(Error::Invalid("need at least two parameter values".into()));
    }
    let finals: Vec<&HeisenbergNetwork> = runs.iter().map(QuantumHistory::final_network).collect();
    if let Some(n) = finals.iter().find(|n| n.width() != finals[0].width()) {
        return Err(Error::WidthMismatch {
            expected: finals[0].width(),
            found: n.width(),
        });
    }
    for (i, m) in measurements.iter().enumerate() {
        let values = finals
            .iter()
            .map(|n| n.expectation(&observable(n, m)))
            .collect::<Result<Vec<f64>>>()?;
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > tol {
            return Ok(Presence::ContainsInfo {
                measurement: i,
                spread: hi - lo,
            });
        }
    }
    let reference = subsystem.matrices(finals[0])?;
    for n in &finals[1..] {
        let other = subsystem.matrices(n)?;
        if reference.iter().zip(&other).any(|(a, b)| linalg::distance(a, b) > tol) {
            return Ok(Presence::Inconclusive);
        }
    }
    Ok(Presence::ContainsNone)
}
