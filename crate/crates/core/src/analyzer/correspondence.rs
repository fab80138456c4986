//! Agreement between the quantum weights `<P_b(t)>` and the proportions
//! `mu_b(t) / M` of a classical ensemble.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::heisenberg::QuantumHistory;
use crate::linalg::{StateVector, C64};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrespondenceReport {
    /// `deviations[t][b]`.
    pub deviations: Vec<Vec<f64>>,
    pub max_deviation: f64,
    /// First time at which some deviation exceeds the tolerance.
    pub first_failure: Option<usize>,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares two weight histories time by time.
pub fn compare_weights(left: &[Vec<f64>], right: &[Vec<f64>], tol: f64) -> Result<CorrespondenceReport> {
    if left.len() != right.len() {
        return Err(Error::Invalid(format!(
            "histories of {} and {} times",
            left.len(),
            right.len()
        )));
    }
    let mut deviations = Vec::with_capacity(left.len());
    let mut max_deviation: f64 = 0.0;
    let mut first_failure = None;
    for (t, (l, r)) in left.iter().zip(right).enumerate() {
        if l.len() != r.len() {
            return Err(Error::WidthMismatch {
                expected: l.len(),
                found: r.len(),
            });
        }
        let row: Vec<f64> = l.iter().zip(r).map(|(a, b)| (a - b).abs()).collect();
        let worst = row.iter().cloned().fold(0.0, f64::max);
        if worst > tol && first_failure.is_none() {
            first_failure = Some(t);
        }
        max_deviation = max_deviation.max(worst);
        deviations.push(row);
    }
    Ok(CorrespondenceReport {
        deviations,
        max_deviation,
        first_failure,
        tolerance: tol,
        passed: first_failure.is_none(),
    })
}

/// `mu_b / M` for every state of the ensemble's width.
pub fn proportions(e: &Ensemble) -> Vec<f64> {
    let total = e.total();
    let mut out = vec![0.0; 1 << e.width()];
    for (b, m) in e.entries() {
        out[b as usize] = (m / &total).to_f64().unwrap_or(f64::NAN);
    }
    out
}

pub fn check_correspondence(
    quantum: &QuantumHistory,
    ensembles: &[Ensemble],
    tol: f64,
) -> Result<CorrespondenceReport> {
    let width = quantum.program.width();
    if let Some(e) = ensembles.iter().find(|e| e.width() != width) {
        return Err(Error::WidthMismatch {
            expected: width,
            found: e.width(),
        });
    }
    let classical: Vec<Vec<f64>> = ensembles.iter().map(proportions).collect();
    compare_weights(&quantum.probability_history(), &classical, tol)
}

/// The Heisenberg state with `|<b|psi>|^2 = mu_b / M`, real amplitudes.
pub fn ensemble_matched_state(e: &Ensemble) -> StateVector {
    let p = proportions(e);
    StateVector::from_iterator(p.len(), p.into_iter().map(|x| C64::new(x.sqrt(), 0.0)))
}
