//! Structural checks over run histories: classical steps, autonomous
//! families, correspondence with ensembles, information presence,
//! robustness under monitoring, and branch traces.

pub mod autonomy;
pub mod classicality;
pub mod correspondence;
pub mod presence;
pub mod robustness;
pub mod trace;

#[cfg(test)]
mod tests;

pub use autonomy::{
    algebra_basis, check_autonomy, classical_law, conditional_sectors, gate_list_law, off_sector_law, AutonomyReport,
    ConditionalSectors, DeclaredLaw, Selector, UpdateLaw,
};
pub use classicality::{
    classify_run, classify_step, search_sector_law, verify_classical_step, ClassicalityVerdict, Verdict, Witness,
};
pub use correspondence::{check_correspondence, compare_weights, ensemble_matched_state, proportions, CorrespondenceReport};
pub use presence::{information_presence_test, Measurement, Presence, Subsystem};
pub use robustness::{measurement_robustness_check, RobustnessReport};
pub use trace::{classical_trace, ensemble_trace, quantum_trace, Engine, RunTrace, TraceRow, WEIGHT_CUTOFF};
