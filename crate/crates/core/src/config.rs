//! Numerical tolerances and size caps.

use std::env;

/// Environment variable that overrides [`Tolerances::default`]'s `products` value.
pub const TOLERANCE_ENV: &str = "BRANCHFLOW_TOLERANCE";

/// Default cap on the number of qubits of a Heisenberg network.
pub const DEFAULT_MAX_QUBITS: usize = 10;

/// Tolerances used by the quantum engine and the analyzers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Identities involving products of many gates.
    pub products: f64,
    /// Single-gate identities.
    pub single_gate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let products = env::var(TOLERANCE_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
            .unwrap_or(1e-10);
        Tolerances {
            products,
            single_gate: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn with_products(products: f64) -> Self {
        Tolerances {
            products,
            ..Tolerances::default()
        }
    }
}
