use serde::Serialize;

/// Numerical tolerances used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Invariant checks: normalization, Hermiticity, trace.
    pub invariant: f64,
    /// Identities that hold exactly in exact arithmetic.
    pub exact: f64,
    /// Absolute purity gap below which a bipartition counts as separable.
    pub separability: f64,
    /// Negative brackets of at most this magnitude are clamped to zero before a square root.
    pub clamp: f64,
    /// Relative singular-value cutoff for the two-fermion Slater rank.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            invariant: 1e-10,
            exact: 1e-12,
            separability: 1e-8,
            clamp: 1e-10,
            rank: 1e-8,
        }
    }
}
