//! Shared numerical tolerances.

/// Structural invariants: Hermiticity, positivity, trace, normalization, unitarity.
pub const STRUCTURAL: f64 = 1e-9;

/// Choi eigenvalues above this count toward the rank (unit-trace normalization).
pub const RANK: f64 = 1e-7;

/// Probabilities below this leave the post-measurement state undefined.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-12;

/// Default cap on any dense operator dimension handled by the analysis routines.
pub const DEFAULT_MAX_DIM: usize = 1 << 12;
