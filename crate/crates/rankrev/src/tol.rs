//! Centralized numerical tolerances.

/// Relative slack when judging a certificate `ratio <= gamma`. Structured
/// matrices produce neighbors whose volume ties the pivot exactly;
/// floating point can land such ties a few ulps on either side of the
/// threshold, so certification allows this much relative headroom.
pub const CERT_REL_TOL: f64 = 1e-9;

/// Relative agreement demanded between the O(1) ratio formulas and
/// recomputed-volume oracles.
pub const ORACLE_REL_TOL: f64 = 1e-9;

/// Relative slack in singular-value sandwich comparisons, covering the
/// accumulated rounding of the SVD oracle and the thin-factor route.
pub const SANDWICH_REL_TOL: f64 = 1e-9;
