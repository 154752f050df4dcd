//! Numerical thresholds used by floating-point code paths.
//!
//! Exact (Gaussian-rational) inputs never consult these; they only apply once
//! a value has fallen back to `f64`.

/// Entries with `|v| <= ZERO_PRUNE_REL * max|entry|` are dropped after a
/// floating-point stencil application.
pub const ZERO_PRUNE_REL: f64 = 1e-14;

/// Absolute per-lag tolerance when comparing floating autocorrelations.
pub const LAG_ABS: f64 = 1e-12;

/// Relative tolerance for value comparisons inside the association search.
pub const ASSOCIATION_REL: f64 = 1e-12;

/// Relative tolerance for the symbol identities.
pub const SYMBOL_REL: f64 = 1e-12;

/// Sampled magnitude comparison: max deviation relative to the peak of `|f^|^2`.
pub const SAMPLED_REL: f64 = 1e-10;

/// Absolute tolerance for the sampled exact/grid agreement check.
pub const SAMPLED_ABS: f64 = 1e-10;

/// Strictness margin for distances and separations between convex bodies.
pub const GEOMETRY: f64 = 1e-10;

/// Relative tolerance for unit-modulus checks on floating phases.
pub const UNIT_REL: f64 = 1e-12;
