//! Shared fixtures for the benchmarks.

/// `(r, t, y)` points, one per regime the dispatcher distinguishes.
pub const REGIME_POINTS: [(&str, f64, f64, f64); 4] = [
    ("mono", 1.0, 50.0, 100.0),
    ("osc", 1.0, 150.0, 100.0),
    ("uniform", 1.0, 100.0, 100.0),
    ("small_y", 1.0, 60.0, 0.5),
];
