//! Shared fixtures for the criterion benches.

use dephasim_core::{derived_params, SystemParams};

/// Scaled parameters (a_11 = 1, alpha = 4) used by every bench.
pub fn bench_params() -> SystemParams {
    derived_params(SystemParams::raw(
        15.0_f64.sqrt(),
        2.0,
        1.0,
        0.05,
        1,
        1,
        1.0,
        50.0,
    ))
    .expect("bench parameters are valid")
}
