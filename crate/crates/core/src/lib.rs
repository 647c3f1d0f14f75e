//! Numerical simulator for non-dissipative (pure-dephasing) decoherence of
//! a three-qubit system built from a trapped two-level ion in an optical
//! cavity: ion internal state, one motional quantum, one cavity photon.
//!
//! A resonant laser plus a red-sideband cavity mode drive the four-state
//! model space {|g,m-1,n-1>, |e,m-1,n-1>, |g,m,n>, |e,m,n>}; coupling the
//! interaction Hamiltonian to an ohmic oscillator bath dephases the state
//! in the interaction eigenbasis. The crate provides:
//!
//! - [`linalg`]: dense complex matrices, Jacobi Hermitian eigensolver,
//!   Hermitian matrix exponential;
//! - [`model`]: system parameters, the 4x4 interaction matrix, its
//!   analytic eigensystem, and the full truncated Fock-space Hamiltonian;
//! - [`bath`]: the dephasing integrals Gamma(t) and C(t) by adaptive
//!   quadrature, packaged as sampled profiles;
//! - [`evolution`]: the dephasing map, its explicit closed form, and the
//!   coherence-free unitary propagator;
//! - [`observables`]: entangled-target generation probability and ion
//!   population inversion, direct and closed-form routes;
//! - [`entanglement`]: partial transpose, negativity, partial trace,
//!   linear entropy on the embedded three-qubit space;
//! - [`leakage`]: model-space escape under the full Hamiltonian and its
//!   short-time power law;
//! - [`scenario`] / [`emit`]: config-driven sweeps over the bath coupling
//!   and deterministic CSV/SVG output.

// `!(x >= 0.0)`-style range checks are deliberate: they reject NaN along
// with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod emit;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod leakage;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod scenario;

pub use bath::{build_profile, c_of_t, gamma_of_t, BathSpec, DephasingProfile};
pub use emit::{emit_csv, emit_svg, render_csv, render_svg};
pub use entanglement::{
    embed_tripartite, linear_entropy, negativity, partial_transpose, reduced_density, Subsystem,
    TripartiteIndex,
};
pub use error::{Error, Result};
pub use evolution::{
    evolve_dephasing, rho_closed_form, unitary_evolve, unitary_evolve_state, DensityOperator,
    InitialState,
};
pub use leakage::{
    fit_power_law, full_space_evolve, geometric_grid, leakage_probability, leakage_series,
    FockSpace,
};
pub use linalg::{
    hermitian_eigensystem, hermitian_expm, BasisTag, ComplexMatrix, HermitianEigenSystem,
};
pub use model::{
    analytic_eigensystem, build_h_full, build_h_is, derived_params, AnalyticEigenSystem, ModelKet,
    SystemParams,
};
pub use observables::{
    ghz_probability, ghz_probability_closed_form, ghz_probability_printed_form,
    inversion_closed_form, inversion_printed_form, population_inversion, GhzSign, GhzTarget,
};
pub use scenario::{
    figure_preset, parse_config, parse_config_str, run_scenario, Observable, ObservableSeries,
    ScenarioConfig,
};
