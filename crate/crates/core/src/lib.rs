//! Sampled-data distributed consensus for fractional-order multi-agent
//! systems.
//!
//! A group of N scalar agents with Caputo dynamics of order α ∈ (0,1) is
//! driven to average consensus by piecewise-constant controls updated at
//! sampling instants t_k = k·h. Because a fractional integrator remembers
//! its entire input history, the state at t_{k+1} depends on every past
//! control, not just the latest one — so the controller carries a
//! compensation term over all previous controls that cancels the memory
//! sum exactly and reduces the closed loop to the row-stochastic Perron
//! recursion x(t_{k+1}) = P·x(t_k).
//!
//! Module map:
//!
//! - [`fraccalc`] — Gamma function, memory-kernel coefficients f(j), and
//!   their telescoped absolute partial sums.
//! - [`graph`] — directed communication graphs, Laplacian bundle
//!   (Δ_max, λ₂ of the symmetric part), Perron matrices.
//! - [`dynamics`] — exact propagation of the sampled fractional integrator
//!   and dense inter-sample reconstruction.
//! - [`control`] — the memory-compensating controller, the memoryless
//!   baseline, and the design-condition checks.
//! - [`sim`] — scenario runner, metrics, and scheme comparison.

pub mod control;
pub mod dynamics;
pub mod error;
pub mod fraccalc;
pub mod graph;
pub mod sim;

pub use control::{
    baseline_control, check_conditions, default_k_check, proposed_control, ConditionReport,
    Controller, ControllerScheme,
};
pub use dynamics::{
    dense_state, propagate_one_sample, ControlHistory, Propagator, ScalarParams, Trajectory,
};
pub use error::{Error, Result};
pub use fraccalc::{
    abs_kernel_partial_sum, abs_kernel_partial_sum_direct, gamma, kernel_coeffs, kernel_f,
    FracOrder, KernelCoeff,
};
pub use graph::{
    build_bundle, is_balanced, is_strongly_connected, perron_matrix, spectral_consensus_check,
    DiGraph, LaplacianBundle,
};
pub use sim::{compare, reference_scenario, run, Comparison, MetricsSeries, Scenario, SimOutput};
