//! Distributed controllers and the design-condition checkers.
//!
//! The proposed controller pairs the usual Laplacian consensus term with a
//! compensation sum over all past controls,
//!
//! ```text
//! u_k = −γ·L·x(t_k) − Σ_{l=1}^{k} f(l)·u_{k−l},
//! ```
//!
//! chosen so the compensation exactly cancels the fractional memory sum of
//! the plant: the closed loop collapses to the integer-order Perron
//! recursion x(t_{k+1}) = P·x(t_k). The memoryless baseline keeps only the
//! consensus term and serves as the comparison scheme.
//!
//! Certifying the design requires the gain condition
//! 0 < γh^α/Γ(α+1) < 1/Δ_max and the boundedness condition
//! β^{k+1} + Σ_{l=1}^{k+1}|f(l)| ≤ 1 for every k ≥ 0, with
//! β = 1 − γλ₂(L_s)h^α/Γ(α+1).

use ndarray::{Array1, Array2};

use crate::dynamics::{ControlHistory, ScalarParams};
use crate::error::{Error, Result};
use crate::fraccalc;
use crate::graph::{self, DiGraph};

/// Which control law drives a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControllerScheme {
    /// Consensus term plus memory compensation.
    Proposed,
    /// Consensus term only; each sample treated as a fresh initial value.
    BaselineMemoryless,
}

/// Slack granted to the boundedness curve for floating-point noise.
pub const BOUND_SLACK: f64 = 1e-12;

/// Default certification horizon for a simulation of `horizon` steps.
pub fn default_k_check(horizon: usize) -> usize {
    10 * horizon.max(1)
}

/// u_k = −γ·L·x(t_k) − Σ_{l=1}^{k} f(l)·u_{k−l}.
///
/// The history must hold exactly u_0 … u_{k−1}; anything else means the
/// memory bookkeeping is broken and is rejected. At k = 0 the compensation
/// sum is empty.
pub fn proposed_control(
    k: usize,
    x_k: &Array1<f64>,
    history: &ControlHistory,
    g: &DiGraph,
    params: &ScalarParams,
) -> Result<Array1<f64>> {
    if history.len() != k {
        return Err(Error::HistoryLengthMismatch {
            step: k,
            expected: k,
            found: history.len(),
        });
    }
    let coeffs = fraccalc::kernel_coeffs(k, params.order());
    compute_control(ControllerScheme::Proposed, x_k, history, &g.laplacian(), params, &coeffs)
}

/// u_k = −γ·L·x(t_k); no memory compensation.
pub fn baseline_control(
    _k: usize,
    x_k: &Array1<f64>,
    g: &DiGraph,
    params: &ScalarParams,
) -> Result<Array1<f64>> {
    let empty = ControlHistory::new(x_k.len());
    compute_control(
        ControllerScheme::BaselineMemoryless,
        x_k,
        &empty,
        &g.laplacian(),
        params,
        &[],
    )
}

fn compute_control(
    scheme: ControllerScheme,
    x_k: &Array1<f64>,
    history: &ControlHistory,
    laplacian: &Array2<f64>,
    params: &ScalarParams,
    coeffs: &[f64],
) -> Result<Array1<f64>> {
    if x_k.len() != laplacian.nrows() {
        return Err(Error::DimensionMismatch {
            expected: laplacian.nrows(),
            found: x_k.len(),
        });
    }
    let mut u = laplacian.dot(x_k) * (-params.gamma());
    if scheme == ControllerScheme::Proposed {
        let k = history.len();
        for l in 1..=k {
            u.scaled_add(-coeffs[l], history.get(k - l));
        }
    }
    Ok(u)
}

/// Controller with the compensation coefficients precomputed once per run.
#[derive(Debug, Clone)]
pub struct Controller {
    scheme: ControllerScheme,
    laplacian: Array2<f64>,
    params: ScalarParams,
    coeffs: Vec<f64>,
}

impl Controller {
    /// `horizon` bounds the largest step index this controller will serve.
    pub fn new(scheme: ControllerScheme, g: &DiGraph, params: ScalarParams, horizon: usize) -> Self {
        let coeffs = match scheme {
            ControllerScheme::Proposed => fraccalc::kernel_coeffs(horizon, params.order()),
            ControllerScheme::BaselineMemoryless => Vec::new(),
        };
        Self {
            scheme,
            laplacian: g.laplacian(),
            params,
            coeffs,
        }
    }

    pub fn scheme(&self) -> ControllerScheme {
        self.scheme
    }

    /// The control for step k; the history must hold exactly u_0 … u_{k−1}.
    pub fn control_at(
        &self,
        k: usize,
        x_k: &Array1<f64>,
        history: &ControlHistory,
    ) -> Result<Array1<f64>> {
        if history.len() != k {
            return Err(Error::HistoryLengthMismatch {
                step: k,
                expected: k,
                found: history.len(),
            });
        }
        // Steps past the precomputed horizon fall back to a one-off table.
        let fresh;
        let coeffs: &[f64] =
            if self.scheme == ControllerScheme::Proposed && k >= self.coeffs.len() {
                fresh = fraccalc::kernel_coeffs(k, self.params.order());
                &fresh
            } else {
                &self.coeffs
            };
        compute_control(self.scheme, x_k, history, &self.laplacian, &self.params, coeffs)
    }
}

/// Outcome of the design-condition checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// Integrated gain γh^α/Γ(α+1).
    pub eps: f64,
    pub delta_max: f64,
    /// Second smallest eigenvalue of L_s.
    pub lambda2: f64,
    /// Strict gain condition 0 < eps < 1/Δ_max.
    pub gain_ok: bool,
    /// β = 1 − γλ₂(L_s)h^α/Γ(α+1).
    pub beta: f64,
    /// β^{k+1} + Σ_{l=1}^{k+1}|f(l)| for k = 0…K_check (telescoped sums).
    pub bound_curve: Vec<f64>,
    /// Curve stayed ≤ 1 (within [`BOUND_SLACK`]) over the checked range.
    pub bound_curve_ok: bool,
    /// Closed-form criterion covering every k beyond the checked range.
    pub tail_ok: bool,
    /// Full boundedness verdict: β ∈ (0,1), curve ok, and tail ok.
    pub bound_ok: bool,
    /// Graph is strongly connected and balanced.
    pub assumption1_ok: bool,
    pub k_check: usize,
    /// Human-readable notes on any failed or out-of-regime check.
    pub diagnostics: Vec<String>,
}

impl ConditionReport {
    pub fn certified(&self) -> bool {
        self.gain_ok && self.bound_ok && self.assumption1_ok
    }

    pub fn bound_curve_max(&self) -> f64 {
        self.bound_curve.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn bound_curve_min(&self) -> f64 {
        self.bound_curve.iter().copied().fold(f64::MAX, f64::min)
    }
}

/// Evaluates the gain condition, the boundedness curve up to `k_check`, the
/// closed-form tail criterion, and the graph assumptions.
///
/// The boundedness condition must hold for every k ≥ 0. Beyond the explicit
/// curve, the tail is certified by induction: with g(k) = (k+2)^α − (k+1)^α
/// (the mass the curve leaves free, by the telescoped sum) one has
/// g(k+1)/g(k) ≥ ((k+1)/(k+3))^{1−α}, a ratio that increases in k, so
/// β ≤ ((K+1)/(K+3))^{1−α} together with β^{K+1} ≤ g(K) pushes the
/// inequality past every k > K.
pub fn check_conditions(g: &DiGraph, params: &ScalarParams, k_check: usize) -> Result<ConditionReport> {
    if k_check == 0 {
        return Err(Error::EmptyHorizon);
    }
    let bundle = graph::build_bundle(g);
    let order = params.order();
    let alpha = order.alpha();
    let eps = params.eps();
    let mut diagnostics = Vec::new();

    let gain_ok = bundle.delta_max > 0.0 && eps > 0.0 && eps < 1.0 / bundle.delta_max;
    if !gain_ok {
        diagnostics.push(format!(
            "gain condition failed: need 0 < {eps:.6e} < 1/Δ_max = {:.6e}",
            if bundle.delta_max > 0.0 {
                1.0 / bundle.delta_max
            } else {
                f64::INFINITY
            }
        ));
    }

    let beta = 1.0 - eps * bundle.lambda2;
    let beta_in_regime = beta > 0.0 && beta < 1.0;
    if !beta_in_regime {
        diagnostics.push(format!(
            "beta = {beta:.6} outside (0, 1); the certified regime needs \
             0 < γ·λ₂(L_s)·h^α/Γ(α+1) < 1 (got {:.6})",
            eps * bundle.lambda2
        ));
    }

    let mut bound_curve = Vec::with_capacity(k_check + 1);
    let mut bound_curve_ok = true;
    let mut beta_pow = 1.0f64;
    for k in 0..=k_check {
        beta_pow *= beta;
        let value = beta_pow + fraccalc::abs_kernel_partial_sum(k + 1, order);
        if value > 1.0 + BOUND_SLACK {
            bound_curve_ok = false;
        }
        bound_curve.push(value);
    }
    if !bound_curve_ok {
        diagnostics.push(format!(
            "boundedness curve exceeds 1 within k ≤ {k_check} (max {:.12})",
            bound_curve.iter().copied().fold(f64::MIN, f64::max)
        ));
    }

    let tail_ok = if beta_in_regime {
        let kf = k_check as f64;
        let free_mass = (kf + 2.0).powf(alpha) - (kf + 1.0).powf(alpha);
        let ratio_floor = ((kf + 1.0) / (kf + 3.0)).powf(1.0 - alpha);
        let base = beta.powi(k_check as i32 + 1) <= free_mass + BOUND_SLACK;
        let step = beta <= ratio_floor;
        if !(base && step) {
            diagnostics.push(format!(
                "tail criterion failed at k_check = {k_check}: \
                 β^(K+1) ≤ (K+2)^α − (K+1)^α is {base}, β ≤ ((K+1)/(K+3))^(1−α) is {step}"
            ));
        }
        base && step
    } else {
        false
    };

    let bound_ok = beta_in_regime && bound_curve_ok && tail_ok;

    let strongly_connected = graph::is_strongly_connected(g);
    let balanced = graph::is_balanced(g);
    let assumption1_ok = strongly_connected && balanced;
    if !assumption1_ok {
        diagnostics.push(format!(
            "graph assumption failed: strongly connected = {strongly_connected}, \
             balanced = {balanced}"
        ));
    }

    Ok(ConditionReport {
        eps,
        delta_max: bundle.delta_max,
        lambda2: bundle.lambda2,
        gain_ok,
        beta,
        bound_curve,
        bound_curve_ok,
        tail_ok,
        bound_ok,
        assumption1_ok,
        k_check,
        diagnostics,
    })
}
