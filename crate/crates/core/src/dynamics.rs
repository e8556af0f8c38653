//! Exact time evolution of the Caputo fractional integrator under
//! piecewise-constant control.
//!
//! With controls held constant on each sampling interval, the Volterra
//! integral form of the plant integrates in closed form. Anchoring the sum
//! at the initial instant gives the ground-truth state
//!
//! ```text
//! x(t_{k+1}) = x(t_0) + (h^α/Γ(α+1)) Σ_{j=0}^{k} [ (k+1−j)^α − (k−j)^α ] u_j
//! ```
//!
//! which is used for all propagation here. The algebraically identical
//! step-relative expansion (x(t_{k+1}) in terms of x(t_k) plus a memory sum
//! over past controls) subtracts nearly-equal coefficients and is kept only
//! as a validation route in the test suite. Times are measured from the
//! initial instant, i.e. t_0 = 0 and t_k = k·h with integer k.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::fraccalc::{self, FracOrder};

/// Control gain, sampling period, and the derived integrated gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarParams {
    order: FracOrder,
    gamma: f64,
    h: f64,
    /// h^α / Γ(α+1); the exact one-interval integral of a unit input.
    step_gain: f64,
    /// γ·h^α / Γ(α+1); the integrated control gain.
    eps: f64,
}

impl ScalarParams {
    /// Derives the integrated gains from (α, γ, h); they are never
    /// user-supplied. γ = 0 is accepted for exploratory runs but can
    /// never certify (the gain condition is strict).
    pub fn new(order: FracOrder, gamma: f64, h: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::NonPositiveParameter {
                name: "gamma",
                value: gamma,
            });
        }
        if !h.is_finite() || h <= 0.0 {
            return Err(Error::NonPositiveParameter { name: "h", value: h });
        }
        let step_gain = h.powf(order.alpha()) / fraccalc::gamma(order.alpha() + 1.0)?;
        Ok(Self {
            order,
            gamma,
            h,
            step_gain,
            eps: gamma * step_gain,
        })
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    pub fn alpha(&self) -> f64 {
        self.order.alpha()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// h^α / Γ(α+1).
    pub fn step_gain(&self) -> f64 {
        self.step_gain
    }

    /// γ·h^α / Γ(α+1).
    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// Ordered past control vectors u_0, u_1, …, u_{k−1}.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlHistory {
    dim: usize,
    entries: Vec<Array1<f64>>,
}

impl ControlHistory {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, u: Array1<f64>) -> Result<()> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.len(),
            });
        }
        self.entries.push(u);
        Ok(())
    }

    /// Control applied on [t_j, t_{j+1}).
    pub fn get(&self, j: usize) -> &Array1<f64> {
        &self.entries[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Array1<f64>> {
        self.entries.iter()
    }
}

/// States and controls of one closed-loop run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// t_k = k·h for k = 0…K.
    pub sample_times: Vec<f64>,
    /// x(t_k) for k = 0…K.
    pub states: Vec<Array1<f64>>,
    /// The K controls actually applied.
    pub controls: ControlHistory,
    /// Optional inter-sample reconstruction (t, x(t)).
    pub dense_points: Option<Vec<(f64, Array1<f64>)>>,
}

/// Propagation engine holding the precomputed power table m ↦ m^α.
///
/// The per-step memory sum is O(k); the table removes the repeated `powf`
/// calls when a whole trajectory is rolled out.
#[derive(Debug, Clone)]
pub struct Propagator {
    params: ScalarParams,
    powers: Vec<f64>,
}

impl Propagator {
    pub fn new(params: ScalarParams) -> Self {
        Self::with_horizon(params, 0)
    }

    /// Precomputes the power table for trajectories of up to `horizon` steps.
    pub fn with_horizon(params: ScalarParams, horizon: usize) -> Self {
        let mut p = Self {
            params,
            powers: Vec::new(),
        };
        p.ensure(horizon + 1);
        p
    }

    pub fn params(&self) -> &ScalarParams {
        &self.params
    }

    fn ensure(&mut self, max: usize) {
        let a = self.params.alpha();
        for m in self.powers.len()..=max {
            self.powers.push((m as f64).powf(a));
        }
    }

    /// x(t_{k+1}) from the full memory sum anchored at t_0, where the last
    /// history entry is the control for the step being completed.
    pub fn propagate_one_sample(
        &mut self,
        x0: &Array1<f64>,
        history: &ControlHistory,
    ) -> Result<Array1<f64>> {
        if history.is_empty() {
            return Err(Error::EmptyHistory);
        }
        if x0.len() != history.dim() {
            return Err(Error::DimensionMismatch {
                expected: history.dim(),
                found: x0.len(),
            });
        }
        let steps = history.len(); // k+1
        self.ensure(steps);
        let mut acc = Array1::<f64>::zeros(x0.len());
        for (j, u) in history.iter().enumerate() {
            let w = self.powers[steps - j] - self.powers[steps - j - 1];
            acc.scaled_add(w, u);
        }
        Ok(x0 + &(acc * self.params.step_gain()))
    }

    /// x(t) between samples, by the same piecewise-exact integral with the
    /// final partial interval cut at t. Requires 0 ≤ t ≤ history.len()·h.
    pub fn dense_state(
        &self,
        t: f64,
        x0: &Array1<f64>,
        history: &ControlHistory,
    ) -> Result<Array1<f64>> {
        let h = self.params.h();
        let t_max = history.len() as f64 * h;
        if !t.is_finite() || t < 0.0 || t > t_max {
            return Err(Error::TimeOutOfRange {
                t,
                t_min: 0.0,
                t_max,
            });
        }
        if x0.len() != history.dim() {
            return Err(Error::DimensionMismatch {
                expected: history.dim(),
                found: x0.len(),
            });
        }
        if t == 0.0 {
            return Ok(x0.clone());
        }
        let a = self.params.alpha();
        // Last sample index m with t_m < t.
        let m = ((t / h).ceil() as usize).saturating_sub(1);
        let m = m.min(history.len() - 1);
        let gamma_a1 = self.params.step_gain() / h.powf(a); // 1/Γ(α+1)
        let mut acc = Array1::<f64>::zeros(x0.len());
        for j in 0..=m {
            let lo = t - j as f64 * h;
            let hi = (t - (j + 1) as f64 * h).max(0.0);
            let w = lo.powf(a) - hi.powf(a);
            acc.scaled_add(w, history.get(j));
        }
        Ok(x0 + &(acc * gamma_a1))
    }
}

/// One-shot form of [`Propagator::propagate_one_sample`].
pub fn propagate_one_sample(
    x0: &Array1<f64>,
    history: &ControlHistory,
    params: &ScalarParams,
) -> Result<Array1<f64>> {
    Propagator::with_horizon(*params, history.len()).propagate_one_sample(x0, history)
}

/// One-shot form of [`Propagator::dense_state`].
pub fn dense_state(
    t: f64,
    x0: &Array1<f64>,
    history: &ControlHistory,
    params: &ScalarParams,
) -> Result<Array1<f64>> {
    Propagator::new(*params).dense_state(t, x0, history)
}
