//! Scenario configuration: one JSON document per scenario.
//!
//! Keys: `alpha`, `gamma`, `h`, `horizon_steps`, `dense_resolution`,
//! `adjacency` (n×n array), `x0` (n array), `scheme`
//! ("proposed" | "baseline"), `k_check`. Unknown keys are rejected so typos
//! surface immediately; parse errors carry line/column positions.

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use fomas_core::{default_k_check, ControllerScheme, DiGraph, FracOrder, Scenario, ScalarParams};

use crate::CliError;

pub const DEFAULT_HORIZON: usize = 120;
pub const DEFAULT_DENSE_RESOLUTION: usize = 10;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub h: f64,
    #[serde(default = "default_horizon")]
    pub horizon_steps: usize,
    #[serde(default = "default_dense")]
    pub dense_resolution: usize,
    pub adjacency: Vec<Vec<f64>>,
    pub x0: Vec<f64>,
    #[serde(default = "default_scheme")]
    pub scheme: String,
    /// Certification horizon; defaults to 10× the simulation horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_check: Option<usize>,
}

fn default_horizon() -> usize {
    DEFAULT_HORIZON
}

fn default_dense() -> usize {
    DEFAULT_DENSE_RESOLUTION
}

fn default_scheme() -> String {
    "proposed".to_string()
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input(format!("config parse error: {e}")))
    }

    /// Validates every field and builds the runnable scenario plus the
    /// certification horizon.
    pub fn to_scenario(&self) -> Result<(Scenario, usize), CliError> {
        let order = FracOrder::new(self.alpha)
            .map_err(|e| CliError::input(format!("field `alpha`: {e}")))?;
        let params = ScalarParams::new(order, self.gamma, self.h)
            .map_err(|e| CliError::input(format!("fields `gamma`/`h`: {e}")))?;
        let graph = DiGraph::from_rows(&self.adjacency)
            .map_err(|e| CliError::input(format!("field `adjacency`: {e}")))?;
        if self.x0.len() != graph.n() {
            return Err(CliError::input(format!(
                "field `x0`: length {} does not match the {}-node adjacency",
                self.x0.len(),
                graph.n()
            )));
        }
        if self.horizon_steps == 0 {
            return Err(CliError::input("field `horizon_steps`: must be >= 1".into()));
        }
        let scheme = match self.scheme.as_str() {
            "proposed" => ControllerScheme::Proposed,
            "baseline" => ControllerScheme::BaselineMemoryless,
            other => {
                return Err(CliError::input(format!(
                    "field `scheme`: expected \"proposed\" or \"baseline\", got \"{other}\""
                )))
            }
        };
        let k_check = match self.k_check {
            Some(0) => return Err(CliError::input("field `k_check`: must be >= 1".into())),
            Some(k) => k,
            None => default_k_check(self.horizon_steps),
        };
        Ok((
            Scenario {
                params,
                graph,
                x0: Array1::from_vec(self.x0.clone()),
                horizon_steps: self.horizon_steps,
                scheme,
                dense_resolution: self.dense_resolution,
            },
            k_check,
        ))
    }

    /// Config for the bundled five-agent reference scenario.
    pub fn reference() -> Self {
        let sc = fomas_core::reference_scenario();
        let n = sc.n();
        let adjacency = (0..n)
            .map(|i| sc.graph.adjacency().row(i).to_vec())
            .collect();
        Self {
            alpha: sc.params.alpha(),
            gamma: sc.params.gamma(),
            h: sc.params.h(),
            horizon_steps: sc.horizon_steps,
            dense_resolution: sc.dense_resolution,
            adjacency,
            x0: sc.x0.to_vec(),
            scheme: "proposed".to_string(),
            k_check: None,
        }
    }
}
