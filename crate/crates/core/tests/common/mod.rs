//! Shared oracles for the integration suites. Everything here is
//! deliberately independent of the production code paths it checks.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fomas_core::{
    build_bundle, check_conditions, ControllerScheme, DiGraph, FracOrder, Scenario, ScalarParams,
};

/// Number of eigenvalues of symmetric `a` strictly below `sigma`, by the
/// inertia of (A − σI) under symmetric Gaussian elimination (Sylvester's
/// law). A vanishing pivot nudges σ and retries.
pub fn count_eigs_below(a: &Array2<f64>, sigma: f64) -> usize {
    let n = a.nrows();
    let scale = a.iter().map(|x| x.abs()).fold(1.0f64, f64::max);
    let mut shift = sigma;
    'retry: loop {
        let mut m = a.clone();
        for i in 0..n {
            m[[i, i]] -= shift;
        }
        let mut negatives = 0;
        for k in 0..n {
            let pivot = m[[k, k]];
            if pivot == 0.0 || pivot.abs() < 1e-300 {
                shift += 1e-12 * scale;
                continue 'retry;
            }
            if pivot < 0.0 {
                negatives += 1;
            }
            for i in (k + 1)..n {
                let factor = m[[i, k]] / pivot;
                for j in k..n {
                    m[[i, j]] -= factor * m[[k, j]];
                }
            }
        }
        return negatives;
    }
}

/// k-th smallest eigenvalue (0-based) of a symmetric matrix by bisection
/// on the eigenvalue-counting function. Handles repeated eigenvalues.
pub fn kth_eigenvalue_bisect(a: &Array2<f64>, k: usize) -> f64 {
    let n = a.nrows();
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let radius: f64 = (0..n).filter(|&j| j != i).map(|j| a[[i, j]].abs()).sum();
        lo = lo.min(a[[i, i]] - radius);
        hi = hi.max(a[[i, i]] + radius);
    }
    lo -= 1.0;
    hi += 1.0;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if count_eigs_below(a, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// x(t_{k+1}) = P·x(t_k) rolled out for `steps` steps (the integer-order
/// discrete consensus iteration the compensated closed loop must match).
pub fn perron_recursion(p: &Array2<f64>, x0: &Array1<f64>, steps: usize) -> Vec<Array1<f64>> {
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x0.clone());
    for k in 0..steps {
        let next = p.dot(&states[k]);
        states.push(next);
    }
    states
}

/// Balanced, strongly connected random digraph: a uniform-weight directed
/// ring plus random symmetric extra edges. Symmetric additions keep the
/// balance; the ring keeps strong connectivity.
pub fn random_balanced_graph(rng: &mut ChaCha8Rng, n: usize) -> DiGraph {
    let mut adj = Array2::zeros((n, n));
    let ring_w: f64 = rng.random_range(0.5..1.5);
    for i in 0..n {
        adj[[i, (i + 1) % n]] = ring_w;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if adj[[i, j]] == 0.0 && adj[[j, i]] == 0.0 && rng.random_bool(0.35) {
                let w: f64 = rng.random_range(0.2..1.0);
                adj[[i, j]] = w;
                adj[[j, i]] = w;
            }
        }
    }
    DiGraph::new(adj).expect("construction keeps the invariants")
}

/// Deterministically generates `count` certified scenarios with n ≤ 6:
/// random balanced graphs, orders, periods, and gains targeting
/// β ≈ t·(2^α − 1) so the k = 0 bound holds, then kept only when the full
/// condition check certifies.
pub fn certified_random_scenarios(count: usize, seed: u64, horizon: usize) -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 20_000, "scenario generation is stuck");

        let n = rng.random_range(2..=6);
        let graph = random_balanced_graph(&mut rng, n);
        let bundle = build_bundle(&graph);

        let alpha: f64 = rng.random_range(0.55..0.95);
        let h: f64 = rng.random_range(0.3..1.2);
        let order = FracOrder::new(alpha).unwrap();

        let beta_target = rng.random_range(0.3..0.95) * (2f64.powf(alpha) - 1.0);
        let eps = (1.0 - beta_target) / bundle.lambda2;
        if !(eps > 0.0 && eps < 1.0 / bundle.delta_max) {
            continue;
        }
        let step_gain = h.powf(alpha) / fomas_core::gamma(alpha + 1.0).unwrap();
        let gamma = eps / step_gain;
        let params = match ScalarParams::new(order, gamma, h) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let report = check_conditions(&graph, &params, 5_000).unwrap();
        if !report.certified() {
            continue;
        }

        let x0 = Array1::from_shape_fn(n, |_| rng.random_range(-5.0..5.0));
        out.push(Scenario {
            params,
            graph,
            x0,
            horizon_steps: horizon,
            scheme: ControllerScheme::Proposed,
            dense_resolution: 0,
        });
    }
    out
}
