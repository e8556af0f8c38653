//! Directed communication graphs, Laplacian spectra, and Perron matrices.
//!
//! Conventions follow the usual consensus setup: `adj[[i, j]] = a_ij > 0`
//! means agent `i` receives information from agent `j` (edge j → i), the
//! in-degree is the row sum `Δ_i = Σ_j a_ij`, and the Laplacian is
//! `L = Δ − A` so that `L · 1 = 0`. The design conditions need the second
//! smallest eigenvalue `λ₂` of the symmetric part `L_s = (L + Lᵀ)/2`,
//! computed here by cyclic Jacobi rotations (dense; the expected agent
//! counts are small).

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Tolerance for the balanced-graph check (weights are user-supplied
/// exact constants, so this is purely for floating-point noise).
pub const BALANCE_TOL: f64 = 1e-12;

/// Directed communication graph on `n ≥ 2` agents.
///
/// Entries are non-negative weights with a zero diagonal (self edges are
/// not allowed). 0/1 adjacency is the common case but any non-negative
/// weights are accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct DiGraph {
    n: usize,
    adj: Array2<f64>,
}

impl DiGraph {
    pub fn new(adj: Array2<f64>) -> Result<Self> {
        let (rows, cols) = adj.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows < 2 {
            return Err(Error::TooFewAgents(rows));
        }
        for i in 0..rows {
            for j in 0..cols {
                let w = adj[[i, j]];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::BadWeight {
                        row: i,
                        col: j,
                        value: w,
                    });
                }
                if i == j && w != 0.0 {
                    return Err(Error::SelfEdge(i));
                }
            }
        }
        Ok(Self { n: rows, adj })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        for r in rows {
            if r.len() != cols {
                return Err(Error::NotSquare { rows: n, cols: r.len() });
            }
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let adj = Array2::from_shape_vec((n, cols), flat)
            .map_err(|_| Error::NotSquare { rows: n, cols })?;
        Self::new(adj)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &Array2<f64> {
        &self.adj
    }

    /// In-degree vector Δ_i (row sums of the adjacency matrix).
    pub fn degrees(&self) -> Array1<f64> {
        self.adj.sum_axis(ndarray::Axis(1))
    }

    /// Laplacian L = Δ − A.
    pub fn laplacian(&self) -> Array2<f64> {
        let mut l = -self.adj.clone();
        for (i, d) in self.degrees().iter().enumerate() {
            l[[i, i]] += d;
        }
        l
    }
}

/// Laplacian and the spectral quantities the design conditions consume.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianBundle {
    pub degrees: Array1<f64>,
    pub laplacian: Array2<f64>,
    /// Symmetric part L_s = (L + Lᵀ)/2.
    pub sym_part: Array2<f64>,
    pub delta_max: f64,
    /// Second smallest eigenvalue of L_s.
    pub lambda2: f64,
}

/// Assembles degrees, Laplacian, symmetric part, Δ_max and λ₂(L_s).
pub fn build_bundle(g: &DiGraph) -> LaplacianBundle {
    let degrees = g.degrees();
    let laplacian = g.laplacian();
    let sym_part = (&laplacian + &laplacian.t()) * 0.5;
    let delta_max = degrees.iter().copied().fold(0.0f64, f64::max);
    let eigs = jacobi_eigenvalues(&sym_part);
    let lambda2 = eigs[1];
    LaplacianBundle {
        degrees,
        laplacian,
        sym_part,
        delta_max,
        lambda2,
    }
}

/// True iff every row sum of A equals the matching column sum
/// (in-weight = out-weight at every node).
pub fn is_balanced(g: &DiGraph) -> bool {
    let adj = g.adjacency();
    for i in 0..g.n() {
        let row: f64 = adj.row(i).sum();
        let col: f64 = adj.column(i).sum();
        if (row - col).abs() > BALANCE_TOL {
            return false;
        }
    }
    true
}

/// True iff a directed path connects every ordered pair of nodes.
///
/// Edge orientation: `a_ij > 0` is the edge j → i. Reachability of all
/// nodes from node 0 along edges and along reversed edges is equivalent
/// to strong connectivity.
pub fn is_strongly_connected(g: &DiGraph) -> bool {
    reaches_all(g, false) && reaches_all(g, true)
}

fn reaches_all(g: &DiGraph, reversed: bool) -> bool {
    let n = g.n();
    let adj = g.adjacency();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            // forward: u → v exists when a_vu > 0
            let w = if reversed { adj[[u, v]] } else { adj[[v, u]] };
            if w > 0.0 && !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

/// Perron matrix P = I − eps·L for the integrated gain eps = γh^α/Γ(α+1).
///
/// Rows of P always sum to 1 because L·1 = 0.
pub fn perron_matrix(b: &LaplacianBundle, eps: f64) -> Array2<f64> {
    let n = b.laplacian.nrows();
    let mut p = -&b.laplacian * eps;
    for i in 0..n {
        p[[i, i]] += 1.0;
    }
    p
}

/// True iff 1 is a simple eigenvalue of P and all other eigenvalues lie
/// strictly inside the unit circle.
///
/// Decided by the sufficient condition for Perron matrices of strongly
/// connected digraphs: 0 < eps·Δ_max < 1, where eps·Δ_i is recovered from
/// the diagonal as 1 − P_ii and the edge pattern from the positive
/// off-diagonal entries. A P with eps = 0 (the identity) fails — the
/// eigenvalue 1 then has multiplicity n. For a direct spectral diagnostic
/// see [`subdominant_modulus_estimate`].
pub fn spectral_consensus_check(p: &Array2<f64>) -> bool {
    let n = p.nrows();
    if n != p.ncols() || n < 2 {
        return false;
    }
    let eps_dmax = (0..n).map(|i| 1.0 - p[[i, i]]).fold(f64::MIN, f64::max);
    if !(eps_dmax > 0.0 && eps_dmax < 1.0) {
        return false;
    }
    // Off-diagonal entries of P are eps·a_ij; the pattern is the digraph.
    let mut pattern = p.clone();
    for i in 0..n {
        pattern[[i, i]] = 0.0;
    }
    match DiGraph::new(pattern) {
        Ok(g) => is_strongly_connected(&g),
        Err(_) => false,
    }
}

/// Power-iteration estimate of the second-largest eigenvalue modulus of P.
///
/// Diagnostic companion to [`spectral_consensus_check`] for balanced
/// graphs: iterates the deflated matrix M = P − (1/n)·1·1ᵀ, whose spectrum
/// is that of P with the Perron eigenvalue replaced by 0, and estimates
/// the spectral radius from the geometric mean of the growth ratios. With
/// complex subdominant pairs the iterates rotate, so the estimate carries
/// a few percent of slack rather than machine precision.
pub fn subdominant_modulus_estimate(p: &Array2<f64>, iters: usize) -> f64 {
    let n = p.nrows();
    let uniform = 1.0 / n as f64;
    // v_0 deterministic, not orthogonal to anything in particular.
    let mut v = Array1::from_shape_fn(n, |i| 1.0 / (i as f64 + 2.0));
    let mean = v.sum() * uniform;
    v.mapv_inplace(|x| x - mean);
    let mut norm = norm2(&v);
    if norm == 0.0 {
        return 0.0;
    }
    v.mapv_inplace(|x| x / norm);

    let burn_in = iters / 4;
    let mut log_sum = 0.0;
    let mut counted = 0usize;
    for it in 0..iters {
        let mut w = p.dot(&v);
        let mean = w.sum() * uniform;
        w.mapv_inplace(|x| x - mean);
        norm = norm2(&w);
        if norm == 0.0 {
            return 0.0;
        }
        if it >= burn_in {
            log_sum += norm.ln();
            counted += 1;
        }
        v = w / norm;
    }
    (log_sum / counted.max(1) as f64).exp()
}

fn norm2(v: &Array1<f64>) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(a: &Array2<f64>) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut d = a.clone();
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let tol = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += d[[p, q]] * d[[p, q]];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = d[[p, q]];
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let app = d[[p, p]];
                let aqq = d[[q, q]];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    if i != p && i != q {
                        let dip = d[[i, p]];
                        let diq = d[[i, q]];
                        d[[i, p]] = c * dip - s * diq;
                        d[[p, i]] = d[[i, p]];
                        d[[i, q]] = s * dip + c * diq;
                        d[[q, i]] = d[[i, q]];
                    }
                }
                d[[p, p]] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                d[[q, q]] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                d[[p, q]] = 0.0;
                d[[q, p]] = 0.0;
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| d[[i, i]]).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    /// The five-agent reference graph: a_14=a_15=a_21=a_23=a_31=a_32=a_42=a_43=a_54=1.
    pub(crate) fn five_agent_adjacency() -> Array2<f64> {
        let mut a = Array2::zeros((5, 5));
        for (i, j) in [
            (1, 4),
            (1, 5),
            (2, 1),
            (2, 3),
            (3, 1),
            (3, 2),
            (4, 2),
            (4, 3),
            (5, 4),
        ] {
            a[[i - 1, j - 1]] = 1.0;
        }
        a
    }

    #[test]
    fn digraph_rejects_self_loops_and_bad_weights() {
        let mut a = Array2::zeros((3, 3));
        a[[1, 1]] = 1.0;
        assert!(matches!(DiGraph::new(a), Err(Error::SelfEdge(1))));

        let mut a = Array2::zeros((3, 3));
        a[[0, 1]] = -0.5;
        assert!(matches!(DiGraph::new(a), Err(Error::BadWeight { .. })));

        let a = Array2::zeros((1, 1));
        assert!(matches!(DiGraph::new(a), Err(Error::TooFewAgents(1))));
    }

    #[test]
    fn five_agent_bundle_degrees_and_delta_max() {
        let g = DiGraph::new(five_agent_adjacency()).unwrap();
        let b = build_bundle(&g);
        assert_eq!(
            b.degrees.to_vec(),
            vec![2.0, 2.0, 2.0, 2.0, 1.0],
            "in-degrees"
        );
        assert_eq!(b.delta_max, 2.0);
    }

    #[test]
    fn five_agent_lambda2_is_one() {
        // Spectrum of L_s is exactly {0, 1, 5/2, 5/2, 3}
        // (characteristic polynomial λ(λ−1)(λ−3)(2λ−5)²/4).
        let g = DiGraph::new(five_agent_adjacency()).unwrap();
        let b = build_bundle(&g);
        assert!((b.lambda2 - 1.0).abs() < 1e-12, "λ₂ = {}", b.lambda2);
        let eigs = jacobi_eigenvalues(&b.sym_part);
        let expected = [0.0, 1.0, 2.5, 2.5, 3.0];
        for (got, want) in eigs.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn complete_graph_on_three_nodes() {
        let adj = array![[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]];
        let g = DiGraph::new(adj).unwrap();
        let b = build_bundle(&g);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 } else { -1.0 };
                assert_eq!(b.laplacian[[i, j]], want);
            }
        }
        // Known spectrum {0, 3, 3}.
        assert!((b.lambda2 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let g = DiGraph::new(five_agent_adjacency()).unwrap();
        let b = build_bundle(&g);
        for i in 0..5 {
            assert!(b.laplacian.row(i).sum().abs() <= 1e-12);
        }
    }

    #[test]
    fn balance_checks() {
        let g = DiGraph::new(five_agent_adjacency()).unwrap();
        assert!(is_balanced(&g));

        let one_way = DiGraph::new(array![[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(!is_balanced(&one_way));

        // Any symmetric adjacency is balanced.
        let sym = DiGraph::new(array![
            [0.0, 0.3, 0.0],
            [0.3, 0.0, 1.7],
            [0.0, 1.7, 0.0]
        ])
        .unwrap();
        assert!(is_balanced(&sym));
    }

    #[test]
    fn strong_connectivity_checks() {
        let g = DiGraph::new(five_agent_adjacency()).unwrap();
        assert!(is_strongly_connected(&g));

        let disconnected = DiGraph::new(Array2::zeros((2, 2))).unwrap();
        assert!(!is_strongly_connected(&disconnected));

        // Directed 3-cycle 1 → 2 → 3 → 1, i.e. a_21 = a_32 = a_13 = 1.
        let cycle = DiGraph::new(array![
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0]
        ])
        .unwrap();
        assert!(is_strongly_connected(&cycle));

        // One-way pair: 1 can hear 2 but not vice versa.
        let one_way = DiGraph::new(array![[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(!is_strongly_connected(&one_way));
    }

    #[test]
    fn perron_matrix_identity_at_zero_gain() {
        let g = DiGraph::new(five_agent_adjacency()).unwrap();
        let b = build_bundle(&g);
        let p = perron_matrix(&b, 0.0);
        assert_eq!(p, Array2::eye(5));
    }

    #[test]
    fn perron_matrix_reference_diagonal() {
        // eps = 0.15·0.85^0.9/Γ(1.9), pinned from high-precision evaluation.
        let eps = 0.13474074618394383;
        let g = DiGraph::new(five_agent_adjacency()).unwrap();
        let b = build_bundle(&g);
        let p = perron_matrix(&b, eps);
        let want = [
            1.0 - 2.0 * eps,
            1.0 - 2.0 * eps,
            1.0 - 2.0 * eps,
            1.0 - 2.0 * eps,
            1.0 - eps,
        ];
        for i in 0..5 {
            assert!((p[[i, i]] - want[i]).abs() < 1e-15);
        }
        // Rows sum to 1.
        for i in 0..5 {
            assert!((p.row(i).sum() - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn consensus_check_reference_scenario() {
        let eps = 0.13474074618394383; // eps·Δ_max ≈ 0.2695 < 1
        let g = DiGraph::new(five_agent_adjacency()).unwrap();
        let b = build_bundle(&g);
        assert!(spectral_consensus_check(&perron_matrix(&b, eps)));
    }

    #[test]
    fn consensus_check_boundary_and_identity() {
        // 2-node mutual graph at eps = 1/Δ_max = 1: P = [[0,1],[1,0]] has
        // eigenvalue −1 on the unit circle.
        let g = DiGraph::new(array![[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let b = build_bundle(&g);
        assert!(!spectral_consensus_check(&perron_matrix(&b, 1.0)));
        assert!(spectral_consensus_check(&perron_matrix(&b, 0.4)));

        // eps = 0 gives the identity: eigenvalue 1 with multiplicity n.
        assert!(!spectral_consensus_check(&perron_matrix(&b, 0.0)));
    }

    #[test]
    fn subdominant_estimate_two_node() {
        // P = [[1−e, e],[e, 1−e]] has spectrum {1, 1−2e}.
        let g = DiGraph::new(array![[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let b = build_bundle(&g);
        for e in [0.1, 0.3, 0.45] {
            let est = subdominant_modulus_estimate(&perron_matrix(&b, e), 400);
            let exact = (1.0 - 2.0 * e).abs();
            assert!(
                (est - exact).abs() < 1e-6,
                "e={e}: est {est} vs exact {exact}"
            );
        }
    }

    #[test]
    fn subdominant_estimate_complex_pair() {
        // Directed 3-cycle: subdominant pair 1 − e(3/2 ∓ i√3/2) with
        // modulus sqrt((1−1.5e)² + 0.75e²).
        let cycle = DiGraph::new(array![
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0]
        ])
        .unwrap();
        let b = build_bundle(&cycle);
        for e in [0.2, 0.5] {
            let est = subdominant_modulus_estimate(&perron_matrix(&b, e), 4000);
            let exact = ((1.0 - 1.5 * e).powi(2) + 0.75 * e * e).sqrt();
            assert!(
                (est - exact).abs() < 2e-2 * exact,
                "e={e}: est {est} vs exact {exact}"
            );
        }
    }

    #[test]
    fn jacobi_matches_known_2x2() {
        let a = array![[2.0, 1.0], [1.0, 2.0]];
        let eigs = jacobi_eigenvalues(&a);
        assert!((eigs[0] - 1.0).abs() < 1e-14);
        assert!((eigs[1] - 3.0).abs() < 1e-14);
    }
}
