//! Björck–Pereyra elimination for Vandermonde systems.

/// Solves `Σ_k z_k α_k^j = rhs_j` for `j = 0..n−1` (the "dual" system whose
/// matrix has powers down the rows) in O(n²) by progressive elimination.
///
/// For distinct nodes only. When the nodes are monotone and the right-hand
/// side alternates in sign in the right way the result is accurate to a few
/// ulps componentwise, far better than the condition number suggests.
pub fn solve_dual(nodes: &[f64], rhs: &[f64]) -> Vec<f64> {
    assert_eq!(nodes.len(), rhs.len(), "one right-hand side entry per node");
    let n = nodes.len();
    let mut z = rhs.to_vec();
    if n == 0 {
        return z;
    }
    let last = n - 1;
    for k in 0..last {
        for i in (k + 1..=last).rev() {
            z[i] -= nodes[k] * z[i - 1];
        }
    }
    for k in (0..last).rev() {
        for i in k + 1..=last {
            z[i] /= nodes[i] - nodes[i - k - 1];
        }
        for i in k..last {
            z[i] -= z[i + 1];
        }
    }
    z
}
