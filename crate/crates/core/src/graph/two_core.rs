use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// 2-core of `g`: the maximal subgraph of minimum degree at least 2, which is
/// also the union of all edges lying on cycles. Obtained by repeatedly
/// deleting vertices of degree at most 1. The vertex set is unchanged; peeled
/// vertices become isolated.
pub fn two_core(g: &Graph) -> Graph {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        for w in g.neighbors(v) {
            if !removed[w] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    g.edge_subgraph(|u, v| !removed[u] && !removed[v])
}

/// Asymptotic size of the 2-core of `G(n, c/n)` for `c > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoCorePrediction {
    pub c: f64,
    /// Root of `x e^{-x} = c e^{-c}` in `(0, 1)`.
    pub x: f64,
    /// Predicted fraction of vertices in the 2-core, `(1 - x)(1 - x/c)`.
    pub nu_frac: f64,
    /// Predicted number of 2-core edges per vertex, `(1 - x/c)^2 c / 2`.
    pub mu_frac: f64,
}

/// Solves `x e^{-x} = c e^{-c}` on `(0, 1)` by bisection (the left side is
/// increasing there) and derives the 2-core fractions.
pub fn predict_two_core(c: f64) -> Result<TwoCorePrediction> {
    if !(c > 1.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "2-core prediction needs c > 1, got {c}"
        )));
    }
    let target = c * (-c).exp();
    let f = |x: f64| x * (-x).exp() - target;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    let y = 1.0 - x / c;
    Ok(TwoCorePrediction {
        c,
        x,
        nu_frac: (1.0 - x) * y,
        mu_frac: y * y * c / 2.0,
    })
}
