use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact finite-`n` log-probabilities for a fixed partition into classes
/// `V0..V4` of sizes `n0..n4` in `G(n, c/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionTerms {
    /// Number of pairs that must be non-edges: `C(n,2) - Σ n_i n_{i+1}`.
    pub s: u128,
    /// `S ln(1 - p)`: classes independent, no edges between `V_i`, `V_{i±2}`.
    pub log_p_nonedges: f64,
    /// `Σ_{i=1..4} n_i ln(1 - (1-p)^{n_{i-1}})`: each vertex of `V_i` has a
    /// neighbour in `V_{i-1}`.
    pub log_p_cover: f64,
    /// `n2 ln(1 - (1 - 1/n2)^{n3} (1-p)^{n3})`: upper bound for every vertex
    /// of `V2` having a neighbour in `V3`.
    pub log_p_v2_upper: f64,
    /// `ln(n! / (n0! .. n4!))`.
    pub log_multinomial: f64,
}

impl PartitionTerms {
    /// `(1/n) ln` of the expected number of such partitions (upper bound).
    pub fn rate(&self, n: usize) -> f64 {
        (self.log_p_nonedges + self.log_p_cover + self.log_p_v2_upper + self.log_multinomial) / n as f64
    }
}

/// `ln k!` by direct summation.
pub fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `k · ln(x)` with `0 · ln 0 = 0`.
fn mul_ln(k: usize, x: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

/// Computes [`PartitionTerms`]. `sizes` must sum to `n` and `n2` must be
/// positive; other empty classes are allowed and yield the limiting values
/// (e.g. `n3 = 0 < n2` makes the last bound `-inf`).
pub fn partition_probability_terms(c: f64, n: usize, sizes: [usize; 5]) -> Result<PartitionTerms> {
    if sizes.iter().sum::<usize>() != n || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "class sizes {sizes:?} must sum to n = {n} >= 2"
        )));
    }
    let p = c / n as f64;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = c/n = {p} outside [0, 1]")));
    }
    if sizes[2] == 0 {
        return Err(Error::InvalidParameter("class V2 must be nonempty".into()));
    }
    let ln_q = (-p).ln_1p();
    let pairs = (n as u128) * (n as u128 - 1) / 2;
    let adjacent: u128 = (0..5)
        .map(|i| sizes[i] as u128 * sizes[(i + 1) % 5] as u128)
        .sum();
    let s = pairs - adjacent;
    let log_p_nonedges = if s == 0 { 0.0 } else { s as f64 * ln_q };

    // 1 - (1-p)^k = -expm1(k ln(1-p))
    let hit = |k: usize| -(k as f64 * ln_q).exp_m1();
    let log_p_cover = (1..5).map(|i| mul_ln(sizes[i], hit(sizes[i - 1]))).sum();

    let (n2, n3) = (sizes[2], sizes[3]);
    let miss = n3 as f64 * ((-1.0 / n2 as f64).ln_1p() + ln_q);
    let log_p_v2_upper = mul_ln(n2, -miss.exp_m1());

    let log_multinomial = ln_factorial(n) - sizes.iter().map(|&k| ln_factorial(k)).sum::<f64>();
    Ok(PartitionTerms {
        s,
        log_p_nonedges,
        log_p_cover,
        log_p_v2_upper,
        log_multinomial,
    })
}
