use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `x ln x`, continuously extended by 0 at `x = 0`.
fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `ln(e^x - 1)` for `x > 0`.
fn ln_expm1(x: f64) -> f64 {
    x.exp_m1().ln()
}

/// A point `(c, α0..α3)` of the five-class rate function with `α4` implied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub c: f64,
    pub alpha: [f64; 4],
    pub alpha4: f64,
    pub log_b: f64,
}

impl BoundPoint {
    pub fn b(&self) -> f64 {
        self.log_b.exp()
    }
}

fn check_interior(c: f64, alpha: &[f64; 4]) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
    }
    if alpha.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "class fractions {alpha:?} must be strictly positive"
        )));
    }
    let alpha4 = 1.0 - alpha[0] - alpha[1] - alpha[2] - alpha[3];
    if !(alpha4 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "class fractions {alpha:?} leave no room for a fifth class"
        )));
    }
    Ok(alpha4)
}

/// Evaluates `log b(c, α)` where
///
/// ```text
/// log b = -Σ_{i=0..4} α_i ln α_i + c(α0 α4 - 1/2)
///         + α1 ln(e^{cα0} - 1) + α2 ln(e^{cα1} - 1)
///         + α3 ln(e^{cα2} - 1) + α4 ln(e^{cα3} - 1)
///         + α2 ln(1 - e^{-α3/α2} e^{-cα3})
/// ```
///
/// with `α4 = 1 - α0 - α1 - α2 - α3`. Boundary points (any `α_i = 0`) are
/// rejected.
pub fn b_value(c: f64, alpha: [f64; 4]) -> Result<BoundPoint> {
    let alpha4 = check_interior(c, &alpha)?;
    let [a0, a1, a2, a3] = alpha;
    let entropy = -(xlogx(a0) + xlogx(a1) + xlogx(a2) + xlogx(a3) + xlogx(alpha4));
    let u = a3 / a2 + c * a3;
    let log_b = entropy
        + c * (a0 * alpha4 - 0.5)
        + a1 * ln_expm1(c * a0)
        + a2 * ln_expm1(c * a1)
        + a3 * ln_expm1(c * a2)
        + alpha4 * ln_expm1(c * a3)
        + a2 * (-(-u).exp_m1()).ln();
    Ok(BoundPoint {
        c,
        alpha,
        alpha4,
        log_b,
    })
}

/// `b(c, α)` evaluated as the literal product of powers, without logarithms.
/// Used as an independent route for cross-checking [`b_value`].
pub fn b_value_product(c: f64, alpha: [f64; 4]) -> Result<f64> {
    let a4 = check_interior(c, &alpha)?;
    let [a0, a1, a2, a3] = alpha;
    let denom = a0.powf(a0) * a1.powf(a1) * a2.powf(a2) * a3.powf(a3) * a4.powf(a4);
    Ok((c * (a0 * a4 - 0.5)).exp() / denom
        * ((c * a0).exp() - 1.0).powf(a1)
        * ((c * a1).exp() - 1.0).powf(a2)
        * ((c * a2).exp() - 1.0).powf(a3)
        * ((c * a3).exp() - 1.0).powf(a4)
        * (1.0 - (-a3 / a2).exp() * (-c * a3).exp()).powf(a2))
}

/// `(1/b) ∂b/∂α_i` for `i = 0..3`, with `α4` eliminated.
///
/// With `u = α3/α2 + cα3` and `E_x = e^{cx} - 1`:
///
/// ```text
/// d0 = c(-α0 + α1 + α1/E_α0 + α4) - ln α0 + ln α4 - ln E_α3
/// d1 = c(-α0 + α2 + α2/E_α1) - ln α1 + ln α4 + ln E_α0 - ln E_α3
/// d2 = c(-α0 + α3 + α3/E_α2) - (α3/α2)/(e^u - 1)
///      + ln α4 - ln α2 + ln E_α1 - ln E_α3 - u + ln(e^u - 1)
/// d3 = c(-α0 + α4 e^{cα3}/E_α3) + (1 + cα2)/(e^u - 1)
///      + ln α4 - ln α3 + ln E_α2 - ln E_α3
/// ```
///
/// In `d2` the last two terms are `ln(1 - e^{-u})`, coming from
/// differentiating `α2 ln(1 - e^{-u})`.
pub fn b_log_gradient(c: f64, alpha: [f64; 4]) -> Result<[f64; 4]> {
    let a4 = check_interior(c, &alpha)?;
    let [a0, a1, a2, a3] = alpha;
    let e = |x: f64| (c * x).exp_m1();
    let (e0, e1, e2, e3) = (e(a0), e(a1), e(a2), e(a3));
    let (l0, l1, l2, l3, l4) = (a0.ln(), a1.ln(), a2.ln(), a3.ln(), a4.ln());
    let r = a3 / a2;
    let u = r + c * a3;
    let eu = u.exp_m1();

    let d0 = c * (-a0 + a1 + a1 / e0 + a4) - l0 + l4 - e3.ln();
    let d1 = c * (-a0 + a2 + a2 / e1) - l1 + l4 + e0.ln() - e3.ln();
    let d2 = c * (-a0 + a3 + a3 / e2) - r / eu + l4 - l2 + e1.ln() - e3.ln() - u + eu.ln();
    let d3 = c * (-a0 + a4 * (e3 + 1.0) / e3) + (1.0 + c * a2) / eu + l4 - l3 + e2.ln()
        - e3.ln();
    Ok([d0, d1, d2, d3])
}

/// Per-vertex rate `2^β e^{-cβ²/4} / (β^β (1-β)^{1-β})` bounding the expected
/// number of induced bipartite subgraphs on `βn` vertices. The endpoints use
/// the continuous extension `0^0 = 1`.
pub fn bipartite_bound(c: f64, beta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) || !(c >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= beta <= 1 and c >= 0, got beta = {beta}, c = {c}"
        )));
    }
    Ok(log_bipartite_rate(c, 1.0 - beta).exp())
}

/// Log of the bipartite rate parametrised by `t = 1 - β` so that values of
/// `β` within `1e-9` of 1 keep full relative precision.
fn log_bipartite_rate(c: f64, t: f64) -> f64 {
    let beta = 1.0 - t;
    beta * std::f64::consts::LN_2 - c * beta * beta / 4.0 - xlogx(beta) - xlogx(t)
}

/// Largest `β* ∈ (0.5, 1)` at which the bipartite rate equals 1; above it the
/// rate is below 1. Returns `None` when the rate never crosses 1 on
/// `(0.5, 1)`.
///
/// The log-rate is concave in `β` (second derivative `-c/2 - 1/β - 1/(1-β)`),
/// so its peak is located by bisection on the derivative and the crossing by
/// bisection on `[max(peak, 0.5), 1)`.
pub fn bipartite_threshold(c: f64) -> Result<Option<f64>> {
    Ok(threshold_gap(c)?.map(|t| 1.0 - t))
}

/// `1 - β*`, see [`bipartite_threshold`].
fn threshold_gap(c: f64) -> Result<Option<f64>> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
    }
    // derivative in β, decreasing from +inf to -inf on (0, 1)
    let slope = |beta: f64| std::f64::consts::LN_2 - c * beta / 2.0 - beta.ln() + (1.0 - beta).ln();
    let (mut lo, mut hi) = (1e-12, 1.0 - 1e-16);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let peak = 0.5 * (lo + hi);

    // work in t = 1 - β on (0, 1 - max(peak, 0.5)]
    let t_far = 1.0 - peak.max(0.5);
    if log_bipartite_rate(c, 0.0) >= 0.0 || log_bipartite_rate(c, t_far) <= 0.0 {
        return Ok(None);
    }
    // rate < 1 at t = 0, > 1 at t_far
    let (mut below, mut above) = (0.0f64, t_far);
    for _ in 0..400 {
        let mid = 0.5 * (below + above);
        if mid <= below || mid >= above {
            break;
        }
        if log_bipartite_rate(c, mid) > 0.0 {
            above = mid;
        } else {
            below = mid;
        }
    }
    Ok(Some(0.5 * (below + above)))
}

/// Smallest odd cycle length ruled out by the bipartite threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddCycleBound {
    pub c: f64,
    pub beta_star: f64,
    /// `1 / (1 - β*)`.
    pub inverse_gap: f64,
    /// Smallest odd `L = 2l + 1` with `(L - 1)/L > β*`.
    pub min_cycle_length: u64,
    pub ell: u64,
}

/// Smallest odd `L >= 3` with `(L - 1)/L > β`, i.e. the smallest odd integer
/// strictly above `1/(1 - β)`.
pub fn odd_cycle_length_bound(beta_star: f64) -> Result<u64> {
    if !(beta_star > 0.0 && beta_star < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold {beta_star} must lie in (0, 1)"
        )));
    }
    Ok(odd_above(1.0 / (1.0 - beta_star)))
}

fn odd_above(x: f64) -> u64 {
    let mut l = (x.floor() as u64 + 1).max(3);
    if l % 2 == 0 {
        l += 1;
    }
    l
}

/// For `c` with a bipartite threshold, whp `G(n, c/n)` has no homomorphism to
/// `C_L` for any odd `L >= min_cycle_length`.
pub fn ell_c_bound(c: f64) -> Result<Option<OddCycleBound>> {
    Ok(threshold_gap(c)?.map(|t| {
        let inverse_gap = 1.0 / t;
        let l = odd_above(inverse_gap);
        OddCycleBound {
            c,
            beta_star: 1.0 - t,
            inverse_gap,
            min_cycle_length: l,
            ell: (l - 1) / 2,
        }
    }))
}

/// Exponential rate `ln 2 - c s²/2` of `2^n (1-p)^{C(s,2)}` for independent
/// sets of size `s = s_frac · n`. Negative means whp no such set.
pub fn independent_set_rate(c: f64, s_frac: f64) -> Result<f64> {
    if !(s_frac > 0.0 && s_frac <= 1.0) || !(c >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < s_frac <= 1 and c >= 0, got s_frac = {s_frac}, c = {c}"
        )));
    }
    Ok(std::f64::consts::LN_2 - c * s_frac * s_frac / 2.0)
}
