use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bound on `|∂ log b / ∂α_i|` over the feasible region at `c = 4`.
pub const GRADIENT_BOUND: f64 = 30.0;

/// Feasible region for the class fractions.
///
/// Every class has at least `min_class` of the vertices and no two classes
/// `i, i+2 (mod 5)` together exceed `max_ind_set` (their union is an
/// independent set).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub min_class: f64,
    pub max_ind_set: f64,
}

impl Default for Region {
    fn default() -> Self {
        Region {
            min_class: 0.06,
            max_ind_set: 0.6,
        }
    }
}

impl Region {
    fn validate(&self) -> Result<()> {
        let ok = self.min_class > 0.0
            && 5.0 * self.min_class < 1.0
            && 2.0 * self.min_class < self.max_ind_set
            && self.max_ind_set <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("empty or degenerate region {self:?}")))
        }
    }

    /// Whether `(α0..α3, α4)` satisfies all class and pair constraints, up to
    /// an absolute slack of `1e-12` for the rounding of accumulated steps.
    pub fn contains(&self, alpha: &[f64; 4]) -> bool {
        const SLACK: f64 = 1e-12;
        let a4 = 1.0 - alpha.iter().sum::<f64>();
        let all = [alpha[0], alpha[1], alpha[2], alpha[3], a4];
        all.iter().all(|&a| a >= self.min_class - SLACK)
            && (0..5).all(|i| all[i] + all[(i + 2) % 5] <= self.max_ind_set + SLACK)
    }
}

/// Objective for [`grid_search_with`], split into the partial products that
/// only depend on the outer coordinates so they can be hoisted out of the
/// inner loops.
pub trait GridObjective: Sync {
    /// Depends on `α3` only.
    fn outer(&self, _a3: f64) -> f64 {
        0.0
    }
    /// Depends on `α3, α2`.
    fn middle(&self, _a3: f64, _a2: f64) -> f64 {
        0.0
    }
    /// Depends on `α3, α2, α1` and the value from [`GridObjective::middle`].
    fn inner(&self, _a3: f64, _a2: f64, _a1: f64, _middle: f64) -> f64 {
        0.0
    }
    /// Value at the grid point.
    fn value(&self, alpha: [f64; 4], outer: f64, inner: f64) -> f64;
}

/// Adapts a plain function of the point.
pub struct PointFn<F>(pub F);

impl<F: Fn([f64; 4]) -> f64 + Sync> GridObjective for PointFn<F> {
    fn value(&self, alpha: [f64; 4], _: f64, _: f64) -> f64 {
        (self.0)(alpha)
    }
}

/// `b(c, ·)` as a product of powers with the hoisting used by the reference
/// sweep: `B = e^{cα3} - 1` per `α3`, `A23` per `(α3, α2)`, `A` per `α1`.
pub struct HoistedObjective {
    pub c: f64,
}

impl GridObjective for HoistedObjective {
    fn outer(&self, a3: f64) -> f64 {
        (self.c * a3).exp() - 1.0
    }

    fn middle(&self, a3: f64, a2: f64) -> f64 {
        let c = self.c;
        1.0 / (a2.powf(a2) * a3.powf(a3))
            * (-c / 2.0).exp()
            * ((c * a2).exp() - 1.0).powf(a3)
            * (1.0 - (-a3 / a2).exp() * (-c * a3).exp()).powf(a2)
    }

    fn inner(&self, _a3: f64, a2: f64, a1: f64, a23: f64) -> f64 {
        a23 / a1.powf(a1) * ((self.c * a1).exp() - 1.0).powf(a2)
    }

    fn value(&self, alpha: [f64; 4], b: f64, a: f64) -> f64 {
        let [a0, a1, a2, a3] = alpha;
        let a4 = 1.0 - a0 - a1 - a2 - a3;
        let e0 = (self.c * a0).exp();
        1.0 / a0.powf(a0) * a * (b * e0 / a4).powf(a4) * (e0 - 1.0).powf(a1)
    }
}

/// Outcome of a fixed-step sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub c: f64,
    pub delta: f64,
    pub region: Region,
    pub max_value: f64,
    /// `(α0, α1, α2, α3)` of the best point.
    pub argmax: [f64; 4],
    pub points_evaluated: u64,
    /// Per-coordinate bound on `|∂ log b/∂α_i|`.
    pub lipschitz_l: f64,
    /// Assumed cap on the supremum, used by the linearised certificate.
    pub cap_b: f64,
    /// `max_value · exp(L · 4 · δ/2)`.
    pub certified_sup_bound: f64,
}

#[derive(Debug, Clone, Copy)]
struct Best {
    value: f64,
    argmax: [f64; 4],
    points: u64,
}

/// Sweeps `b(c, ·)` over the `δ`-grid of `region` and records the maximum.
pub fn grid_search(c: f64, delta: f64, region: Region) -> Result<GridReport> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
    }
    let mut report = grid_search_with(&HoistedObjective { c }, delta, region)?;
    report.c = c;
    Ok(report)
}

/// Generic sweep.
///
/// Coordinates are visited `α3` outermost to `α0` innermost, each starting
/// from its lower bound and advanced by repeated addition of `δ`:
///
/// ```text
/// α3 from m       while α3 + 4m < 1
/// α2 from m       while α3 + α2 + 3m < 1
/// α1 from m       while α3 + α1 < s and α3 + α2 + α1 + 2m < 1
/// α0 from max(m, (1-s) - α2 - α3, (1-s) - α1 - α3)
///                 while α2 + α0 < s and α3 + α0 < s and α3 + α2 + α1 + α0 + m < 1
/// ```
///
/// with `m = min_class` and `s = max_ind_set`; the `(1-s)` lower bound on `α0`
/// encodes `α4 + α1 <= s` and `α4 + α2 <= s`. The `α3` slices are evaluated in
/// parallel and merged in slice order, keeping the first point attaining the
/// maximum in traversal order, so the result does not depend on the thread
/// count.
pub fn grid_search_with<O: GridObjective>(
    objective: &O,
    delta: f64,
    region: Region,
) -> Result<GridReport> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be positive")));
    }
    region.validate()?;
    let m = region.min_class;

    let mut a3_values = Vec::new();
    let mut a3 = m;
    while a3 + 4.0 * m < 1.0 {
        a3_values.push(a3);
        a3 += delta;
    }

    let slices: Vec<Best> = a3_values
        .par_iter()
        .map(|&a3| sweep_slice(objective, a3, delta, region))
        .collect();
    let best = slices.into_iter().fold(
        Best {
            value: f64::NEG_INFINITY,
            argmax: [0.0; 4],
            points: 0,
        },
        |acc, s| Best {
            points: acc.points + s.points,
            ..if s.value > acc.value { s } else { acc }
        },
    );

    let lipschitz_l = GRADIENT_BOUND;
    Ok(GridReport {
        c: f64::NAN,
        delta,
        region,
        max_value: best.value,
        argmax: best.argmax,
        points_evaluated: best.points,
        lipschitz_l,
        cap_b: 1.0,
        certified_sup_bound: best.value * (lipschitz_l * 4.0 * delta / 2.0).exp(),
    })
}

fn sweep_slice<O: GridObjective>(obj: &O, a3: f64, delta: f64, region: Region) -> Best {
    let m = region.min_class;
    let s = region.max_ind_set;
    let lb = 1.0 - s;
    let mut best = Best {
        value: f64::NEG_INFINITY,
        argmax: [0.0; 4],
        points: 0,
    };
    let outer = obj.outer(a3);
    let mut a2 = m;
    while a3 + a2 + 3.0 * m < 1.0 {
        let middle = obj.middle(a3, a2);
        let mut a1 = m;
        while a3 + a1 < s && a3 + a2 + a1 + 2.0 * m < 1.0 {
            let inner = obj.inner(a3, a2, a1, middle);
            let mut a0 = m.max(lb - a2 - a3).max(lb - a1 - a3);
            while a2 + a0 < s && a3 + a0 < s && a3 + a2 + a1 + a0 + m < 1.0 {
                let v = obj.value([a0, a1, a2, a3], outer, inner);
                best.points += 1;
                if v > best.value {
                    best.value = v;
                    best.argmax = [a0, a1, a2, a3];
                }
                a0 += delta;
            }
            a1 += delta;
        }
        a2 += delta;
    }
    best
}

/// Result of turning a grid maximum into a bound on the supremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedBound {
    pub rho: f64,
    /// `ε = 2 · L · B · δ`.
    pub epsilon: f64,
    /// `max_value < ρ - ε`.
    pub holds: bool,
    /// `ρ <= ε`: the linearised certificate cannot prove anything.
    pub vacuous: bool,
    /// Largest step for which the observed maximum would still certify `ρ`.
    pub required_delta: f64,
    /// `max_value · exp(2 L δ)`.
    pub multiplicative_bound: f64,
    pub multiplicative_holds: bool,
}

/// Certifies `sup b < ρ` from a grid report.
///
/// Every point of the region lies within `δ` of a grid point in each of the
/// four coordinates. If the supremum were some `B' >= ρ` (with `B' <= cap_B`),
/// the slope bound `|∂b/∂α_i| <= L · cap_B` would force a grid value of at
/// least `B' - ε`, `ε = 2 L cap_B δ`, contradicting `max_value < ρ - ε`.
/// The multiplicative variant integrates the log-slope instead and needs no
/// cap: `sup b <= max_value · exp(L · 4 · δ/2)`.
pub fn certify_bound(report: &GridReport, rho: f64) -> CertifiedBound {
    let l = report.lipschitz_l;
    let cap = report.cap_b;
    let epsilon = 2.0 * l * cap * report.delta;
    let vacuous = rho <= epsilon;
    let multiplicative_bound = report.max_value * (l * 4.0 * report.delta / 2.0).exp();
    CertifiedBound {
        rho,
        epsilon,
        holds: !vacuous && report.max_value < rho - epsilon,
        vacuous,
        required_delta: ((rho - report.max_value) / (2.0 * l * cap)).max(0.0),
        multiplicative_bound,
        multiplicative_holds: multiplicative_bound < rho,
    }
}
