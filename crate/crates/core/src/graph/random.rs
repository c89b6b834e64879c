use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Samples `G(n, p)` with `p = c / n`.
///
/// Pairs `u < v` are visited in row-major order
/// `(0,1), (0,2), .., (0,n-1), (1,2), ..`, and each is included independently
/// with probability `p`. Instead of one coin per pair, the gap to the next
/// included pair is drawn from the geometric distribution,
/// `skip = floor(ln(1 - r) / ln(1 - p))` with `r` uniform on `[0, 1)`, which
/// has the same law and costs `O(n + m)`.
///
/// The random stream is ChaCha8 seeded with `ChaCha8Rng::seed_from_u64(seed)`,
/// and `r` is `rng.random::<f64>()` (53 random mantissa bits). Both are stable
/// across platforms, so a fixed `(n, c, seed)` yields the same edge list
/// everywhere `ln` is correctly rounded.
pub fn generate_gnp(n: usize, c: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("density c = {c} must be >= 0")));
    }
    let p = c / n as f64;
    if p > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "edge probability c/n = {p} exceeds 1"
        )));
    }
    if n < 2 || p == 0.0 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Ok(super::families::complete(n));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_q = (-p).ln_1p();
    let expected = (n as f64 - 1.0) * c / 2.0;
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity((expected * 1.1) as usize + 16);

    let (mut u, mut v) = (0usize, 1usize);
    'outer: loop {
        let r: f64 = rng.random();
        let skip = ((-r).ln_1p() / log_q).floor();
        // a skip this large is past the end of any graph we can store
        if skip >= (n as f64) * (n as f64) {
            break;
        }
        v += skip as usize;
        while v >= n {
            let overflow = v - n;
            u += 1;
            if u + 1 >= n {
                break 'outer;
            }
            v = u + 1 + overflow;
        }
        edges.push((u as u32, v as u32));
        v += 1;
        if v >= n {
            u += 1;
            if u + 1 >= n {
                break;
            }
            v = u + 1;
        }
    }
    Ok(Graph::build(n, &edges))
}
