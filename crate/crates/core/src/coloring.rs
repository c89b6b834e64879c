//! Colouring with an odd cycle `C_{2ℓ+1}`: 2-colour the forest `F`, then
//! repair each `M`-edge whose endpoints got the same colour by shifting
//! colours in a ball of radius `2ℓ - 2` around one endpoint.
//!
//! For a representative `x` of class `j = c_F(x)` and a vertex `v` at
//! `F`-distance `d < 2ℓ - 1` from it the new colour is
//!
//! ```text
//! c(v) = c_F(x) - (-1)^j (d + 1)   (mod 2ℓ + 1)
//! ```
//!
//! and every other vertex keeps `c_F(v)`. Along a path leaving `x` the colour
//! walks monotonically around the cycle and lands back on `{0, 1}` exactly at
//! the ball boundary, so `F` stays properly coloured.

use serde::{Deserialize, Serialize};

use crate::cycles::{odd_girth, Cycle};
use crate::decomposition::{decompose, Decomposition, Edge, FailureStage, StructureFailure};
use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Graph};

/// A map `V -> {0, .., 2ℓ}`, i.e. a candidate homomorphism to `C_{2ℓ+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleColoring {
    pub ell: usize,
    pub colors: Vec<usize>,
}

impl CycleColoring {
    pub fn modulus(&self) -> usize {
        2 * self.ell + 1
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        let p = self.modulus();
        let d = (a + p - b % p) % p;
        d == 1 || d == p - 1
    }
}

/// Edges of `g` not mapped to edges of `C_{2ℓ+1}`. An edge touching a vertex
/// with a missing or out-of-range colour counts as violating. Empty means the
/// colouring is a homomorphism.
pub fn verify_coloring(g: &Graph, col: &CycleColoring) -> Vec<Edge> {
    let p = col.modulus();
    let color = |v: usize| col.colors.get(v).copied().filter(|&c| c < p);
    g.edges()
        .filter(|&(u, v)| match (color(u), color(v)) {
            (Some(a), Some(b)) => col.ell == 0 || !col.adjacent(a, b),
            _ => true,
        })
        .collect()
}

/// Proper 2-colouring of a forest; the smallest vertex of every component
/// gets colour 0.
pub fn two_color_forest(f: &Graph) -> Result<Vec<u8>> {
    if let Some(c) = f.cycle_witness() {
        return Err(Error::InvalidInput(format!("not a forest: cycle {c:?}")));
    }
    Ok(f.bipartition().expect("forests are bipartite"))
}

/// An `M`-edge whose endpoints share their forest colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadEdge {
    pub edge: Edge,
    /// The smaller endpoint.
    pub rep: usize,
    /// `c_F(rep)`.
    pub class: u8,
}

/// Bad edges of `m` under `c_f`, with pairwise distinct representatives.
pub fn find_bad_edges(c_f: &[u8], m: &[Edge]) -> Result<Vec<BadEdge>> {
    let mut bad = Vec::new();
    for &(u, v) in m {
        for x in [u, v] {
            if x >= c_f.len() {
                return Err(Error::VertexOutOfRange { vertex: x, n: c_f.len() });
            }
        }
        if c_f[u] == c_f[v] {
            let rep = u.min(v);
            bad.push(BadEdge {
                edge: (rep, u.max(v)),
                rep,
                class: c_f[rep],
            });
        }
    }
    let mut reps: Vec<usize> = bad.iter().map(|b| b.rep).collect();
    reps.sort_unstable();
    if let Some(w) = reps.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput(format!(
            "vertex {} represents two bad edges",
            w[0]
        )));
    }
    Ok(bad)
}

/// Applies the colour shift around every representative. Fails if some vertex
/// lies within distance `2ℓ - 2` of two representatives.
pub fn shift_coloring(f: &Graph, c_f: &[u8], bad: &[BadEdge], ell: usize) -> Result<CycleColoring> {
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    if c_f.len() != f.n() {
        return Err(Error::InvalidInput(format!(
            "{} colours for {} vertices",
            c_f.len(),
            f.n()
        )));
    }
    let p = 2 * ell + 1;
    let radius = 2 * ell - 2;
    let mut colors: Vec<usize> = c_f.iter().map(|&c| c as usize).collect();
    let mut owner = vec![usize::MAX; f.n()];
    let mut bfs = BfsScratch::new(f.n());
    for b in bad {
        let x = b.rep;
        if x >= f.n() {
            return Err(Error::VertexOutOfRange { vertex: x, n: f.n() });
        }
        let j = c_f[x] as usize;
        let mut clash = None;
        bfs.run(f, &[x], radius, |v, d| {
            if owner[v] != usize::MAX {
                clash.get_or_insert((v, owner[v]));
                return;
            }
            owner[v] = x;
            let step = (d + 1) % p;
            colors[v] = if j == 0 { (p - step) % p } else { (j + step) % p };
        });
        if let Some((v, other)) = clash {
            return Err(Error::Precondition(format!(
                "vertex {v} is within distance {radius} of representatives {other} and {x}"
            )));
        }
    }
    Ok(CycleColoring { ell, colors })
}

/// Result of [`hom_find`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HomOutcome {
    Hom(CycleColoring),
    OddGirthCertificate { ell: usize, cycle: Cycle },
    StructureFailure(StructureFailure),
}

impl HomOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            HomOutcome::Hom(_) => "Hom",
            HomOutcome::OddGirthCertificate { .. } => "OddGirthCert",
            HomOutcome::StructureFailure(_) => "StructureFailure",
        }
    }

    /// Re-checks the payload against `g`: a homomorphism to `C_{2ℓ+1}`, or an
    /// odd cycle of `g` shorter than `2ℓ + 1`. A structure failure carries no
    /// claim and always passes.
    pub fn check(&self, g: &Graph, ell: usize) -> Result<()> {
        match self {
            HomOutcome::Hom(col) => {
                if col.ell != ell || col.colors.len() != g.n() {
                    return Err(Error::InvalidInput("colouring does not match the instance".into()));
                }
                match verify_coloring(g, col).first() {
                    None => Ok(()),
                    Some(e) => Err(Error::InvalidInput(format!("edge {e:?} is not properly coloured"))),
                }
            }
            HomOutcome::OddGirthCertificate { ell: e, cycle } => {
                cycle.check_in(g)?;
                if *e != ell || cycle.len() % 2 == 0 || cycle.len() >= 2 * ell + 1 {
                    return Err(Error::InvalidInput(format!(
                        "a cycle of length {} does not certify odd girth < {}",
                        cycle.len(),
                        2 * ell + 1
                    )));
                }
                Ok(())
            }
            HomOutcome::StructureFailure(_) => Ok(()),
        }
    }
}

/// Either a homomorphism `g -> C_{2ℓ+1}`, an odd cycle of length `< 2ℓ + 1`,
/// or an honest structure failure.
///
/// Runs [`decompose`] with `k = 4ℓ - 2` and the default long-cycle threshold,
/// colours, shifts and verifies. An `M`-edge `xy` with even `dist_F(x, y) <
/// 2ℓ - 1` cannot be repaired; the `F`-path plus `xy` is then returned as the
/// certificate.
pub fn hom_find(g: &Graph, ell: usize) -> Result<HomOutcome> {
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    let d = match decompose(g, 4 * ell - 2, None)? {
        Ok(d) => d,
        Err(f) => return Ok(HomOutcome::StructureFailure(f)),
    };
    Ok(color_decomposition(g, &d, ell))
}

fn failure(stage: FailureStage, message: String) -> HomOutcome {
    HomOutcome::StructureFailure(StructureFailure {
        stage,
        message,
        violations: Vec::new(),
    })
}

pub(crate) fn color_decomposition(g: &Graph, d: &Decomposition, ell: usize) -> HomOutcome {
    let c_f = match two_color_forest(&d.forest) {
        Ok(c) => c,
        Err(e) => return failure(FailureStage::Decomposition, e.to_string()),
    };
    let m = d.m_edges();
    let bad = match find_bad_edges(&c_f, &m) {
        Ok(b) => b,
        Err(e) => return failure(FailureStage::Representatives, e.to_string()),
    };
    let col = match shift_coloring(&d.forest, &c_f, &bad, ell) {
        Ok(c) => c,
        Err(e) => return failure(FailureStage::Shift, e.to_string()),
    };
    let violations = verify_coloring(g, &col);
    if violations.is_empty() {
        return HomOutcome::Hom(col);
    }
    if let Some(cycle) = short_odd_cycle_through(&d.forest, &violations, ell) {
        return HomOutcome::OddGirthCertificate { ell, cycle };
    }
    match odd_girth(g) {
        Some(c) if c.len() < 2 * ell + 1 => HomOutcome::OddGirthCertificate { ell, cycle: c },
        _ => failure(
            FailureStage::Verification,
            format!("{} edge(s) improperly coloured, e.g. {:?}", violations.len(), violations[0]),
        ),
    }
}

/// First violating edge `xy` closing an odd cycle of length `< 2ℓ + 1` with
/// the forest path between its endpoints.
fn short_odd_cycle_through(f: &Graph, edges: &[Edge], ell: usize) -> Option<Cycle> {
    let mut bfs = BfsScratch::new(f.n());
    for &(x, y) in edges {
        if f.has_edge(x, y) {
            continue;
        }
        bfs.run(f, &[x], 2 * ell - 2, |_, _| {});
        if let Some(d) = bfs.dist(y) {
            if d % 2 == 0 && d >= 2 {
                return Some(Cycle::new(&bfs.path_to_source(y)));
            }
        }
    }
    None
}
