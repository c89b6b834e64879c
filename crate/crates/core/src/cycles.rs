//! Cycle structure: odd girth, girth, enumeration of short cycles and the two
//! structural audits used to sanity-check the decomposition hypotheses.
//!
//! All searches run on the 2-core, which contains every cycle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{canonical_cycle, two_core, BfsScratch, Graph};

/// Largest accepted bound for [`short_cycles`].
pub const MAX_SHORT_CYCLE_LEN: usize = 64;

/// A simple cycle stored in canonical form (smallest vertex first, then its
/// smaller neighbour on the cycle).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    pub fn new(vertices: &[usize]) -> Cycle {
        Cycle(canonical_cycle(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Consecutive pairs including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }

    /// Checks that this is a cycle of `g`: at least 3 distinct vertices and
    /// every consecutive pair adjacent.
    pub fn check_in(&self, g: &Graph) -> Result<()> {
        check_cycle(g, &self.0)
    }
}

fn check_cycle(g: &Graph, vertices: &[usize]) -> Result<()> {
    if vertices.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "a cycle needs at least 3 vertices, got {}",
            vertices.len()
        )));
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("cycle repeats a vertex".into()));
    }
    if let Some(&v) = sorted.last().filter(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let k = vertices.len();
    for i in 0..k {
        let (u, v) = (vertices[i], vertices[(i + 1) % k]);
        if !g.has_edge(u, v) {
            return Err(Error::InvalidInput(format!("({u}, {v}) is not an edge")));
        }
    }
    Ok(())
}

/// Shortest odd cycle of `g`, or `None` iff `g` is bipartite.
///
/// Runs a BFS from every vertex of the 2-core and looks for an edge joining
/// two vertices on the same level `d`, which closes an odd walk of length
/// `2d + 1`. The minimum over all sources is the odd girth; at a minimising
/// source the two tree paths meet only at the source, so the witness is a
/// simple cycle. The witness is checked against `g` before returning.
pub fn odd_girth(g: &Graph) -> Option<Cycle> {
    let core = two_core(g);
    if core.is_bipartite() {
        return None;
    }
    let mut bfs = BfsScratch::new(core.n());
    let mut best: Option<(usize, usize, usize, usize)> = None; // (len, source, u, w)
    for s in (0..core.n()).filter(|&s| core.degree(s) > 0) {
        let limit = best.map_or(usize::MAX, |b| b.0);
        if let Some((len, u, w)) = shortest_odd_from(&core, &mut bfs, s, limit) {
            best = Some((len, s, u, w));
            if len == 3 {
                break;
            }
        }
    }
    let (len, s, u, w) = best.expect("non-bipartite core has an odd cycle");
    let cycle = odd_cycle_through(&core, &mut bfs, s, u, w);
    debug_assert_eq!(cycle.len(), len);
    cycle.check_in(g).expect("odd girth witness is a cycle of g");
    Some(cycle)
}

/// Length of the shortest odd closed walk through `s` found by BFS when it is
/// below `limit`, with the same-level edge `(u, w)` closing it.
fn shortest_odd_from(
    g: &Graph,
    bfs: &mut BfsScratch,
    s: usize,
    limit: usize,
) -> Option<(usize, usize, usize)> {
    let mut found = None;
    bfs.search(g, s, |e| {
        if 2 * e.du + 1 >= limit {
            return Step::Stop;
        }
        if e.dw == Some(e.du) {
            found = Some((2 * e.du + 1, e.u, e.w));
            return Step::Stop;
        }
        Step::Continue
    });
    found
}

fn odd_cycle_through(g: &Graph, bfs: &mut BfsScratch, s: usize, u: usize, w: usize) -> Cycle {
    bfs.search(g, s, |_| Step::Continue);
    let pu = bfs.path_to_source(u);
    let pw = bfs.path_to_source(w);
    debug_assert_eq!(pu.len(), pw.len());
    // equal depth: walk up in lockstep to the lowest common ancestor
    let meet = (0..pu.len()).find(|&i| pu[i] == pw[i]).unwrap();
    let mut vertices: Vec<usize> = pu[..=meet].to_vec();
    vertices.extend(pw[..meet].iter().rev());
    Cycle::new(&vertices)
}

/// Control flow for [`BfsScratch::search`] callbacks.
pub(crate) enum Step {
    Continue,
    Stop,
}

/// An edge `u -> w` scanned by [`BfsScratch::search`].
pub(crate) struct Scan {
    pub u: usize,
    pub du: usize,
    pub w: usize,
    /// `None` if `w` is undiscovered; it is discovered right after the call.
    pub dw: Option<usize>,
    /// `w` is the BFS parent of `u`.
    pub to_parent: bool,
}

impl BfsScratch {
    /// Single-source BFS calling `edge` for every edge scanned from a
    /// dequeued vertex.
    pub(crate) fn search(&mut self, g: &Graph, s: usize, mut edge: impl FnMut(Scan) -> Step) {
        self.reset_with(s);
        while let Some(u) = self.pop() {
            let du = self.dist(u).unwrap();
            let parent = self.parent(u);
            for w in g.neighbors(u) {
                let dw = self.dist(w);
                let scan = Scan {
                    u,
                    du,
                    w,
                    dw,
                    to_parent: parent == w && u != s,
                };
                if let Step::Stop = edge(scan) {
                    return;
                }
                if dw.is_none() {
                    self.discover(w, u);
                }
            }
        }
    }
}

/// Length of a shortest cycle, or `None` for a forest.
pub fn girth(g: &Graph) -> Option<usize> {
    let core = two_core(g);
    if core.m() == 0 {
        return None;
    }
    let mut bfs = BfsScratch::new(core.n());
    let mut best = usize::MAX;
    for s in (0..core.n()).filter(|&s| core.degree(s) > 0) {
        let mut local = best;
        bfs.search(&core, s, |e| {
            if 2 * e.du + 1 >= local {
                return Step::Stop;
            }
            // any non-tree edge closes a cycle through the BFS tree
            if let (Some(dw), false) = (e.dw, e.to_parent) {
                local = local.min(e.du + dw + 1);
            }
            Step::Continue
        });
        best = best.min(local);
        if best == 3 {
            break;
        }
    }
    Some(best)
}

/// All simple cycles of length `< max_len`, each once, in canonical form and
/// sorted. `max_len` is capped at [`MAX_SHORT_CYCLE_LEN`].
///
/// For every start vertex `s` of the 2-core, a depth-first search over
/// vertices larger than `s` extends paths from `s`, pruned by the BFS distance
/// back to `s` inside that vertex range; a cycle is reported only in the
/// orientation whose second vertex is smaller than its last.
pub fn short_cycles(g: &Graph, max_len: usize) -> Result<Vec<Cycle>> {
    if max_len > MAX_SHORT_CYCLE_LEN {
        return Err(Error::InvalidParameter(format!(
            "cycle length bound {max_len} exceeds {MAX_SHORT_CYCLE_LEN}"
        )));
    }
    let mut out = Vec::new();
    if max_len <= 3 {
        return Ok(out);
    }
    let max_edges = max_len - 1;
    let core = two_core(g);
    let n = core.n();
    let mut dist = vec![usize::MAX; n];
    let mut touched = Vec::new();
    let mut on_path = vec![false; n];
    for s in (0..n).filter(|&s| core.degree(s) >= 2) {
        // distances back to s using only vertices >= s
        for &v in &touched {
            dist[v] = usize::MAX;
        }
        touched.clear();
        dist[s] = 0;
        touched.push(s);
        let mut head = 0;
        while head < touched.len() {
            let u = touched[head];
            head += 1;
            if dist[u] >= max_edges {
                continue;
            }
            for w in core.neighbors(u).filter(|&w| w > s) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    touched.push(w);
                }
            }
        }
        let mut path = vec![s];
        on_path[s] = true;
        extend_paths(&core, s, max_edges, &dist, &mut path, &mut on_path, &mut out);
        on_path[s] = false;
    }
    out.sort();
    Ok(out)
}

fn extend_paths(
    g: &Graph,
    s: usize,
    max_edges: usize,
    dist: &[usize],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Cycle>,
) {
    let last = *path.last().unwrap();
    let edges_so_far = path.len() - 1;
    for w in g.neighbors(last) {
        if w == s {
            if path.len() >= 3 && path[1] < last {
                out.push(Cycle(path.clone()));
            }
            continue;
        }
        if w < s || on_path[w] || dist[w] == usize::MAX {
            continue;
        }
        if edges_so_far + 1 + dist[w] > max_edges {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        extend_paths(g, s, max_edges, dist, path, on_path, out);
        on_path[w] = false;
        path.pop();
    }
}

/// Two short cycles closer than the audited distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProximityViolation {
    pub cycle_a: Cycle,
    pub cycle_b: Cycle,
    /// Minimum graph distance between a vertex of `cycle_a` and one of
    /// `cycle_b` (0 when they intersect).
    pub dist: usize,
}

/// All pairs of distinct cycles of length `< max_len` at distance
/// `< min_dist`. An empty result certifies, for this graph, that short cycles
/// are pairwise far apart.
pub fn audit_short_cycle_proximity(
    g: &Graph,
    max_len: usize,
    min_dist: usize,
) -> Result<Vec<ProximityViolation>> {
    let cycles = short_cycles(g, max_len)?;
    let mut out = Vec::new();
    if min_dist == 0 || cycles.len() < 2 {
        return Ok(out);
    }
    let mut bfs = BfsScratch::new(g.n());
    for (i, a) in cycles.iter().enumerate() {
        bfs.run(g, a.vertices(), min_dist - 1, |_, _| {});
        for b in &cycles[i + 1..] {
            if let Some(d) = b.vertices().iter().filter_map(|&v| bfs.dist(v)).min() {
                out.push(ProximityViolation {
                    cycle_a: a.clone(),
                    cycle_b: b.clone(),
                    dist: d,
                });
            }
        }
    }
    Ok(out)
}

/// A path along a cycle whose interior vertices all have degree 2, oriented
/// from its smaller endpoint. When the cycle has at most one vertex of degree
/// `>= 3`, the arc is the whole cycle and starts and ends at the same vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub vertices: Vec<usize>,
}

impl Arc {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 2
    }

    /// Edge number `floor(len/2)` counted from the start, as `(min, max)`.
    pub fn center_edge(&self) -> (usize, usize) {
        let i = self.len() / 2;
        let (a, b) = (self.vertices[i], self.vertices[i + 1]);
        (a.min(b), a.max(b))
    }
}

/// Degree structure of a cycle inside a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    /// Cycle vertices of degree `>= 3`.
    pub branch_count: usize,
    pub longest_arc: Arc,
}

/// Counts the vertices of `cycle` with degree `>= 3` in `core` and finds the
/// longest arc of the cycle with all interior vertices of degree 2.
pub fn cycle_degree_profile(core: &Graph, cycle: &[usize]) -> Result<DegreeProfile> {
    check_cycle(core, cycle)?;
    Ok(profile_with_degrees(cycle, |v| core.degree(v)))
}

/// [`cycle_degree_profile`] with degrees supplied externally (the cycle may
/// live in a subgraph of the graph the degrees refer to). Ties between arcs
/// of equal length go to the first one met walking the canonical cycle.
pub(crate) fn profile_with_degrees(cycle: &[usize], degree: impl Fn(usize) -> usize) -> DegreeProfile {
    let c = canonical_cycle(cycle);
    let k = c.len();
    let branch: Vec<usize> = (0..k).filter(|&i| degree(c[i]) >= 3).collect();
    let branch_count = branch.len();

    let longest_arc = if branch_count <= 1 {
        let start = branch.first().copied().unwrap_or(0);
        let prev = c[(start + k - 1) % k];
        let next = c[(start + 1) % k];
        let vertices = if next <= prev {
            (0..=k).map(|i| c[(start + i) % k]).collect()
        } else {
            (0..=k).map(|i| c[(start + k - i) % k]).collect()
        };
        Arc { vertices }
    } else {
        let mut best = (0usize, 0usize); // (length, index into branch)
        for (j, &from) in branch.iter().enumerate() {
            let to = branch[(j + 1) % branch_count];
            let len = (to + k - from) % k;
            if len > best.0 {
                best = (len, j);
            }
        }
        let from = branch[best.1];
        let mut vertices: Vec<usize> = (0..=best.0).map(|i| c[(from + i) % k]).collect();
        if vertices[0] > vertices[best.0] {
            vertices.reverse();
        }
        Arc { vertices }
    };
    DegreeProfile {
        branch_count,
        longest_arc,
    }
}
