//! Exact small-graph ground truth: backtracking homomorphism search,
//! circulant graphs `C_{p,q}` and the circular chromatic number.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default node budget for [`hom_search`].
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// The circular clique `C_{p,q}`: vertices `0..p`, `u ~ v` iff the circular
/// distance between them lies in `[q, p - q]`. `C_{p,1} = K_p` and
/// `C_{2ℓ+1,ℓ} = C_{2ℓ+1}`. Edgeless when `p < 2q`.
pub fn circulant(p: usize, q: usize) -> Result<Graph> {
    if q == 0 {
        return Err(Error::InvalidParameter("circulant needs q >= 1".into()));
    }
    let mut edges = Vec::new();
    for u in 0..p {
        for v in u + 1..p {
            let d = (v - u).min(p - (v - u));
            if q <= d && d <= p - q {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(p, edges)
}

/// A vertex map `V(G) -> V(H)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomMapping {
    pub mapping: Vec<usize>,
}

impl HomMapping {
    /// True iff every edge of `g` lands on an edge of `h`.
    pub fn is_hom(&self, g: &Graph, h: &Graph) -> bool {
        self.mapping.len() == g.n()
            && self.mapping.iter().all(|&x| x < h.n())
            && g.edges().all(|(u, v)| h.has_edge(self.mapping[u], self.mapping[v]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum HomSearchResult {
    Found(HomMapping),
    /// The search was exhaustive: no homomorphism exists.
    NoHom,
    /// Gave up after `nodes` assignments; nothing is known.
    BudgetExceeded { nodes: u64 },
}

impl HomSearchResult {
    /// `Some(exists)` when decided.
    pub fn decided(&self) -> Option<bool> {
        match self {
            HomSearchResult::Found(_) => Some(true),
            HomSearchResult::NoHom => Some(false),
            HomSearchResult::BudgetExceeded { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
    /// Pin the first vertex of every component of `g` to vertex 0 of `h`.
    /// Only sound when `h` is vertex-transitive (cycles, circulants).
    pub fix_first: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            fix_first: false,
        }
    }
}

/// Complete backtracking search for a homomorphism `g -> h` with forward
/// checking: after each assignment the candidate sets of unassigned
/// neighbours are intersected with the image's neighbourhood.
pub fn hom_search(g: &Graph, h: &Graph, budget: u64) -> HomSearchResult {
    hom_search_with(g, h, SearchOptions { budget, fix_first: false })
}

pub fn hom_search_with(g: &Graph, h: &Graph, opts: SearchOptions) -> HomSearchResult {
    if g.n() == 0 {
        return HomSearchResult::Found(HomMapping { mapping: Vec::new() });
    }
    if h.n() == 0 || (g.m() > 0 && h.m() == 0) || (h.is_bipartite() && !g.is_bipartite()) {
        return HomSearchResult::NoHom;
    }
    Search::new(g, h, opts).run()
}

struct Search<'a> {
    g: &'a Graph,
    words: usize,
    h_nbrs: Vec<Vec<u64>>,
    order: Vec<usize>,
    pos: Vec<usize>,
    domains: Vec<u64>,
    trail_vars: Vec<usize>,
    trail_words: Vec<u64>,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, h: &Graph, opts: SearchOptions) -> Self {
        let words = h.n().div_ceil(64);
        let bits = |it: &mut dyn Iterator<Item = usize>| {
            let mut b = vec![0u64; words];
            for x in it {
                b[x / 64] |= 1 << (x % 64);
            }
            b
        };
        let h_nbrs: Vec<Vec<u64>> = (0..h.n()).map(|a| bits(&mut h.neighbors(a))).collect();
        let all = bits(&mut (0..h.n()));
        let non_isolated = bits(&mut (0..h.n()).filter(|&a| h.degree(a) > 0));
        let pinned = bits(&mut std::iter::once(0));

        let (order, roots) = bfs_order(g);
        let mut pos = vec![0; g.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut domains = Vec::with_capacity(g.n() * words);
        for &v in &order {
            let d = if opts.fix_first && roots[v] && h.degree(0) > 0 {
                &pinned
            } else if g.degree(v) > 0 {
                &non_isolated
            } else {
                &all
            };
            domains.extend_from_slice(d);
        }
        Search {
            g,
            words,
            h_nbrs,
            order,
            pos,
            domains,
            trail_vars: Vec::new(),
            trail_words: Vec::new(),
            budget: opts.budget,
        }
    }

    fn domain(&self, i: usize) -> &[u64] {
        &self.domains[i * self.words..(i + 1) * self.words]
    }

    fn next_value(&self, i: usize, from: usize) -> Option<usize> {
        let d = self.domain(i);
        let mut w = from / 64;
        if w >= self.words {
            return None;
        }
        let mut bits = d[w] & (!0u64 << (from % 64));
        loop {
            if bits != 0 {
                return Some(w * 64 + bits.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words {
                return None;
            }
            bits = d[w];
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail_vars.len() > mark {
            let i = self.trail_vars.pop().unwrap();
            let start = self.trail_words.len() - self.words;
            let range = i * self.words..(i + 1) * self.words;
            self.domains[range].copy_from_slice(&self.trail_words[start..]);
            self.trail_words.truncate(start);
        }
    }

    /// Restricts the unassigned neighbours of position `i` to neighbours of
    /// `a`. False on a domain wipe-out.
    fn propagate(&mut self, i: usize, a: usize) -> bool {
        let v = self.order[i];
        let w = self.words;
        for u in self.g.neighbors(v) {
            let j = self.pos[u];
            if j <= i {
                continue;
            }
            let range = j * w..(j + 1) * w;
            let mut changed = false;
            let mut empty = true;
            for (k, x) in range.clone().enumerate() {
                let new = self.domains[x] & self.h_nbrs[a][k];
                changed |= new != self.domains[x];
                empty &= new == 0;
            }
            if changed {
                self.trail_vars.push(j);
                self.trail_words.extend_from_slice(&self.domains[range.clone()]);
                for (k, x) in range.enumerate() {
                    self.domains[x] &= self.h_nbrs[a][k];
                }
            }
            if empty {
                return false;
            }
        }
        true
    }

    fn run(mut self) -> HomSearchResult {
        let n = self.order.len();
        let mut value = vec![0usize; n];
        let mut cursor = vec![0usize; n + 1];
        let mut marks = vec![0usize; n];
        let mut nodes = 0u64;
        let mut i = 0;
        loop {
            if i == n {
                let mut mapping = vec![0; n];
                for (k, &v) in self.order.iter().enumerate() {
                    mapping[v] = value[k];
                }
                return HomSearchResult::Found(HomMapping { mapping });
            }
            let Some(a) = self.next_value(i, cursor[i]) else {
                if i == 0 {
                    return HomSearchResult::NoHom;
                }
                i -= 1;
                self.undo(marks[i]);
                cursor[i] = value[i] + 1;
                continue;
            };
            nodes += 1;
            if nodes > self.budget {
                return HomSearchResult::BudgetExceeded { nodes: self.budget };
            }
            value[i] = a;
            marks[i] = self.trail_vars.len();
            if self.propagate(i, a) {
                i += 1;
                cursor[i] = 0;
            } else {
                self.undo(marks[i]);
                cursor[i] = a + 1;
            }
        }
    }
}

/// Vertices in BFS order, each component started from its max-degree vertex
/// (smallest index on ties). Also flags the component roots.
fn bfs_order(g: &Graph) -> (Vec<usize>, Vec<bool>) {
    let n = g.n();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut seen = vec![false; n];
    let mut root = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &r in &by_degree {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        root[r] = true;
        let start = order.len();
        order.push(r);
        let mut head = start;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    (order, root)
}

/// `χ_c = p/q` with `gcd(p, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularChromatic {
    pub p: usize,
    pub q: usize,
}

impl CircularChromatic {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ChiC {
    Exact(CircularChromatic),
    /// Some probe below the smallest success ran out of budget.
    Indeterminate {
        undecided: Vec<CircularChromatic>,
        upper: Option<CircularChromatic>,
    },
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Coprime `(p, q)` with `2 <= 2q <= p <= p_max`, in increasing `p/q`.
pub fn farey_fractions(p_max: usize) -> Vec<CircularChromatic> {
    let mut out = Vec::new();
    for p in 2..=p_max {
        for q in 1..=p / 2 {
            if gcd(p, q) == 1 {
                out.push(CircularChromatic { p, q });
            }
        }
    }
    out.sort_by(|a, b| match (a.p * b.q).cmp(&(b.p * a.q)) {
        Ordering::Equal => a.p.cmp(&b.p),
        o => o,
    });
    out
}

/// Smallest `p/q` with `p <= p_max` such that `g -> C_{p,q}`. Exact when
/// `p_max >= |V(g)|` (the default) since `χ_c` is attained by such a fraction.
/// Each probe gets its own `budget`.
pub fn circular_chromatic(g: &Graph, p_max: Option<usize>, budget: u64) -> Result<ChiC> {
    if g.m() == 0 {
        return Err(Error::InvalidInput(
            "circular chromatic number needs at least one edge".into(),
        ));
    }
    let p_max = p_max.unwrap_or(g.n());
    let mut undecided = Vec::new();
    for f in farey_fractions(p_max) {
        let h = circulant(f.p, f.q)?;
        let opts = SearchOptions { budget, fix_first: true };
        match hom_search_with(g, &h, opts).decided() {
            Some(true) if undecided.is_empty() => return Ok(ChiC::Exact(f)),
            Some(true) => {
                return Ok(ChiC::Indeterminate {
                    undecided,
                    upper: Some(f),
                })
            }
            Some(false) => {}
            None => undecided.push(f),
        }
    }
    if undecided.is_empty() {
        Err(Error::Precondition(format!(
            "no circulant with p <= {p_max} admits a homomorphism; raise p_max"
        )))
    } else {
        Ok(ChiC::Indeterminate { undecided, upper: None })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    /// `exists[l - 1]`: does `g -> C_{2l+1}`? `None` when the budget ran out.
    pub exists: Vec<Option<bool>>,
    /// No decided "yes" follows a decided "no".
    pub downward_closed: bool,
}

/// Homomorphism existence to `C_3, C_5, .., C_{2 ell_max + 1}`.
pub fn monotonicity_check(g: &Graph, ell_max: usize, budget: u64) -> MonotonicityReport {
    let exists: Vec<Option<bool>> = (1..=ell_max)
        .map(|l| {
            let h = crate::graph::families::cycle(2 * l + 1);
            hom_search_with(g, &h, SearchOptions { budget, fix_first: true }).decided()
        })
        .collect();
    let mut seen_no = false;
    let mut downward_closed = true;
    for e in exists.iter().flatten() {
        if *e && seen_no {
            downward_closed = false;
        }
        seen_no |= !*e;
    }
    MonotonicityReport {
        exists,
        downward_closed,
    }
}
