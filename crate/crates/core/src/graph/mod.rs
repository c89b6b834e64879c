//! Undirected simple graphs on vertices `0..n`.
//!
//! [`Graph`] is an immutable compressed adjacency structure with sorted
//! neighbour lists. Subgraph operations keep the vertex set (and therefore
//! vertex identities) unchanged and only drop edges, so a 2-core or a forest
//! extracted from `G` can be indexed with the same vertex ids as `G`.

pub mod families;
mod io;
mod random;
mod two_core;

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use random::generate_gnp;
pub use two_core::{predict_two_core, two_core, TwoCorePrediction};

/// Undirected simple graph in CSR form. Serialises as `{"n": .., "edges": [[u, v], ..]}`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n(),
            edges: g.edges().collect(),
        }
    }
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Graph> {
        Graph::from_edges(r.n, r.edges)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("Graph");
        s.field("n", &self.n()).field("m", &self.m());
        if self.m() <= 32 {
            s.field("edges", &self.edges().collect::<Vec<_>>());
        }
        s.finish()
    }
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a graph from an edge list. Endpoint order within a pair is
    /// irrelevant; self-loops, repeated pairs and out-of-range endpoints are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!(
                "{n} vertices exceeds the supported maximum"
            )));
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push((u.min(v) as u32, u.max(v) as u32));
        }
        let g = Self::build(n, &list);
        for v in 0..n {
            let nb = g.adj(v);
            if let Some(w) = nb.windows(2).find(|w| w[0] == w[1]) {
                let u = w[0] as usize;
                return Err(Error::DuplicateEdge(v.min(u), v.max(u)));
            }
        }
        Ok(g)
    }

    /// CSR construction from already validated pairs `u < v`.
    pub(crate) fn build(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut acc = 0;
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; acc];
        for &(u, v) in edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub(crate) fn adj(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.adj(v).iter().map(|&w| w as usize)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj(u).binary_search(&(v as u32)).is_ok()
    }

    /// All edges as pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.adj(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Number of vertices with at least one incident edge.
    pub fn non_isolated_count(&self) -> usize {
        (0..self.n()).filter(|&v| self.degree(v) > 0).count()
    }

    /// Subgraph on the same vertex set keeping the edges accepted by `keep`.
    /// `keep` is called once per edge with `u < v`.
    pub fn edge_subgraph(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let kept: Vec<(u32, u32)> = self
            .edges()
            .filter(|&(u, v)| keep(u, v))
            .map(|(u, v)| (u as u32, v as u32))
            .collect();
        Graph::build(self.n(), &kept)
    }

    /// Same graph with the listed edges removed. Missing edges are an error.
    pub fn without_edges(&self, removed: &[(usize, usize)]) -> Result<Graph> {
        let mut drop: Vec<(usize, usize)> =
            removed.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        drop.sort_unstable();
        drop.dedup();
        for &(u, v) in &drop {
            if !self.has_edge(u, v) {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) not in graph")));
            }
        }
        Ok(self.edge_subgraph(|u, v| drop.binary_search(&(u, v)).is_err()))
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidInput("relabelling is not a permutation".into()));
        }
        Graph::from_edges(n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Unweighted shortest-path distances from `source`; `None` marks
    /// unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<Option<usize>>> {
        if source >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: source,
                n: self.n(),
            });
        }
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Connected-component label per vertex (labels are assigned in order of
    /// the smallest vertex of each component) and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for w in self.neighbors(u) {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Proper 2-colouring if the graph is bipartite. In every component the
    /// smallest vertex receives colour 0.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let n = self.n();
        let mut color = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// A cycle of the graph as a vertex sequence in canonical form, or `None`
    /// when the graph is a forest.
    ///
    /// Edges are inserted in lexicographic order into a union-find; the first
    /// edge closing a cycle is reported together with the forest path between
    /// its endpoints.
    pub fn cycle_witness(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut uf = UnionFind::new(n);
        let mut forest: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, v) in self.edges() {
            if !uf.union(u, v) {
                let path = forest_path(&forest, u, v)?;
                return Some(canonical_cycle(&path));
            }
            forest[u].push(v);
            forest[v].push(u);
        }
        None
    }

    pub fn is_forest(&self) -> bool {
        // |E| <= |V| - components is necessary and sufficient
        let (_, comps) = self.components();
        self.m() + comps == self.n()
    }
}

/// Path between `from` and `to` in an adjacency-list forest.
fn forest_path(forest: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; forest.len()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &w in &forest[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    if parent[to] == usize::MAX {
        return None;
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

/// Canonical representative of a cycle under rotation and reflection: the
/// smallest vertex first, followed by its smaller cycle neighbour.
pub fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let len = cycle.len();
    if len == 0 {
        return Vec::new();
    }
    let (start, _) = cycle.iter().enumerate().min_by_key(|&(_, &v)| v).unwrap();
    let next = cycle[(start + 1) % len];
    let prev = cycle[(start + len - 1) % len];
    if next <= prev {
        (0..len).map(|i| cycle[(start + i) % len]).collect()
    } else {
        (0..len).map(|i| cycle[(start + len - i) % len]).collect()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` when `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Reusable breadth-first search workspace. Visited marks are epoch-stamped
/// so repeated searches on a large vertex set cost only what they touch.
pub(crate) struct BfsScratch {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    parent: Vec<u32>,
    epoch: u32,
    queue: VecDeque<u32>,
}

impl BfsScratch {
    pub(crate) fn new(n: usize) -> Self {
        BfsScratch {
            stamp: vec![0; n],
            dist: vec![0; n],
            parent: vec![0; n],
            epoch: 0,
            queue: VecDeque::new(),
        }
    }

    fn next_epoch(&mut self) {
        if self.epoch == u32::MAX {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.queue.clear();
    }

    fn seed(&mut self, s: usize) {
        if self.stamp[s] != self.epoch {
            self.stamp[s] = self.epoch;
            self.dist[s] = 0;
            self.parent[s] = s as u32;
            self.queue.push_back(s as u32);
        }
    }

    /// Starts a new search from `s`.
    pub(crate) fn reset_with(&mut self, s: usize) {
        self.next_epoch();
        self.seed(s);
    }

    pub(crate) fn pop(&mut self) -> Option<usize> {
        self.queue.pop_front().map(|u| u as usize)
    }

    /// Marks `w` as discovered from `u`.
    pub(crate) fn discover(&mut self, w: usize, u: usize) {
        self.stamp[w] = self.epoch;
        self.dist[w] = self.dist[u] + 1;
        self.parent[w] = u as u32;
        self.queue.push_back(w as u32);
    }

    /// Multi-source BFS up to `max_depth` (inclusive). `visit(v, d)` is called
    /// once per reached vertex in nondecreasing distance order.
    pub(crate) fn run(
        &mut self,
        g: &Graph,
        sources: &[usize],
        max_depth: usize,
        mut visit: impl FnMut(usize, usize),
    ) {
        self.next_epoch();
        for &s in sources {
            self.seed(s);
        }
        while let Some(u) = self.pop() {
            let du = self.dist[u] as usize;
            visit(u, du);
            if du == max_depth {
                continue;
            }
            for &w in g.adj(u) {
                let w = w as usize;
                if self.stamp[w] != self.epoch {
                    self.discover(w, u);
                }
            }
        }
    }

    /// Distance of `v` in the most recent search, if it was reached.
    pub(crate) fn dist(&self, v: usize) -> Option<usize> {
        (self.stamp[v] == self.epoch).then(|| self.dist[v] as usize)
    }

    /// BFS-tree parent of a reached vertex (sources are their own parent).
    pub(crate) fn parent(&self, v: usize) -> usize {
        self.parent[v] as usize
    }

    /// Path from `v` back to its search source in the most recent search.
    pub(crate) fn path_to_source(&self, mut v: usize) -> Vec<usize> {
        let mut path = vec![v];
        while self.parent[v] as usize != v {
            v = self.parent[v] as usize;
            path.push(v);
        }
        path
    }
}
