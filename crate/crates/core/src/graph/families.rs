//! Small named graphs used by tests, examples and the CLI.

use super::Graph;

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
}

/// Cycle `0 - 1 - ... - (n-1) - 0`; requires `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        .expect("complete graph is simple")
}

/// Star `K_{1,k}` with centre 0.
pub fn star(k: usize) -> Graph {
    Graph::from_edges(k + 1, (1..=k).map(|i| (0, i))).expect("star is simple")
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).expect("petersen is simple")
}

/// Disjoint union; vertices of `b` are shifted by `a.n()`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let off = a.n();
    Graph::from_edges(
        a.n() + b.n(),
        a.edges().chain(b.edges().map(|(u, v)| (u + off, v + off))),
    )
    .expect("union of simple graphs is simple")
}
