//! Homomorphisms from sparse random graphs `G(n, c/n)` to odd cycles.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: immutable CSR graphs, seeded `G(n, p)` generation, 2-core peeling
//!   and the asymptotic 2-core size prediction.
//! - [`cycles`]: odd girth, girth, short-cycle enumeration and the structural
//!   audits (short-cycle proximity, degree profile along a cycle).
//! - [`decomposition`]: splitting `E(G)` into a forest `F` and a sparse set `M`
//!   of edges pairwise far apart in `F`.
//! - [`coloring`]: 2-colouring `F`, shifting colours around bad `M`-edges and the
//!   full homomorphism-finding pipeline [`coloring::hom_find`].
//! - [`oracle`]: exact backtracking homomorphism search, circulant graphs and
//!   the circular chromatic number.
//! - [`bound`]: first-moment rates, the five-class partition rate `b(c, α)`,
//!   its log-gradient and the Lipschitz-certified grid maximisation.
//! - [`experiment`]: Monte-Carlo trials, Wilson intervals and report persistence.

// `!(x > 0.0)` is used on purpose so that NaN fails parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::int_plus_one)]

pub mod bound;
pub mod coloring;
pub mod cycles;
pub mod decomposition;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod oracle;

pub use bound::{BoundPoint, CertifiedBound, GridReport, Region};
pub use coloring::{hom_find, CycleColoring, HomOutcome};
pub use cycles::{odd_girth, Cycle};
pub use decomposition::{decompose, Decomposition, StructureFailure};
pub use error::{Error, Result};
pub use graph::{Graph, TwoCorePrediction};
pub use oracle::{circular_chromatic, hom_search, CircularChromatic, HomMapping, HomSearchResult};

