//! First-moment bounds for homomorphisms of `G(n, c/n)` into odd cycles.
//!
//! - [`bipartite_bound`] / [`bipartite_threshold`] / [`ell_c_bound`]: a
//!   homomorphism to `C_{2l+1}` forces an induced bipartite subgraph on a
//!   `2l/(2l+1)` fraction of the vertices, whose expected count decays once
//!   that fraction exceeds a threshold `β*(c)`.
//! - [`b_value`] / [`b_log_gradient`]: the exponential rate `b(c, α)` of the
//!   expected number of five-class partitions compatible with a homomorphism
//!   to `C_5`, and its analytic log-gradient.
//! - [`grid_search`] / [`certify_bound`]: the fixed-step sweep of `b(4, ·)` over
//!   the feasible region and the Lipschitz argument turning the grid maximum
//!   into a bound on the supremum.
//! - [`partition_probability_terms`]: exact finite-`n` probabilities whose
//!   `1/n`-log converges to `log b`.

mod grid;
mod partition;
mod rate;

pub use grid::{
    certify_bound, grid_search, grid_search_with, HoistedObjective, CertifiedBound,
    GridObjective, GridReport, PointFn, Region, GRADIENT_BOUND,
};
pub use partition::{ln_factorial, partition_probability_terms, PartitionTerms};
pub use rate::{
    b_log_gradient, b_value, b_value_product, bipartite_bound, bipartite_threshold, ell_c_bound,
    independent_set_rate, odd_cycle_length_bound, BoundPoint, OddCycleBound,
};
