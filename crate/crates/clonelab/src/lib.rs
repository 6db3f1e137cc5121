//! File formats, output and verification suites around `clonelab-core`.

pub mod emit;
pub mod format;
pub mod suites;

use clonelab_core::closure::ClosureConfig;
use clonelab_core::galois::DEFAULT_BUDGET;
use clonelab_core::lattice::{build_fig1_with, fig1_pool, pool_content, Lattice};
use rayon::prelude::*;

/// Enumeration budget in table bits, from `CLONELAB_BUDGET` when set.
pub fn budget() -> usize {
    std::env::var("CLONELAB_BUDGET").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// `ClosureConfig::new` with the environment budget applied.
pub fn config(k: usize, arity_cap: usize, pol_cap: usize) -> ClosureConfig {
    ClosureConfig::new(k, arity_cap, pol_cap).with_op_budget(budget())
}

/// The truncated lattice of 1-sorted quantified clones, generator sets of
/// each round evaluated in parallel.
pub fn build_fig1_parallel(trunc: usize, cfg: &ClosureConfig) -> clonelab_core::Result<Lattice> {
    let pool = fig1_pool(trunc);
    build_fig1_with(trunc, cfg, &mut |batch| batch.par_iter().map(|g| pool_content(&pool, g, cfg)).collect())
}
