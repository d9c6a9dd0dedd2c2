//! Seeded batch sweeps: one independent instance per seed, results in seed
//! order. With the `parallel` feature the instances run on the rayon pool.

use crate::error::Result;
use crate::maxplus::Scalar;
use crate::ni::random_ni;
use crate::oracle::verify_tree;
use crate::tree::build_tree_traced;

/// Applies `f` to `seed..seed + count`, in parallel when enabled.
pub fn map_seeds<T, F>(seed: u64, count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (seed..seed + count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seeds_sequential(seed, count, f)
    }
}

/// Applies `f` to `seed..seed + count` on the calling thread.
pub fn map_seeds_sequential<T, F>(seed: u64, count: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (seed..seed + count).map(f).collect()
}

/// A sweep over random NI matrices of order `n` with off-diagonal entries in
/// `[low, high]`; instance `k` uses seed `seed + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub n: usize,
    pub low: Scalar,
    pub high: Scalar,
    pub seed: u64,
    pub count: u64,
}

/// Outcome of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceResult {
    pub seed: u64,
    pub generic: bool,
    /// Names of failed checks, or the construction error.
    pub failures: Vec<String>,
}

/// Aggregate of a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSummary {
    pub config: SweepConfig,
    pub passed: u64,
    pub non_generic: u64,
    pub failures: Vec<InstanceResult>,
}

impl SweepSummary {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Builds and verifies the line through the first two columns of one
/// instance.
pub fn run_instance(config: &SweepConfig, seed: u64) -> Result<InstanceResult> {
    let a = random_ni(config.n, config.low, config.high, seed)?;
    let (generic, failures) = match build_tree_traced(&a, 0, 1) {
        Ok(c) => {
            let report = verify_tree(&a, 0, 1, &c.tree);
            (c.genericity.is_generic(), report.failures().map(|c| c.name.to_string()).collect())
        }
        Err(e) => (false, vec![e.to_string()]),
    };
    Ok(InstanceResult { seed, generic, failures })
}

fn summarize(config: SweepConfig, results: Vec<Result<InstanceResult>>) -> Result<SweepSummary> {
    let mut summary = SweepSummary { config, passed: 0, non_generic: 0, failures: Vec::new() };
    for r in results {
        let r = r?;
        if !r.generic {
            summary.non_generic += 1;
        }
        if r.failures.is_empty() {
            summary.passed += 1;
        } else {
            summary.failures.push(r);
        }
    }
    Ok(summary)
}

/// Runs the sweep, in parallel when enabled.
pub fn sweep(config: SweepConfig) -> Result<SweepSummary> {
    summarize(config, map_seeds(config.seed, config.count, |s| run_instance(&config, s)))
}

/// Runs the sweep on the calling thread.
pub fn sweep_sequential(config: SweepConfig) -> Result<SweepSummary> {
    summarize(config, map_seeds_sequential(config.seed, config.count, |s| run_instance(&config, s)))
}
