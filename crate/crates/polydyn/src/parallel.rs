//! Parallel sampled-orbit evidence.

use polydyn_core::dynamics::{
    contraction_evidence, sample_outcome, sample_points, spectral_radius_at_origin, ContractionConfig,
    ContractionVerdict,
};
use polydyn_core::{Coefficient, PolyMap};
use rayon::prelude::*;

pub const THREADS_ENV: &str = "POLYDYN_THREADS";

/// Thread cap from `POLYDYN_THREADS`; `0`, unset or unparsable means automatic.
pub fn threads_from_env() -> usize {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

/// Same result as the sequential `contraction_evidence`, for any thread count.
pub fn contraction_evidence_parallel<C: Coefficient>(
    f: &PolyMap<C>,
    config: &ContractionConfig,
    threads: usize,
) -> ContractionVerdict {
    if !f.fixes_origin() {
        return contraction_evidence(f, config);
    }
    let fc = f.to_complex();
    let points = sample_points(config.seed, config.samples, config.radius, f.dim());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    // `collect` on an indexed parallel iterator keeps sample order.
    let outcomes = pool.install(|| points.par_iter().map(|x| sample_outcome(&fc, x, config)).collect());
    ContractionVerdict::assemble(true, spectral_radius_at_origin(f), outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use polydyn_core::{make_gamma3, rat, RangeCheck};

    #[test]
    fn independent_of_thread_count() {
        let g = make_gamma3(&[rat(1, 3), rat(1, 4), rat(1, 5)], RangeCheck::Strict).unwrap();
        let cfg = ContractionConfig { samples: 40, ..Default::default() };
        let sequential = contraction_evidence(&g, &cfg);
        for threads in [1, 3, 0] {
            assert_eq!(contraction_evidence_parallel(&g, &cfg, threads), sequential);
        }
    }
}
