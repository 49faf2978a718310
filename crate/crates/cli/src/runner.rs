//! Parallel drive of the orbit pipeline. Chunks of indices are evaluated
//! concurrently in bounded waves, then absorbed into the statistics in
//! strict chunk order — the same order the sequential engine uses — so a
//! run is byte-identical for any worker count.

use anyhow::Result;
use nilsampler_core::equidist::{EquidistAccumulator, EquidistReport, Thresholds};
use nilsampler_core::hardy::Precision;
use nilsampler_core::orbit::{self, CompiledOrbit, OrbitError, OrbitPoint};
use rayon::prelude::*;

pub struct RunSettings {
    pub threads: usize,
    pub precision: Precision,
    pub max_n: u64,
}

pub fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?)
}

fn for_each_chunk_in_order<F>(
    co: &CompiledOrbit,
    range: (u64, u64),
    progression: (u64, u64),
    settings: &RunSettings,
    mut consume: F,
) -> Result<u64, OrbitError>
where
    F: FnMut(&[OrbitPoint]),
{
    orbit::check_range(range, &co.scheme(), settings.max_n)?;
    let chunks = orbit::chunk_indices(range, progression);
    let pool = thread_pool(settings.threads).expect("thread pool");
    let precision = settings.precision;
    let mut total = 0u64;
    // Bounded wave keeps at most a few chunks of points alive at a time.
    let wave = settings.threads.max(1) * 2;
    for group in chunks.chunks(wave) {
        let evaluated: Result<Vec<Vec<OrbitPoint>>, OrbitError> = pool.install(|| {
            group
                .par_iter()
                .map(|ns| co.points_at(ns, precision))
                .collect()
        });
        for pts in evaluated? {
            total += pts.len() as u64;
            consume(&pts);
        }
    }
    Ok(total)
}

/// Full criterion run with optional running-series taps after each chunk.
pub fn run_equidist(
    co: &CompiledOrbit,
    range: (u64, u64),
    progression: (u64, u64),
    k_max: i32,
    thresholds: Thresholds,
    settings: &RunSettings,
    mut series_sink: Option<&mut dyn FnMut(u64, &EquidistAccumulator)>,
) -> Result<EquidistReport, OrbitError> {
    orbit::check_range(range, &co.scheme(), settings.max_n)?;
    let expected = orbit::progression_indices(range, progression).count() as u64;
    let mut total = EquidistAccumulator::for_run(co.dim(), k_max, expected)
        .map_err(|e| OrbitError::RangeError(e.to_string()))?;
    let mut seen = 0u64;
    for_each_chunk_in_order(co, range, progression, settings, |pts| {
        total.absorb(pts);
        seen += pts.len() as u64;
        if let Some(sink) = series_sink.as_deref_mut() {
            sink(seen, &total);
        }
    })?;
    total
        .finalize(co.scheme(), thresholds)
        .map_err(|e| OrbitError::RangeError(e.to_string()))
}

/// Streams points to a sequential consumer (CSV dumps and diagnostics).
pub fn run_points<F>(
    co: &CompiledOrbit,
    range: (u64, u64),
    progression: (u64, u64),
    settings: &RunSettings,
    consume: F,
) -> Result<u64, OrbitError>
where
    F: FnMut(&[OrbitPoint]),
{
    for_each_chunk_in_order(co, range, progression, settings, consume)
}
