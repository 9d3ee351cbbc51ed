//! Deterministic Monte-Carlo driver.
//!
//! Samples are drawn in fixed-size batches, one counter-based RNG substream
//! per batch, and per-batch tallies are combined by addition. The result
//! depends only on (seed, sample count), never on how rayon schedules the
//! batches, so experiments reproduce bit for bit at any worker count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const BATCH: u64 = 1 << 16;

/// Uniform samples in the box with the given half-widths; `classify` returns
/// a bitmask of regions hit and the matching counters are incremented.
pub fn multi_count<F>(
    samples: u64,
    seed: u64,
    half_widths: &[f64],
    num_counters: usize,
    classify: F,
) -> Vec<u64>
where
    F: Fn(&[f64]) -> u32 + Sync,
{
    assert!(num_counters <= 32);
    let batches = samples.div_ceil(BATCH);
    (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let take = if (b + 1) * BATCH <= samples {
                BATCH
            } else {
                samples - b * BATCH
            };
            let mut counts = vec![0u64; num_counters];
            let mut point = vec![0.0f64; half_widths.len()];
            for _ in 0..take {
                for (slot, hw) in point.iter_mut().zip(half_widths) {
                    let u: f64 = rng.random();
                    *slot = (2.0 * u - 1.0) * hw;
                }
                let mask = classify(&point);
                for (i, c) in counts.iter_mut().enumerate() {
                    if mask & (1 << i) != 0 {
                        *c += 1;
                    }
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; num_counters],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Fraction of box samples landing in a single region.
pub fn fraction<F>(samples: u64, seed: u64, half_widths: &[f64], inside: F) -> f64
where
    F: Fn(&[f64]) -> bool + Sync,
{
    let counts = multi_count(samples, seed, half_widths, 1, |p| u32::from(inside(p)));
    counts[0] as f64 / samples as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_batch_stable() {
        let f = |p: &[f64]| p[0] * p[0] + p[1] * p[1] <= 1.0;
        let a = fraction(200_000, 7, &[1.0, 1.0], f);
        let b = fraction(200_000, 7, &[1.0, 1.0], f);
        assert_eq!(a.to_bits(), b.to_bits());
        // pi/4 within a loose Monte-Carlo margin
        assert!((a - std::f64::consts::FRAC_PI_4).abs() < 5e-3);
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let f = |p: &[f64]| p[0].abs() < 0.5;
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| multi_count(150_000, 42, &[1.0], 1, |p| u32::from(f(p))));
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| multi_count(150_000, 42, &[1.0], 1, |p| u32::from(f(p))));
        assert_eq!(single, many);
    }
}
