//! Deterministic work partitioning.
//!
//! Work is split into fixed-size index blocks whose boundaries depend only on
//! the problem size, never on the number of workers. Block results come back
//! in block order and are combined sequentially, so floating-point totals are
//! bitwise reproducible for any thread count.

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Maps `f` over consecutive blocks of `0..total`, returning results in block order.
pub fn map_blocks<T, F>(total: u64, block: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, Range<u64>) -> T + Sync,
{
    assert!(block > 0);
    let blocks = total.div_ceil(block);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * block;
            f(b, start..(start + block).min(total))
        })
        .collect()
}

/// Runs `f` on a dedicated pool with `threads` workers (0 means the rayon default).
pub fn with_threads<R, F>(threads: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_range_in_order() {
        let parts = map_blocks(10, 3, |b, r| (b, r));
        assert_eq!(parts, vec![(0, 0..3), (1, 3..6), (2, 6..9), (3, 9..10)]);
        assert!(map_blocks(0, 3, |_, r| r).is_empty());
    }

    #[test]
    fn float_totals_do_not_depend_on_threads() {
        let total = |t| {
            with_threads(t, || {
                map_blocks(100_000, 777, |_, r| r.map(|i| (i as f64).sqrt().sin()).sum::<f64>())
                    .into_iter()
                    .sum::<f64>()
            })
            .unwrap()
        };
        assert_eq!(total(1).to_bits(), total(3).to_bits());
    }
}
