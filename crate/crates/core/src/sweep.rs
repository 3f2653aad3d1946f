//! Bulk evaluation of `|S_d|` or `W_d` over rectangular grids of the torus.
//!
//! Grid points are indexed row-major with the first coordinate varying
//! slowest, so contiguous index blocks are strips in the leading coordinate.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::completion::{Completer, CompletionMode};
use crate::error::{Error, Result};
use crate::parallel::map_blocks;
use crate::phase::Turn;
use crate::weyl::{check_degree, check_len, weyl_sum_fast, PhasePoint};

pub const DEFAULT_GRID_CAP: u128 = 100_000_000;

const BLOCK: u64 = 4096;

/// What to evaluate at each grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Functional {
    WeylModulus,
    Completed(CompletionMode),
}

/// Where a grid point sits inside its cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Anchor {
    /// `x_j = i_j / r_j`
    #[default]
    Corner,
    /// `x_j = (i_j + 1/2) / r_j`
    Center,
}

#[derive(Clone, Debug)]
pub struct GridSweep {
    len: usize,
    resolution: Vec<u64>,
    functional: Functional,
    anchor: Anchor,
    total: u64,
}

impl GridSweep {
    pub fn new(d: usize, len: usize, resolution: &[u64], functional: Functional) -> Result<Self> {
        Self::with_cap(d, len, resolution, functional, DEFAULT_GRID_CAP)
    }

    pub fn with_cap(d: usize, len: usize, resolution: &[u64], functional: Functional, cap: u128) -> Result<Self> {
        check_degree(d)?;
        check_len(len)?;
        if resolution.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: resolution.len(),
            });
        }
        if resolution.contains(&0) {
            return Err(Error::invalid("grid resolution must be at least 1"));
        }
        let size = grid_size(resolution);
        if size > cap {
            return Err(Error::CapExceeded {
                what: "grid",
                size,
                cap,
            });
        }
        Ok(GridSweep {
            len,
            resolution: resolution.to_vec(),
            functional,
            anchor: Anchor::Corner,
            total: size as u64,
        })
    }

    pub fn anchored(mut self, anchor: Anchor) -> Self {
        self.anchor = anchor;
        self
    }

    pub fn total_points(&self) -> u64 {
        self.total
    }

    pub fn resolution(&self) -> &[u64] {
        &self.resolution
    }

    /// Multi-index of grid point `index`.
    pub fn multi_index(&self, mut index: u64) -> Vec<u64> {
        let mut out = vec![0; self.resolution.len()];
        for (slot, &r) in out.iter_mut().zip(&self.resolution).rev() {
            *slot = index % r;
            index /= r;
        }
        out
    }

    pub fn point(&self, index: u64) -> PhasePoint {
        let turns = self
            .multi_index(index)
            .iter()
            .zip(&self.resolution)
            .map(|(&i, &r)| match self.anchor {
                Anchor::Corner => Turn::from_ratio(i as i128, r as u128),
                Anchor::Center => Turn::from_ratio(2 * i as i128 + 1, 2 * r as u128),
            })
            .collect::<Result<Vec<_>>>()
            .expect("grid denominators are nonzero and small");
        PhasePoint::from_turns(turns).expect("degree checked on construction")
    }

    /// Applies `visit(index, value)` to each point of `range` in index order.
    fn visit_range(&self, range: Range<u64>, mut visit: impl FnMut(u64, f64)) {
        match self.functional {
            Functional::WeylModulus => {
                for i in range {
                    let v = weyl_sum_fast(&self.point(i), self.len).expect("length checked").norm();
                    visit(i, v);
                }
            }
            Functional::Completed(mode) => {
                let c = Completer::new(self.len, mode).expect("length checked");
                let mut ws = c.workspace();
                for i in range {
                    visit(i, c.value_with(&self.point(i), &mut ws));
                }
            }
        }
    }

    /// All values in grid order.
    pub fn evaluate(&self) -> Vec<f64> {
        map_blocks(self.total, BLOCK, |_, range| {
            let mut out = Vec::with_capacity((range.end - range.start) as usize);
            self.visit_range(range, |_, v| out.push(v));
            out
        })
        .into_iter()
        .flatten()
        .collect()
    }

    /// Streams every value through a per-block fold, then combines the block
    /// accumulators in block order.
    pub fn fold<A, F, C>(&self, init: impl Fn() -> A + Sync, fold: F, combine: C) -> A
    where
        A: Send,
        F: Fn(&mut A, u64, f64) + Sync,
        C: Fn(A, A) -> A,
    {
        map_blocks(self.total, BLOCK, |_, range| {
            let mut acc = init();
            self.visit_range(range, |i, v| fold(&mut acc, i, v));
            acc
        })
        .into_iter()
        .fold(init(), combine)
    }

    /// `(index, value)` of the largest value; ties go to the lowest index.
    pub fn argmax(&self) -> (u64, f64) {
        self.fold(
            || (0u64, f64::NEG_INFINITY),
            |acc, i, v| {
                if v > acc.1 {
                    *acc = (i, v);
                }
            },
            |a, b| if b.1 > a.1 { b } else { a },
        )
    }
}

pub(crate) fn grid_size(resolution: &[u64]) -> u128 {
    resolution
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
        .unwrap_or(u128::MAX)
}

/// Convenience wrapper returning `(grid point, value)` pairs in grid order.
pub fn grid_sweep(d: usize, len: usize, resolution: &[u64], functional: Functional) -> Result<Vec<(PhasePoint, f64)>> {
    let sweep = GridSweep::new(d, len, resolution, functional)?;
    let values = sweep.evaluate();
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(i, v)| (sweep.point(i as u64), v))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parallel::with_threads;
    use crate::weyl::weyl_sum_direct;

    #[test]
    fn small_grid_respects_modulus_bound() {
        let out = grid_sweep(2, 4, &[2, 2], Functional::WeylModulus).unwrap();
        assert_eq!(out.len(), 4);
        assert!(out.iter().all(|(_, v)| *v <= 4.0 + 1e-12));
        assert_eq!(out[3].0.coords(), vec![0.5, 0.5]);
    }

    #[test]
    fn origin_value() {
        let sweep = GridSweep::new(2, 16, &[16, 16], Functional::WeylModulus).unwrap();
        assert!((sweep.evaluate()[0] - 16.0).abs() < 1e-12);
    }

    #[test]
    fn maximum_sits_at_origin() {
        // Oracle: plain direct evaluation at every grid point.
        let sweep = GridSweep::new(2, 64, &[256, 256], Functional::WeylModulus).unwrap();
        let (idx, max) = sweep.argmax();
        assert_eq!(idx, 0);
        assert!((max - 64.0).abs() < 1e-10);
        let brute = (0..sweep.total_points())
            .step_by(97)
            .map(|i| weyl_sum_direct(&sweep.point(i), 64).unwrap().norm())
            .fold(0.0f64, f64::max);
        assert!(brute <= max + 1e-9);
        let values = sweep.evaluate();
        for i in (0..sweep.total_points()).step_by(997) {
            let v = weyl_sum_direct(&sweep.point(i), 64).unwrap().norm();
            assert!((values[i as usize] - v).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_oversized_grids() {
        let err = GridSweep::new(3, 8, &[1 << 20, 1 << 20, 1 << 20], Functional::WeylModulus).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { size, .. } if size == 1u128 << 60));
        assert!(GridSweep::new(2, 8, &[0, 4], Functional::WeylModulus).is_err());
        assert!(GridSweep::new(2, 8, &[4], Functional::WeylModulus).is_err());
    }

    #[test]
    fn centers_and_indexing() {
        let sweep = GridSweep::new(3, 4, &[2, 3, 4], Functional::WeylModulus)
            .unwrap()
            .anchored(Anchor::Center);
        assert_eq!(sweep.multi_index(23), vec![1, 2, 3]);
        let c = sweep.point(0).coords();
        assert_eq!(c, vec![0.25, 1.0 / 6.0, 0.125]);
    }

    #[test]
    fn order_independent_of_threads() {
        let sweep = GridSweep::new(2, 32, &[40, 50], Functional::Completed(CompletionMode::Literal)).unwrap();
        let one = with_threads(1, || sweep.evaluate()).unwrap();
        let four = with_threads(4, || sweep.evaluate()).unwrap();
        assert_eq!(one, four);
    }
}
