//! Independent brute-force oracles shared by the integration tests.
//!
//! Nothing here touches the library's phase arithmetic: points are rationals
//! `p_j / q` and phases are reduced with exact integer arithmetic.

#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A point of the torus with common denominator `q`.
#[derive(Clone, Debug)]
pub struct RationalPoint {
    pub num: Vec<u64>,
    pub q: u64,
}

impl RationalPoint {
    pub fn random(rng: &mut impl Rng, d: usize, q: u64) -> Self {
        RationalPoint {
            num: (0..d).map(|_| rng.random_range(0..q)).collect(),
            q,
        }
    }

    /// Comma-separated `p/q` text accepted by the library parser.
    pub fn text(&self) -> String {
        self.num
            .iter()
            .map(|p| format!("{p}/{}", self.q))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// `sum_j p_j n^j mod q`.
    pub fn residue(&self, n: u64) -> u64 {
        let q = self.q as u128;
        let n = n as u128 % q;
        let mut power = 1u128;
        let mut acc = 0u128;
        for &p in &self.num {
            power = power * n % q;
            acc = (acc + p as u128 * power) % q;
        }
        acc as u64
    }

    pub fn phase(&self, n: u64) -> Complex64 {
        unit(self.residue(n), self.q)
    }
}

/// `e(r / q)`, with `r / q` formed before scaling so the angle is accurate
/// to one rounding.
pub fn unit(r: u64, q: u64) -> Complex64 {
    let (s, c) = (TAU * (r as f64 / q as f64)).sin_cos();
    Complex64::new(c, s)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn naive_weyl(x: &RationalPoint, len: u64) -> Complex64 {
    (1..=len).map(|n| x.phase(n)).sum()
}

/// `W` by the defining double loop, with `weight(h)` for `h = 1..=N`.
pub fn naive_completed(x: &RationalPoint, len: u64, weight: impl Fn(u64) -> f64) -> f64 {
    let phases: Vec<Complex64> = (1..=len).map(|n| x.phase(n)).collect();
    (1..=len)
        .map(|h| {
            let inner: Complex64 = phases
                .iter()
                .zip(1..=len)
                .map(|(z, n)| unit(h * n % len, len) * z)
                .sum();
            weight(h) * inner.norm()
        })
        .sum()
}

pub fn literal_weight(h: u64, _len: u64) -> f64 {
    1.0 / h as f64
}

pub fn symmetrized_weight(h: u64, len: u64) -> f64 {
    1.0 / h.min(len + 1 - h) as f64
}

/// Number of `(x, y)` in `[1, N]^{2s}` with equal power sums up to degree `d`,
/// by visiting every `2s`-tuple.
pub fn naive_vinogradov(d: u32, s: usize, len: u64) -> u64 {
    let total = (len as u128).pow(2 * s as u32);
    let mut count = 0;
    let mut digits = vec![1u64; 2 * s];
    for _ in 0..total {
        let balanced = (1..=d).all(|j| {
            let lhs: i128 = digits[..s].iter().map(|&v| (v as i128).pow(j)).sum();
            let rhs: i128 = digits[s..].iter().map(|&v| (v as i128).pow(j)).sum();
            lhs == rhs
        });
        count += balanced as u64;
        for slot in digits.iter_mut() {
            if *slot < len {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
    }
    count
}

/// Ordinary least-squares slope of `ln y` against `ln x`.
pub fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
