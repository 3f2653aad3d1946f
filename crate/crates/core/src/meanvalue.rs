//! Moments of Weyl sums over the torus.
//!
//! `int_{T_d} |S_d(x; N)|^{2s} dx` equals the number `J_{s,d}(N)` of integer
//! solutions of the power-sum system
//!
//! ```text
//! n_1^j + ... + n_s^j = n_{s+1}^j + ... + n_{2s}^j,   j = 1..d,   1 <= n_i <= N,
//! ```
//!
//! so the Monte Carlo estimates here can be checked against an exact count.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::completion::{Completer, CompletionMode};
use crate::error::{Error, Result};
use crate::parallel::map_blocks;
use crate::phase::Turn;
use crate::weyl::{check_degree, check_len, weyl_sum_fast, weyl_sum_weighted, PhasePoint, WeightSequence};

/// Samples per random stream. Stream `b` covers samples `b*SAMPLE_BLOCK..`,
/// which pins every sample to the seed regardless of scheduling.
pub const SAMPLE_BLOCK: u64 = 1024;

pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000_000;

/// `s(d) = d(d+1)/2`, the critical moment half-order.
pub fn s_of(d: usize) -> usize {
    d * (d + 1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub d: usize,
    pub s: usize,
    #[serde(rename = "N")]
    pub len: usize,
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl MomentEstimate {
    /// Distance from `target` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target).abs() / self.stderr
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Accumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let delta = v - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (v - self.mean);
    }

    fn merge(self, other: Accumulator) -> Accumulator {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Accumulator {
            n,
            mean: self.mean + delta * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64,
        }
    }

    fn stderr(&self) -> f64 {
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// Random point of `T_d` number `index` of stream `rng`.
fn random_point(rng: &mut ChaCha8Rng, d: usize) -> PhasePoint {
    let turns = (0..d).map(|_| Turn(rng.random::<u128>())).collect();
    PhasePoint::from_turns(turns).expect("degree checked by caller")
}

/// Mean and standard error of `g(x)` for `x` uniform on `T_d`.
///
/// `init` builds per-block scratch state handed to `g`.
pub fn torus_average<S, I, G>(d: usize, samples: u64, seed: u64, init: I, g: G) -> Result<(f64, f64)>
where
    I: Fn() -> S + Sync,
    G: Fn(&mut S, &PhasePoint) -> f64 + Sync,
{
    check_degree(d)?;
    if samples < 2 {
        return Err(Error::invalid("at least two samples are needed"));
    }
    let acc = map_blocks(samples, SAMPLE_BLOCK, |block, range| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        let mut state = init();
        let mut acc = Accumulator::default();
        for _ in range {
            let x = random_point(&mut rng, d);
            acc.push(g(&mut state, &x));
        }
        acc
    })
    .into_iter()
    .fold(Accumulator::default(), Accumulator::merge);
    Ok((acc.mean, acc.stderr()))
}

fn check_power_range(base: f64, power: usize) -> Result<()> {
    if power as f64 * base.ln() >= f64::MAX.ln() {
        return Err(Error::Overflow(format!(
            "{base}^{power} exceeds the floating-point range"
        )));
    }
    Ok(())
}

/// Monte Carlo estimate of `int |sum a_n e(f(n))|^{2s} dx` (unit weights when `weights` is `None`).
pub fn mc_moment(
    d: usize,
    len: usize,
    s: usize,
    weights: Option<&WeightSequence>,
    samples: u64,
    seed: u64,
) -> Result<MomentEstimate> {
    check_degree(d)?;
    check_len(len)?;
    if s == 0 {
        return Err(Error::invalid("moment half-order s must be at least 1"));
    }
    let l1 = match weights {
        Some(w) if w.len() != len => {
            return Err(Error::WeightLength {
                expected: len,
                got: w.len(),
            })
        }
        Some(w) => w.values().iter().map(|a| a.norm()).sum(),
        None => len as f64,
    };
    check_power_range(l1, 2 * s)?;
    let exponent = s as i32;
    let (mean, stderr) = torus_average(
        d,
        samples,
        seed,
        || (),
        |_, x| {
            let sum = match weights {
                Some(w) => weyl_sum_weighted(w, x, len),
                None => weyl_sum_fast(x, len),
            }
            .expect("length checked");
            sum.norm_sqr().powi(exponent)
        },
    )?;
    Ok(MomentEstimate {
        d,
        s,
        len,
        mean,
        stderr,
        samples,
        seed,
    })
}

/// Monte Carlo estimate of `int W_d(x; N)^{2 s(d)} dx`.
pub fn completed_moment(d: usize, len: usize, samples: u64, seed: u64, mode: CompletionMode) -> Result<MomentEstimate> {
    check_degree(d)?;
    let completer = Completer::new(len, mode)?;
    let s = s_of(d);
    let bound = len as f64 * crate::completion::weight_mass(len, mode);
    check_power_range(bound, 2 * s)?;
    let (mean, stderr) = torus_average(
        d,
        samples,
        seed,
        || completer.workspace(),
        |ws, x| completer.value_with(x, ws).powi(2 * s as i32),
    )?;
    Ok(MomentEstimate {
        d,
        s,
        len,
        mean,
        stderr,
        samples,
        seed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VinogradovCount {
    #[serde(rename = "J")]
    pub j: u64,
    pub s: usize,
    pub d: usize,
    #[serde(rename = "N")]
    pub len: usize,
}

pub fn vinogradov_count(d: usize, s: usize, len: usize) -> Result<VinogradovCount> {
    vinogradov_count_capped(d, s, len, DEFAULT_ENUMERATION_CAP)
}

/// Exact `J_{s,d}(N)` by meet in the middle: bucket the `N^s` ordered
/// `s`-tuples by their power-sum vector, then `J = sum_k c_k^2`.
///
/// Only the first `min(d, s)` power sums go into the key: by Newton's
/// identities `p_1..p_s` fix a multiset of size `s`, and with it every higher
/// power sum, so the longer key would induce the same buckets.
pub fn vinogradov_count_capped(d: usize, s: usize, len: usize, cap: u64) -> Result<VinogradovCount> {
    if d == 0 || s == 0 {
        return Err(Error::invalid("degree and s must be at least 1"));
    }
    check_len(len)?;
    let tuples = (len as u128).checked_pow(2 * s as u32).unwrap_or(u128::MAX);
    if tuples > cap as u128 {
        return Err(Error::CapExceeded {
            what: "enumeration of 2s-tuples",
            size: tuples,
            cap: cap as u128,
        });
    }
    let key_len = d.min(s);
    let powers: Vec<Vec<u128>> = (1..=len as u128)
        .map(|n| (1..=key_len as u32).map(|j| n.pow(j)).collect())
        .collect();

    let mut buckets: HashMap<Vec<u128>, u64> = HashMap::new();
    let mut tuple = vec![0usize; s];
    loop {
        let mut key = vec![0u128; key_len];
        for &n in &tuple {
            for (k, p) in key.iter_mut().zip(&powers[n]) {
                *k += p;
            }
        }
        *buckets.entry(key).or_insert(0) += 1;

        // Odometer over [0, len)^s.
        let mut pos = 0;
        loop {
            if pos == s {
                let j = buckets.values().map(|&c| c * c).sum();
                return Ok(VinogradovCount { j, s, d, len });
            }
            tuple[pos] += 1;
            if tuple[pos] < len {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
}

/// Least-squares fit of `ln(moment) = slope * ln(N) + intercept`.
pub fn moment_exponent_fit(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::invalid("need at least three points for an exponent fit"));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) || points[0].0 <= 0.0 {
        return Err(Error::invalid("N values must be positive and strictly increasing"));
    }
    if let Some(p) = points.iter().find(|p| !p.1.is_finite() || p.1 <= 0.0) {
        return Err(Error::invalid(format!("moment {} at N = {} is not positive", p.1, p.0)));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, m)| (n.ln(), m.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = logs.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    Ok(ExponentFit {
        slope,
        intercept,
        residual: (rss / k).sqrt(),
    })
}
