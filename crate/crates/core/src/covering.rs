//! Covers of the large values of `W_d` by grid boxes.
//!
//! At scale `N` the torus is cut into boxes with sides
//! `zeta_j = 1 / ceil(N^{j + 1 + eps - alpha})`. A box matters when `W_d`
//! reaches `N^alpha` somewhere inside it. Exact box maxima are out of reach,
//! so membership is bracketed by evaluating `W_d` at the box center against
//! two thresholds: `N^alpha` (misses boxes whose peak is off-center) and
//! `N^alpha / 2` (which, for large `N`, catches every box whose peak reaches
//! `N^alpha`, because `W_d` varies by less than half the threshold across a box).
//!
//! All counts are finite-`N` proxies for the limsup sets; the asymptotic
//! statements they illustrate carry `N^{o(1)}` factors that no finite run sees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::completion::{Completer, CompletionMode};
use crate::dimension::check_alpha;
use crate::error::{Error, Result};
use crate::meanvalue::s_of;
use crate::parallel::map_blocks;
use crate::phase::Turn;
use crate::sweep::{grid_size, Anchor, Functional, GridSweep, DEFAULT_GRID_CAP};
use crate::weyl::{check_degree, PhasePoint};

/// Relative distance within which `N^e` is treated as the integer it rounds to
/// before taking the ceiling, so exact powers such as `16^{5/2}` stay exact.
const SNAP: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub d: usize,
    #[serde(rename = "N")]
    pub len: u64,
    pub alpha: f64,
    pub eps: f64,
    /// `1 / zeta_j = ceil(N^{j + 1 + eps - alpha})`
    pub divisions: Vec<u64>,
    pub zetas: Vec<f64>,
}

impl BoxSpec {
    /// `U = prod_j 1/zeta_j`, exact.
    pub fn box_count(&self) -> u128 {
        grid_size(&self.divisions)
    }
}

fn ceil_power(base: f64, exponent: f64) -> Result<u64> {
    let v = base.powf(exponent);
    let r = v.round();
    let c = if (v - r).abs() <= SNAP * v { r } else { v.ceil() };
    if c.is_nan() || c >= u64::MAX as f64 {
        return Err(Error::Overflow(format!(
            "{base}^{exponent} does not fit a grid division"
        )));
    }
    Ok(c as u64)
}

pub fn box_side_lengths(d: usize, len: u64, alpha: f64, eps: f64) -> Result<BoxSpec> {
    check_degree(d)?;
    check_alpha(alpha)?;
    if len < 2 {
        return Err(Error::invalid("N must be at least 2"));
    }
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::invalid(format!("eps = {eps} must be a nonnegative number")));
    }
    let divisions = (1..=d)
        .map(|j| ceil_power(len as f64, j as f64 + 1.0 + eps - alpha))
        .collect::<Result<Vec<_>>>()?;
    let zetas = divisions.iter().map(|&m| 1.0 / m as f64).collect();
    Ok(BoxSpec {
        d,
        len,
        alpha,
        eps,
        divisions,
        zetas,
    })
}

/// `N_i = 2^i` for `i = i_min..=i_max`.
pub fn dyadic_schedule(i_min: u32, i_max: u32) -> Result<Vec<u64>> {
    if i_min < 1 || i_min > i_max || i_max > 63 {
        return Err(Error::invalid(format!(
            "dyadic range {i_min}..={i_max} must satisfy 1 <= i_min <= i_max <= 63"
        )));
    }
    Ok((i_min..=i_max).map(|i| 1u64 << i).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Center value at least `N^alpha`.
    CenterGeAlpha,
    /// Center value at least `N^alpha / 2`.
    CenterGeHalfAlpha,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxGrid {
    pub spec: BoxSpec,
    #[serde(rename = "U")]
    pub total: u128,
    pub mode: CompletionMode,
    pub threshold: f64,
    pub counted_lower: u64,
    pub counted_upper: u64,
}

impl BoxGrid {
    pub fn counted(&self, criterion: Criterion) -> u64 {
        match criterion {
            Criterion::CenterGeAlpha => self.counted_lower,
            Criterion::CenterGeHalfAlpha => self.counted_upper,
        }
    }
}

/// Counts grid boxes whose center value of `W_d` clears each threshold.
pub fn count_superlevel_boxes(
    d: usize,
    len: u64,
    alpha: f64,
    eps: f64,
    mode: CompletionMode,
    cap: u128,
) -> Result<BoxGrid> {
    let spec = box_side_lengths(d, len, alpha, eps)?;
    let total = spec.box_count();
    if total > cap {
        return Err(Error::CapExceeded {
            what: "box grid",
            size: total,
            cap,
        });
    }
    let sweep = GridSweep::with_cap(d, len as usize, &spec.divisions, Functional::Completed(mode), cap)?
        .anchored(Anchor::Center);
    let threshold = (len as f64).powf(alpha);
    let half = threshold / 2.0;
    let (counted_lower, counted_upper) = sweep.fold(
        || (0u64, 0u64),
        |acc, _, v| {
            acc.0 += (v >= threshold) as u64;
            acc.1 += (v >= half) as u64;
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    Ok(BoxGrid {
        spec,
        total,
        mode,
        threshold,
        counted_lower,
        counted_upper,
    })
}

pub fn count_superlevel_boxes_default(
    d: usize,
    len: u64,
    alpha: f64,
    eps: f64,
    mode: CompletionMode,
) -> Result<BoxGrid> {
    count_superlevel_boxes(d, len, alpha, eps, mode, DEFAULT_GRID_CAP)
}

/// The predicted size of the superlevel family, up to `N^{o(1)}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalBound {
    /// `U N^{s(d)(1 - 2 alpha)}`
    pub count_bound: f64,
    /// `s(d) + d(1 + eps - alpha) + s(d)(1 - 2 alpha)`, the `N`-exponent of
    /// `count_bound` with the ceilings dropped.
    pub count_exponent: f64,
    /// `2s(d)(1 - alpha) + d(1 - alpha) + d eps`
    pub exponent: f64,
    /// Both forms hold only up to a factor `N^{o(1)}`.
    pub up_to_subpolynomial_factor: bool,
}

pub fn theoretical_box_bound(d: usize, len: u64, alpha: f64, eps: f64) -> Result<TheoreticalBound> {
    let spec = box_side_lengths(d, len, alpha, eps)?;
    let (sd, df) = (s_of(d) as f64, d as f64);
    let s_factor = sd * (1.0 - 2.0 * alpha);
    Ok(TheoreticalBound {
        count_bound: spec.box_count() as f64 * (len as f64).powf(s_factor),
        count_exponent: sd + df * (1.0 + eps - alpha) + s_factor,
        exponent: 2.0 * sd * (1.0 - alpha) + df * (1.0 - alpha) + df * eps,
        up_to_subpolynomial_factor: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub base: Vec<f64>,
    #[serde(rename = "N")]
    pub len: usize,
    pub alpha: f64,
    pub eps: f64,
    pub mode: CompletionMode,
    /// Half-widths `N^{alpha - j - 1 - eps}` of the probed rectangle.
    pub zetas: Vec<f64>,
    pub base_value: f64,
    pub threshold: f64,
    /// True when `W_d(x; N) < N^alpha`, in which case no probe is evaluated.
    pub vacuous: bool,
    pub probes: usize,
    pub violations: usize,
    pub min_probe_value: Option<f64>,
}

/// Probes `W_d` on the rectangle `x + [-zeta, zeta)` and counts points where
/// it drops below `N^alpha / 2` although `W_d(x; N) >= N^alpha`.
///
/// The `2^d` corners are always probed; the rest are uniform in the rectangle.
pub fn stability_check(
    x: &PhasePoint,
    len: usize,
    alpha: f64,
    eps: f64,
    probes: usize,
    seed: u64,
    mode: CompletionMode,
) -> Result<StabilityReport> {
    check_alpha(alpha)?;
    if probes == 0 {
        return Err(Error::invalid("at least one probe is required"));
    }
    let d = x.degree();
    let completer = Completer::new(len, mode)?;
    let mut ws = completer.workspace();
    let n = len as f64;
    let zetas: Vec<f64> = (1..=d).map(|j| n.powf(alpha - j as f64 - 1.0 - eps)).collect();
    let threshold = n.powf(alpha);
    let base_value = completer.value_with(x, &mut ws);
    let mut report = StabilityReport {
        base: x.coords(),
        len,
        alpha,
        eps,
        mode,
        zetas: zetas.clone(),
        base_value,
        threshold,
        vacuous: base_value < threshold,
        probes: 0,
        violations: 0,
        min_probe_value: None,
    };
    if report.vacuous {
        return Ok(report);
    }

    let corners = 1usize << d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delta = vec![0.0; d];
    let mut min_value = f64::INFINITY;
    for p in 0..probes.max(corners) {
        for (j, slot) in delta.iter_mut().enumerate() {
            let unit = if p < corners {
                if p >> j & 1 == 1 {
                    1.0
                } else {
                    -1.0
                }
            } else {
                2.0 * rng.random::<f64>() - 1.0
            };
            *slot = unit * zetas[j];
        }
        let y = x.offset(&delta)?;
        let v = completer.value_with(&y, &mut ws);
        min_value = min_value.min(v);
        report.probes += 1;
        if v < threshold / 2.0 {
            report.violations += 1;
        }
    }
    report.min_probe_value = Some(min_value);
    Ok(report)
}

/// Aggregate of [`stability_check`] over random bases at one `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilitySurvey {
    #[serde(rename = "N")]
    pub len: usize,
    pub bases_drawn: usize,
    pub bases_qualified: usize,
    pub bases_with_violations: usize,
    pub violations: usize,
    pub probes: usize,
}

/// Draws `bases` uniform points of `T_d` from `seed` and runs the stability
/// check on each one that clears the threshold.
#[allow(clippy::too_many_arguments)]
pub fn stability_survey(
    d: usize,
    len: usize,
    alpha: f64,
    eps: f64,
    bases: usize,
    probes: usize,
    seed: u64,
    mode: CompletionMode,
) -> Result<StabilitySurvey> {
    check_degree(d)?;
    let reports = map_blocks(bases as u64, 1, |b, _| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b);
        let turns = (0..d).map(|_| Turn(rng.random::<u128>())).collect();
        let x = PhasePoint::from_turns(turns)?;
        stability_check(&x, len, alpha, eps, probes, rng.random(), mode)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let qualified: Vec<&StabilityReport> = reports.iter().filter(|r| !r.vacuous).collect();
    Ok(StabilitySurvey {
        len,
        bases_drawn: bases,
        bases_qualified: qualified.len(),
        bases_with_violations: qualified.iter().filter(|r| r.violations > 0).count(),
        violations: qualified.iter().map(|r| r.violations).sum(),
        probes: qualified.iter().map(|r| r.probes).sum(),
    })
}

/// Smallest `N` in a scan from which every later row is violation-free.
pub fn first_clean_len(rows: &[StabilitySurvey]) -> Option<usize> {
    let mut first = None;
    for r in rows {
        if r.violations == 0 {
            first.get_or_insert(r.len);
        } else {
            first = None;
        }
    }
    first
}
