//! The completed sum
//!
//! ```text
//! W_d(x; N) = sum_{h=1}^N w(h) |sum_{n=1}^N e(h n / N) e(f(n))|
//! ```
//!
//! which dominates every partial sum `S_d(x; M)`, `M <= N`, up to a constant.
//! The inner sums are the magnitudes of the (inverse) discrete Fourier
//! transform of the phase sequence, so one FFT yields the whole spectrum.
//!
//! Two weightings are offered. [`CompletionMode::Literal`] uses `w(h) = 1/h`.
//! [`CompletionMode::Symmetrized`] uses `w(h) = 1/min(h, N + 1 - h)`, which
//! keeps the domination valid at degenerate phases: at `x = 0` only `h = N`
//! survives, so the literal weight gives `W = 1` while `S_d(0; N) = N`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weyl::{check_len, fill_phase_sequence, PhasePoint, PhaseWalker};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompletionMode {
    /// `w(h) = 1/h`
    Literal,
    /// `w(h) = 1/min(h, N + 1 - h)`
    #[default]
    Symmetrized,
}

impl CompletionMode {
    /// Weight of frequency `h` (1-based) for a completion of length `len`.
    pub fn weight(self, h: usize, len: usize) -> f64 {
        debug_assert!(h >= 1 && h <= len);
        match self {
            CompletionMode::Literal => 1.0 / h as f64,
            CompletionMode::Symmetrized => 1.0 / h.min(len + 1 - h) as f64,
        }
    }

    pub fn weights(self, len: usize) -> Vec<f64> {
        (1..=len).map(|h| self.weight(h, len)).collect()
    }
}

impl fmt::Display for CompletionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompletionMode::Literal => "literal",
            CompletionMode::Symmetrized => "symmetrized",
        })
    }
}

impl FromStr for CompletionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(CompletionMode::Literal),
            "symmetrized" => Ok(CompletionMode::Symmetrized),
            other => Err(Error::invalid(format!("unknown completion mode {other:?}"))),
        }
    }
}

/// Total weight `sum_h w(h)`; bounded by `1 + ln N` (literal) and
/// `2 (1 + ln N)` (symmetrized).
pub fn weight_mass(len: usize, mode: CompletionMode) -> f64 {
    (1..=len).map(|h| mode.weight(h, len)).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletionReport {
    #[serde(rename = "N")]
    pub len: usize,
    pub d: usize,
    pub mode: CompletionMode,
    pub value: f64,
    /// `|sum_n e(hn/N) e(f(n))|` for `h = 1..=N`; empty when omitted.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spectrum_norms: Vec<f64>,
}

impl CompletionReport {
    pub fn without_spectrum(mut self) -> Self {
        self.spectrum_norms.clear();
        self
    }
}

/// Scratch buffers for repeated evaluations by one worker.
pub struct Workspace {
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

/// Reusable evaluator of `W_d(x; N)` for a fixed `N` and weighting.
#[derive(Clone)]
pub struct Completer {
    len: usize,
    mode: CompletionMode,
    weights: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Completer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Completer")
            .field("len", &self.len)
            .field("mode", &self.mode)
            .finish()
    }
}

impl Completer {
    pub fn new(len: usize, mode: CompletionMode) -> Result<Self> {
        check_len(len)?;
        let fft = FftPlanner::new().plan_fft_inverse(len);
        Ok(Completer {
            len,
            mode,
            weights: mode.weights(len),
            fft,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mode(&self) -> CompletionMode {
        self.mode
    }

    pub fn workspace(&self) -> Workspace {
        Workspace {
            buf: vec![Complex64::default(); self.len],
            scratch: vec![Complex64::default(); self.fft.get_inplace_scratch_len()],
        }
    }

    /// Leaves `sum_{m=0}^{N-1} g(m+1) e(km/N)` in `ws.buf[k]`.
    fn transform(&self, x: &PhasePoint, ws: &mut Workspace) {
        fill_phase_sequence(x, &mut ws.buf);
        self.fft.process_with_scratch(&mut ws.buf, &mut ws.scratch);
    }

    /// Twisted-sum magnitudes for `h = 1..=N`. The twisted sum at `h` is
    /// `e(h/N)` times transform entry `h mod N`, so only the index shifts.
    pub fn spectrum_with(&self, x: &PhasePoint, ws: &mut Workspace) -> Vec<f64> {
        self.transform(x, ws);
        (1..=self.len).map(|h| ws.buf[h % self.len].norm()).collect()
    }

    pub fn value_with(&self, x: &PhasePoint, ws: &mut Workspace) -> f64 {
        self.transform(x, ws);
        self.weights
            .iter()
            .enumerate()
            .map(|(i, w)| w * ws.buf[(i + 1) % self.len].norm())
            .sum()
    }

    pub fn value(&self, x: &PhasePoint) -> f64 {
        self.value_with(x, &mut self.workspace())
    }

    pub fn report(&self, x: &PhasePoint) -> CompletionReport {
        let spectrum_norms = self.spectrum_with(x, &mut self.workspace());
        let value = self.weights.iter().zip(&spectrum_norms).map(|(w, s)| w * s).sum();
        CompletionReport {
            len: self.len,
            d: x.degree(),
            mode: self.mode,
            value,
            spectrum_norms,
        }
    }
}

/// `|sum_{n=1}^N e(hn/N) e(f(n))|` for `h = 1..=N`.
pub fn inner_spectrum(x: &PhasePoint, len: usize) -> Result<Vec<f64>> {
    let c = Completer::new(len, CompletionMode::default())?;
    Ok(c.spectrum_with(x, &mut c.workspace()))
}

/// `W_d(x; N)` with its spectrum.
pub fn completed_sum(x: &PhasePoint, len: usize, mode: CompletionMode) -> Result<CompletionReport> {
    Ok(Completer::new(len, mode)?.report(x))
}

/// Result of scanning `max_{M <= N} |S_d(x; M)| / W_d(x; N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domination {
    pub ratio: f64,
    pub argmax_m: usize,
    pub max_partial: f64,
    pub completed: f64,
}

pub fn domination_check(x: &PhasePoint, len: usize, mode: CompletionMode) -> Result<Domination> {
    let completed = Completer::new(len, mode)?.value(x);
    let mut partial = Complex64::default();
    let (mut best, mut argmax_m) = (f64::NEG_INFINITY, 0);
    for (m, z) in PhaseWalker::new(x).take(len).enumerate() {
        partial += z;
        let r = partial.norm();
        if r > best {
            best = r;
            argmax_m = m + 1;
        }
    }
    Ok(Domination {
        ratio: best / completed,
        argmax_m,
        max_partial: best,
        completed,
    })
}
