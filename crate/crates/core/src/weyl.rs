//! Weyl sums `S_d(x; N) = sum_{n=1}^N e(x_1 n + ... + x_d n^d)`.
//!
//! Two evaluation paths are provided. [`weyl_sum_direct`] evaluates every
//! phase by Horner's rule and calls sine and cosine per term. [`weyl_sum_fast`]
//! walks the phase polynomial with its forward-difference table and maps each
//! phase to the unit circle by table lookup. Both carry phases in exact
//! fixed-point arithmetic (see [`crate::phase`]), so they agree to rounding in
//! the final complex arithmetic.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{polynomial_phase, Turn};

pub const MIN_DEGREE: usize = 2;
pub const MAX_DEGREE: usize = 12;

pub(crate) fn check_degree(d: usize) -> Result<usize> {
    if (MIN_DEGREE..=MAX_DEGREE).contains(&d) {
        Ok(d)
    } else {
        Err(Error::Degree(d))
    }
}

pub(crate) fn check_len(n: usize) -> Result<usize> {
    if n == 0 {
        Err(Error::EmptySum)
    } else {
        Ok(n)
    }
}

/// Degree and length of a Weyl sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumParams {
    degree: usize,
    len: usize,
}

#[allow(clippy::len_without_is_empty)] // a sum always has at least one term
impl SumParams {
    pub fn new(degree: usize, len: usize) -> Result<Self> {
        Ok(SumParams {
            degree: check_degree(degree)?,
            len: check_len(len)?,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.len
    }
}

/// A point `x = (x_1, ..., x_d)` of the torus `(R/Z)^d`.
///
/// Coordinates are reduced modulo 1 on construction and stored in fixed point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasePoint {
    turns: Vec<Turn>,
}

impl PhasePoint {
    pub fn new(coords: &[f64]) -> Result<Self> {
        check_degree(coords.len())?;
        let turns = coords.iter().map(|&c| Turn::from_f64(c)).collect::<Result<Vec<_>>>()?;
        Ok(PhasePoint { turns })
    }

    pub fn from_turns(turns: Vec<Turn>) -> Result<Self> {
        check_degree(turns.len())?;
        Ok(PhasePoint { turns })
    }

    pub fn zero(degree: usize) -> Result<Self> {
        Self::from_turns(vec![Turn::ZERO; degree])
    }

    pub fn degree(&self) -> usize {
        self.turns.len()
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    /// Coordinates as reals in `[0, 1)`.
    pub fn coords(&self) -> Vec<f64> {
        self.turns.iter().map(|t| t.to_f64()).collect()
    }

    /// The point `-x`, reduced modulo 1.
    pub fn negated(&self) -> PhasePoint {
        PhasePoint {
            turns: self.turns.iter().map(|&t| -t).collect(),
        }
    }

    /// `x + delta` coordinatewise, modulo 1.
    pub fn offset(&self, delta: &[f64]) -> Result<PhasePoint> {
        if delta.len() != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                got: delta.len(),
            });
        }
        let turns = self
            .turns
            .iter()
            .zip(delta)
            .map(|(&t, &dx)| Ok(t + Turn::from_f64(dx)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(PhasePoint { turns })
    }

    /// The phase `f(n) = x_1 n + ... + x_d n^d` modulo 1.
    pub fn phase_at(&self, n: u64) -> Turn {
        polynomial_phase(&self.turns, n as u128)
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|c| format!("{c:.17}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Parses one coordinate written as a decimal (`0.3`, `-1e-3`) or a fraction
/// `p/q`; fractions are reduced modulo 1 in integer arithmetic first.
pub fn parse_coordinate(s: &str) -> Result<Turn> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: i128 = p
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad numerator in {s:?}")))?;
        let den: u128 = q
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad denominator in {s:?}")))?;
        Turn::from_ratio(num, den)
    } else {
        let v: f64 = s.parse().map_err(|_| Error::invalid(format!("bad coordinate {s:?}")))?;
        Turn::from_f64(v)
    }
}

impl FromStr for PhasePoint {
    type Err = Error;

    /// Comma-separated coordinates, e.g. `0.3,1/5`.
    fn from_str(s: &str) -> Result<Self> {
        let turns = s.split(',').map(parse_coordinate).collect::<Result<Vec<_>>>()?;
        PhasePoint::from_turns(turns)
    }
}

/// Complex weights `a_1, ..., a_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence {
    values: Vec<Complex64>,
}

impl WeightSequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        check_len(values.len())?;
        if let Some(v) = values.iter().find(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite(format!("weight {v}")));
        }
        Ok(WeightSequence { values })
    }

    pub fn ones(len: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(1.0, 0.0); len])
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sum |a_n|^2`
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Weights `e(theta_n)` with independent uniform phases drawn from `seed`.
    pub fn random_unimodular(len: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new((0..len).map(|_| Turn(rng.random::<u128>()).unit()).collect())
    }
}

/// `e(f(n))` for a single `n >= 1`.
pub fn eval_phase(x: &PhasePoint, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::invalid("phase index starts at n = 1"));
    }
    Ok(x.phase_at(n).unit())
}

/// Iterator over `e(f(1)), e(f(2)), ...` driven by the forward-difference
/// table of `f`.
///
/// The `d`-th difference of a degree-`d` polynomial is constant, so each step
/// is `d` fixed-point additions followed by one table lookup.
#[derive(Clone, Debug)]
pub struct PhaseWalker {
    diffs: Vec<Turn>,
}

impl PhaseWalker {
    pub fn new(x: &PhasePoint) -> Self {
        let d = x.degree();
        let mut values: Vec<Turn> = (1..=d as u64 + 1).map(|n| x.phase_at(n)).collect();
        let mut diffs = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            diffs.push(values[0]);
            values = values.windows(2).map(|w| w[1] - w[0]).collect();
        }
        PhaseWalker { diffs }
    }

    /// Phase of the next term, without mapping it to the circle.
    #[inline]
    pub fn next_turn(&mut self) -> Turn {
        let current = self.diffs[0];
        for k in 0..self.diffs.len() - 1 {
            let next = self.diffs[k + 1];
            self.diffs[k] += next;
        }
        current
    }
}

impl Iterator for PhaseWalker {
    type Item = Complex64;

    #[inline]
    fn next(&mut self) -> Option<Complex64> {
        Some(self.next_turn().unit_fast())
    }
}

/// `(e(f(1)), ..., e(f(N)))` by the difference recurrence.
pub fn phase_sequence(x: &PhasePoint, len: usize) -> Result<Vec<Complex64>> {
    check_len(len)?;
    Ok(PhaseWalker::new(x).take(len).collect())
}

pub(crate) fn fill_phase_sequence(x: &PhasePoint, out: &mut [Complex64]) {
    for (slot, v) in out.iter_mut().zip(PhaseWalker::new(x)) {
        *slot = v;
    }
}

/// `S_d(x; N)`, term by term with a trigonometric call per term.
pub fn weyl_sum_direct(x: &PhasePoint, len: usize) -> Result<Complex64> {
    check_len(len)?;
    Ok((1..=len as u64).map(|n| x.phase_at(n).unit()).sum())
}

/// `S_d(x; N)` through [`PhaseWalker`].
pub fn weyl_sum_fast(x: &PhasePoint, len: usize) -> Result<Complex64> {
    check_len(len)?;
    Ok(PhaseWalker::new(x).take(len).sum())
}

/// `sum_{n=1}^N a_n e(f(n))`.
pub fn weyl_sum_weighted(a: &WeightSequence, x: &PhasePoint, len: usize) -> Result<Complex64> {
    check_len(len)?;
    if a.len() != len {
        return Err(Error::WeightLength {
            expected: len,
            got: a.len(),
        });
    }
    Ok(a.values().iter().zip(PhaseWalker::new(x)).map(|(w, e)| w * e).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn pt(c: &[f64]) -> PhasePoint {
        PhasePoint::new(c).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn params_validate() {
        assert!(SumParams::new(1, 5).is_err());
        assert!(SumParams::new(13, 5).is_err());
        assert!(SumParams::new(2, 0).is_err());
        assert_eq!(SumParams::new(12, 1).unwrap().degree(), 12);
    }

    #[test]
    fn eval_phase_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert!(close(eval_phase(&PhasePoint::zero(3).unwrap(), 7).unwrap(), one, 1e-15));
        assert!(close(eval_phase(&pt(&[0.5, 0.5]), 3).unwrap(), one, 1e-15));
        assert!(close(eval_phase(&pt(&[0.25, 0.0]), 1).unwrap(), Complex64::i(), 1e-15));
        assert!(eval_phase(&pt(&[0.25, 0.0]), 0).is_err());
    }

    #[test]
    fn phase_sequence_examples() {
        let zero = phase_sequence(&PhasePoint::zero(2).unwrap(), 4).unwrap();
        assert!(zero.iter().all(|z| close(*z, Complex64::new(1.0, 0.0), 1e-15)));
        let alt = phase_sequence(&pt(&[0.5, 0.0]), 4).unwrap();
        for (n, z) in alt.iter().enumerate() {
            let expected = if n % 2 == 0 { -1.0 } else { 1.0 };
            assert!(close(*z, Complex64::new(expected, 0.0), 1e-15));
        }
        assert!(phase_sequence(&pt(&[0.5, 0.0]), 0).is_err());
    }

    #[test]
    fn phase_sequence_matches_plain_trig() {
        // Oracle: f64 phase with an error-free product x * n^j = p + e (fma).
        fn frac_product(x: f64, m: f64) -> f64 {
            let p = x * m;
            let e = x.mul_add(m, -p);
            (p - p.floor()) + e
        }
        let (x1, x2) = (0.3, 0.17);
        let x = pt(&[x1, x2]);
        for (i, z) in phase_sequence(&x, 1000).unwrap().iter().enumerate() {
            let n = (i + 1) as f64;
            let theta = frac_product(x1, n) + frac_product(x2, n * n);
            let expected = Complex64::new((TAU * theta).cos(), (TAU * theta).sin());
            assert!((z - expected).norm() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn direct_sum_examples() {
        let s = weyl_sum_direct(&PhasePoint::zero(2).unwrap(), 100).unwrap();
        assert!(close(s, Complex64::new(100.0, 0.0), 1e-12));
        assert!(weyl_sum_direct(&pt(&[0.5, 0.0]), 10).unwrap().norm() < 1e-13);
        // Quadratic Gauss sum modulo 5, compared with the hand sum
        // 1 + 2 e(1/5) + 2 e(4/5) = 1 + 4 cos(2 pi / 5).
        let gauss: PhasePoint = "0,1/5".parse().unwrap();
        let s = weyl_sum_direct(&gauss, 5).unwrap();
        assert!((s.re - (1.0 + 4.0 * (TAU / 5.0).cos())).abs() < 1e-14);
        assert!((s.norm() - 5f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn fast_sum_examples() {
        let s = weyl_sum_fast(&PhasePoint::zero(2).unwrap(), 100_000).unwrap();
        assert!(close(s, Complex64::new(1e5, 0.0), 1e-9));
        let s = weyl_sum_fast(&pt(&[0.5, 0.5]), 8).unwrap();
        assert!(close(s, Complex64::new(8.0, 0.0), 1e-13));
        let x = pt(&[0.123456789, 0.987654321, 0.5555]);
        let (a, b) = (weyl_sum_fast(&x, 10_000).unwrap(), weyl_sum_direct(&x, 10_000).unwrap());
        assert!((a - b).norm() <= 1e-9 * 1e4);
    }

    #[test]
    fn weighted_sum_examples() {
        let zero = PhasePoint::zero(2).unwrap();
        let ones = WeightSequence::ones(5).unwrap();
        assert!(close(
            weyl_sum_weighted(&ones, &zero, 5).unwrap(),
            Complex64::new(5.0, 0.0),
            1e-14
        ));

        let x = pt(&[0.31, 0.77]);
        let mut v = vec![Complex64::new(0.0, 0.0); 9];
        v[0] = Complex64::new(1.0, 0.0);
        let single = WeightSequence::new(v).unwrap();
        assert!(close(
            weyl_sum_weighted(&single, &x, 9).unwrap(),
            eval_phase(&x, 1).unwrap(),
            1e-14
        ));

        // a_n = e(h n / N) with h = N is identically one.
        let n = 16;
        let twist: Vec<Complex64> = (1..=n as i128)
            .map(|k| Turn::from_ratio(n as i128 * k, n as u128).unwrap().unit())
            .collect();
        let twist = WeightSequence::new(twist).unwrap();
        assert!(close(
            weyl_sum_weighted(&twist, &x, n).unwrap(),
            weyl_sum_direct(&x, n).unwrap(),
            1e-12
        ));

        assert!(matches!(
            weyl_sum_weighted(&ones, &x, 6),
            Err(Error::WeightLength { expected: 6, got: 5 })
        ));
        assert!(WeightSequence::new(vec![Complex64::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn parses_points() {
        let x: PhasePoint = "0.5, -1/4, 7/3".parse().unwrap();
        assert_eq!(x.turns()[0], Turn::HALF);
        assert_eq!(x.turns()[1], Turn(3 << 126));
        assert!((x.coords()[2] - 1.0 / 3.0).abs() < 1e-16);
        assert!("0.5".parse::<PhasePoint>().is_err());
        assert!("0.5,abc".parse::<PhasePoint>().is_err());
        assert!("0.5,1/0".parse::<PhasePoint>().is_err());
    }

    fn arb_point() -> impl Strategy<Value = PhasePoint> {
        (2usize..=6)
            .prop_flat_map(|d| proptest::collection::vec(0.0f64..1.0, d).prop_map(|c| PhasePoint::new(&c).unwrap()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn modulus_bounded_by_length(x in arb_point(), n in 1usize..2000) {
            prop_assert!(weyl_sum_direct(&x, n).unwrap().norm() <= n as f64 * (1.0 + 1e-12));
        }

        #[test]
        fn fast_matches_direct(x in arb_point(), n in 1usize..20_000) {
            let diff = (weyl_sum_fast(&x, n).unwrap() - weyl_sum_direct(&x, n).unwrap()).norm();
            prop_assert!(diff <= 1e-9 * n as f64);
        }

        #[test]
        fn walker_stays_on_circle(x in arb_point()) {
            for z in PhaseWalker::new(&x).take(5000) {
                prop_assert!((z.norm() - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn integer_shift_invariance(
            m in proptest::collection::vec(0u64..(1 << 40), 2..=6),
            shifts in proptest::collection::vec(-50i32..50, 6),
            n in 1usize..500,
        ) {
            // Coordinates on a 2^-40 grid so the shifted floats are exact.
            let coords: Vec<f64> = m.iter().map(|&v| v as f64 / (1u64 << 40) as f64).collect();
            let shifted: Vec<f64> = coords.iter().zip(&shifts).map(|(c, &k)| c + k as f64).collect();
            let x = PhasePoint::new(&coords).unwrap();
            let y = PhasePoint::new(&shifted).unwrap();
            prop_assert_eq!(&x, &y);
            prop_assert_eq!(weyl_sum_direct(&x, n).unwrap(), weyl_sum_direct(&y, n).unwrap());
        }

        #[test]
        fn negation_conjugates(x in arb_point(), n in 1usize..2000) {
            let s = weyl_sum_direct(&x, n).unwrap();
            let t = weyl_sum_direct(&x.negated(), n).unwrap();
            prop_assert!((s.conj() - t).norm() <= 1e-12 * n as f64);
        }
    }
}
