//! Closed-form Hausdorff dimension bounds for the large values of Weyl sums.
//!
//! Boxes of the dyadic covers have side lengths `N^{alpha - j - 1 - eps}`. A
//! box contributes `phi_{k,t}` to a `t`-dimensional covering sum, and summing
//! over the superlevel boxes gives a power of `N` whose exponent is
//! [`covering_sum_exponent`]. The covering sums converge once `t` exceeds
//! [`critical_t`], so the minimum over `k` of the thresholds bounds the
//! dimension:
//!
//! ```text
//! u(d, alpha) = min_{k=0..d-1} ((2d^2 + 4d)(1 - alpha) + k(k+1)) / (4 - 2 alpha + 2k)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meanvalue::s_of;
use crate::weyl::check_degree;

pub(crate) fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(Error::invalid(format!("alpha = {alpha} must lie in (0, 1)")))
    }
}

fn check_k(d: usize, k: usize) -> Result<usize> {
    if k < d {
        Ok(k)
    } else {
        Err(Error::invalid(format!("k = {k} must lie in 0..={}", d - 1)))
    }
}

/// Side lengths `r_1 >= ... >= r_d > 0` of a rectangle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleSides(Vec<f64>);

impl RectangleSides {
    pub fn new(sides: Vec<f64>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::invalid("a rectangle needs at least one side"));
        }
        if sides.iter().any(|&r| !r.is_finite() || r <= 0.0) {
            return Err(Error::invalid("side lengths must be positive and finite"));
        }
        if sides.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::invalid("side lengths must be sorted nonincreasing"));
        }
        Ok(RectangleSides(sides))
    }

    /// Sorts arbitrary positive sides into nonincreasing order first.
    pub fn from_unsorted(mut sides: Vec<f64>) -> Result<Self> {
        sides.sort_by(|a, b| b.total_cmp(a));
        Self::new(sides)
    }

    pub fn sides(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// The singular value function `phi_{k,t}(R) = r_1 ... r_k r_{k+1}^{t-k}`.
pub fn singular_value_phi(r: &RectangleSides, k: usize, t: f64) -> Result<f64> {
    let d = r.dim();
    check_k(d, k)?;
    if !(t > 0.0 && t <= d as f64) {
        return Err(Error::invalid(format!("t = {t} must lie in (0, {d}]")));
    }
    let sides = r.sides();
    Ok(sides[..k].iter().product::<f64>() * sides[k].powf(t - k as f64))
}

/// Number of balls of radius `r_{k+1}` needed to cover `R`, up to a constant:
/// `prod_{j<=k} r_j / r_{k+1}`.
pub fn ball_cover_count(r: &RectangleSides, k: usize) -> Result<f64> {
    check_k(r.dim(), k)?;
    let sides = r.sides();
    Ok(sides[..k].iter().map(|&rj| rj / sides[k]).product())
}

/// `N`-exponent of `sum_{R} phi_{k,t}(R)` over the superlevel boxes at scale `N`
/// (sub-polynomial factors dropped):
///
/// `2s(d)(1-a) + d(1-a) + d eps + (t-k)(a-k-2-eps) + k(a-1-eps) - s(k)`.
pub fn covering_sum_exponent(d: usize, alpha: f64, eps: f64, k: usize, t: f64) -> Result<f64> {
    check_degree(d)?;
    check_k(d, k)?;
    let (df, kf) = (d as f64, k as f64);
    let sd = s_of(d) as f64;
    let sk = s_of(k) as f64;
    Ok(2.0 * sd * (1.0 - alpha)
        + df * (1.0 - alpha)
        + df * eps
        + (t - kf) * (alpha - kf - 2.0 - eps)
        + kf * (alpha - 1.0 - eps)
        - sk)
}

/// The threshold `t_k = (2s(d)(1-a) + d(1-a) + s(k)) / (k + 2 - a)` beyond
/// which the `eps = 0` covering-sum exponent is negative.
pub fn critical_t(d: usize, alpha: f64, k: usize) -> Result<f64> {
    check_degree(d)?;
    check_alpha(alpha)?;
    check_k(d, k)?;
    // (2 s(d) + d) = d^2 + 2d is an integer, so only one rounding enters the numerator.
    let lead = (d * d + 2 * d) as f64;
    Ok((lead * (1.0 - alpha) + s_of(k) as f64) / (k as f64 + 2.0 - alpha))
}

/// Evaluates the minimum over `k` of the closed form directly, returning
/// `(u, argmin k)`. Ties go to the smallest `k`.
pub fn upper_bound_formula(d: usize, alpha: f64) -> Result<(f64, usize)> {
    check_degree(d)?;
    check_alpha(alpha)?;
    let lead = (2 * d * d + 4 * d) as f64;
    Ok((0..d)
        .map(|k| {
            let num = lead * (1.0 - alpha) + (k * (k + 1)) as f64;
            let den = 4.0 - 2.0 * alpha + 2.0 * k as f64;
            (num / den, k)
        })
        .fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimplifiedBound {
    /// `k = 0`: `(2d^2 + 4d)(1 - a) / (4 - 2a)`
    K0,
    /// `k = d - 1`: `d - d(d+1)(2a - 1) / (2(d + 1 - a))`
    Kd1,
}

pub fn dim_bound_simplified(d: usize, alpha: f64, variant: SimplifiedBound) -> Result<f64> {
    check_degree(d)?;
    check_alpha(alpha)?;
    let df = d as f64;
    Ok(match variant {
        SimplifiedBound::K0 => (2 * d * d + 4 * d) as f64 * (1.0 - alpha) / (4.0 - 2.0 * alpha),
        SimplifiedBound::Kd1 => df - (d * (d + 1)) as f64 * (2.0 * alpha - 1.0) / (2.0 * (df + 1.0 - alpha)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimBoundReport {
    pub d: usize,
    pub alpha: f64,
    /// `critical_t(d, alpha, k)` for `k = 0..d`.
    pub per_k: Vec<f64>,
    pub u: f64,
    pub argmin_k: usize,
    pub bound_k0: f64,
    pub bound_kd1: f64,
}

/// `u(d, alpha)` as the minimum of the per-`k` critical exponents.
pub fn dim_upper_bound(d: usize, alpha: f64) -> Result<DimBoundReport> {
    check_degree(d)?;
    check_alpha(alpha)?;
    let per_k = (0..d).map(|k| critical_t(d, alpha, k)).collect::<Result<Vec<_>>>()?;
    let (argmin_k, u) =
        per_k
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(DimBoundReport {
        d,
        alpha,
        per_k,
        u,
        argmin_k,
        bound_k0: dim_bound_simplified(d, alpha, SimplifiedBound::K0)?,
        bound_kd1: dim_bound_simplified(d, alpha, SimplifiedBound::Kd1)?,
    })
}

/// Constants `c1(d) <= liminf (1-a)^{-1} dim E <= limsup (1-a)^{-1} dim E <= c2(d)`
/// as `a -> 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticConstants {
    pub d: usize,
    pub c1: f64,
    pub c2: f64,
}

pub fn asymptotic_constants(d: usize) -> Result<AsymptoticConstants> {
    check_degree(d)?;
    let c1 = if d == 2 {
        3.0
    } else {
        (1..=d)
            .map(|nu| (1.0 / nu as f64).min(2.0 / (2 * d - nu) as f64))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(AsymptoticConstants {
        d,
        c1,
        c2: (d * d + 2 * d) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    fn sides(v: &[f64]) -> RectangleSides {
        RectangleSides::new(v.to_vec()).unwrap()
    }

    #[test]
    fn phi_examples() {
        let unit = sides(&[1.0, 1.0, 1.0]);
        for k in 0..3 {
            assert_eq!(singular_value_phi(&unit, k, 2.5).unwrap(), 1.0);
        }
        let r = sides(&[0.5, 0.25]);
        assert!((singular_value_phi(&r, 0, 1.5).unwrap() - 0.5f64.powf(1.5)).abs() < TOL);
        assert!((singular_value_phi(&r, 1, 1.5).unwrap() - 0.5 * 0.25f64.powf(0.5)).abs() < TOL);
        assert!((singular_value_phi(&r, 1, 2.0).unwrap() - 0.125).abs() < TOL);
        assert!(singular_value_phi(&r, 2, 1.0).is_err());
        assert!(singular_value_phi(&r, 0, 0.0).is_err());
        assert!(RectangleSides::new(vec![0.25, 0.5]).is_err());
        assert!(RectangleSides::new(vec![0.5, -0.25]).is_err());
        assert_eq!(RectangleSides::from_unsorted(vec![0.25, 0.5]).unwrap(), r);
    }

    #[test]
    fn ball_counts() {
        let r = sides(&[0.5, 0.25]);
        assert_eq!(ball_cover_count(&r, 0).unwrap(), 1.0);
        assert_eq!(ball_cover_count(&r, 1).unwrap(), 2.0);
    }

    #[test]
    fn exponent_examples() {
        assert!(covering_sum_exponent(2, 0.75, 0.0, 1, 4.0 / 3.0).unwrap().abs() < TOL);
        assert!(covering_sum_exponent(2, 0.75, 0.0, 1, 2.0).unwrap() < 0.0);
        // k = 0 reduces to 2s(d)(1-a) + d(1-a) + d eps + t(a - 2 - eps).
        let (a, e, t) = (0.6, 0.01, 1.7);
        let k0 = 6.0 * (1.0 - a) + 2.0 * (1.0 - a) + 2.0 * e + t * (a - 2.0 - e);
        assert!((covering_sum_exponent(2, a, e, 0, t).unwrap() - k0).abs() < TOL);
    }

    #[test]
    fn critical_examples() {
        assert!((critical_t(2, 0.75, 1).unwrap() - 4.0 / 3.0).abs() < TOL);
        assert!((critical_t(2, 0.75, 0).unwrap() - 1.6).abs() < TOL);
        assert!(critical_t(2, 1.0, 0).is_err());
        assert!(critical_t(2, 0.5, 2).is_err());
    }

    #[test]
    fn upper_bound_examples() {
        let r = dim_upper_bound(2, 0.75).unwrap();
        assert!((r.u - 4.0 / 3.0).abs() < TOL);
        assert_eq!(r.argmin_k, 1);
        assert!((r.bound_kd1 - 4.0 / 3.0).abs() < TOL);
        assert!((r.bound_k0 - 1.6).abs() < TOL);

        let half = dim_upper_bound(2, 0.5).unwrap();
        assert!((half.u - 2.0).abs() < TOL);

        let near_one = dim_upper_bound(5, 1.0 - 1e-9).unwrap();
        assert_eq!(near_one.argmin_k, 0);
        assert!(near_one.u < 1e-7);
        assert!(dim_upper_bound(2, 0.0).is_err());
        assert!(dim_upper_bound(1, 0.5).is_err());

        for d in 2..=12 {
            assert!((dim_bound_simplified(d, 0.5, SimplifiedBound::Kd1).unwrap() - d as f64).abs() < TOL);
        }
    }

    #[test]
    fn constants() {
        let c = asymptotic_constants(2).unwrap();
        assert_eq!((c.c1, c.c2), (3.0, 8.0));
        let c = asymptotic_constants(3).unwrap();
        assert_eq!(c.c2, 15.0);
        // max(min(1, 2/5), min(1/2, 2/4), min(1/3, 2/3)) = 1/2
        assert_eq!(c.c1, 0.5);
    }

    proptest! {
        #[test]
        fn cover_count_identity(
            raw in proptest::collection::vec(1e-6f64..1.0, 2..=12),
            kt in (0.0f64..1.0, 0.01f64..1.0),
        ) {
            let r = RectangleSides::from_unsorted(raw).unwrap();
            let d = r.dim();
            let k = ((kt.0 * d as f64) as usize).min(d - 1);
            let t = kt.1 * d as f64;
            let phi = singular_value_phi(&r, k, t).unwrap();
            let via_balls = ball_cover_count(&r, k).unwrap() * r.sides()[k].powf(t);
            prop_assert!((phi - via_balls).abs() <= 1e-12 * phi.abs().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn critical_t_zeroes_exponent(d in 2usize..=12, alpha in 0.01f64..0.99, kf in 0.0f64..1.0) {
            let k = ((kf * d as f64) as usize).min(d - 1);
            let t = critical_t(d, alpha, k).unwrap();
            prop_assert!(covering_sum_exponent(d, alpha, 0.0, k, t).unwrap().abs() < 1e-12 * t.max(1.0) * 10.0);
        }
    }
}
