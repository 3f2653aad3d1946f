//! Fixed-point arithmetic on the circle group R/Z.
//!
//! A [`Turn`] stores a point of R/Z as a 128-bit binary fraction of a full
//! turn, so addition and multiplication by integers wrap modulo 2^128, which
//! is exactly reduction modulo 1. Polynomial phases `x_1 n + ... + x_d n^d`
//! are therefore computed without any loss beyond the initial quantization of
//! the coefficients.

use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// A point of R/Z in units of 2^-128 turns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn(pub u128);

impl Turn {
    pub const ZERO: Turn = Turn(0);
    pub const HALF: Turn = Turn(1 << 127);

    /// Reduces a real number modulo 1.
    ///
    /// The reduction is exact: the binary expansion of `x` is shifted into
    /// place and the integer part falls off the top. Bits below 2^-128 are
    /// rounded, which only affects nonzero inputs smaller than 2^-75.
    pub fn from_f64(x: f64) -> Result<Turn> {
        if !x.is_finite() {
            return Err(Error::NonFinite(format!("coordinate {x}")));
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let exp_bits = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        let shift = exp + 128;
        let raw = if mantissa == 0 || shift >= 128 {
            0
        } else if shift >= 0 {
            (mantissa as u128) << shift
        } else {
            let rs = (-shift) as u32;
            if rs > 54 {
                0
            } else {
                ((mantissa as u128) + (1u128 << (rs - 1))) >> rs
            }
        };
        let turn = Turn(raw);
        Ok(if negative { -turn } else { turn })
    }

    /// The residue of `num / den` modulo 1, rounded to the nearest 2^-128.
    pub fn from_ratio(num: i128, den: u128) -> Result<Turn> {
        if den == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        if den > 1 << 126 {
            return Err(Error::invalid(format!("denominator {den} too large")));
        }
        let rem = num.rem_euclid(den as i128) as u128;
        // Long division of rem * 2^128 by den.
        let mut r = rem;
        let mut q: u128 = 0;
        for _ in 0..128 {
            r <<= 1;
            q <<= 1;
            if r >= den {
                r -= den;
                q |= 1;
            }
        }
        if 2 * r >= den {
            q = q.wrapping_add(1);
        }
        Ok(Turn(q))
    }

    /// The representative in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        let v = self.0 as f64 / TWO_POW_128;
        if v >= 1.0 {
            1.0 - f64::EPSILON / 2.0
        } else {
            v
        }
    }

    /// The representative in `[-1/2, 1/2)`.
    pub fn to_signed_f64(self) -> f64 {
        (self.0 as i128) as f64 / TWO_POW_128
    }

    pub fn mul_int(self, n: u128) -> Turn {
        Turn(self.0.wrapping_mul(n))
    }

    /// `e(self) = exp(2 pi i self)` through the libm sine and cosine.
    pub fn unit(self) -> Complex64 {
        let (s, c) = (TAU * self.to_signed_f64()).sin_cos();
        Complex64::new(c, s)
    }

    /// `e(self)` from precomputed tables, without trigonometric calls.
    ///
    /// The top 24 bits select two table entries `e(i/2^12)` and `e(j/2^24)`;
    /// the remaining angle is below `2 pi 2^-24` and handled by a short
    /// Taylor expansion. Agrees with [`Turn::unit`] to a few ulp.
    #[inline]
    pub fn unit_fast(self) -> Complex64 {
        let tables = unit_tables();
        // Round to 64 bits; the discarded part is below 2^-65 turns.
        let top = ((self.0 >> 64) as u64).wrapping_add(((self.0 >> 63) & 1) as u64);
        let coarse = (top >> 52) as usize;
        let fine = ((top >> 40) & 0xfff) as usize;
        let rest = (top & ((1u64 << 40) - 1)) as f64 * (TAU / 18_446_744_073_709_551_616.0);
        let a2 = rest * rest;
        let tail = Complex64::new(1.0 - 0.5 * a2, rest * (1.0 - a2 / 6.0));
        tables.coarse[coarse] * tables.fine[fine] * tail
    }
}

struct UnitTables {
    coarse: Vec<Complex64>,
    fine: Vec<Complex64>,
}

fn unit_tables() -> &'static UnitTables {
    static TABLES: OnceLock<UnitTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let build = |scale: f64| -> Vec<Complex64> {
            (0..4096)
                .map(|i| {
                    let (s, c) = (TAU * i as f64 * scale).sin_cos();
                    Complex64::new(c, s)
                })
                .collect()
        };
        UnitTables {
            coarse: build(1.0 / 4096.0),
            fine: build(1.0 / 16_777_216.0),
        }
    })
}

impl Add for Turn {
    type Output = Turn;
    fn add(self, rhs: Turn) -> Turn {
        Turn(self.0.wrapping_add(rhs.0))
    }
}

impl AddAssign for Turn {
    fn add_assign(&mut self, rhs: Turn) {
        self.0 = self.0.wrapping_add(rhs.0);
    }
}

impl Sub for Turn {
    type Output = Turn;
    fn sub(self, rhs: Turn) -> Turn {
        Turn(self.0.wrapping_sub(rhs.0))
    }
}

impl Neg for Turn {
    type Output = Turn;
    fn neg(self) -> Turn {
        Turn(self.0.wrapping_neg())
    }
}

/// `c_1 n + ... + c_d n^d` modulo 1, by Horner's rule in fixed point.
pub fn polynomial_phase(coeffs: &[Turn], n: u128) -> Turn {
    let mut acc = Turn::ZERO;
    for &c in coeffs.iter().rev() {
        acc = (acc + c).mul_int(n);
    }
    acc
}
