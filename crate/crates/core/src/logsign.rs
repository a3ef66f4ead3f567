//! Exact sign of `sum_i c_i * log2(m_i) + t` for integers `c_i`, `t` and
//! positive integers `m_i`.
//!
//! The arguments are first split over a pairwise coprime base. The form is
//! rational exactly when every base element that is not a power of two gets
//! a zero total coefficient; its value is then an integer and the sign is
//! read off directly. Otherwise the value is irrational, hence nonzero, and
//! fixed-point logarithms are refined until the error interval excludes 0.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub(crate) const MIN_FRACTION_BITS: u64 = 64;
const MAX_FRACTION_BITS: u64 = 1 << 16;
/// Error of [`log2_fixed`] in units of the last fractional bit.
const ERROR_ULPS: u32 = 2;

#[derive(Debug, Clone, Default)]
pub(crate) struct LogForm {
    terms: Vec<(i128, u128)>,
    constant: i128,
}

impl LogForm {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff * log2(arg)`.
    pub fn log_term(mut self, coeff: i128, arg: u128) -> Self {
        assert!(arg > 0, "log of zero");
        self.terms.push((coeff, arg));
        self
    }

    pub fn constant(mut self, t: i128) -> Self {
        self.constant += t;
        self
    }

    pub fn sign(&self) -> Result<Ordering> {
        let args: Vec<u128> = self.terms.iter().map(|t| t.1).collect();
        let base = coprime_base(&args);
        let mut coeffs = vec![0i128; base.len()];
        for &(c, m) in &self.terms {
            let mut rest = m;
            for (b, total) in base.iter().zip(coeffs.iter_mut()) {
                while rest % b == 0 {
                    rest /= b;
                    *total += c;
                }
            }
            debug_assert_eq!(rest, 1);
        }
        let mut rational = self.constant;
        let mut irrational = Vec::new();
        for (&b, &c) in base.iter().zip(&coeffs) {
            if c == 0 {
                continue;
            }
            if b.is_power_of_two() {
                rational += c * i128::from(b.trailing_zeros() as u8);
            } else {
                irrational.push((c, b));
            }
        }
        if irrational.is_empty() {
            return Ok(rational.cmp(&0));
        }
        let mut bits = MIN_FRACTION_BITS;
        while bits <= MAX_FRACTION_BITS {
            let scale = BigInt::one() << bits;
            let mut lo = BigInt::from(rational) * &scale;
            let mut hi = lo.clone();
            for &(c, b) in &irrational {
                let l = BigInt::from(log2_fixed(&BigUint::from(b), bits).0);
                let c = BigInt::from(c);
                let err = BigInt::from(ERROR_ULPS);
                if c > BigInt::zero() {
                    lo += &c * (&l - &err);
                    hi += &c * (&l + &err);
                } else {
                    lo += &c * (&l + &err);
                    hi += &c * (&l - &err);
                }
            }
            if lo > BigInt::zero() {
                return Ok(Ordering::Greater);
            }
            if hi < BigInt::zero() {
                return Ok(Ordering::Less);
            }
            bits *= 2;
        }
        Err(Error::Inconsistent("logarithm comparison did not resolve".into()))
    }
}

/// Pairwise coprime integers > 1 whose products give every argument.
fn coprime_base(args: &[u128]) -> Vec<u128> {
    let mut base: Vec<u128> = args.iter().copied().filter(|&m| m > 1).collect();
    base.sort_unstable();
    base.dedup();
    'refine: loop {
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if g > 1 {
                    let (a, b) = (base[i] / g, base[j] / g);
                    base.swap_remove(j);
                    base.swap_remove(i);
                    base.extend([a, b, g].into_iter().filter(|&m| m > 1));
                    base.sort_unstable();
                    base.dedup();
                    continue 'refine;
                }
            }
        }
        return base;
    }
}

/// `log2(x)` as a fixed-point number with `bits` fractional bits, within
/// two units of the last place, and whether the value is exact.
///
/// The integer part is the bit length; the fractional bits come from
/// repeatedly squaring the mantissa in `[1, 2)`.
pub(crate) fn log2_fixed(x: &BigUint, bits: u64) -> (BigUint, bool) {
    assert!(!x.is_zero(), "log of zero");
    let int_part = x.bits() - 1;
    let mut value = BigUint::from(int_part) << bits;
    if x.count_ones() == 1 {
        return (value, true);
    }
    let working = bits + 64;
    let mut y = if int_part <= working {
        x << (working - int_part)
    } else {
        x >> (int_part - working)
    };
    let two = BigUint::one() << (working + 1);
    let mut frac = BigUint::zero();
    for _ in 0..bits {
        y = (&y * &y) >> working;
        frac <<= 1;
        if y >= two {
            y >>= 1;
            frac |= BigUint::one();
        }
    }
    value += frac;
    (value, false)
}
