//! Exact ceilings of expressions `num·ln(n)/den`.
//!
//! Logarithms are evaluated in binary fixed point with an explicit error
//! radius. When the ceiling of the lower and upper ends of the interval
//! differ, the evaluation is repeated at twice the precision. For `n ≥ 2`
//! the value `ln n` is irrational, so the loop always terminates.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::prime_power;

/// Initial working precision in bits.
pub const PRECISION_BITS: u32 = 128;

/// `Σ_j (a/b)^(2j+1)/(2j+1)` scaled by `2^p`, and the number of terms used.
fn atanh_ratio(a: u128, b: u128, p: u32) -> (BigUint, u64) {
    let a = BigUint::from(a);
    let b = BigUint::from(b);
    let (a2, b2) = (&a * &a, &b * &b);
    let mut t = (a << p) / &b;
    let mut sum = t.clone();
    let mut j = 1u64;
    loop {
        t = t * &a2 / &b2;
        if t.is_zero() {
            break;
        }
        sum += &t / BigUint::from(2 * j + 1);
        j += 1;
    }
    (sum, j)
}

/// `(ln n − e, ln n + e)` scaled by `2^p`.
fn ln_interval(n: u64, p: u32) -> (BigUint, BigUint) {
    let k = 63 - n.leading_zeros();
    let base = 1u64 << k;
    // ln 2 = 2·atanh(1/3); ln(n/2^k) = 2·atanh((n−2^k)/(n+2^k))
    let (ln2, t1) = atanh_ratio(1, 3, p);
    let (rest, t2) = atanh_ratio((n - base) as u128, n as u128 + base as u128, p);
    let v = (ln2 * BigUint::from(k as u64) + rest) << 1;
    // Each truncated term carries at most `terms` units of error, the tail
    // is below the last term, and the sums are scaled by 2 and by k.
    let terms = t1.max(t2) + 2;
    let err = BigUint::from(4 * (k as u64 + 1) * terms * terms);
    let lo = if v > err { &v - &err } else { BigUint::zero() };
    (lo, v + err)
}

fn ceil_div(x: &BigUint, d: &BigUint) -> BigUint {
    (x + d - BigUint::one()) / d
}

/// `⌈num·ln(n)/den⌉` computed exactly.
pub fn ceil_mul_ln(num: u64, n: u64, den: u64) -> Result<u64> {
    if n == 0 || den == 0 {
        return Err(Error::BadParameters(format!("ln({n}) / {den}")));
    }
    if n == 1 || num == 0 {
        return Ok(0);
    }
    let mut p = PRECISION_BITS;
    loop {
        let (lo, hi) = ln_interval(n, p);
        let d = BigUint::from(den) << p;
        let c_lo = ceil_div(&(lo * num), &d);
        let c_hi = ceil_div(&(hi * num), &d);
        if c_lo == c_hi {
            return u64::try_from(c_lo).map_err(|_| Error::BadParameters("bound overflows u64".into()));
        }
        p *= 2;
    }
}

/// Stein's bound `⌈|B|·ln|A| / d⌉` for a dominating subset of `B`.
pub fn stein_bound(a: u64, b: u64, d: u64) -> Result<u64> {
    if a < 2 || b < 1 || d < 1 {
        return Err(Error::BadParameters(format!("stein bound needs |A| >= 2, |B| >= 1, d >= 1 (got {a}, {b}, {d})")));
    }
    ceil_mul_ln(b, a, d)
}

/// `⌈8(q+1)/(q−1)·ln q⌉`
fn arc_multiplier(q: u64) -> u64 {
    ceil_mul_ln(8 * (q + 1), q, q - 1).expect("q >= 2")
}

/// `⌈8q/(q+1)·ln q⌉`
fn prior_multiplier(q: u64) -> u64 {
    ceil_mul_ln(8 * q, q, q + 1).expect("q >= 2")
}

/// Size of the arc-union semioval: `(q²−q+1)·⌈8(q+1)/(q−1)·ln q⌉`.
pub fn arc_bound(q: u64) -> u64 {
    (q * q - q + 1) * arc_multiplier(q)
}

/// Earlier threshold `q²·⌈8q/(q+1)·ln q⌉ + 1`.
pub fn prior_bound(q: u64) -> u64 {
    q * q * prior_multiplier(q) + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u64,
    /// `|A| = q⁴−q³+q²`
    pub a: u64,
    /// `|B| = q+1`
    pub b: u64,
    /// `d = (q−1)/2`
    pub d: u64,
    pub stein: u64,
    pub arc_multiplier: u64,
    pub arc_bound: u64,
    pub prior_multiplier: u64,
    pub prior_bound: u64,
    pub ceilings_equal: bool,
    /// `arc_bound < prior_bound`
    pub improves: bool,
}

impl BoundReport {
    pub fn for_q(q: u64) -> Result<BoundReport> {
        if q < 3 || q % 2 == 0 {
            return Err(Error::BadParameters(format!("q = {q} must be odd and at least 3")));
        }
        let a = q.pow(4) - q.pow(3) + q * q;
        let (m11, m10) = (arc_multiplier(q), prior_multiplier(q));
        let (b11, b10) = ((q * q - q + 1) * m11, q * q * m10 + 1);
        Ok(BoundReport {
            q,
            a,
            b: q + 1,
            d: (q - 1) / 2,
            stein: stein_bound(a, q + 1, (q - 1) / 2)?,
            arc_multiplier: m11,
            arc_bound: b11,
            prior_multiplier: m10,
            prior_bound: b10,
            ceilings_equal: m11 == m10,
            improves: b11 < b10,
        })
    }
}

/// Reports for every odd prime power `3 ≤ q ≤ qmax`.
pub fn compare_bounds(qmax: u64) -> Vec<BoundReport> {
    (3..=qmax)
        .filter(|&q| q % 2 == 1 && prime_power(q).is_some())
        .map(|q| BoundReport::for_q(q).expect("odd prime power"))
        .collect()
}

/// Smallest `q` whose report shows an improvement.
pub fn smallest_winner(reports: &[BoundReport]) -> Option<u64> {
    reports.iter().find(|r| r.improves).map(|r| r.q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logs_against_f64() {
        for n in [2u64, 3, 10, 29, 683733, 1 << 40, u64::MAX] {
            for (num, den) in [(1u64, 1u64), (30, 14), (1000, 7)] {
                let want = (num as f64 * (n as f64).ln() / den as f64).ceil() as u64;
                assert_eq!(ceil_mul_ln(num, n, den).unwrap(), want, "{num} ln {n} / {den}");
            }
        }
    }

    #[test]
    fn interval_is_tight() {
        let (lo, hi) = ln_interval(683733, 256);
        assert!((hi - lo).bits() < 24);
    }

    #[test]
    fn values() {
        assert_eq!(stein_bound(683733, 30, 14).unwrap(), 29);
        assert_eq!(stein_bound(2, 1, 1).unwrap(), 1);
        assert_eq!(arc_bound(29), 23577);
        assert_eq!(prior_bound(29), 841 * 27 + 1);
        assert!(stein_bound(1, 1, 1).is_err());
        assert!(stein_bound(5, 1, 0).is_err());
    }

    #[test]
    fn first_improvement() {
        let reports = compare_bounds(200);
        assert_eq!(smallest_winner(&reports), Some(137));
        for r in &reports {
            if r.ceilings_equal {
                assert!(r.improves);
            }
        }
    }
}
