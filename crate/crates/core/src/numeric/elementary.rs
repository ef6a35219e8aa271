//! Certified enclosures of the elementary constants and functions the
//! oracles need: square roots of rationals, pi, logarithms of positive
//! rationals and the exponential of an interval.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::dyadic::Dyadic;
use super::interval::PrecisionReal;
use crate::error::{Error, Result};

/// Runs `f` at increasing working precisions until the enclosure is at most `2^-prec` wide.
pub fn refine<F>(prec: u32, mut f: F) -> Result<PrecisionReal>
where
    F: FnMut(u32) -> Result<PrecisionReal>,
{
    let mut work = prec + 32;
    let limit = prec.saturating_mul(8).max(prec + 4096);
    loop {
        let x = f(work)?;
        let wb = x.width_bits();
        if wb >= prec {
            return Ok(x.round_out(prec + 8));
        }
        if work > limit {
            return Err(Error::PrecisionInsufficient { bits: work });
        }
        work += (prec - wb) + 32;
    }
}

/// Enclosure of `sqrt(r)` for `r >= 0`, width at most `2^-prec`.
pub fn sqrt_rational(r: &BigRational, prec: u32) -> PrecisionReal {
    assert!(!r.is_negative(), "square root of a negative rational");
    let scaled = (r * BigRational::from_integer(BigInt::one() << (2 * prec as u64))).floor().to_integer();
    let s = scaled.sqrt();
    let e = -(prec as i64);
    let exact = BigRational::from_integer(&s * &s) == r * BigRational::from_integer(BigInt::one() << (2 * prec as u64));
    if exact {
        PrecisionReal::point(Dyadic::new(s, e))
    } else {
        PrecisionReal::new(Dyadic::new(s.clone(), e), Dyadic::new(s + 1, e))
    }
}

/// `sum_{n>=0} sign^n z^(2n+1) / (2n+1)` for rational `|z| <= 1/3`, i.e. atan or atanh.
fn odd_series(z: &BigRational, alternating: bool, work: u32) -> PrecisionReal {
    let zi = PrecisionReal::from_rational(z, work + 8);
    let z2 = zi.mul(&zi).round_out(work + 8);
    let cutoff = Dyadic::pow2(-(work as i64) - 4);
    let mut power = zi.clone();
    let mut sum = PrecisionReal::zero();
    let mut n: i64 = 0;
    loop {
        let term = power.div_int(&BigInt::from(2 * n + 1), work + 8);
        if alternating && n % 2 == 1 {
            sum = sum.sub(&term);
        } else {
            sum = sum.add(&term);
        }
        power = power.mul(&z2).round_out(work + 8);
        n += 1;
        if power.mag() < cutoff {
            break;
        }
    }
    // remaining terms are bounded by a geometric series with ratio z^2 <= 1/9
    sum.inflate(&power.mag().shl(1)).round_out(work + 4)
}

/// Enclosure of pi by Machin's formula.
pub fn pi(prec: u32) -> PrecisionReal {
    refine(prec, |w| {
        let a = odd_series(&BigRational::new(1.into(), 5.into()), true, w);
        let b = odd_series(&BigRational::new(1.into(), 239.into()), true, w);
        Ok(a.mul_int(&16.into()).sub(&b.mul_int(&4.into())))
    })
    .expect("pi series converges")
}

fn ln2(work: u32) -> PrecisionReal {
    odd_series(&BigRational::new(1.into(), 3.into()), false, work).shl(1)
}

/// Enclosure of `log(q)` for a positive rational `q`.
pub fn log_rational(q: &BigRational, prec: u32) -> Result<PrecisionReal> {
    if !q.is_positive() {
        return Err(Error::InvalidInput("logarithm of a non-positive number".into()));
    }
    if q.is_one() {
        return Ok(PrecisionReal::zero());
    }
    let mut k = q.numer().bits() as i64 - q.denom().bits() as i64;
    let two = BigRational::from_integer(2.into());
    let mut x = q / pow2_rational(k);
    let lo = BigRational::new(3.into(), 4.into());
    let hi = BigRational::new(3.into(), 2.into());
    while x < lo {
        x = &x * &two;
        k -= 1;
    }
    while x >= hi {
        x = &x / &two;
        k += 1;
    }
    let z = (&x - BigRational::one()) / (&x + BigRational::one());
    refine(prec, |w| {
        let w2 = w + (k.unsigned_abs().max(1).ilog2() + 2);
        let head = odd_series(&z, false, w2).shl(1);
        Ok(head.add(&ln2(w2).mul_int(&BigInt::from(k))))
    })
}

fn pow2_rational(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as u64)
    }
}

/// Enclosure of `exp(d)` for a dyadic point at working precision `work`.
fn exp_point(d: &Dyadic, work: u32) -> Result<PrecisionReal> {
    if d.is_zero() {
        return Ok(PrecisionReal::from_i64(1));
    }
    let mb = d.magnitude_bits();
    if mb > 24 {
        return Err(Error::CapExceeded(format!("exponential argument of magnitude 2^{mb}")));
    }
    let s = (mb + 4).max(0);
    let y = PrecisionReal::point(d.shl(-s));
    // squaring s times costs about s bits; large results need extra integer bits
    let magnitude = d.abs().ceil().to_string().parse::<u64>().unwrap_or(u64::MAX / 4);
    let w = work + s as u32 + (magnitude.saturating_mul(3) / 2).min(1 << 26) as u32 + 16;
    let cutoff = Dyadic::pow2(-(w as i64) - 4);
    let mut term = PrecisionReal::from_i64(1);
    let mut sum = PrecisionReal::from_i64(1);
    let mut n: i64 = 1;
    loop {
        term = term.mul(&y).div_int(&BigInt::from(n), w + 8);
        sum = sum.add(&term);
        n += 1;
        if term.mag() < cutoff {
            break;
        }
    }
    // |y| < 1/16, so the tail is below twice the last term
    let mut acc = sum.inflate(&term.mag().shl(1)).round_out(w + 4);
    for _ in 0..s {
        acc = acc.mul(&acc).round_out(w + 4);
    }
    Ok(acc)
}

/// Enclosure of `exp(x)` for an interval `x`, width at most `2^-prec` when `x` is narrow enough.
pub fn exp_interval(x: &PrecisionReal, prec: u32) -> Result<PrecisionReal> {
    let lo = exp_point(x.lo(), prec + 16)?;
    let hi = if x.is_point() { lo.clone() } else { exp_point(x.hi(), prec + 16)? };
    Ok(PrecisionReal::new(lo.lo().clone(), hi.hi().clone()))
}

/// Enclosure of Euler's number.
pub fn e(prec: u32) -> PrecisionReal {
    refine(prec, |w| exp_point(&Dyadic::one(), w)).expect("exp(1) converges")
}
