use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::dyadic::Dyadic;
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with dyadic endpoints enclosing a real value.
///
/// Arithmetic rounds outward so every result still encloses the exact
/// result of the operation on the enclosed reals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionReal {
    lo: Dyadic,
    hi: Dyadic,
}

impl PrecisionReal {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        PrecisionReal { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        PrecisionReal { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn from_int(n: &BigInt) -> Self {
        Self::point(Dyadic::from_int(n.clone()))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::point(Dyadic::from_i64(n))
    }

    /// Enclosure of `r` with endpoints on the grid `2^-prec`.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.denom().is_one() {
            return Self::from_int(r.numer());
        }
        PrecisionReal { lo: Dyadic::from_rational_floor(r, prec), hi: Dyadic::from_rational_ceil(r, prec) }
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: Dyadic) -> Self {
        let r = r.abs();
        PrecisionReal { lo: -&r, hi: r }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// `-log2(width)` rounded down; `u32::MAX` for a point.
    pub fn width_bits(&self) -> u32 {
        let w = self.width();
        if w.is_zero() {
            return u32::MAX;
        }
        // 2^(mb-1) <= w < 2^mb
        let mb = w.magnitude_bits();
        let exact_power = w.mantissa().magnitude().is_one();
        let bits = if exact_power { 1 - mb } else { -mb };
        bits.max(0) as u32
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> Dyadic {
        (&self.lo + &self.hi).shl(-1)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn subset_of(&self, other: &PrecisionReal) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Certified sign: `Some(1)` if strictly positive, `Some(-1)` if strictly
    /// negative, `Some(0)` for the zero point, `None` if undecided.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            let m = std::cmp::max(-&self.lo, self.hi.clone());
            PrecisionReal { lo: Dyadic::zero(), hi: m }
        }
    }

    /// Upper bound of `|x|`.
    pub fn mag(&self) -> Dyadic {
        std::cmp::max(self.lo.abs(), self.hi.abs())
    }

    /// Lower bound of `|x|` (zero if the interval contains zero).
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            std::cmp::min(self.lo.abs(), self.hi.abs())
        }
    }

    /// Intersection, or `None` when disjoint.
    pub fn intersect(&self, other: &PrecisionReal) -> Option<PrecisionReal> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        (lo <= hi).then_some(PrecisionReal { lo, hi })
    }

    pub fn hull(&self, other: &PrecisionReal) -> PrecisionReal {
        PrecisionReal { lo: std::cmp::min(&self.lo, &other.lo).clone(), hi: std::cmp::max(&self.hi, &other.hi).clone() }
    }

    /// Widens the endpoints outward onto the grid `2^-prec`.
    pub fn round_out(&self, prec: u32) -> Self {
        PrecisionReal { lo: self.lo.round_down(prec), hi: self.hi.round_up(prec) }
    }

    /// Widens by `r` on both sides.
    pub fn inflate(&self, r: &Dyadic) -> Self {
        let r = r.abs();
        PrecisionReal { lo: &self.lo - &r, hi: &self.hi + &r }
    }

    pub fn add(&self, other: &PrecisionReal) -> Self {
        PrecisionReal { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &PrecisionReal) -> Self {
        PrecisionReal { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn mul(&self, other: &PrecisionReal) -> Self {
        let c = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        PrecisionReal { lo, hi }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let a = self.lo.mul_int(n);
        let b = self.hi.mul_int(n);
        if n.is_negative() {
            PrecisionReal { lo: b, hi: a }
        } else {
            PrecisionReal { lo: a, hi: b }
        }
    }

    pub fn mul_rational(&self, r: &BigRational, prec: u32) -> Self {
        self.mul_int(r.numer()).div_int(r.denom(), prec)
    }

    /// Division by a nonzero integer, rounded outward to `prec` bits.
    pub fn div_int(&self, n: &BigInt, prec: u32) -> Self {
        assert!(!n.is_zero());
        let d = BigRational::from_integer(n.clone());
        let lo = Dyadic::from_rational_floor(&(self.lo.to_rational() / &d), prec);
        let hi = Dyadic::from_rational_ceil(&(self.lo.to_rational() / &d), prec);
        let lo2 = Dyadic::from_rational_floor(&(self.hi.to_rational() / &d), prec);
        let hi2 = Dyadic::from_rational_ceil(&(self.hi.to_rational() / &d), prec);
        PrecisionReal { lo: std::cmp::min(lo, lo2), hi: std::cmp::max(hi, hi2) }
    }

    /// Reciprocal rounded outward to `prec` bits.
    pub fn recip(&self, prec: u32) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = self.lo.to_rational().recip();
        let b = self.hi.to_rational().recip();
        let (small, large) = if a < b { (a, b) } else { (b, a) };
        Ok(PrecisionReal { lo: Dyadic::from_rational_floor(&small, prec), hi: Dyadic::from_rational_ceil(&large, prec) })
    }

    pub fn div(&self, other: &PrecisionReal, prec: u32) -> Result<Self> {
        Ok(self.mul(&other.recip(prec)?).round_out(prec))
    }

    /// Integer power with the tight enclosure for even powers around zero.
    pub fn powi(&self, n: u32) -> Self {
        if n == 0 {
            return Self::from_i64(1);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self);
        }
        if n.is_multiple_of(2) && self.contains_zero() {
            PrecisionReal { lo: Dyadic::zero(), hi: acc.hi }
        } else {
            acc
        }
    }

    /// Shifts by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        PrecisionReal { lo: self.lo.shl(k), hi: self.hi.shl(k) }
    }

    /// Fractional-part enclosure `x - floor(x)` when both endpoints share a floor.
    pub fn frac(&self) -> Option<Self> {
        let f = self.lo.floor();
        if self.hi.floor() != f && !(self.hi.floor() == &f + 1 && self.hi == Dyadic::from_int(&f + 1)) {
            return None;
        }
        let fd = Dyadic::from_int(f);
        Some(PrecisionReal { lo: &self.lo - &fd, hi: &self.hi - &fd })
    }

    /// Strictly less than `x` (certified).
    pub fn lt(&self, x: &Dyadic) -> bool {
        &self.hi < x
    }

    /// Strictly greater than `x` (certified).
    pub fn gt(&self, x: &Dyadic) -> bool {
        &self.lo > x
    }

    pub fn lo_decimal(&self, digits: usize) -> String {
        self.lo.to_decimal(digits, false)
    }

    pub fn hi_decimal(&self, digits: usize) -> String {
        self.hi.to_decimal(digits, true)
    }

    /// Distance-to-nearest-integer enclosure `‖x‖`.
    pub fn dist_to_int(&self) -> PrecisionReal {
        let n = self.mid().to_rational().round().to_integer();
        let r = self.sub(&PrecisionReal::from_int(&n)).abs();
        let half = Dyadic::pow2(-1);
        if r.hi <= half {
            r
        } else {
            PrecisionReal { lo: std::cmp::min(r.lo, half.clone()), hi: half }
        }
    }
}

impl std::ops::Neg for &PrecisionReal {
    type Output = PrecisionReal;
    fn neg(self) -> PrecisionReal {
        PrecisionReal { lo: -&self.hi, hi: -&self.lo }
    }
}

impl std::ops::Neg for PrecisionReal {
    type Output = PrecisionReal;
    fn neg(self) -> PrecisionReal {
        -&self
    }
}

impl fmt::Display for PrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(24), self.hi_decimal(24))
    }
}

/// Decimal digits used when serializing interval endpoints.
pub const SERIAL_DIGITS: usize = 40;

impl Serialize for PrecisionReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PrecisionReal", 4)?;
        st.serialize_field("lo", &self.lo_decimal(SERIAL_DIGITS))?;
        st.serialize_field("hi", &self.hi_decimal(SERIAL_DIGITS))?;
        st.serialize_field("mid", &self.mid_f64())?;
        let wb = self.width_bits();
        st.serialize_field("width_bits", &if wb == u32::MAX { None } else { Some(wb) })?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> PrecisionReal {
        PrecisionReal::new(
            Dyadic::from_rational_floor(&BigRational::from_float(a).unwrap(), 60),
            Dyadic::from_rational_ceil(&BigRational::from_float(b).unwrap(), 60),
        )
    }

    #[test]
    fn mul_covers_sign_cases() {
        let a = iv(-1.0, 2.0);
        let b = iv(-3.0, 0.5);
        let p = a.mul(&b);
        assert_eq!(p.lo().to_f64(), -6.0);
        assert_eq!(p.hi().to_f64(), 3.0);
    }

    #[test]
    fn recip_rejects_zero() {
        assert_eq!(iv(-1.0, 1.0).recip(10), Err(Error::DivisionByZero));
        let r = iv(2.0, 4.0).recip(10).unwrap();
        assert!(r.contains(&Dyadic::pow2(-2)) && r.contains(&Dyadic::pow2(-1)));
    }

    #[test]
    fn even_power_around_zero() {
        let p = iv(-2.0, 1.0).powi(2);
        assert_eq!(p.lo().to_f64(), 0.0);
        assert_eq!(p.hi().to_f64(), 4.0);
    }

    #[test]
    fn width_bits_lower_bound() {
        let x = iv(0.0, 1.0 / 1024.0);
        assert_eq!(x.width_bits(), 10);
        let y = iv(0.0, 3.0 / 4096.0);
        assert!(y.width_bits() >= 10);
    }

    #[test]
    fn distance_to_integer() {
        let d = iv(2.59, 2.61).dist_to_int();
        assert!(d.contains(&Dyadic::from_rational_floor(&BigRational::new(2.into(), 5.into()), 50)));
    }
}
