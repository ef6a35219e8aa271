//! Exact and interval arithmetic: dyadic numbers, enclosures, refinable real
//! oracles, symbolic forms for exact verification, and the finite standard
//! part estimate.

pub mod dyadic;
pub mod elementary;
pub mod exact;
pub mod interval;
pub mod oracle;
pub mod parse;
pub mod stdpart;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use dyadic::Dyadic;
pub use exact::Exact;
pub use interval::PrecisionReal;
pub use oracle::{ExactnessClass, OracleKind, RealOracle};
pub use parse::parse_oracle;
pub use stdpart::{std_estimate, Cluster, StdLimit, StdVerdict, Topology};

use crate::error::{Error, Result};

/// Round-half-even of an exact rational.
pub fn round_half_even(r: &BigRational) -> BigInt {
    let fl = r.floor().to_integer();
    let frac = r - BigRational::from_integer(fl.clone());
    let half = BigRational::new(1.into(), 2.into());
    if frac > half || (frac == half && fl.is_odd()) {
        fl + 1
    } else {
        fl
    }
}

/// Nearest integer to the enclosed value with round-half-even ties, and the
/// residual enclosure `x - n`.
pub fn nearest_integer(x: &PrecisionReal) -> Result<(BigInt, PrecisionReal)> {
    if x.width() >= Dyadic::pow2(-2) {
        return Err(Error::InvalidInput("nearest_integer needs an interval narrower than 1/4".into()));
    }
    let a = round_half_even(&x.lo().to_rational());
    let b = round_half_even(&x.hi().to_rational());
    if a != b {
        return Err(Error::PrecisionInsufficient { bits: x.width_bits() });
    }
    let r = x.sub(&PrecisionReal::from_int(&a));
    Ok((a, r))
}

/// Runs `step` at doubling precision starting from `start` until it yields a
/// decision or `cap` is exceeded.
pub fn with_precision<T, F>(start: u32, cap: u32, mut step: F) -> Result<T>
where
    F: FnMut(u32) -> Result<Option<T>>,
{
    let mut p = start.max(32);
    loop {
        match step(p) {
            Ok(Some(t)) => return Ok(t),
            Ok(None) | Err(Error::PrecisionInsufficient { .. }) => {}
            Err(e) => return Err(e),
        }
        if p >= cap {
            return Err(Error::PrecisionInsufficient { bits: p });
        }
        p = (p * 2).min(cap);
    }
}

/// Nearest integer to `n * theta`, refining the oracle as needed.
pub fn nearest_integer_scaled(theta: &RealOracle, n: &BigInt, start: u32, cap: u32) -> Result<(BigInt, PrecisionReal)> {
    if let Some(r) = theta.as_rational() {
        // exact ties such as n theta = 1/2 cannot be separated by refinement
        let v = r * BigRational::from_integer(n.clone());
        let a = round_half_even(&v);
        return Ok((a.clone(), PrecisionReal::from_rational(&(v - BigRational::from_integer(a)), start)));
    }
    let extra = n.bits() as u32 + 2;
    with_precision(start, cap, |p| {
        let x = theta.eval(p + extra)?.mul_int(n);
        match nearest_integer(&x) {
            Ok(v) => Ok(Some(v)),
            Err(Error::PrecisionInsufficient { .. }) => Ok(None),
            Err(Error::InvalidInput(_)) => Ok(None),
            Err(e) => Err(e),
        }
    })
}

/// `|x| > t` certified (`Some(true)`), `|x| < t` certified (`Some(false)`), or undecided.
pub fn compare_abs(x: &PrecisionReal, t: &Dyadic) -> Option<bool> {
    if &x.mig() > t {
        Some(true)
    } else if &x.mag() < t {
        Some(false)
    } else {
        None
    }
}

/// Decimal rendering of a rational with `digits` fractional digits (rounded toward zero).
pub fn rational_decimal(r: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let n = (r * BigRational::from_integer(scale)).trunc().to_integer();
    let s = dyadic::format_scaled(&n, digits);
    if n.is_zero() && r.is_negative() {
        format!("-{s}")
    } else {
        s
    }
}
