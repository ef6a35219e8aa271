//! Finite-prefix models of the approximation groups `*Z(theta)`: sequences
//! of integers `n_i` whose multiples `n_i theta` approach integers, their
//! error terms, membership verdicts, duality, scaling witnesses and the
//! hat-generator construction.

mod convergents;
mod hat;
mod membership;
mod sequence;
mod witness;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::serial;

pub use convergents::{convergents, Convergent, Convergents};
pub use hat::{hat_element, HatElement, HatStage};
pub(crate) use membership::decide;
pub use membership::{decay_fit, error_term, membership, CertificationBasis, DecayFit, ErrorProfile, MembershipStatus, MembershipVerdict};
pub use sequence::{combine, dual, member_from_convergents, pair_form, ApproxSequence};
pub use witness::{circle_part, scaling_witness, scaling_witness_at, ScalingWitness};

/// A proven envelope `|eps_i| <= c * base^i` for every index `i >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayCertificate {
    #[serde(serialize_with = "serial::rational")]
    pub c: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub base: BigRational,
    /// `-log2(base)`, the decay rate in bits per index.
    pub lambda: f64,
}

impl DecayCertificate {
    pub fn new(c: BigRational, base: BigRational) -> Self {
        assert!(!c.is_negative() && base.is_positive() && base < BigRational::one(), "decay certificate out of range");
        let lambda = -(base.to_f64().unwrap_or(0.0)).log2();
        DecayCertificate { c, base, lambda }
    }

    /// The envelope value at index `i`.
    pub fn bound(&self, i: usize) -> BigRational {
        &self.c * num_traits::pow(self.base.clone(), i)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    UserSupplied,
    Constructed { method: String, certificate: Option<DecayCertificate> },
}

impl Provenance {
    pub fn certificate(&self) -> Option<&DecayCertificate> {
        match self {
            Provenance::Constructed { certificate, .. } => certificate.as_ref(),
            Provenance::UserSupplied => None,
        }
    }
}

/// Which duals `n_i^perp` are admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NumeratorConstraint {
    /// Duals are integers.
    Integers,
    /// Duals lie in `(1/n) Z`.
    InvertedScale { n: u64 },
    /// Duals are divisible by every integer up to `bound`.
    DivisibleByAll { bound: u64 },
    /// Entries must lie in `n Z`; duals are integers.
    ScaledIdeal { n: u64 },
}

impl NumeratorConstraint {
    /// Spacing of the admissible dual lattice, as a rational `s`: duals lie in `s Z`.
    pub fn dual_step(&self) -> BigRational {
        match *self {
            NumeratorConstraint::Integers | NumeratorConstraint::ScaledIdeal { .. } => BigRational::one(),
            NumeratorConstraint::InvertedScale { n } => BigRational::new(BigInt::one(), BigInt::from(n)),
            NumeratorConstraint::DivisibleByAll { bound } => BigRational::from_integer(lcm_upto(bound)),
        }
    }

    /// Whether an entry is allowed at all.
    pub fn admits_entry(&self, n: &BigInt) -> bool {
        match *self {
            NumeratorConstraint::ScaledIdeal { n: k } => n.is_multiple_of(&BigInt::from(k)),
            _ => true,
        }
    }
}

impl fmt::Display for NumeratorConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumeratorConstraint::Integers => write!(f, "integers"),
            NumeratorConstraint::InvertedScale { n } => write!(f, "inverted:{n}"),
            NumeratorConstraint::DivisibleByAll { bound } => write!(f, "divisible:{bound}"),
            NumeratorConstraint::ScaledIdeal { n } => write!(f, "ideal:{n}"),
        }
    }
}

impl FromStr for NumeratorConstraint {
    type Err = Error;

    /// Accepts `integers`, `inverted:N`, `divisible:B` and `ideal:N`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "integers" {
            return Ok(NumeratorConstraint::Integers);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(|| Error::Parse(format!("unknown constraint '{s}'")))?;
        let v: u64 = arg.trim().parse().map_err(|_| Error::Parse(format!("constraint argument '{arg}' is not a positive integer")))?;
        if v == 0 {
            return Err(Error::Parse("constraint argument must be positive".into()));
        }
        match kind.trim() {
            "inverted" => Ok(NumeratorConstraint::InvertedScale { n: v }),
            "divisible" => {
                if v > 40 {
                    return Err(Error::InvalidInput("divisible bound above 40".into()));
                }
                Ok(NumeratorConstraint::DivisibleByAll { bound: v })
            }
            "ideal" => Ok(NumeratorConstraint::ScaledIdeal { n: v }),
            _ => Err(Error::Parse(format!("unknown constraint '{kind}'"))),
        }
    }
}

/// `lcm(1, 2, ..., b)`.
pub fn lcm_upto(b: u64) -> BigInt {
    (1..=b).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

fn factorial(k: usize) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |acc, j| acc * j)
}

/// `log2 |x|` of a dyadic, `-inf` for zero.
pub(crate) fn log2_abs(x: &crate::numeric::Dyadic) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let m = x.mantissa().abs();
    let shift = m.bits().saturating_sub(60);
    let top = (&m >> shift).to_f64().unwrap_or(1.0);
    top.log2() + (x.exponent() + shift as i64) as f64
}
