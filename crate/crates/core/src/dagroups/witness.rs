use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::sequence::ApproxSequence;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::{std_estimate, with_precision, Dyadic, PrecisionReal, RealOracle, StdVerdict, Topology};
use crate::par::{self, Exec};
use crate::serial;

/// A multiplier `N` with certified `||N n_i theta|| > 1/4`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingWitness {
    pub index: usize,
    #[serde(serialize_with = "serial::big")]
    pub entry: BigInt,
    pub multiplier: u64,
    /// Enclosure of `||N n_i theta||`.
    pub distance: PrecisionReal,
}

const FIXED_BITS: u32 = 96;

/// Certifies `||m theta|| > 1/4`; `None` when the enclosure cannot decide.
fn certify_quarter(theta: &RealOracle, m: &BigInt, cfg: &Config) -> Result<Option<PrecisionReal>> {
    let quarter = Dyadic::pow2(-2);
    let res = with_precision(cfg.precision_bits, cfg.precision_cap, |p| {
        let d = theta.eval(p + m.bits() as u32 + 4)?.mul_int(m).dist_to_int();
        if d.mig() > quarter {
            Ok(Some(Some(d)))
        } else if d.mag() <= quarter {
            Ok(Some(None))
        } else {
            Ok(None)
        }
    });
    match res {
        Ok(v) => Ok(v),
        Err(Error::PrecisionInsufficient { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Smallest `N <= bound` with certified `||N n theta|| > 1/4`, if any.
///
/// The fractional part of `n theta` is held as a 96-bit fixed-point number
/// and multiples are scanned with wrapping arithmetic; candidates clear of
/// `1/4` by more than the accumulated rounding are certified with intervals.
pub fn scaling_witness_at(theta: &RealOracle, n: &BigInt, bound: u64, cfg: &Config) -> Result<Option<(u64, PrecisionReal)>> {
    if n.is_zero() {
        return Ok(None);
    }
    let x = theta.eval(FIXED_BITS + n.bits() as u32 + 8)?.mul_int(n);
    let mid = x.mid();
    let frac = mid.to_rational() - num_rational::BigRational::from_integer(mid.floor());
    let scaled = (frac * num_rational::BigRational::from_integer(BigInt::from(1u8) << FIXED_BITS)).floor().to_integer();
    let f = scaled.to_u128().unwrap_or(0);
    let mask: u128 = (1u128 << FIXED_BITS) - 1;
    let quarter: u128 = 1u128 << (FIXED_BITS - 2);
    // per-multiple drift of the fixed-point value, in units of 2^-96
    let drift = 4u128;
    for k in 1..=bound {
        let y = f.wrapping_mul(k as u128) & mask;
        let dist = y.min((1u128 << FIXED_BITS) - y);
        let slack = drift * k as u128 + 2;
        if dist + slack <= quarter {
            continue;
        }
        if let Some(d) = certify_quarter(theta, &(n * k), cfg)? {
            return Ok(Some((k, d)));
        }
    }
    Ok(None)
}

/// For each entry, the smallest multiplier `N <= witness_search_bound`
/// with `||N n_i theta|| > 1/4`. Fails at the first index without one.
pub fn scaling_witness(theta: &RealOracle, seq: &ApproxSequence, cfg: &Config) -> Result<Vec<ScalingWitness>> {
    if theta.as_rational().is_some() {
        return Err(Error::RationalTheta);
    }
    let bound = cfg.witness_search_bound;
    let found = par::map_range(Exec::from_flag(cfg.parallel), seq.len(), |i| scaling_witness_at(theta, &seq.entries[i], bound, cfg));
    let mut out = Vec::with_capacity(seq.len());
    for (i, r) in found.into_iter().enumerate() {
        match r? {
            Some((multiplier, distance)) => out.push(ScalingWitness { index: i, entry: seq.entries[i].clone(), multiplier, distance }),
            None => return Err(Error::WitnessNotFound { index: i, bound }),
        }
    }
    Ok(out)
}

/// Standard part estimate of the fractional parts of `theta n_i` on the circle.
pub fn circle_part(theta: &RealOracle, seq: &ApproxSequence, cfg: &Config) -> Result<StdVerdict> {
    if seq.is_empty() {
        return Err(Error::InvalidInput("sequence is empty".into()));
    }
    let prec = cfg.precision_bits;
    let values = seq
        .entries
        .iter()
        .map(|n| {
            let x = theta.eval(prec + n.bits() as u32 + 4)?.mul_int(n);
            let fl = x.mid().floor();
            Ok(x.sub(&PrecisionReal::from_int(&fl)).round_out(prec + 8))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(std_estimate(&values, Topology::Circle, cfg.cluster_density, cfg.cluster_gap))
}
