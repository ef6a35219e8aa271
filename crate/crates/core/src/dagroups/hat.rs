use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::sequence::ApproxSequence;
use super::{factorial, lcm_upto, DecayCertificate, Provenance};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::inhomogeneous_approx;
use crate::numeric::{PrecisionReal, RealOracle};
use crate::serial;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HatStage {
    pub stage: usize,
    /// The multiplier `m`, a multiple of `stage!` and of every integer up to the stage count.
    #[serde(serialize_with = "serial::big")]
    pub modulus: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub n: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub entry: BigInt,
    /// Target for `||theta/m + n theta||`.
    #[serde(serialize_with = "serial::rational")]
    pub target: BigRational,
    /// Enclosure of the signed distance `theta/m + n theta - p`.
    pub error: PrecisionReal,
    /// `entry = 1 mod j` for every `j <= stage`, checked exactly.
    pub residues_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HatElement {
    pub stages: Vec<HatStage>,
    pub sequence: ApproxSequence,
}

/// Builds the hat generator with `k` stages.
///
/// Stage `s` uses `m = lcm(s!, 1, ..., k)` and finds `n` with
/// `||theta/m + n theta|| < 1 / (m^2 2^(b s))`, `b = hat_decay_bits`, by
/// inhomogeneous approximation. The entry `1 + m n` then satisfies
/// `||q (1 + m n) theta|| < q 2^(-b s) / m <= k 2^(-b s)` for every
/// `q <= k`, which is the attached certificate.
pub fn hat_element(theta: &RealOracle, k: usize, cfg: &Config) -> Result<HatElement> {
    if k == 0 {
        return Err(Error::InvalidInput("hat generator needs at least one stage".into()));
    }
    if k > cfg.hat_stage_cap {
        return Err(Error::CapExceeded(format!("{k} hat stages requested, cap is {}", cfg.hat_stage_cap)));
    }
    if theta.as_rational().is_some() {
        return Err(Error::RationalTheta);
    }
    let bits = cfg.hat_decay_bits;
    let base_lcm = lcm_upto(k as u64);
    let mut stages = Vec::with_capacity(k);
    for s in 1..=k {
        let m = factorial(s).lcm(&base_lcm);
        let target = BigRational::new(BigInt::one(), &m * &m * (BigInt::one() << (bits as usize * s)));
        let beta = theta.mul_rational(&BigRational::new(BigInt::one(), m.clone()));
        let cap = (target.denom() << 8usize).clone();
        let found = inhomogeneous_approx(theta, &beta, &target, &cap, cfg).map_err(|e| match e {
            Error::SearchExhausted { bound, .. } => Error::SearchExhausted { stage: s, bound },
            other => other,
        })?;
        let entry = BigInt::one() + &m * &found.n;
        let residues_ok = (1..=s as u64).all(|j| (&entry - 1u8).is_multiple_of(&BigInt::from(j)));
        stages.push(HatStage { stage: s, modulus: m, n: found.n, entry, target, error: found.error, residues_ok });
    }
    let entries: Vec<BigInt> = stages.iter().map(|st| st.entry.clone()).collect();
    let mut sequence = ApproxSequence::bind(theta, entries, cfg)?;
    let base = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
    let c = BigRational::from_integer(BigInt::from(k as u64)) * &base;
    sequence.provenance = Provenance::Constructed { method: "hat".into(), certificate: Some(DecayCertificate::new(c, base)) };
    debug_assert!(stages.iter().all(|st| st.error.mag().to_rational().abs() < st.target));
    Ok(HatElement { stages, sequence })
}
