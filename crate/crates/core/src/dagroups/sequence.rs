use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::convergents::convergents;
use super::{DecayCertificate, Provenance};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::{nearest_integer_scaled, RealOracle};
use crate::par::{self, Exec};
use crate::serial;

/// A finite prefix `(n_i)` together with its duals `n_i^perp`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxSequence {
    /// Literal of the theta the duals refer to.
    pub theta: String,
    #[serde(serialize_with = "serial::big_vec")]
    pub entries: Vec<BigInt>,
    #[serde(serialize_with = "serial::big_vec")]
    pub duals: Vec<BigInt>,
    pub provenance: Provenance,
}

impl ApproxSequence {
    /// Binds user-supplied entries to theta; each dual is the nearest integer to `n_i theta`.
    pub fn bind(theta: &RealOracle, entries: Vec<BigInt>, cfg: &Config) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("sequence is empty".into()));
        }
        let duals =
            par::map(Exec::from_flag(cfg.parallel), &entries, |n| nearest_integer_scaled(theta, n, cfg.precision_bits, cfg.precision_cap).map(|(d, _)| d))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
        Ok(ApproxSequence { theta: theta.literal().to_string(), entries, duals, provenance: Provenance::UserSupplied })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The member of `*Z(theta)` formed by convergent denominators.
///
/// When the second partial quotient is 1 the first two denominators are both
/// 1 and only the second is kept, so every dual is the nearest integer. The
/// convergent bound `|q_j theta - p_j| < 1/q_(j+1)` with `q_j >= F_(j+1)`
/// gives the certificate `|eps_i| <= 0.6181^i`. For rational theta = a/b
/// the entries are `b, 2b, 3b, ...` with exact zero errors.
pub fn member_from_convergents(theta: &RealOracle, len: usize, cfg: &Config) -> Result<ApproxSequence> {
    if len == 0 {
        return Err(Error::InvalidInput("sequence length must be positive".into()));
    }
    if let Some(r) = theta.as_rational() {
        let (a, b) = (r.numer().clone(), r.denom().clone());
        let entries = (1..=len as u64).map(|i| &b * i).collect();
        let duals = (1..=len as u64).map(|i| &a * i).collect();
        let cert = DecayCertificate::new(BigRational::zero(), BigRational::new(1.into(), 2.into()));
        return Ok(ApproxSequence {
            theta: theta.literal().to_string(),
            entries,
            duals,
            provenance: Provenance::Constructed { method: "rational_multiples".into(), certificate: Some(cert) },
        });
    }
    let c = convergents(theta, len + 1, cfg)?;
    let skip = usize::from(c.pairs[0].q == c.pairs[1].q);
    let pairs = &c.pairs[skip..skip + len];
    Ok(ApproxSequence {
        theta: theta.literal().to_string(),
        entries: pairs.iter().map(|c| c.q.clone()).collect(),
        duals: pairs.iter().map(|c| c.p.clone()).collect(),
        provenance: Provenance::Constructed {
            method: "convergents".into(),
            certificate: Some(DecayCertificate::new(BigRational::one(), BigRational::new(6181.into(), 10000.into()))),
        },
    })
}

/// `c1 a + c2 b`, entrywise on entries and duals.
pub fn combine(a: &ApproxSequence, b: &ApproxSequence, c1: &BigInt, c2: &BigInt) -> Result<ApproxSequence> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    if a.theta != b.theta {
        return Err(Error::InvalidInput(format!("sequences refer to different theta: {} vs {}", a.theta, b.theta)));
    }
    let lin = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> { x.iter().zip(y).map(|(u, v)| c1 * u + c2 * v).collect() };
    let certificate = match (a.provenance.certificate(), b.provenance.certificate()) {
        (Some(ca), Some(cb)) => {
            let c = BigRational::from_integer(c1.abs()) * &ca.c + BigRational::from_integer(c2.abs()) * &cb.c;
            let base = std::cmp::max(&ca.base, &cb.base).clone();
            Some(DecayCertificate::new(c, base))
        }
        _ => None,
    };
    let both_user = a.provenance == Provenance::UserSupplied && b.provenance == Provenance::UserSupplied;
    let provenance = if both_user { Provenance::UserSupplied } else { Provenance::Constructed { method: "combine".into(), certificate } };
    Ok(ApproxSequence { theta: a.theta.clone(), entries: lin(&a.entries, &b.entries), duals: lin(&a.duals, &b.duals), provenance })
}

/// The dual sequence for `1/theta`: entries and duals swap roles.
///
/// Since `eps' = n^perp / theta - n = -eps / theta`, a certificate `c` for
/// theta becomes `c / |theta|`, with `1/|theta|` bounded above exactly.
pub fn dual(theta: &RealOracle, seq: &ApproxSequence, cfg: &Config) -> Result<(RealOracle, ApproxSequence)> {
    if theta.sign(cfg.precision_cap)? == 0 {
        return Err(Error::ZeroTheta);
    }
    let inv = theta.recip(cfg.precision_cap)?;
    let provenance = match seq.provenance.certificate() {
        Some(cert) => {
            let low = theta.eval(64)?.mig().to_rational();
            let low = if low.is_zero() { theta.eval(cfg.precision_cap)?.mig().to_rational() } else { low };
            if low.is_zero() {
                return Err(Error::ZeroTheta);
            }
            Provenance::Constructed { method: "dual".into(), certificate: Some(DecayCertificate::new(&cert.c / low, cert.base.clone())) }
        }
        None => seq.provenance.clone(),
    };
    let out = ApproxSequence { theta: inv.literal().to_string(), entries: seq.duals.clone(), duals: seq.entries.clone(), provenance };
    Ok((inv, out))
}

/// The pairs `(n_i, n_i^perp)`.
pub fn pair_form(seq: &ApproxSequence) -> Vec<(BigInt, BigInt)> {
    seq.entries.iter().cloned().zip(seq.duals.iter().cloned()).collect()
}
