use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::sequence::ApproxSequence;
use super::{log2_abs, NumeratorConstraint};
use crate::config::{f64_to_rational, Config};
use crate::error::{Error, Result};
use crate::numeric::{compare_abs, nearest_integer, round_half_even, with_precision, Dyadic, PrecisionReal, RealOracle};
use crate::par::{self, Exec};
use crate::serial;

/// Least-squares fit of `log2 |eps_i| ~ log2 c - lambda i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub c: f64,
    pub lambda: f64,
    pub r2: f64,
    /// `lambda >= lambda_min` and `r2 >= r2_min`.
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorProfile {
    pub epsilons: Vec<PrecisionReal>,
    pub fit: Option<DecayFit>,
    pub precision_bits: u32,
}

impl ErrorProfile {
    /// The fitted rate, present only for an accepted fit.
    pub fn lambda(&self) -> Option<f64> {
        self.fit.as_ref().filter(|f| f.accepted).map(|f| f.lambda)
    }
}

/// Fits the decay of the upper bounds `|eps_i|`; values below `2^-floor_bits`
/// are clamped there. Needs at least three points.
pub fn decay_fit(eps: &[PrecisionReal], floor_bits: u32, cfg: &Config) -> Option<DecayFit> {
    let n = eps.len();
    if n < 3 {
        return None;
    }
    let floor = -(floor_bits as f64);
    let ys: Vec<f64> = eps.iter().map(|e| log2_abs(&e.mag()).max(floor)).collect();
    let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    let lambda = -slope;
    Some(DecayFit { c: intercept.exp2(), lambda, r2, accepted: lambda >= cfg.lambda_min && r2 >= cfg.r2_min })
}

/// `eps_i = n_i theta - n_i^perp` with the sequence's own duals.
pub fn error_term(theta: &RealOracle, seq: &ApproxSequence, cfg: &Config) -> Result<ErrorProfile> {
    let prec = cfg.precision_bits;
    let eps = par::map(Exec::from_flag(cfg.parallel), &crate::dagroups::pair_form(seq), |(n, d)| {
        Ok(theta.eval(prec + n.bits() as u32 + 4)?.mul_int(n).sub(&PrecisionReal::from_int(d)).round_out(prec + 8))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let fit = decay_fit(&eps, prec, cfg);
    Ok(ErrorProfile { epsilons: eps, fit, precision_bits: prec })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificationBasis {
    /// Theta is rational and every error vanishes exactly.
    ExactRational,
    /// Every error is exactly zero.
    ExactZero,
    /// The sequence's decay certificate holds at every index.
    DecayCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MembershipStatus {
    CertifiedMember { basis: CertificationBasis },
    EmpiricalMember { fit_accepted: bool },
    NotMember { witness_index: usize, error: PrecisionReal, reason: String },
    PrecisionInsufficient { bits: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipVerdict {
    #[serde(flatten)]
    pub status: MembershipStatus,
    pub tolerance: f64,
    pub lambda: Option<f64>,
    pub r2: Option<f64>,
    pub constraint: NumeratorConstraint,
    /// Admissible duals, reported for members.
    #[serde(serialize_with = "serial::opt_rational_vec")]
    pub duals: Option<Vec<BigRational>>,
    pub certificate_lambda: Option<f64>,
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self.status, MembershipStatus::CertifiedMember { .. } | MembershipStatus::EmpiricalMember { .. })
    }

    pub fn is_certified(&self) -> bool {
        matches!(self.status, MembershipStatus::CertifiedMember { .. })
    }
}

/// Nearest admissible dual to `n theta` and the error, or `None` when the
/// enclosure cannot separate two candidates.
fn constrained_error(theta: &RealOracle, n: &BigInt, step: &BigRational, prec: u32) -> Result<Option<(BigRational, PrecisionReal)>> {
    let extra = n.bits() as u32 + step.numer().bits() as u32 + step.denom().bits() as u32 + 8;
    let x = theta.eval(prec + extra)?.mul_int(n).mul_rational(&step.recip(), prec + extra);
    match nearest_integer(&x) {
        Ok((d, r)) => Ok(Some((BigRational::from_integer(d) * step, r.mul_rational(step, prec + extra).round_out(prec + 8)))),
        Err(Error::PrecisionInsufficient { .. }) | Err(Error::InvalidInput(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Decides whether the sequence is a member of `*Z(theta)` under a numerator constraint.
///
/// Rational theta is decided exactly. Otherwise, in order: all errors
/// exactly zero, or a construction certificate verified at every index,
/// gives a certified member; an accepted decay fit with final `|eps| < tol`
/// gives an empirical member; the first index with certified `|eps| > tol`
/// is a non-membership witness; anything else is an empirical member whose
/// fit was not accepted. Undecidable comparisons escalate precision, and
/// exhausting the cap yields `PrecisionInsufficient`.
pub fn membership(theta: &RealOracle, seq: &ApproxSequence, constraint: NumeratorConstraint, cfg: &Config) -> Result<MembershipVerdict> {
    if seq.is_empty() {
        return Err(Error::InvalidInput("sequence is empty".into()));
    }
    let step = constraint.dual_step();
    let cert = seq.provenance.certificate();
    let mut verdict = MembershipVerdict {
        status: MembershipStatus::PrecisionInsufficient { bits: cfg.precision_cap },
        tolerance: cfg.tolerance,
        lambda: None,
        r2: None,
        constraint,
        duals: None,
        certificate_lambda: None,
    };
    if let Some(bad) = seq.entries.iter().position(|n| !constraint.admits_entry(n)) {
        verdict.status = MembershipStatus::NotMember {
            witness_index: bad,
            error: PrecisionReal::zero(),
            reason: format!("entry outside the ideal required by {constraint}"),
        };
        return Ok(verdict);
    }
    if let Some(r) = theta.as_rational() {
        let mut duals = Vec::with_capacity(seq.len());
        for (i, n) in seq.entries.iter().enumerate() {
            let x = &r * BigRational::from_integer(n.clone()) / &step;
            let d = BigRational::from_integer(round_half_even(&x)) * &step;
            let e = &r * BigRational::from_integer(n.clone()) - &d;
            if !e.is_zero() {
                verdict.status = MembershipStatus::NotMember {
                    witness_index: i,
                    error: PrecisionReal::from_rational(&e, cfg.precision_bits),
                    reason: "nonzero exact error for rational theta".into(),
                };
                return Ok(verdict);
            }
            duals.push(d);
        }
        verdict.status = MembershipStatus::CertifiedMember { basis: CertificationBasis::ExactRational };
        verdict.duals = Some(duals);
        return Ok(verdict);
    }

    let tol = Dyadic::from_rational_floor(&f64_to_rational(cfg.tolerance), 1100);
    let exec = Exec::from_flag(cfg.parallel);
    let decided = with_precision(cfg.precision_bits, cfg.precision_cap, |prec| {
        let pairs = par::map(exec, &seq.entries, |n| constrained_error(theta, n, &step, prec)).into_iter().collect::<Result<Option<Vec<_>>>>()?;
        let Some(pairs) = pairs else { return Ok(None) };
        let (duals, eps): (Vec<BigRational>, Vec<PrecisionReal>) = pairs.into_iter().unzip();
        let fit = decay_fit(&eps, prec, cfg);
        let status = decide(&eps, cert, fit.as_ref(), &tol);
        Ok(status.map(|s| (s, duals, fit)))
    });
    match decided {
        Ok((status, duals, fit)) => {
            if !matches!(status, MembershipStatus::NotMember { .. }) {
                verdict.duals = Some(duals);
            }
            if let Some(f) = fit.filter(|f| f.accepted) {
                verdict.lambda = Some(f.lambda);
                verdict.r2 = Some(f.r2);
            }
            if matches!(status, MembershipStatus::CertifiedMember { basis: CertificationBasis::DecayCertificate }) {
                verdict.certificate_lambda = cert.map(|c| c.lambda);
            }
            verdict.status = status;
            Ok(verdict)
        }
        Err(Error::PrecisionInsufficient { bits }) => {
            verdict.status = MembershipStatus::PrecisionInsufficient { bits };
            Ok(verdict)
        }
        Err(e) => Err(e),
    }
}

/// The decision ladder of [`membership`] on error enclosures (or enclosures of error norms).
pub(crate) fn decide(eps: &[PrecisionReal], cert: Option<&super::DecayCertificate>, fit: Option<&DecayFit>, tol: &Dyadic) -> Option<MembershipStatus> {
    if eps.iter().all(|e| e.is_point() && e.lo().is_zero()) {
        return Some(MembershipStatus::CertifiedMember { basis: CertificationBasis::ExactZero });
    }
    if let Some(c) = cert {
        let mut holds = true;
        for (i, e) in eps.iter().enumerate() {
            let bound = c.bound(i);
            if e.mag().to_rational() <= bound {
                continue;
            }
            if e.mig().to_rational() > bound {
                holds = false;
                break;
            }
            return None;
        }
        if holds {
            return Some(MembershipStatus::CertifiedMember { basis: CertificationBasis::DecayCertificate });
        }
    }
    let last = compare_abs(eps.last().unwrap(), tol);
    if fit.is_some_and(|f| f.accepted) {
        match last {
            Some(false) => return Some(MembershipStatus::EmpiricalMember { fit_accepted: true }),
            None => return None,
            Some(true) => {}
        }
    }
    let mut undecided = false;
    for (i, e) in eps.iter().enumerate() {
        match compare_abs(e, tol) {
            Some(true) => return Some(MembershipStatus::NotMember { witness_index: i, error: e.clone(), reason: "certified error above tolerance".into() }),
            None => undecided = true,
            Some(false) => {}
        }
    }
    if undecided {
        None
    } else {
        Some(MembershipStatus::EmpiricalMember { fit_accepted: false })
    }
}
