//! Bounded decision procedures for linear dependence over a number field
//! (`LD^K`) and algebraic dependence (`AD`), graph pullbacks along `exp`,
//! and consistency harnesses for the classical transcendence statements.
//!
//! A relation is reported as holding only with a verified certificate.
//! Independence is never claimed: negative results are `NotDetectedUpTo`
//! the stated bounds.

mod harness;
mod pullback;

pub use harness::{conjecture_harness, curated_suite, Clause, Conjecture, CuratedInstance, Evidence, HarnessBounds, HarnessReport, Outcome};
pub use pullback::{graph_pullback, GraphMap, Projection, ProjectionReport, PullbackReport};

use num_bigint::BigInt;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::{integer_relation, RelationCertificate, RelationStatus};
use crate::numeric::exact::poly_is_zero;
use crate::numeric::{Exact, PrecisionReal, RealOracle};
use crate::numfield::{FieldElement, NumberField};
use crate::poly::IntPolynomial;
use crate::polyapprox::{algebraic_dependence, minimal_polynomial, poly_error};
use crate::serial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Holds,
    NotDetectedUpTo,
}

/// Outcome of an `LD^K` or `AD` check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationVerdict {
    /// `LD^Q`, `LD^Q(sqrt 2)`, ... or `AD`.
    pub relation: String,
    pub status: VerdictStatus,
    /// Field coefficients of a linear relation, one per number.
    pub coefficients: Option<Vec<String>>,
    /// The vanishing polynomial of an algebraic relation.
    pub polynomial: Option<String>,
    /// How a positive AD verdict was obtained: `algebraic_member` or `search`.
    pub via: Option<String>,
    pub certificate: RelationCertificate,
    #[serde(serialize_with = "serial::big")]
    pub height_bound: BigInt,
    pub degree_bound: Option<u32>,
}

impl RelationVerdict {
    pub fn holds(&self) -> bool {
        self.status == VerdictStatus::Holds
    }
}

fn status_of(cert: &RelationCertificate) -> VerdictStatus {
    if cert.found() {
        VerdictStatus::Holds
    } else {
        VerdictStatus::NotDetectedUpTo
    }
}

/// Linear dependence of `thetas` over the integers of `k`.
///
/// The search runs over `{alpha_j theta_i}` with `alpha_j` the integral
/// basis embedded at the first place; an integer relation there regroups
/// into coefficients `sum_j m_ij alpha_j` of the field.
pub fn ld_check(thetas: &[RealOracle], k: &NumberField, h: &BigInt, cfg: &Config) -> Result<RelationVerdict> {
    if thetas.len() < 2 {
        return Err(Error::InvalidInput("linear dependence needs at least two numbers".into()));
    }
    let d = k.degree();
    let basis = &k.embedding_matrix()[0];
    let xs: Vec<RealOracle> = thetas.iter().flat_map(|t| basis.iter().map(move |a| a.mul(t))).collect();
    let cert = integer_relation(&xs, h, cfg)?;
    let coefficients = cert.vector.as_ref().map(|v| v.chunks(d).map(|c| k.format_element(&FieldElement::from_ints(c))).collect());
    Ok(RelationVerdict {
        relation: format!("LD^{}", k.name()),
        status: status_of(&cert),
        coefficients,
        polynomial: None,
        via: None,
        certificate: cert,
        height_bound: h.clone(),
        degree_bound: None,
    })
}

/// Algebraic dependence of `thetas` at total degree at most `dmax`.
///
/// When some entry has an exact algebraic form its minimal polynomial, in
/// that variable alone, is already a certificate.
pub fn ad_check(thetas: &[RealOracle], dmax: u32, h: &BigInt, cfg: &Config) -> Result<RelationVerdict> {
    if thetas.is_empty() {
        return Err(Error::InvalidInput("algebraic dependence needs at least one number".into()));
    }
    let n = thetas.len();
    for (i, t) in thetas.iter().enumerate() {
        if !t.is_algebraic() {
            continue;
        }
        let wide = h.clone().max(BigInt::from(cfg.height_bound));
        let m = minimal_polynomial(t, dmax.max(8), &wide, cfg)?;
        if let (Some(f), true) = (&m.polynomial, m.certificate.is_exact()) {
            let lifted = lift_variable(f, n, i);
            return Ok(RelationVerdict {
                relation: "AD".into(),
                status: VerdictStatus::Holds,
                coefficients: None,
                polynomial: Some(lifted.to_string()),
                via: Some("algebraic_member".into()),
                certificate: m.certificate,
                height_bound: h.clone(),
                degree_bound: Some(dmax),
            });
        }
    }
    let r = algebraic_dependence(thetas, dmax, h, true, cfg)?;
    Ok(RelationVerdict {
        relation: "AD".into(),
        status: status_of(&r.certificate),
        coefficients: None,
        polynomial: r.display,
        via: r.polynomial.as_ref().map(|_| "search".into()),
        certificate: r.certificate,
        height_bound: h.clone(),
        degree_bound: Some(dmax),
    })
}

/// A univariate polynomial placed in variable `i` of `n`.
fn lift_variable(f: &IntPolynomial, n: usize, i: usize) -> IntPolynomial {
    IntPolynomial::from_terms(
        n,
        f.terms().map(|(e, c)| {
            let mut x = vec![0; n];
            x[i] = e[0];
            (x, c.clone())
        }),
    )
}

/// The multiplicative relation `prod_{m_i > 0} X_i^m_i - prod_{m_i < 0} X_i^-m_i`
/// satisfied by `exp(theta)` whenever `sum m_i theta_i = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpBinomial {
    #[serde(serialize_with = "serial::big_vec")]
    pub relation: Vec<BigInt>,
    pub polynomial: String,
    /// Verified symbolically from the exact forms of `exp(theta_i)`.
    pub exact: bool,
    /// Enclosure of the polynomial at `exp(theta)`.
    pub residual: PrecisionReal,
    pub verified: bool,
}

pub fn exp_binomial(thetas: &[RealOracle], m: &[BigInt], prec: u32) -> Result<ExpBinomial> {
    if thetas.len() != m.len() {
        return Err(Error::DimensionMismatch(format!("{} numbers for a relation of length {}", thetas.len(), m.len())));
    }
    let n = m.len();
    let side = |positive: bool| -> Vec<u32> {
        m.iter()
            .map(|c| {
                let k = if positive { c.clone() } else { -c };
                u32::try_from(k).unwrap_or(0)
            })
            .collect()
    };
    let f = IntPolynomial::from_terms(n, [(side(true), BigInt::from(1)), (side(false), BigInt::from(-1))]);
    let exps: Vec<RealOracle> = thetas.iter().map(|t| t.exp()).collect();
    let forms: Vec<Option<Exact>> = exps.iter().map(|x| x.exact().cloned()).collect();
    let exact = poly_is_zero(&f, &forms) == Some(true);
    let residual = poly_error(&exps, &f, prec)?;
    Ok(ExpBinomial { relation: m.to_vec(), polynomial: f.normalized().to_string(), exact, verified: residual.contains_zero(), residual })
}

/// `exp_binomial` for a positive LD verdict carrying an integer relation.
pub fn ld_exp_certificate(thetas: &[RealOracle], ld: &RelationVerdict, prec: u32) -> Result<Option<ExpBinomial>> {
    match (&ld.certificate.vector, &ld.certificate.status) {
        (Some(v), RelationStatus::ExactVerified | RelationStatus::Empirical { .. }) if ld.relation == "LD^Q" => exp_binomial(thetas, v, prec).map(Some),
        _ => Ok(None),
    }
}
