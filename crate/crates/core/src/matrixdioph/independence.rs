use num_bigint::BigInt;
use serde::Serialize;

use super::RealMatrix;
use crate::config::Config;
use crate::error::Result;
use crate::lattice::{exact_kernel, system_relation, Exclusion, RelationCertificate, RelationStatus};
use crate::numeric::RealOracle;
use crate::serial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IndependenceVerdict {
    Dependent,
    /// Rational matrix with trivial kernel over `Q`.
    Independent,
    IndependentUpTo {
        #[serde(serialize_with = "serial::big")]
        height_bound: BigInt,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceReport {
    #[serde(flatten)]
    pub verdict: IndependenceVerdict,
    pub certificate: RelationCertificate,
    /// Column part `m` of the certificate.
    #[serde(serialize_with = "serial::opt_big_vec")]
    pub columns: Option<Vec<BigInt>>,
    /// Affine part `m^perp` of an inhomogeneous certificate.
    #[serde(serialize_with = "serial::opt_big_vec")]
    pub affine: Option<Vec<BigInt>>,
    /// Full relation lattice when it was computed exactly.
    #[serde(serialize_with = "opt_grid")]
    pub kernel_basis: Option<Vec<Vec<BigInt>>>,
}

fn opt_grid<S: serde::Serializer>(x: &Option<Vec<Vec<BigInt>>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(g) => serial::big_grid(g, s),
        None => s.serialize_none(),
    }
}

/// Equations `sum_j Theta_ij m_j (- m^perp_i) = 0`, one per row.
pub(crate) fn relation_system(theta: &RealMatrix, affine: bool) -> Vec<Vec<RealOracle>> {
    let r = theta.rows();
    (0..r)
        .map(|i| {
            let mut row = theta.row(i).to_vec();
            if affine {
                row.extend((0..r).map(|k| RealOracle::int(if k == i { -1 } else { 0 })));
            }
            row
        })
        .collect()
}

fn report(theta: &RealMatrix, h: &BigInt, affine: bool, cfg: &Config) -> Result<IndependenceReport> {
    let s = theta.cols();
    let system = relation_system(theta, affine);
    let rational = theta.rational_entries().is_some();
    let (verdict, certificate, kernel_basis) = match exact_kernel(&system) {
        Some(kernel) => match kernel.first() {
            Some(m) => (IndependenceVerdict::Dependent, RelationCertificate::exact(m.clone()), Some(kernel)),
            None if rational => (IndependenceVerdict::Independent, RelationCertificate::none(h, None, Exclusion::AllHeights, None), Some(kernel)),
            None => (
                IndependenceVerdict::IndependentUpTo { height_bound: h.clone() },
                RelationCertificate::none(h, None, Exclusion::AllHeights, None),
                Some(kernel),
            ),
        },
        None => {
            let c = system_relation(&system, h, cfg)?;
            let v = if c.found() { IndependenceVerdict::Dependent } else { IndependenceVerdict::IndependentUpTo { height_bound: h.clone() } };
            (v, c, None)
        }
    };
    let (columns, affine_part) = match &certificate.vector {
        Some(m) if affine => (Some(m[..s].to_vec()), Some(m[s..].to_vec())),
        Some(m) => (Some(m.clone()), None),
        None => (None, None),
    };
    Ok(IndependenceReport { verdict, certificate, columns, affine: affine_part, kernel_basis })
}

/// Linear independence of the columns of `Theta` over `Q`: a nonzero
/// integer `m` with `Theta m = 0`, or none up to height `h`.
pub fn homogeneous_independence(theta: &RealMatrix, h: &BigInt, cfg: &Config) -> Result<IndependenceReport> {
    report(theta, h, false, cfg)
}

/// Independence of the columns of `Theta` together with `e_1, ..., e_r`:
/// an integer `(m, m^perp) != 0` with `Theta m = m^perp`, or none up to `h`.
pub fn inhomogeneous_independence(theta: &RealMatrix, h: &BigInt, cfg: &Config) -> Result<IndependenceReport> {
    report(theta, h, true, cfg)
}

impl IndependenceReport {
    pub fn is_dependent(&self) -> bool {
        self.verdict == IndependenceVerdict::Dependent
    }

    pub fn is_exact(&self) -> bool {
        self.certificate.status == RelationStatus::ExactVerified || self.kernel_basis.is_some()
    }

    /// Rank of the relation lattice when known exactly.
    pub fn kernel_rank(&self) -> Option<usize> {
        self.kernel_basis.as_ref().map(|k| k.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn h() -> BigInt {
        BigInt::from(10_000)
    }

    #[test]
    fn homogeneous_examples() {
        let cfg = Config::default();
        let a = homogeneous_independence(&RealMatrix::parse(r#"["sqrt(2)", "2*sqrt(2)"]"#).unwrap(), &h(), &cfg).unwrap();
        assert!(a.is_dependent());
        assert_eq!(a.columns, Some(big(&[2, -1])));
        let b = homogeneous_independence(&RealMatrix::parse(r#"["sqrt(2)", "sqrt(3)"]"#).unwrap(), &h(), &cfg).unwrap();
        assert_eq!(b.verdict, IndependenceVerdict::IndependentUpTo { height_bound: h() });
        let c = homogeneous_independence(&RealMatrix::parse(r#"[["1", "0"], ["0", "1"]]"#).unwrap(), &h(), &cfg).unwrap();
        assert_eq!(c.verdict, IndependenceVerdict::Independent);
    }

    #[test]
    fn inhomogeneous_examples() {
        let cfg = Config::default();
        let a = inhomogeneous_independence(&RealMatrix::parse(r#"["sqrt(2)", "1-sqrt(2)"]"#).unwrap(), &h(), &cfg).unwrap();
        assert!(a.is_dependent() && a.certificate.is_exact());
        assert_eq!((a.columns.unwrap(), a.affine.unwrap()), (big(&[1, 1]), big(&[1])));
        let b = inhomogeneous_independence(&RealMatrix::parse(r#"["1/2"]"#).unwrap(), &h(), &cfg).unwrap();
        assert_eq!((b.columns.unwrap(), b.affine.unwrap()), (big(&[2]), big(&[1])));
        let c = inhomogeneous_independence(&RealMatrix::parse(r#"["phi"]"#).unwrap(), &h(), &cfg).unwrap();
        assert!(!c.is_dependent());
    }

    #[test]
    fn transcendental_entries_use_the_lattice() {
        let cfg = Config::default();
        let a = homogeneous_independence(&RealMatrix::parse(r#"["pi", "2*pi+1", "1"]"#).unwrap(), &h(), &cfg).unwrap();
        assert!(a.is_dependent());
        assert_eq!(a.columns, Some(big(&[2, -1, 1])));
        let b = inhomogeneous_independence(&RealMatrix::parse(r#"["pi", "e"]"#).unwrap(), &BigInt::from(100), &cfg).unwrap();
        assert!(!b.is_dependent());
    }
}
