//! Approximation groups of real matrices: vector membership, the
//! homogeneous and inhomogeneous independence oracles, and the closure of
//! the orbit `n -> Theta n mod 1` in the torus.

mod closure;
mod independence;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::config::{f64_to_rational, Config};
use crate::dagroups::{decay_fit, decide, CertificationBasis, MembershipStatus, MembershipVerdict, NumeratorConstraint};
use crate::error::{Error, Result};
use crate::numeric::exact::linear_is_zero;
use crate::numeric::parse::parse_oracle_grid;
use crate::numeric::{nearest_integer, with_precision, Dyadic, Exact, PrecisionReal, RealOracle};
use crate::par::{self, Exec};
use crate::serial;

pub use closure::{torus_closure, ClosureType, OrbitCheck, TorusClosure};
pub use independence::{homogeneous_independence, inhomogeneous_independence, IndependenceReport, IndependenceVerdict};

/// An `r x s` matrix of real oracles.
#[derive(Clone, Debug)]
pub struct RealMatrix {
    entries: Vec<Vec<RealOracle>>,
}

impl RealMatrix {
    pub fn new(entries: Vec<Vec<RealOracle>>) -> Result<Self> {
        let s = entries.first().map_or(0, |r| r.len());
        if entries.is_empty() || s == 0 {
            return Err(Error::InvalidInput("matrix needs at least one row and one column".into()));
        }
        if entries.iter().any(|r| r.len() != s) {
            return Err(Error::DimensionMismatch("matrix rows have different lengths".into()));
        }
        Ok(RealMatrix { entries })
    }

    /// Parses a JSON grid of oracle literals; a flat list is one row.
    pub fn parse(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix literal: {e}")))?;
        let flat = v.as_array().is_some_and(|a| a.iter().all(|x| !x.is_array()));
        let grid = parse_oracle_grid(text)?;
        if flat {
            let row: Vec<RealOracle> = grid.into_iter().flatten().collect();
            return Self::new(vec![row]);
        }
        Self::new(grid)
    }

    pub fn from_rationals(rows: &[Vec<BigRational>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|x| RealOracle::rational(x.clone())).collect()).collect())
    }

    /// Number of rows `r`.
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    /// Number of columns `s`.
    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &RealOracle {
        &self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[RealOracle] {
        &self.entries[i]
    }

    pub fn grid(&self) -> &[Vec<RealOracle>] {
        &self.entries
    }

    pub fn transpose(&self) -> RealMatrix {
        RealMatrix { entries: (0..self.cols()).map(|j| (0..self.rows()).map(|i| self.entries[i][j].clone()).collect()).collect() }
    }

    /// All entries as exact rationals, when they are.
    pub fn rational_entries(&self) -> Option<Vec<Vec<BigRational>>> {
        self.entries.iter().map(|r| r.iter().map(|x| x.as_rational()).collect()).collect()
    }

    pub fn literals(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(|x| x.literal().to_string()).collect()).collect()
    }

    /// Enclosure of `(Theta n)_i`.
    pub fn apply_row(&self, i: usize, n: &[BigInt], prec: u32) -> Result<PrecisionReal> {
        crate::lattice::combination(&self.entries[i], n, prec)
    }
}

impl Serialize for RealMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View {
            r: usize,
            s: usize,
            entries: Vec<Vec<String>>,
        }
        View { r: self.rows(), s: self.cols(), entries: self.literals() }.serialize(s)
    }
}

/// Integer `s`-vectors `n_i` with their integer `r`-vector duals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorApproxSequence {
    #[serde(serialize_with = "serial::big_grid")]
    pub entries: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "serial::big_grid")]
    pub duals: Vec<Vec<BigInt>>,
}

impl VectorApproxSequence {
    /// Binds entries to `Theta`: duals are the nearest integer vectors to
    /// `Theta n_i`, or zero when `homogeneous`.
    pub fn bind(theta: &RealMatrix, entries: Vec<Vec<BigInt>>, homogeneous: bool, cfg: &Config) -> Result<Self> {
        check_dims(theta, &entries)?;
        let duals = entries
            .iter()
            .map(|n| {
                if homogeneous {
                    return Ok(vec![BigInt::zero(); theta.rows()]);
                }
                (0..theta.rows()).map(|i| nearest_row(theta, i, n, cfg).map(|(d, _)| d)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorApproxSequence { entries, duals })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_dims(theta: &RealMatrix, entries: &[Vec<BigInt>]) -> Result<()> {
    if entries.is_empty() {
        return Err(Error::InvalidInput("sequence is empty".into()));
    }
    if let Some(bad) = entries.iter().find(|n| n.len() != theta.cols()) {
        return Err(Error::DimensionMismatch(format!("entry of length {} for a matrix with {} columns", bad.len(), theta.cols())));
    }
    Ok(())
}

fn nearest_row(theta: &RealMatrix, i: usize, n: &[BigInt], cfg: &Config) -> Result<(BigInt, PrecisionReal)> {
    with_precision(cfg.precision_bits, cfg.precision_cap, |p| match nearest_integer(&theta.apply_row(i, n, p)?) {
        Ok(v) => Ok(Some(v)),
        Err(Error::PrecisionInsufficient { .. }) | Err(Error::InvalidInput(_)) => Ok(None),
        Err(e) => Err(e),
    })
}

/// `sum_j Theta_ij n_j - d = 0` decided from exact forms, when available.
fn row_is_exactly(theta: &RealMatrix, i: usize, n: &[BigInt], d: &BigInt) -> Option<bool> {
    let one = Exact::rational(BigRational::from_integer(1.into()));
    let mut forms: Vec<&Exact> = theta.row(i).iter().map(|x| x.exact()).collect::<Option<_>>()?;
    forms.push(&one);
    let mut m = n.to_vec();
    m.push(-d);
    linear_is_zero(&forms, &m)
}

/// Membership of a vector sequence in the (homogeneous or inhomogeneous)
/// approximation group of `Theta`, with `eps_i = Theta n_i - n_i^perp`
/// measured in the max norm. The decision ladder is the scalar one; an
/// exact zero error at every index is certified symbolically.
pub fn vector_membership(theta: &RealMatrix, seq: &VectorApproxSequence, homogeneous: bool, cfg: &Config) -> Result<MembershipVerdict> {
    check_dims(theta, &seq.entries)?;
    let r = theta.rows();
    let mut verdict = MembershipVerdict {
        status: MembershipStatus::PrecisionInsufficient { bits: cfg.precision_cap },
        tolerance: cfg.tolerance,
        lambda: None,
        r2: None,
        constraint: NumeratorConstraint::Integers,
        duals: None,
        certificate_lambda: None,
    };
    let exec = Exec::from_flag(cfg.parallel);
    let duals: Vec<Vec<BigInt>> = par::map(exec, &seq.entries, |n| {
        (0..r).map(|i| if homogeneous { Ok(BigInt::zero()) } else { nearest_row(theta, i, n, cfg).map(|(d, _)| d) }).collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<_>>()
    .or_else(|e| match e {
        Error::PrecisionInsufficient { .. } => Ok(Vec::new()),
        e => Err(e),
    })?;
    if duals.is_empty() {
        return Ok(verdict);
    }
    let flat_duals = || Some(duals.iter().flatten().map(|d| BigRational::from_integer(d.clone())).collect());
    let exactly_zero = seq.entries.iter().zip(&duals).all(|(n, d)| (0..r).all(|i| row_is_exactly(theta, i, n, &d[i]) == Some(true)));
    if exactly_zero {
        verdict.status = MembershipStatus::CertifiedMember { basis: CertificationBasis::ExactZero };
        verdict.duals = flat_duals();
        return Ok(verdict);
    }
    let tol = Dyadic::from_rational_floor(&f64_to_rational(cfg.tolerance), 1100);
    let decided = with_precision(cfg.precision_bits, cfg.precision_cap, |prec| {
        let norms = seq
            .entries
            .iter()
            .zip(&duals)
            .map(|(n, d)| {
                let comps = (0..r).map(|i| Ok(theta.apply_row(i, n, prec)?.sub(&PrecisionReal::from_int(&d[i])))).collect::<Result<Vec<_>>>()?;
                let lo = comps.iter().map(|c| c.mig()).max().unwrap();
                let hi = comps.iter().map(|c| c.mag()).max().unwrap();
                Ok(PrecisionReal::new(lo, hi).round_out(prec + 8))
            })
            .collect::<Result<Vec<_>>>()?;
        let fit = decay_fit(&norms, prec, cfg);
        Ok(decide(&norms, None, fit.as_ref(), &tol).map(|s| (s, fit)))
    });
    match decided {
        Ok((status, fit)) => {
            if !matches!(status, MembershipStatus::NotMember { .. }) {
                verdict.duals = flat_duals();
            }
            if let Some(f) = fit.filter(|f| f.accepted) {
                verdict.lambda = Some(f.lambda);
                verdict.r2 = Some(f.r2);
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::simultaneous_approx;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn parse_shapes() {
        let row = RealMatrix::parse(r#"["sqrt(2)", "2*sqrt(2)"]"#).unwrap();
        assert_eq!((row.rows(), row.cols()), (1, 2));
        let col = RealMatrix::parse(r#"[["sqrt(2)"], ["sqrt(3)"]]"#).unwrap();
        assert_eq!((col.rows(), col.cols()), (2, 1));
        assert!(RealMatrix::parse(r#"[["1", "2"], ["3"]]"#).is_err());
    }

    #[test]
    fn homogeneous_exact_zero() {
        let cfg = Config::default();
        let th = RealMatrix::parse(r#"["sqrt(2)", "2*sqrt(2)"]"#).unwrap();
        let entries = (1..=5).map(|i| v(&[2 * i, -i])).collect();
        let seq = VectorApproxSequence::bind(&th, entries, true, &cfg).unwrap();
        let verdict = vector_membership(&th, &seq, true, &cfg).unwrap();
        assert_eq!(verdict.status, MembershipStatus::CertifiedMember { basis: CertificationBasis::ExactZero });
    }

    #[test]
    fn constant_vector_is_not_member() {
        let cfg = Config::default();
        let th = RealMatrix::parse(r#"["sqrt(2)", "sqrt(3)"]"#).unwrap();
        let seq = VectorApproxSequence::bind(&th, vec![v(&[1, 0]); 6], false, &cfg).unwrap();
        let verdict = vector_membership(&th, &seq, false, &cfg).unwrap();
        match verdict.status {
            MembershipStatus::NotMember { witness_index: 0, ref error, .. } => assert!((error.mid_f64() - 0.41421356).abs() < 1e-6),
            ref other => panic!("{other:?}"),
        }
    }

    #[test]
    fn simultaneous_approximations_are_members() {
        let cfg = Config::default();
        let th = RealMatrix::parse(r#"[["sqrt(2)"], ["sqrt(3)"]]"#).unwrap();
        let col: Vec<RealOracle> = (0..2).map(|i| th.entry(i, 0).clone()).collect();
        let mut entries = Vec::new();
        for k in 2..12u32 {
            let a = simultaneous_approx(&col, &BigInt::from(1u64 << (2 * k)), &cfg).unwrap();
            entries.push(vec![a.q]);
        }
        let seq = VectorApproxSequence::bind(&th, entries, false, &cfg).unwrap();
        let verdict = vector_membership(&th, &seq, false, &cfg).unwrap();
        assert!(verdict.is_member(), "{verdict:?}");
    }
}
