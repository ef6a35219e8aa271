//! Kronecker foliations of the torus: leaf topology from the relation
//! lattices `Gamma(Theta)` and `gamma(Theta)`, minimality, orbit samples,
//! covering towers and CSV/SVG output.

mod render;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::{Exclusion, RelationStatus};
use crate::matrixdioph::{
    homogeneous_independence, inhomogeneous_independence, torus_closure, ClosureType, IndependenceReport, IndependenceVerdict, RealMatrix, TorusClosure,
};
use crate::numeric::{Dyadic, PrecisionReal, RealOracle};
use crate::par::{self, Exec};
use crate::serial;

pub use render::{render, RenderFormat, RenderOptions};

/// Homeomorphism type of a leaf, `R^s / Gamma`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LeafType {
    /// The relation lattice is provably trivial.
    Planar { description: String },
    /// No relation of height at most the bound; nothing is claimed beyond it.
    PlanarUpTo {
        #[serde(serialize_with = "serial::big")]
        height_bound: BigInt,
        description: String,
    },
    /// `R^s / Z^k` for an exactly verified rank-`k` lattice.
    NonSimplyConnected {
        rank: usize,
        #[serde(serialize_with = "serial::big_grid")]
        basis: Vec<Vec<BigInt>>,
        description: String,
    },
    /// Relations detected only numerically; no topology is claimed.
    EmpiricalRelation {
        #[serde(serialize_with = "serial::big_grid")]
        basis: Vec<Vec<BigInt>>,
    },
}

impl LeafType {
    pub fn is_planar(&self) -> bool {
        matches!(self, LeafType::Planar { .. })
    }
}

/// `R^s / Z^k`, named when it has a familiar name.
pub fn quotient_name(s: usize, k: usize) -> String {
    match (s, k) {
        (s, 0) => format!("R^{s} (plane)"),
        (1, 1) => "R/Z (circle)".into(),
        (2, 1) => "R^2/Z (cylinder)".into(),
        (s, k) if s == k => format!("R^{s}/Z^{s} (torus T^{s})"),
        (s, k) => format!("R^{s}/Z^{k} (T^{k} x R^{})", s - k),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeafReport {
    pub leaf: LeafType,
    pub independence: IndependenceReport,
}

/// Leaves of the inhomogeneous foliation `F(Theta)` and of the homogeneous `f(Theta)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeafClassification {
    pub rows: usize,
    pub cols: usize,
    pub inhomogeneous: LeafReport,
    pub homogeneous: LeafReport,
}

fn leaf_from(report: IndependenceReport, s: usize) -> LeafReport {
    let leaf = match (&report.verdict, &report.kernel_basis) {
        (IndependenceVerdict::Dependent, Some(k)) => LeafType::NonSimplyConnected { rank: k.len(), basis: k.clone(), description: quotient_name(s, k.len()) },
        (IndependenceVerdict::Dependent, None) if report.certificate.is_exact() => {
            // a single exact vector: rank is at least one, the full lattice unknown
            let v = report.certificate.vector.clone().unwrap();
            LeafType::NonSimplyConnected { rank: 1, basis: vec![v], description: quotient_name(s, 1) }
        }
        (IndependenceVerdict::Dependent, None) => LeafType::EmpiricalRelation { basis: vec![report.certificate.vector.clone().unwrap()] },
        (IndependenceVerdict::Independent, _) => LeafType::Planar { description: quotient_name(s, 0) },
        (IndependenceVerdict::IndependentUpTo { height_bound }, _) => {
            if matches!(report.certificate.status, RelationStatus::NoneUpTo { exclusion: Exclusion::AllHeights, .. }) {
                LeafType::Planar { description: quotient_name(s, 0) }
            } else {
                LeafType::PlanarUpTo { height_bound: height_bound.clone(), description: quotient_name(s, 0) }
            }
        }
    };
    LeafReport { leaf, independence: report }
}

/// Classifies leaves through the relation lattices: `Gamma(Theta)` of
/// `(n, n^perp)` with `Theta n = n^perp` for `F(Theta)` and `gamma(Theta)` of
/// `n` with `Theta n = 0` for `f(Theta)`.
pub fn classify_leaves(theta: &RealMatrix, h: &BigInt, cfg: &Config) -> Result<LeafClassification> {
    let s = theta.cols();
    let inh = inhomogeneous_independence(theta, h, cfg)?;
    let hom = homogeneous_independence(theta, h, cfg)?;
    Ok(LeafClassification { rows: theta.rows(), cols: s, inhomogeneous: leaf_from(inh, s), homogeneous: leaf_from(hom, s) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Minimality {
    pub minimal: bool,
    pub closure: TorusClosure,
}

/// Every leaf is dense exactly when the orbit `n -> Theta n mod 1` is dense.
pub fn minimality(theta: &RealMatrix, h: &BigInt, n: usize, cfg: &Config) -> Result<Minimality> {
    let closure = torus_closure(theta, h, n, cfg)?;
    Ok(Minimality { minimal: closure.closure == ClosureType::FullTorus, closure })
}

/// Points `(t_k mod 1, Theta t_k mod 1)` for `t_k = start + k step`, `k = 0..n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitSample {
    pub rows: usize,
    pub cols: usize,
    pub n: usize,
    #[serde(serialize_with = "serial::rational_vec")]
    pub start: Vec<BigRational>,
    #[serde(serialize_with = "serial::rational_vec")]
    pub step: Vec<BigRational>,
    pub points: Vec<Vec<f64>>,
}

impl OrbitSample {
    pub fn dimension(&self) -> usize {
        self.rows + self.cols
    }

    /// The parameter `t_k`.
    pub fn parameter(&self, k: usize) -> Vec<BigRational> {
        let kk = BigRational::from_integer(k.into());
        self.start.iter().zip(&self.step).map(|(a, b)| a + &kk * b).collect()
    }
}

fn frac_rational(x: &BigRational) -> f64 {
    (x - x.floor()).to_f64().unwrap_or(0.0)
}

/// Fractional part of an enclosure as a float; values within rounding of an integer map to 0.
fn frac_enclosure(x: &PrecisionReal) -> f64 {
    let m = x.mid().to_rational();
    let f = frac_rational(&m);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

fn row_value(theta: &RealMatrix, i: usize, t: &[BigRational], prec: u32) -> Result<f64> {
    let row = theta.row(i);
    if let Some(rs) = row.iter().map(|x| x.as_rational()).collect::<Option<Vec<_>>>() {
        let v: BigRational = rs.iter().zip(t).map(|(a, b)| a * b).sum();
        return Ok(frac_rational(&v));
    }
    let extra = t.iter().map(|x| x.numer().bits().max(x.denom().bits())).max().unwrap_or(0) as u32 + 8;
    let mut acc = PrecisionReal::zero();
    for (x, c) in row.iter().zip(t) {
        if !c.is_zero() {
            acc = acc.add(&x.eval(prec + extra)?.mul_rational(c, prec + extra));
        }
    }
    Ok(frac_enclosure(&acc))
}

pub fn orbit_sample(theta: &RealMatrix, n: usize, start: &[BigRational], step: &[BigRational], cfg: &Config) -> Result<OrbitSample> {
    let (r, s) = (theta.rows(), theta.cols());
    if start.len() != s || step.len() != s {
        return Err(Error::DimensionMismatch(format!("start and step need {s} coordinates")));
    }
    let mut sample = OrbitSample { rows: r, cols: s, n, start: start.to_vec(), step: step.to_vec(), points: Vec::new() };
    let prec = 80;
    let points = par::map_range(Exec::from_flag(cfg.parallel), n, |k| -> Result<Vec<f64>> {
        let t = sample.parameter(k);
        let mut p: Vec<f64> = t.iter().map(frac_rational).collect();
        for i in 0..r {
            p.push(row_value(theta, i, &t, prec)?);
        }
        Ok(p)
    });
    sample.points = points.into_iter().collect::<Result<_>>()?;
    Ok(sample)
}

/// Star discrepancy of points in `[0, 1)`.
pub fn star_discrepancy(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len() as f64;
    v.iter().enumerate().fold(0.0f64, |d, (i, &x)| d.max((i as f64 + 1.0) / n - x).max(x - i as f64 / n))
}

/// One level of a covering tower `F(theta / n) -> F(theta)`, `(x, y) -> (x, n y)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringLevel {
    pub n: u64,
    pub source: String,
    pub samples: usize,
    /// Upper bound on `||n y_k - theta t_k||` over the sampled points.
    pub max_defect: f64,
    pub verified: bool,
}

/// Maps orbit samples of `F(theta / n)` down to `F(theta)` for each `n` and
/// checks the leaf equation of `F(theta)` at every image point.
pub fn covering_tower(theta: &RealOracle, ns: &[u64], samples: usize, step: &BigRational, cfg: &Config) -> Result<Vec<CoveringLevel>> {
    if ns.is_empty() {
        return Err(Error::InvalidInput("covering tower needs at least one degree".into()));
    }
    let prec = cfg.precision_bits;
    let tol = Dyadic::pow2(-(prec as i64) / 2);
    ns.iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::InvalidInput("covering degree must be positive".into()));
            }
            let nn = BigRational::from_integer(n.into());
            let source = theta.mul_rational(&nn.recip());
            let mut worst = Dyadic::zero();
            for k in 0..samples {
                let t = step * BigRational::from_integer(k.into());
                let y = source.eval(prec + 64)?.mul_rational(&t, prec + 64);
                let shift = y.mid().floor();
                let y = y.sub(&PrecisionReal::from_int(&shift));
                let image = y.mul_int(&BigInt::from(n));
                let target = theta.eval(prec + 64)?.mul_rational(&t, prec + 64);
                let defect = image.sub(&target).dist_to_int().hi().clone();
                if defect > worst {
                    worst = defect;
                }
            }
            Ok(CoveringLevel { n, source: source.literal().to_string(), samples, max_defect: worst.to_f64(), verified: worst <= tol })
        })
        .collect()
}

/// Applies `(x, y) -> (x, n y mod 1)` to the transversal coordinates of sample points.
pub fn covering_map(points: &[Vec<f64>], cols: usize, n: u64) -> Vec<Vec<f64>> {
    points.iter().map(|p| p.iter().enumerate().map(|(i, &v)| if i < cols { v } else { (v * n as f64).rem_euclid(1.0) }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> BigInt {
        BigInt::from(10_000)
    }

    fn ints(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn leaf_types() {
        let cfg = Config::default();
        let phi = classify_leaves(&RealMatrix::parse(r#"["phi"]"#).unwrap(), &h(), &cfg).unwrap();
        assert!(phi.inhomogeneous.leaf.is_planar() && phi.homogeneous.leaf.is_planar());
        let half = classify_leaves(&RealMatrix::parse(r#"["1/2"]"#).unwrap(), &h(), &cfg).unwrap();
        match &half.inhomogeneous.leaf {
            LeafType::NonSimplyConnected { rank, basis, description } => {
                assert_eq!(*rank, 1);
                assert_eq!(basis[0], vec![BigInt::from(2), BigInt::from(1)]);
                assert!(description.contains("circle"));
            }
            l => panic!("{l:?}"),
        }
        assert!(half.homogeneous.leaf.is_planar());
        let cyl = classify_leaves(&RealMatrix::parse(r#"["sqrt(2)", "1-sqrt(2)"]"#).unwrap(), &h(), &cfg).unwrap();
        assert!(matches!(&cyl.inhomogeneous.leaf, LeafType::NonSimplyConnected { rank: 1, description, .. } if description.contains("cylinder")));
        assert!(cyl.homogeneous.leaf.is_planar());
        let pi = classify_leaves(&RealMatrix::parse(r#"["pi"]"#).unwrap(), &BigInt::from(100), &cfg).unwrap();
        assert!(matches!(pi.inhomogeneous.leaf, LeafType::PlanarUpTo { .. }));
    }

    #[test]
    fn minimal_flows() {
        let cfg = Config::default();
        assert!(minimality(&RealMatrix::parse(r#"["sqrt(2)"]"#).unwrap(), &h(), 500, &cfg).unwrap().minimal);
        let half = minimality(&RealMatrix::parse(r#"["1/2"]"#).unwrap(), &h(), 500, &cfg).unwrap();
        assert!(!half.minimal);
        assert_eq!(half.closure.closure, ClosureType::FiniteGroup { order: BigInt::from(2) });
        let diag = minimality(&RealMatrix::parse(r#"[["sqrt(2)"], ["sqrt(2)"]]"#).unwrap(), &h(), 500, &cfg).unwrap();
        assert!(matches!(diag.closure.closure, ClosureType::SubtorusCoset { dimension: 1, .. }));
    }

    #[test]
    fn golden_orbit_is_well_distributed() {
        let cfg = Config::default();
        let s = orbit_sample(&RealMatrix::parse(r#"["phi"]"#).unwrap(), 1000, &ints(&[0]), &ints(&[1]), &cfg).unwrap();
        assert_eq!(s.points.len(), 1000);
        let ys: Vec<f64> = s.points.iter().map(|p| p[1]).collect();
        assert!(star_discrepancy(&ys) <= 0.02);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        for (k, p) in s.points.iter().enumerate().step_by(97) {
            let d = (phi * k as f64 - p[1]).rem_euclid(1.0);
            assert!(d.min(1.0 - d) < 1e-9);
        }
    }

    #[test]
    fn rational_orbit_is_periodic() {
        let cfg = Config::default();
        let s = orbit_sample(&RealMatrix::parse(r#"["1/2"]"#).unwrap(), 6, &ints(&[0]), &ints(&[1]), &cfg).unwrap();
        let ys: Vec<f64> = s.points.iter().map(|p| p[1]).collect();
        assert_eq!(ys, vec![0.0, 0.5, 0.0, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn coverings() {
        let cfg = Config::default();
        let s2 = crate::numeric::parse_oracle("sqrt(2)").unwrap();
        let levels = covering_tower(&s2, &[1, 2, 6], 200, &BigRational::new(1.into(), 3.into()), &cfg).unwrap();
        assert!(levels.iter().all(|l| l.verified));
        let theta6 = RealMatrix::new(vec![vec![s2.mul_rational(&BigRational::new(1.into(), 6.into()))]]).unwrap();
        let sample = orbit_sample(&theta6, 50, &ints(&[0]), &ints(&[1]), &cfg).unwrap();
        let a = covering_map(&covering_map(&sample.points, 1, 2), 1, 3);
        let b = covering_map(&sample.points, 1, 6);
        for (p, q) in a.iter().zip(&b) {
            let d = (p[1] - q[1]).rem_euclid(1.0);
            assert!(d.min(1.0 - d) < 1e-9);
        }
        assert_eq!(covering_map(&sample.points, 1, 1), sample.points);
    }
}
