use num_bigint::BigInt;
use serde::Serialize;

use super::{ad_check, RelationVerdict, VerdictStatus};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::RealOracle;
use crate::par::{self, Exec};
use crate::serial;

/// Largest tuple length handled; there are `C(2n, n)` projections.
const MAX_N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphMap {
    Exp,
    Identity,
}

impl GraphMap {
    fn apply(self, x: &RealOracle) -> RealOracle {
        match self {
            GraphMap::Exp => x.exp(),
            GraphMap::Identity => x.clone(),
        }
    }
}

/// Coordinates `x_I` of the domain and `f(x)_J` of the range, one-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Projection {
    pub dom: Vec<usize>,
    pub ran: Vec<usize>,
}

impl Projection {
    /// All projections with `|I| + |J| = n`, sorted by `(I, J)`.
    pub fn all(n: usize) -> Vec<Projection> {
        let mut out: Vec<Projection> = (0u32..1 << (2 * n))
            .filter(|m| m.count_ones() as usize == n)
            .map(|m| Projection {
                dom: (0..n).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect(),
                ran: (0..n).filter(|i| m >> (n + i) & 1 == 1).map(|i| i + 1).collect(),
            })
            .collect();
        out.sort();
        out
    }

    fn overlaps(&self) -> bool {
        self.dom.iter().any(|i| self.ran.contains(i))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub projection: Projection,
    pub values: Vec<String>,
    /// Skipped by the Hermite-Lindemann filter.
    pub filtered: bool,
    pub verdict: Option<RelationVerdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PullbackReport {
    pub map: GraphMap,
    pub theta: Vec<String>,
    /// `Holds` only when every evaluated projection holds.
    pub graph_verdict: VerdictStatus,
    pub not_detected: Vec<Projection>,
    pub filter_applied: bool,
    pub projections: Vec<ProjectionReport>,
    pub degree_bound: u32,
    #[serde(serialize_with = "serial::big")]
    pub height_bound: BigInt,
}

impl PullbackReport {
    pub fn holds(&self) -> bool {
        self.graph_verdict == VerdictStatus::Holds
    }
}

/// Runs `ad_check` on `pi(theta, f(theta))` for every projection.
///
/// With `algebraic_class` set every `theta_i` must be exactly algebraic, and
/// projections sharing an index between domain and range are skipped: for
/// algebraic nonzero `a`, `a` and `exp(a)` are algebraically independent.
pub fn graph_pullback(thetas: &[RealOracle], map: GraphMap, dmax: u32, h: &BigInt, algebraic_class: bool, cfg: &Config) -> Result<PullbackReport> {
    let n = thetas.len();
    if n < 2 {
        return Err(Error::InvalidInput("graph pullback needs at least two numbers".into()));
    }
    if n > MAX_N {
        return Err(Error::CapExceeded(format!("graph pullback supports at most {MAX_N} numbers, got {n}")));
    }
    if algebraic_class && !thetas.iter().all(|t| t.is_algebraic()) {
        return Err(Error::WrongInstanceShape("algebraic-class instance with a non-algebraic entry".into()));
    }
    let images: Vec<RealOracle> = thetas.iter().map(|t| map.apply(t)).collect();
    let filter = algebraic_class && map == GraphMap::Exp;
    let projections = Projection::all(n);
    let reports = par::map(Exec::from_flag(cfg.parallel), &projections, |p| -> Result<ProjectionReport> {
        let xs: Vec<RealOracle> = p.dom.iter().map(|&i| thetas[i - 1].clone()).chain(p.ran.iter().map(|&j| images[j - 1].clone())).collect();
        let values = xs.iter().map(|x| x.literal().to_string()).collect();
        if filter && p.overlaps() {
            return Ok(ProjectionReport { projection: p.clone(), values, filtered: true, verdict: None });
        }
        let verdict = ad_check(&xs, dmax, h, cfg)?;
        Ok(ProjectionReport { projection: p.clone(), values, filtered: false, verdict: Some(verdict) })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let not_detected: Vec<Projection> = reports.iter().filter(|r| r.verdict.as_ref().is_some_and(|v| !v.holds())).map(|r| r.projection.clone()).collect();
    Ok(PullbackReport {
        map,
        theta: thetas.iter().map(|t| t.literal().to_string()).collect(),
        graph_verdict: if not_detected.is_empty() { VerdictStatus::Holds } else { VerdictStatus::NotDetectedUpTo },
        not_detected,
        filter_applied: filter,
        projections: reports,
        degree_bound: dmax,
        height_bound: h.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_oracle;

    fn oracles(lits: &[&str]) -> Vec<RealOracle> {
        lits.iter().map(|s| parse_oracle(s).unwrap()).collect()
    }

    #[test]
    fn projection_counts() {
        assert_eq!(Projection::all(2).len(), 6);
        assert_eq!(Projection::all(3).len(), 20);
        assert_eq!(Projection::all(4).len(), 70);
        let p = Projection::all(2);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert!(p.iter().all(|x| x.dom.len() + x.ran.len() == 2));
    }

    #[test]
    fn exp_pullback_examples() {
        let cfg = Config::default();
        let h = BigInt::from(1000);
        let r = graph_pullback(&oracles(&["1", "2"]), GraphMap::Exp, 2, &h, false, &cfg).unwrap();
        assert!(r.holds());
        let r = graph_pullback(&oracles(&["1", "sqrt(2)"]), GraphMap::Exp, 2, &h, false, &cfg).unwrap();
        assert_eq!(r.not_detected, vec![Projection { dom: vec![], ran: vec![1, 2] }]);
        let r = graph_pullback(&oracles(&["log(2)", "log(3)"]), GraphMap::Exp, 2, &h, false, &cfg).unwrap();
        assert_eq!(r.not_detected, vec![Projection { dom: vec![1, 2], ran: vec![] }]);
    }

    #[test]
    fn filter_needs_algebraic_entries() {
        let cfg = Config::default();
        let h = BigInt::from(100);
        let r = graph_pullback(&oracles(&["1", "sqrt(2)"]), GraphMap::Exp, 2, &h, true, &cfg).unwrap();
        assert!(r.filter_applied);
        assert_eq!(r.projections.iter().filter(|p| p.filtered).count(), 2);
        assert!(matches!(graph_pullback(&oracles(&["1", "pi"]), GraphMap::Exp, 2, &h, true, &cfg), Err(Error::WrongInstanceShape(_))));
        assert!(matches!(graph_pullback(&oracles(&["1", "2", "3", "4", "5"]), GraphMap::Exp, 2, &h, false, &cfg), Err(Error::CapExceeded(_))));
    }
}
