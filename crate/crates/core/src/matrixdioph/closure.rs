use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::independence::relation_system;
use super::RealMatrix;
use crate::config::Config;
use crate::error::Result;
use crate::lattice::linalg::maximal_minor_gcd;
use crate::lattice::{exact_kernel, system_relation};
use crate::serial;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosureType {
    FullTorus,
    FiniteGroup {
        #[serde(serialize_with = "serial::big")]
        order: BigInt,
    },
    /// Finite union of translates of a subtorus cut out by integer row relations `k . x = 0 mod 1`.
    SubtorusCoset {
        dimension: usize,
        #[serde(serialize_with = "serial::big")]
        components: BigInt,
        #[serde(serialize_with = "serial::big_grid")]
        relations: Vec<Vec<BigInt>>,
    },
}

/// Orbit-sampling cross-check of a closure descriptor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitCheck {
    pub samples: usize,
    /// Fraction of occupied cells in a grid with about four samples per cell.
    pub occupancy: f64,
    pub cells_per_axis: usize,
    pub distinct_points: usize,
    /// Largest `||k . x||` over sampled points and reported relations.
    pub relation_residual: f64,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusClosure {
    pub closure: ClosureType,
    /// The relation lattice was computed exactly rather than by a bounded search.
    pub exact: bool,
    #[serde(serialize_with = "serial::big")]
    pub height_bound: BigInt,
    pub check: OrbitCheck,
}

/// The closure `T(Theta)` of `{Theta n mod 1 : n in Z^s}` in the `r`-torus.
///
/// Its annihilator is the lattice of `k in Z^r` with `k^T Theta` integral.
/// That lattice is computed exactly when the entries allow it and
/// otherwise by one bounded relation search; its rank and the gcd of its
/// maximal minors give the dimension and number of components. `n` orbit
/// points are sampled to cross-check the descriptor.
pub fn torus_closure(theta: &RealMatrix, h: &BigInt, n: usize, cfg: &Config) -> Result<TorusClosure> {
    let r = theta.rows();
    let system = relation_system(&theta.transpose(), true);
    let (relations, exact) = match exact_kernel(&system) {
        Some(kernel) => (kernel.into_iter().map(|v| v[..r].to_vec()).collect::<Vec<_>>(), true),
        None => {
            let c = system_relation(&system, h, cfg)?;
            (c.vector.map(|v| vec![v[..r].to_vec()]).unwrap_or_default(), false)
        }
    };
    let closure = if relations.is_empty() {
        ClosureType::FullTorus
    } else {
        let components = maximal_minor_gcd(&relations).abs();
        if relations.len() == r {
            ClosureType::FiniteGroup { order: components }
        } else {
            ClosureType::SubtorusCoset { dimension: r - relations.len(), components, relations: relations.clone() }
        }
    };
    let check = sample_orbit(theta, &relations, &closure, n)?;
    Ok(TorusClosure { closure, exact, height_bound: h.clone(), check })
}

fn sample_orbit(theta: &RealMatrix, relations: &[Vec<BigInt>], closure: &ClosureType, n: usize) -> Result<OrbitCheck> {
    let (r, s) = (theta.rows(), theta.cols());
    let side = (n as f64).powf(1.0 / s as f64).ceil().max(1.0) as i64;
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut idx = vec![0i64; s];
    for _ in 0..n {
        let m: Vec<BigInt> = idx.iter().map(|&x| BigInt::from(x)).collect();
        let p = (0..r).map(|i| Ok(theta.apply_row(i, &m, 64)?.mid_f64().rem_euclid(1.0))).collect::<Result<Vec<f64>>>()?;
        points.push(p);
        for k in (0..s).rev() {
            idx[k] += 1;
            if idx[k] < side {
                break;
            }
            idx[k] = 0;
        }
    }
    let cells = ((n as f64 / 4.0).powf(1.0 / r as f64).floor() as usize).max(1);
    let occupied: BTreeSet<Vec<usize>> = points.iter().map(|p| p.iter().map(|x| ((x * cells as f64) as usize).min(cells - 1)).collect()).collect();
    let total = (cells as f64).powi(r as i32);
    let occupancy = occupied.len() as f64 / total;
    let distinct: BTreeSet<Vec<i64>> = points.iter().map(|p| p.iter().map(|x| ((x * 1e9).round() as i64).rem_euclid(1_000_000_000)).collect()).collect();
    let mut residual = 0.0f64;
    for p in &points {
        for k in relations {
            let v: f64 = k.iter().zip(p).map(|(a, x)| a.to_string().parse::<f64>().unwrap_or(0.0) * x).sum();
            residual = residual.max((v - v.round()).abs());
        }
    }
    let consistent = match closure {
        ClosureType::FullTorus => cells < 2 || occupancy >= 0.9,
        ClosureType::FiniteGroup { order } => BigInt::from(distinct.len()) <= *order && residual < 1e-6,
        ClosureType::SubtorusCoset { .. } => residual < 1e-6,
    };
    Ok(OrbitCheck { samples: n, occupancy, cells_per_axis: cells, distinct_points: distinct.len(), relation_residual: residual, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(lit: &str) -> TorusClosure {
        torus_closure(&RealMatrix::parse(lit).unwrap(), &BigInt::from(10_000), 1000, &Config::default()).unwrap()
    }

    #[test]
    fn half_is_a_finite_group() {
        let t = run(r#"["1/2"]"#);
        assert_eq!(t.closure, ClosureType::FiniteGroup { order: BigInt::from(2) });
        assert_eq!(t.check.distinct_points, 2);
        assert!(t.check.consistent);
    }

    #[test]
    fn sqrt_two_fills_the_circle() {
        let t = run(r#"["sqrt(2)"]"#);
        assert_eq!(t.closure, ClosureType::FullTorus);
        assert!(t.check.consistent && t.check.occupancy > 0.99);
    }

    #[test]
    fn diagonal_circle() {
        let t = run(r#"[["sqrt(2)"], ["sqrt(2)"]]"#);
        match &t.closure {
            ClosureType::SubtorusCoset { dimension, components, relations } => {
                assert_eq!((*dimension, components.clone()), (1, BigInt::from(1)));
                assert_eq!(relations, &vec![vec![BigInt::from(1), BigInt::from(-1)]]);
            }
            other => panic!("{other:?}"),
        }
        assert!(t.check.consistent);
    }
}
