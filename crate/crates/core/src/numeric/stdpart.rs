//! Finite stand-in for the standard part map: cluster the tail of a
//! sequence of enclosures and report every cluster, selecting a limit only
//! when one cluster is dense enough.

use serde::Serialize;

use super::dyadic::Dyadic;
use super::interval::PrecisionReal;

/// Ambient space of the values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Line,
    /// The circle `R/Z`; values are compared modulo 1.
    Circle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub center: f64,
    pub density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StdLimit {
    Limit { value: PrecisionReal },
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StdVerdict {
    pub limit: StdLimit,
    pub clusters: Vec<Cluster>,
    pub topology: Topology,
    pub density_threshold: f64,
    pub tail_length: usize,
}

impl StdVerdict {
    pub fn limit(&self) -> Option<&PrecisionReal> {
        match &self.limit {
            StdLimit::Limit { value } => Some(value),
            StdLimit::Ambiguous => None,
        }
    }
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Estimates the standard part of `values`.
///
/// The last half of the list (at least one value) is clustered by single
/// linkage with the given gap. The densest cluster becomes the limit when
/// its density reaches `rho`; the limit enclosure extrapolates the final
/// steps geometrically when they contract and falls back to the hull of
/// the cluster otherwise.
pub fn std_estimate(values: &[PrecisionReal], topology: Topology, rho: f64, gap: f64) -> StdVerdict {
    assert!(!values.is_empty(), "std_estimate needs at least one value");
    let n = values.len();
    let tail_len = if n < 4 { n } else { n.div_ceil(2) };
    let tail = &values[n - tail_len..];
    let mids: Vec<f64> = tail
        .iter()
        .map(|v| match topology {
            Topology::Line => v.mid_f64(),
            Topology::Circle => v.mid_f64().rem_euclid(1.0),
        })
        .collect();

    // single-linkage clustering on sorted values
    let mut order: Vec<usize> = (0..tail_len).collect();
    order.sort_by(|&a, &b| mids[a].total_cmp(&mids[b]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if mids[i] - mids[*g.last().unwrap()] <= gap => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    if topology == Topology::Circle && groups.len() > 1 {
        let first = mids[groups[0][0]];
        let last = mids[*groups.last().unwrap().last().unwrap()];
        if circle_dist(first, last) <= gap {
            let tail_group = groups.pop().unwrap();
            groups[0].extend(tail_group);
        }
    }

    let center = |g: &[usize]| -> f64 {
        match topology {
            Topology::Line => g.iter().map(|&i| mids[i]).sum::<f64>() / g.len() as f64,
            Topology::Circle => {
                let anchor = mids[g[0]];
                let mean = g.iter().map(|&i| anchor + signed_offset(mids[i], anchor)).sum::<f64>() / g.len() as f64;
                let c = mean.rem_euclid(1.0);
                if (1.0 - c).abs() < 1e-15 {
                    0.0
                } else {
                    c
                }
            }
        }
    };
    let mut clusters: Vec<(Cluster, Vec<usize>)> =
        groups.into_iter().map(|g| (Cluster { center: center(&g), density: g.len() as f64 / tail_len as f64 }, g)).collect();
    clusters.sort_by(|a, b| a.0.center.total_cmp(&b.0.center));

    let best = clusters.iter().enumerate().max_by(|a, b| a.1 .0.density.total_cmp(&b.1 .0.density).then(b.0.cmp(&a.0))).map(|(i, _)| i).unwrap();
    let limit = if clusters[best].0.density >= rho {
        let members = &clusters[best].1;
        StdLimit::Limit { value: limit_enclosure(tail, members, topology, clusters[best].0.center) }
    } else {
        StdLimit::Ambiguous
    };
    StdVerdict { limit, clusters: clusters.into_iter().map(|c| c.0).collect(), topology, density_threshold: rho, tail_length: tail_len }
}

/// Offset of `x` from `anchor` on the circle, in `(-1/2, 1/2]`.
fn signed_offset(x: f64, anchor: f64) -> f64 {
    let d = (x - anchor).rem_euclid(1.0);
    if d > 0.5 {
        d - 1.0
    } else {
        d
    }
}

/// Shift of `v` by an integer so that it lies near `center` (circle only).
fn unwrap(v: &PrecisionReal, topology: Topology, center: f64) -> PrecisionReal {
    match topology {
        Topology::Line => v.clone(),
        Topology::Circle => {
            let k = (v.mid_f64() - center).round();
            if k == 0.0 {
                v.clone()
            } else {
                v.sub(&PrecisionReal::from_i64(k as i64))
            }
        }
    }
}

fn limit_enclosure(tail: &[PrecisionReal], members: &[usize], topology: Topology, center: f64) -> PrecisionReal {
    let mut idx = members.to_vec();
    idx.sort_unstable();
    let vals: Vec<PrecisionReal> = idx.iter().map(|&i| unwrap(&tail[i], topology, center)).collect();
    let hull = vals.iter().skip(1).fold(vals[0].clone(), |h, v| h.hull(v));
    let m = vals.len();
    let consecutive = m >= 3 && idx[m - 1] == tail.len() - 1 && idx[m - 2] + 1 == idx[m - 1] && idx[m - 3] + 1 == idx[m - 2];
    if !consecutive {
        return hull;
    }
    let last = &vals[m - 1];
    let d2 = last.sub(&vals[m - 2]);
    let d1 = vals[m - 2].sub(&vals[m - 3]);
    if d2.mag().is_zero() {
        return last.clone();
    }
    if d1.mig().is_zero() {
        return hull;
    }
    // contraction ratio bounded above by |d2|max / |d1|min
    let q = d2.mag().to_f64() / d1.mig().to_f64();
    if q.is_nan() || q >= 0.9 {
        return hull;
    }
    let r = d2.mag().to_f64() * q / (1.0 - q) * 2.0;
    let rd = Dyadic::from_rational_ceil(&num_rational::BigRational::from_float(r).unwrap(), 1100);
    let ext = last.inflate(&rd);
    ext.intersect(&hull.inflate(&rd)).unwrap_or(ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn pr(x: f64) -> PrecisionReal {
        PrecisionReal::from_rational(&BigRational::from_float(x).unwrap(), 80)
    }

    #[test]
    fn constant_sequence() {
        let v: Vec<_> = (0..10).map(|_| pr(0.25)).collect();
        let s = std_estimate(&v, Topology::Line, 0.8, 1.0 / 32.0);
        assert!(s.limit().unwrap().contains(&Dyadic::pow2(-2)));
    }

    #[test]
    fn alternating_is_ambiguous() {
        let v: Vec<_> = (0..8).map(|i| pr((i % 2) as f64)).collect();
        let s = std_estimate(&v, Topology::Line, 0.9, 1.0 / 32.0);
        assert!(s.limit().is_none());
        assert_eq!(s.clusters, vec![Cluster { center: 0.0, density: 0.5 }, Cluster { center: 1.0, density: 0.5 }]);
    }

    #[test]
    fn circle_wraps_around_zero() {
        let v: Vec<_> = (1..12).map(|i| pr(if i % 2 == 0 { 0.5f64.powi(i) } else { 1.0 - 0.5f64.powi(i) })).collect();
        let s = std_estimate(&v, Topology::Circle, 0.8, 1.0 / 32.0);
        assert_eq!(s.clusters.len(), 1);
        let l = s.limit().unwrap();
        assert!(l.contains(&Dyadic::zero()) || l.contains(&Dyadic::one()));
    }

    #[test]
    fn geometric_limit_is_enclosed() {
        let v: Vec<_> = (0..16).map(|i| pr(0.3 + 0.5f64.powi(i))).collect();
        let s = std_estimate(&v, Topology::Line, 0.8, 1.0 / 32.0);
        let l = s.limit().unwrap();
        assert!(l.contains_rational(&BigRational::from_float(0.3).unwrap()));
        assert!(l.width().to_f64() < 1e-3);
    }
}
