use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::config::Config;
use crate::error::Result;
use crate::numeric::{with_precision, RealOracle};
use crate::serial;

/// A convergent `p / q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    #[serde(serialize_with = "serial::big")]
    pub p: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub q: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergents {
    #[serde(serialize_with = "serial::big_vec")]
    pub partial_quotients: Vec<BigInt>,
    pub pairs: Vec<Convergent>,
    /// The expansion ended because theta is rational.
    pub terminated: bool,
}

/// Continued fraction terms of a rational, at most `max` of them.
fn cf_terms(r: &BigRational, max: usize) -> (Vec<BigInt>, bool) {
    let mut out = Vec::new();
    let mut x = r.clone();
    while out.len() < max {
        let a = x.floor().to_integer();
        let f = &x - BigRational::from_integer(a.clone());
        out.push(a);
        if f.is_zero() {
            return (out, true);
        }
        x = f.recip();
    }
    (out, false)
}

fn pairs_from_terms(terms: &[BigInt]) -> Vec<Convergent> {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(terms.len());
    for a in terms {
        let p = a * &p0 + &p1;
        let q = a * &q0 + &q1;
        p1 = std::mem::replace(&mut p0, p.clone());
        q1 = std::mem::replace(&mut q0, q.clone());
        out.push(Convergent { p, q });
    }
    out
}

/// The first `k` convergents of theta.
///
/// Rational inputs are expanded exactly and may return fewer pairs. For
/// other inputs the expansions of both endpoints of an enclosure are
/// compared; every term of their common prefix but the last is certified,
/// and the precision doubles until `k` terms are.
pub fn convergents(theta: &RealOracle, k: usize, cfg: &Config) -> Result<Convergents> {
    if let Some(r) = theta.as_rational() {
        let (terms, terminated) = cf_terms(&r, k);
        let pairs = pairs_from_terms(&terms);
        return Ok(Convergents { partial_quotients: terms, pairs, terminated });
    }
    let terms = with_precision(cfg.precision_bits, cfg.precision_cap, |p| {
        let x = theta.eval(p)?;
        let lo = x.lo().to_rational();
        let hi = x.hi().to_rational();
        let (a, _) = cf_terms(&lo, k + 2);
        let (b, _) = cf_terms(&hi, k + 2);
        let common = a.iter().zip(&b).take_while(|(u, v)| u == v).count();
        let certified = common.saturating_sub(1);
        if certified >= k {
            Ok(Some(a[..k].to_vec()))
        } else {
            Ok(None)
        }
    })?;
    let pairs = pairs_from_terms(&terms);
    Ok(Convergents { partial_quotients: terms, pairs, terminated: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_oracle;

    fn pq(c: &Convergents) -> Vec<(i64, i64)> {
        c.pairs.iter().map(|x| (x.p.to_string().parse().unwrap(), x.q.to_string().parse().unwrap())).collect()
    }

    #[test]
    fn sqrt_two() {
        let c = convergents(&parse_oracle("sqrt(2)").unwrap(), 5, &Config::default()).unwrap();
        assert_eq!(pq(&c), vec![(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]);
    }

    #[test]
    fn golden_mean_denominators() {
        let c = convergents(&parse_oracle("(1+sqrt(5))/2").unwrap(), 6, &Config::default()).unwrap();
        let q: Vec<i64> = pq(&c).into_iter().map(|x| x.1).collect();
        assert_eq!(q, vec![1, 1, 2, 3, 5, 8]);
    }

    #[test]
    fn pi_and_rationals() {
        let c = convergents(&RealOracle::pi(), 4, &Config::default()).unwrap();
        assert_eq!(pq(&c), vec![(3, 1), (22, 7), (333, 106), (355, 113)]);
        let r = convergents(&RealOracle::ratio(3, 7), 10, &Config::default()).unwrap();
        assert!(r.terminated);
        assert_eq!(pq(&r).last(), Some(&(3, 7)));
    }
}
