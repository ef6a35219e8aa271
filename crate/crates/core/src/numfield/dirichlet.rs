use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::{FieldElement, NumberField};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::{integer_relation, Exclusion, RelationCertificate, RelationStatus};
use crate::numeric::{with_precision, Dyadic, PrecisionReal, RealOracle};
use crate::serial;

/// Outcome of the K-rationality search.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum KRationalVerdict {
    /// `nu(alpha) theta = nu(beta)` at `place`.
    Rational { place: usize, alpha: FieldElement, beta: FieldElement, exact: bool },
    NoWitnessUpTo {
        #[serde(serialize_with = "serial::big")]
        height_bound: BigInt,
        exclusion: Vec<Exclusion>,
    },
}

impl KRationalVerdict {
    pub fn is_rational(&self) -> bool {
        matches!(self, KRationalVerdict::Rational { .. })
    }
}

/// Looks for `alpha, beta` in `O`, `alpha != 0`, with `nu(alpha) theta = nu(beta)`
/// at some place, by an integer relation search on
/// `(nu(alpha_j) theta)_j ++ (nu(alpha_j))_j` with coefficients of height at most `h`.
pub fn krational_test(k: &NumberField, theta: &RealOracle, h: &BigInt, cfg: &Config) -> Result<KRationalVerdict> {
    let d = k.degree();
    let mut exclusion = Vec::with_capacity(d);
    for (nu, row) in k.embedding_matrix().iter().enumerate() {
        let xs: Vec<RealOracle> = row.iter().map(|e| e.mul(theta)).chain(row.iter().cloned()).collect();
        let cert = integer_relation(&xs, h, cfg)?;
        if let Some(v) = &cert.vector {
            let alpha = FieldElement::from_ints(&v[..d]);
            if !alpha.is_zero() {
                let beta = FieldElement::from_ints(&v[d..].iter().map(|x| -x).collect::<Vec<_>>());
                return Ok(KRationalVerdict::Rational { place: nu, alpha, beta, exact: cert.is_exact() });
            }
        }
        exclusion.push(match cert {
            RelationCertificate { status: RelationStatus::NoneUpTo { exclusion, .. }, .. } => exclusion,
            _ => Exclusion::None,
        });
    }
    Ok(KRationalVerdict::NoWitnessUpTo { height_bound: h.clone(), exclusion })
}

/// The K-Dirichlet pair `(gamma, gamma_perp)` and its certified inequalities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KDirichlet {
    pub eta: FieldElement,
    pub gamma: FieldElement,
    pub gamma_perp: FieldElement,
    /// The earlier and later colliding box points; `None` stands for the unit point `1_A`.
    pub earlier: FieldElement,
    pub later: Option<FieldElement>,
    pub boxes: Vec<u64>,
    /// `||gamma||_A^2` and `||eta||_A^2`.
    #[serde(serialize_with = "serial::rational")]
    pub gamma_norm_sq: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub eta_norm_sq: BigRational,
    /// Enclosure of `||gamma theta - gamma_perp||_A^2` and the bound `||eta^-1_A||_A^2`.
    pub error_norm_sq: PrecisionReal,
    #[serde(serialize_with = "serial::rational")]
    pub bound_sq: BigRational,
    pub norm_certified: bool,
    pub error_certified: bool,
    /// Only the zero pair is possible (`eta = 1_A`).
    pub trivial: bool,
    pub krational: KRationalVerdict,
    pub precision_bits: u32,
}

/// Earlier point, later point (absent for the unit point) and their shared box.
type Collision = (Vec<u64>, Option<Vec<u64>>, Vec<u64>);

/// Certified box index `floor(n frac(a theta))`.
fn box_index(theta: &RealOracle, a: u64, n: u64, cfg: &Config) -> Result<(u64, u32)> {
    if a == 0 {
        return Ok((0, cfg.precision_bits));
    }
    let extra = 64 - a.leading_zeros() + 64 - n.leading_zeros() + 4;
    with_precision(cfg.precision_bits.min(64), cfg.precision_cap, |p| {
        let x = theta.eval(p + extra)?.mul_int(&BigInt::from(a));
        let Some(f) = x.frac() else { return Ok(None) };
        let y = f.mul_int(&BigInt::from(n));
        let (lo, hi) = (y.lo().floor(), y.hi().floor());
        // an endpoint landing on an integer cannot certify which box the value is in
        if lo != hi || y.hi() == &Dyadic::from_int(hi.clone()) {
            return Ok(None);
        }
        Ok(Some((lo.to_u64().unwrap_or(0), p)))
    })
}

/// Pigeonhole over the `prod n_j` points `frac(beta theta)`, `0 <=_A beta <_A eta`,
/// plus the unit point, in the boxes `prod [k_j/n_j, (k_j+1)/n_j)`.
///
/// Points are enumerated lexicographically and the first collision wins;
/// `gamma` is the later minus the earlier point and `gamma_perp` rounds each
/// coordinate of `gamma theta`.
pub fn k_dirichlet(k: &NumberField, theta: &RealOracle, eta: &FieldElement, cfg: &Config) -> Result<KDirichlet> {
    let d = k.degree();
    if eta.coords.len() != d {
        return Err(Error::DimensionMismatch(format!("eta has {} coordinates, field degree is {d}", eta.coords.len())));
    }
    if !eta.is_positive_a() {
        return Err(Error::NotPositive);
    }
    let n: Vec<u64> = eta
        .int_coords()
        .ok_or_else(|| Error::InvalidInput("eta must lie in O (integer coordinates)".into()))?
        .iter()
        .map(|x| x.to_u64().ok_or_else(|| Error::EnumerationCapExceeded { size: x.to_string(), cap: cfg.enumeration_cap }))
        .collect::<Result<_>>()?;
    let size = n.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x));
    match size {
        Some(s) if s <= cfg.enumeration_cap => {}
        _ => {
            let big: BigInt = n.iter().map(|&x| BigInt::from(x)).product();
            return Err(Error::EnumerationCapExceeded { size: big.to_string(), cap: cfg.enumeration_cap });
        }
    }
    let krational = krational_test(k, theta, &BigInt::from(cfg.height_bound), cfg)?;
    if let KRationalVerdict::Rational { place, .. } = krational {
        return Err(Error::KRational { place });
    }

    let mut prec = cfg.precision_bits;
    let mut table: Vec<Vec<u64>> = Vec::with_capacity(d);
    for &nj in &n {
        let mut col = Vec::with_capacity(nj as usize);
        for a in 0..nj {
            let (b, p) = box_index(theta, a, nj, cfg)?;
            prec = prec.max(p);
            col.push(b);
        }
        table.push(col);
    }

    let mut seen: std::collections::HashMap<Vec<u64>, Vec<u64>> = std::collections::HashMap::new();
    let mut a = vec![0u64; d];
    let mut found: Option<Collision> = None;
    loop {
        let boxes: Vec<u64> = (0..d).map(|j| table[j][a[j] as usize]).collect();
        if let Some(prev) = seen.get(&boxes) {
            found = Some((prev.clone(), Some(a.clone()), boxes));
            break;
        }
        seen.insert(boxes, a.clone());
        // lexicographic successor, last coordinate fastest
        let Some(j) = (0..d).rev().find(|&j| a[j] + 1 < n[j]) else { break };
        a[j] += 1;
        for x in a.iter_mut().skip(j + 1) {
            *x = 0;
        }
    }
    let (earlier, later, boxes) = match found {
        Some(f) => f,
        None => {
            let unit: Vec<u64> = n.iter().map(|&x| x - 1).collect();
            let prev = seen.get(&unit).cloned().expect("pigeonhole: the unit point shares a box");
            (prev, None, unit)
        }
    };
    let to_el = |v: &[u64]| FieldElement::from_ints(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    let earlier_el = to_el(&earlier);
    let gamma = match &later {
        Some(l) => to_el(l).sub(&earlier_el),
        None => earlier_el.clone(),
    };
    let trivial = gamma.is_zero();

    let gc = gamma.int_coords().expect("integral");
    let bound_sq: BigRational = n.iter().map(|&x| BigRational::new(BigInt::one(), BigInt::from(x) * BigInt::from(x))).sum();
    let (perp, err, error_certified) = with_precision(prec, cfg.precision_cap, |p| {
        let t = theta.eval(p + 72)?;
        let mut perp = Vec::with_capacity(d);
        let mut err = PrecisionReal::zero();
        for c in &gc {
            let x = t.mul_int(c);
            let (lo, hi) = (x.lo().to_rational().round().to_integer(), x.hi().to_rational().round().to_integer());
            if lo != hi {
                return Ok(None);
            }
            let e = x.sub(&PrecisionReal::from_int(&lo));
            err = err.add(&e.mul(&e));
            perp.push(lo);
        }
        if err.hi().to_rational() < bound_sq {
            Ok(Some((perp, err, true)))
        } else if err.lo().to_rational() >= bound_sq {
            Ok(Some((perp, err, false)))
        } else {
            Ok(None)
        }
    })?;
    let gamma_perp = FieldElement::from_ints(&perp);
    let gamma_norm_sq = gamma.norm_a_squared();
    let eta_norm_sq = eta.norm_a_squared();
    Ok(KDirichlet {
        eta: eta.clone(),
        norm_certified: gamma_norm_sq < eta_norm_sq,
        error_certified,
        gamma,
        gamma_perp,
        earlier: earlier_el,
        later: later.as_deref().map(to_el),
        boxes,
        gamma_norm_sq,
        eta_norm_sq,
        error_norm_sq: err,
        bound_sq,
        trivial,
        krational,
        precision_bits: prec,
    })
}
