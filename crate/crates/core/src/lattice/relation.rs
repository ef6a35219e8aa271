//! Integer relation detection with verified certificates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::basis::{lll_reduce, LatticeBasis};
use super::linalg::{height, normalize_vector, rational_kernel};
use crate::config::Config;
use crate::error::Result;
use crate::numeric::exact::{linear_coordinates, linear_is_zero, BasisNumber};
use crate::numeric::{Dyadic, Exact, PrecisionReal, RealOracle};
use crate::serial;

/// How far a negative search result reaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exclusion {
    /// The lattice bound did not rule out small relations; nothing is claimed.
    None,
    /// No relation of height at most the bound exists (residual floor is positive).
    UpToHeight,
    /// Exact linear algebra over independent basis numbers: no relation at all.
    AllHeights,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RelationStatus {
    ExactVerified,
    /// Verified only by an interval containing zero at the stated precision.
    Empirical {
        precision_bits: u32,
    },
    NoneUpTo {
        #[serde(serialize_with = "serial::big")]
        height_bound: BigInt,
        degree_bound: Option<u32>,
        exclusion: Exclusion,
    },
}

/// Outcome of a relation search.
///
/// `residual` is the enclosure of `sum m_i x_i` for empirical certificates,
/// zero for exact ones, and for negative results a certified lower bound on
/// `|sum m_i x_i|` over all `m` within the height bound (when one was proved).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCertificate {
    #[serde(serialize_with = "serial::opt_big_vec")]
    pub vector: Option<Vec<BigInt>>,
    #[serde(serialize_with = "serial::opt_big")]
    pub height: Option<BigInt>,
    pub status: RelationStatus,
    pub residual: Option<PrecisionReal>,
}

impl RelationCertificate {
    pub fn found(&self) -> bool {
        self.vector.is_some()
    }

    pub fn is_exact(&self) -> bool {
        self.status == RelationStatus::ExactVerified
    }

    pub fn exact(v: Vec<BigInt>) -> Self {
        RelationCertificate { height: Some(height(&v)), vector: Some(v), status: RelationStatus::ExactVerified, residual: Some(PrecisionReal::zero()) }
    }

    pub fn none(h: &BigInt, degree: Option<u32>, exclusion: Exclusion, floor: Option<Dyadic>) -> Self {
        RelationCertificate {
            vector: None,
            height: None,
            status: RelationStatus::NoneUpTo { height_bound: h.clone(), degree_bound: degree, exclusion },
            residual: floor.map(PrecisionReal::point),
        }
    }

    /// Same certificate with the degree bound recorded on a negative result.
    pub fn with_degree_bound(mut self, d: u32) -> Self {
        if let RelationStatus::NoneUpTo { degree_bound, .. } = &mut self.status {
            *degree_bound = Some(d);
        }
        self
    }
}

/// Exact checker for a candidate vector: `Some(true)` when the relation
/// holds symbolically, `Some(false)` when it certainly fails, `None` when no
/// symbolic decision is available.
pub type Verifier<'a> = dyn Fn(&[BigInt]) -> Option<bool> + Sync + 'a;

/// Checks `sum m_i x_i = 0` with the oracles' exact forms when they all have one.
pub fn exact_linear_verifier(xs: &[RealOracle]) -> impl Fn(&[BigInt]) -> Option<bool> + Sync + '_ {
    move |m: &[BigInt]| {
        let forms: Option<Vec<&Exact>> = xs.iter().map(|x| x.exact()).collect();
        linear_is_zero(&forms?, m)
    }
}

/// Searches for `m != 0` with `sum m_i x_i = 0` and `max |m_i| <= h`.
///
/// When every input has an exact form over independent basis numbers the
/// kernel is computed exactly. Otherwise the inputs are embedded in the
/// lattice spanned by `e_i (+) round(2^p x_i)` and LLL-reduced, raising the
/// working precision until a candidate verifies, a residual floor is
/// proved, or the precision cap is reached.
pub fn integer_relation(xs: &[RealOracle], h: &BigInt, cfg: &Config) -> Result<RelationCertificate> {
    let verify = exact_linear_verifier(xs);
    match exact_relation(xs, h) {
        Some(c) if c.found() => Ok(c),
        Some(mut c) => {
            // the lattice pass still supplies a residual floor for the report
            if let RelationCertificate { vector: None, residual, .. } = lattice_relation(xs, h, cfg, &verify)? {
                c.residual = residual;
            }
            Ok(c)
        }
        None => lattice_relation(xs, h, cfg, &verify),
    }
}

/// Relation from exact linear coordinates, when available.
pub fn exact_relation(xs: &[RealOracle], h: &BigInt) -> Option<RelationCertificate> {
    exact_system_relation(&[xs.to_vec()], h)
}

/// Saturated kernel basis of a system of equations `sum_j a_ij m_j = 0`,
/// computed from exact linear coordinates when every entry has them.
/// Bases are LLL-reduced and sorted by height.
pub fn exact_kernel(system: &[Vec<RealOracle>]) -> Option<Vec<Vec<BigInt>>> {
    let n = system.first().map_or(0, |r| r.len());
    let mut matrix: Vec<Vec<BigRational>> = Vec::new();
    for row in system {
        let forms: Vec<Exact> = row.iter().map(|x| x.exact().cloned().map(Exact::canonical)).collect::<Option<_>>()?;
        let refs: Vec<&Exact> = forms.iter().collect();
        let coords = linear_coordinates(&refs)?;
        let keys: BTreeSet<&BasisNumber> = coords.iter().flat_map(|c| c.keys()).collect();
        for k in keys {
            matrix.push(coords.iter().map(|c| c.get(k).cloned().unwrap_or_else(BigRational::zero)).collect());
        }
    }
    if matrix.is_empty() {
        // every entry is zero
        return Some((0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect()).collect());
    }
    Some(rational_kernel(&matrix, n))
}

/// Exact relation for a system of equations, when available.
pub fn exact_system_relation(system: &[Vec<RealOracle>], h: &BigInt) -> Option<RelationCertificate> {
    let kernel = exact_kernel(system)?;
    let Some(best) = kernel.first() else {
        return Some(RelationCertificate::none(h, None, Exclusion::AllHeights, None));
    };
    if height(best) <= *h {
        return Some(RelationCertificate::exact(best.clone()));
    }
    // a rank-one kernel consists of multiples of its primitive generator
    let exclusion = if kernel.len() == 1 { Exclusion::UpToHeight } else { Exclusion::None };
    Some(RelationCertificate::none(h, None, exclusion, None))
}

/// Lattice search with a caller-supplied exact verifier.
pub fn lattice_relation(xs: &[RealOracle], h: &BigInt, cfg: &Config, verify: &Verifier) -> Result<RelationCertificate> {
    lattice_system_relation(&[xs.to_vec()], h, cfg, verify)
}

/// Searches for `m != 0`, `max |m_j| <= h`, with `sum_j a_ij m_j = 0` for every row `i`.
///
/// Exact linear algebra is used when every entry has linear coordinates;
/// otherwise the lattice spanned by `e_j (+) (round(2^p a_1j), ..., round(2^p a_rj))`
/// is reduced as in [`integer_relation`].
pub fn system_relation(system: &[Vec<RealOracle>], h: &BigInt, cfg: &Config) -> Result<RelationCertificate> {
    let verify = |m: &[BigInt]| -> Option<bool> {
        let mut all = true;
        for row in system {
            let forms: Option<Vec<&Exact>> = row.iter().map(|x| x.exact()).collect();
            all &= linear_is_zero(&forms?, m)?;
        }
        Some(all)
    };
    match exact_system_relation(system, h) {
        Some(c) if c.found() => Ok(c),
        Some(mut c) => {
            if let RelationCertificate { vector: None, residual, .. } = lattice_system_relation(system, h, cfg, &verify)? {
                c.residual = residual;
            }
            Ok(c)
        }
        None => lattice_system_relation(system, h, cfg, &verify),
    }
}

fn lattice_system_relation(system: &[Vec<RealOracle>], h: &BigInt, cfg: &Config, verify: &Verifier) -> Result<RelationCertificate> {
    let r = system.len();
    let n = system.first().map_or(0, |row| row.len());
    let delta = cfg.delta_rational();
    let mut prec = cfg.precision_bits.max(32);
    loop {
        let p = cfg.lattice_scale_bits(prec);
        let mut rows: Vec<Vec<BigInt>> = (0..n).map(|j| (0..n).map(|i| BigInt::from((i == j) as u8)).collect()).collect();
        for eq in system {
            for (j, x) in eq.iter().enumerate() {
                // |a_ij - 2^p x_ij| <= 1/2 + 2^(p - prec) <= 1
                let v = x.eval(prec)?;
                rows[j].push(crate::numeric::round_half_even(&v.mid().shl(p as i64).to_rational()));
            }
        }
        let reduced = lll_reduce(&LatticeBasis::new(rows, delta.clone())?);

        let mut candidates: Vec<Vec<BigInt>> = reduced.rows().iter().map(|r| normalize_vector(&r[..n])).filter(|m| height(m) <= *h).collect();
        candidates.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)));
        candidates.dedup();
        for m in &candidates {
            match verify(m) {
                Some(true) => return Ok(RelationCertificate::exact(m.clone())),
                Some(false) => {}
                None => {
                    let check = 2 * prec;
                    let residuals = system.iter().map(|eq| combination(eq, m, check)).collect::<Result<Vec<_>>>()?;
                    if residuals.iter().all(|x| x.contains_zero()) {
                        let worst = residuals.into_iter().max_by(|a, b| a.mag().cmp(&b.mag())).unwrap();
                        return Ok(RelationCertificate {
                            height: Some(height(m)),
                            vector: Some(m.clone()),
                            status: RelationStatus::Empirical { precision_bits: check },
                            residual: Some(worst),
                        });
                    }
                }
            }
        }
        // the floor bounds every lattice vector, so spurious candidates do not invalidate it
        if let Some(floor) = residual_floor(&reduced, n, r, h, p) {
            return Ok(RelationCertificate::none(h, None, Exclusion::UpToHeight, Some(floor)));
        }
        if prec >= cfg.precision_cap {
            return Ok(RelationCertificate::none(h, None, Exclusion::None, None));
        }
        prec = (prec * 2).min(cfg.precision_cap);
    }
}

/// Enclosure of `sum m_i x_i` with width at most about `2^-prec`.
pub fn combination(xs: &[RealOracle], m: &[BigInt], prec: u32) -> Result<PrecisionReal> {
    let extra = height(m).bits() as u32 + (xs.len() as u32).next_power_of_two().trailing_zeros() + 2;
    let mut acc = PrecisionReal::zero();
    for (x, c) in xs.iter().zip(m) {
        if !c.is_zero() {
            acc = acc.add(&x.eval(prec + extra)?.mul_int(c));
        }
    }
    Ok(acc)
}

/// Lower bound on the largest `|sum_j m_j x_ij|` over nonzero `m` with `|m|_inf <= h`.
///
/// Any such `m` gives the lattice vector `(m, (sum_j m_j a_ij)_i)` whose
/// length is at least the smallest Gram-Schmidt norm `B`, so some row has
/// `|sum m_j a_ij| >= sqrt((B^2 - n h^2) / r)` and, since each `a_ij` is
/// within 1 of `2^p x_ij`, `|sum m_j x_ij| >= (sqrt((B^2 - n h^2) / r) - n h) / 2^p`.
fn residual_floor(reduced: &LatticeBasis, n: usize, r: usize, h: &BigInt, p: u32) -> Option<Dyadic> {
    let b2 = reduced.gram_schmidt_norms().into_iter().min()?;
    let nh = BigInt::from(n) * h;
    let slack = (b2 - BigRational::from_integer(&nh * h)) / BigRational::from_integer(BigInt::from(r));
    if !slack.is_positive() {
        return None;
    }
    let s = slack.floor().to_integer().sqrt();
    let num = s - nh;
    if !num.is_positive() {
        return None;
    }
    Some(Dyadic::new(num, -(p as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_oracle;

    fn o(s: &str) -> RealOracle {
        parse_oracle(s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rational_pair() {
        let c = integer_relation(&[o("2"), o("1")], &BigInt::from(10), &Config::default()).unwrap();
        assert_eq!(c.vector, Some(ints(&[1, -2])));
        assert!(c.is_exact());
    }

    #[test]
    fn golden_ratio_powers() {
        let c = integer_relation(&[o("1"), o("phi"), o("phi^2")], &BigInt::from(100), &Config::default()).unwrap();
        assert_eq!(c.vector, Some(ints(&[1, 1, -1])));
        assert!(c.is_exact());
    }

    #[test]
    fn one_and_e_have_a_residual_floor() {
        let c = integer_relation(&[o("1"), o("e")], &BigInt::from(1000), &Config::default()).unwrap();
        assert!(c.vector.is_none());
        // exp(1) has an exact form, so exact linear algebra excludes every height
        assert!(matches!(c.status, RelationStatus::NoneUpTo { exclusion: Exclusion::AllHeights, .. }));
        assert!(c.residual.unwrap().lo().to_f64() > 0.0);
        let d = integer_relation(&[o("1"), o("pi")], &BigInt::from(1000), &Config::default()).unwrap();
        assert!(matches!(d.status, RelationStatus::NoneUpTo { exclusion: Exclusion::UpToHeight, .. }));
        let floor = d.residual.unwrap().lo().to_f64();
        assert!(floor > 0.0 && floor < 1e-3);
    }

    #[test]
    fn pi_relation_is_empirical() {
        let c = integer_relation(&[o("pi"), o("2*pi+1"), o("1")], &BigInt::from(10), &Config::default()).unwrap();
        assert_eq!(c.vector, Some(ints(&[2, -1, 1])));
        assert!(matches!(c.status, RelationStatus::Empirical { .. }));
        assert!(c.residual.unwrap().contains_zero());
    }

    #[test]
    fn cubic_root_relation_verifies_exactly() {
        let x = o("alg([-2,0,0,1];[1,2])");
        let c = integer_relation(&[x.clone(), x.mul_int(3), o("1")], &BigInt::from(10), &Config::default()).unwrap();
        assert_eq!(c.vector, Some(ints(&[3, -1, 0])));
        assert!(c.is_exact());
    }
}
