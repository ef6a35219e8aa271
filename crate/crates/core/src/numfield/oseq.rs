use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{rational_det, FieldElement, NumberField};
use crate::config::Config;
use crate::dagroups::{decay_fit, decide, ApproxSequence, CertificationBasis, DecayCertificate, MembershipStatus, Provenance};
use crate::error::{Error, Result};
use crate::numeric::{with_precision, Dyadic, PrecisionReal, RealOracle};
use crate::par::{self, Exec};
use crate::serial;

/// A finite prefix of `*O` elements `alpha_i` with duals `alpha_i^perp`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OApproxSequence {
    pub theta: String,
    pub entries: Vec<FieldElement>,
    pub duals: Vec<FieldElement>,
    pub provenance: Provenance,
}

impl OApproxSequence {
    /// Binds entries to theta with coordinatewise nearest-integer duals.
    pub fn bind(k: &NumberField, theta: &RealOracle, entries: Vec<FieldElement>, cfg: &Config) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("sequence is empty".into()));
        }
        let d = k.degree();
        let mut duals = Vec::with_capacity(entries.len());
        for e in &entries {
            if e.coords.len() != d {
                return Err(Error::DimensionMismatch(format!("entry has {} coordinates, field degree is {d}", e.coords.len())));
            }
            let c = e.int_coords().ok_or_else(|| Error::InvalidInput("entries must lie in O".into()))?;
            let s = ApproxSequence::bind(theta, c, cfg)?;
            duals.push(FieldElement::from_ints(&s.duals));
        }
        Ok(OApproxSequence { theta: theta.literal().to_string(), entries, duals, provenance: Provenance::UserSupplied })
    }

    /// Uses the given duals as they are.
    pub fn with_duals(k: &NumberField, theta: &RealOracle, entries: Vec<FieldElement>, duals: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != duals.len() {
            return Err(Error::LengthMismatch { left: entries.len(), right: duals.len() });
        }
        if entries.is_empty() {
            return Err(Error::InvalidInput("sequence is empty".into()));
        }
        let d = k.degree();
        if entries.iter().chain(&duals).any(|e| e.coords.len() != d || !e.is_integral()) {
            return Err(Error::InvalidInput(format!("entries and duals must be integral {d}-vectors")));
        }
        Ok(OApproxSequence { theta: theta.literal().to_string(), entries, duals, provenance: Provenance::UserSupplied })
    }

    /// `alpha_i = sum_j n_(j,i) alpha_j` from one `*Z(theta)` sequence per basis element.
    ///
    /// When every component carries a decay certificate, `|eps_nu,i| <=
    /// sum_j C_j |nu(alpha_j)| base^i` gives a certificate for every place.
    pub fn from_components(k: &NumberField, comps: &[ApproxSequence]) -> Result<Self> {
        let d = k.degree();
        if comps.len() != d {
            return Err(Error::DimensionMismatch(format!("{} components for degree {d}", comps.len())));
        }
        let len = comps[0].len();
        if let Some(c) = comps.iter().find(|c| c.len() != len) {
            return Err(Error::LengthMismatch { left: len, right: c.len() });
        }
        if comps.iter().any(|c| c.theta != comps[0].theta) {
            return Err(Error::InvalidInput("components refer to different thetas".into()));
        }
        let entries = (0..len).map(|i| FieldElement::from_ints(&comps.iter().map(|c| c.entries[i].clone()).collect::<Vec<_>>())).collect();
        let duals = (0..len).map(|i| FieldElement::from_ints(&comps.iter().map(|c| c.duals[i].clone()).collect::<Vec<_>>())).collect();
        let certs: Option<Vec<&DecayCertificate>> = comps.iter().map(|c| c.provenance.certificate()).collect();
        let certificate = match certs {
            Some(cs) => {
                let mut c = BigRational::zero();
                for (j, cj) in cs.iter().enumerate() {
                    let m = (0..d).map(|nu| basis_magnitude(k, nu, j)).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap();
                    c += &cj.c * m;
                }
                let base = cs.iter().map(|x| x.base.clone()).max().unwrap();
                Some(DecayCertificate::new(c, base))
            }
            None => None,
        };
        let provenance = if comps.iter().all(|c| c.provenance == Provenance::UserSupplied) {
            Provenance::UserSupplied
        } else {
            Provenance::Constructed { method: "components".into(), certificate }
        };
        Ok(OApproxSequence { theta: comps[0].theta.clone(), entries, duals, provenance })
    }

    /// The diagonal image of a `*Z(theta)` sequence: `alpha_i = n_i * 1`.
    pub fn diagonal(k: &NumberField, seq: &ApproxSequence) -> Self {
        let d = k.degree();
        let lift = |x: &BigInt| FieldElement::rational(d, BigRational::from_integer(x.clone()));
        OApproxSequence {
            theta: seq.theta.clone(),
            entries: seq.entries.iter().map(lift).collect(),
            duals: seq.duals.iter().map(lift).collect(),
            provenance: seq.provenance.clone(),
        }
    }

    /// The half-shift member of `*O(theta)` in `Q(sqrt D)`, `D = 1 mod 4`:
    /// `alpha_i = q_i (1 + sqrt D)` and `alpha_i^perp = p_i w` for convergents
    /// `p_i / q_i` of `2 theta` with odd `p_i`. Both local errors are
    /// `nu(w) (2 q_i theta - p_i)`, yet in the `{1, sqrt D}` decomposition
    /// the components `q_i` satisfy `q_i theta - p_i/2 -> 0` and so are not members
    /// of `*Z(theta)`.
    pub fn half_shift(k: &NumberField, theta: &RealOracle, len: usize, cfg: &Config) -> Result<Self> {
        let w = k.basis(1);
        let ww = k.mul(&w, &w);
        let quarter = ww.coords[0].clone();
        if k.degree() != 2 || ww.coords[1] != BigRational::from_integer(1.into()) || !quarter.is_integer() {
            return Err(Error::InvalidInput("half-shift needs Q(sqrt D) with D = 1 mod 4 and basis {1, (1 + sqrt D)/2}".into()));
        }
        let two_theta = theta.mul_int(2);
        let mut entries = Vec::with_capacity(len);
        let mut duals = Vec::with_capacity(len);
        let mut depth = 2 * len + 8;
        while entries.len() < len {
            let cf = crate::dagroups::convergents(&two_theta, depth, cfg)?;
            entries.clear();
            duals.clear();
            for c in cf.pairs.iter().filter(|c| c.p.is_odd()) {
                if entries.len() == len {
                    break;
                }
                entries.push(FieldElement::from_ints(&[BigInt::zero(), 2 * &c.q]));
                duals.push(FieldElement::from_ints(&[BigInt::zero(), c.p.clone()]));
            }
            if cf.terminated && entries.len() < len {
                return Err(Error::InvalidInput("2 theta has too few convergents with odd numerator".into()));
            }
            depth *= 2;
            if depth > 4096 {
                return Err(Error::SearchExhausted { stage: entries.len(), bound: "4096 convergents".into() });
            }
        }
        Ok(OApproxSequence {
            theta: theta.literal().to_string(),
            entries,
            duals,
            provenance: Provenance::Constructed { method: "half_shift".into(), certificate: None },
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Rational upper bound on `|nu(alpha_j)|`.
fn basis_magnitude(k: &NumberField, nu: usize, j: usize) -> Result<BigRational> {
    let x = k.embedding_matrix()[nu][j].eval(64)?;
    Ok(x.mag().round_up(16).to_rational())
}

/// The error profile at one place.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaceProfile {
    pub place: usize,
    pub epsilons: Vec<PrecisionReal>,
    #[serde(flatten)]
    pub status: MembershipStatus,
    pub lambda: Option<f64>,
    pub r2: Option<f64>,
}

impl PlaceProfile {
    pub fn is_member(&self) -> bool {
        matches!(self.status, MembershipStatus::CertifiedMember { .. } | MembershipStatus::EmpiricalMember { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OMembership {
    /// Conjunction of the local verdicts.
    #[serde(flatten)]
    pub status: MembershipStatus,
    /// First place whose profile fails, for non-members.
    pub failing_place: Option<usize>,
    pub tolerance: f64,
    pub places: Vec<PlaceProfile>,
}

impl OMembership {
    pub fn is_member(&self) -> bool {
        matches!(self.status, MembershipStatus::CertifiedMember { .. } | MembershipStatus::EmpiricalMember { .. })
    }

    pub fn is_certified(&self) -> bool {
        matches!(self.status, MembershipStatus::CertifiedMember { .. })
    }
}

/// Enclosures of `eps_nu,i = nu(alpha_i) theta - nu(alpha_i^perp)`.
fn place_errors(k: &NumberField, theta: &RealOracle, seq: &OApproxSequence, nu: usize, prec: u32) -> Result<Vec<PrecisionReal>> {
    let t = theta.eval(prec + 16)?;
    seq.entries.iter().zip(&seq.duals).map(|(a, b)| Ok(k.embed_at(a, nu, prec + 16)?.mul(&t).sub(&k.embed_at(b, nu, prec + 16)?))).collect()
}

fn local_profile(k: &NumberField, theta: &RealOracle, seq: &OApproxSequence, nu: usize, cfg: &Config) -> Result<PlaceProfile> {
    let tol = Dyadic::from_rational_floor(&crate::config::f64_to_rational(cfg.tolerance), 64);
    let cert = seq.provenance.certificate();
    let run = with_precision(cfg.precision_bits, cfg.precision_cap, |p| {
        let eps = place_errors(k, theta, seq, nu, p)?;
        let fit = decay_fit(&eps, p, cfg);
        Ok(decide(&eps, cert, fit.as_ref(), &tol).map(|s| (s, eps, fit)))
    });
    match run {
        Ok((status, epsilons, fit)) => Ok(PlaceProfile { place: nu, epsilons, status, lambda: fit.as_ref().map(|f| f.lambda), r2: fit.as_ref().map(|f| f.r2) }),
        Err(Error::PrecisionInsufficient { bits }) => {
            Ok(PlaceProfile { place: nu, epsilons: Vec::new(), status: MembershipStatus::PrecisionInsufficient { bits }, lambda: None, r2: None })
        }
        Err(e) => Err(e),
    }
}

/// Membership in `*O(theta)`: every place's error profile must pass.
pub fn o_membership(k: &NumberField, theta: &RealOracle, seq: &OApproxSequence, cfg: &Config) -> Result<OMembership> {
    if seq.is_empty() {
        return Err(Error::InvalidInput("sequence is empty".into()));
    }
    let places =
        par::map_range(Exec::from_flag(cfg.parallel), k.degree(), |nu| local_profile(k, theta, seq, nu, cfg)).into_iter().collect::<Result<Vec<_>>>()?;
    let failing = places.iter().find(|p| matches!(p.status, MembershipStatus::NotMember { .. }));
    let (status, failing_place) = if let Some(p) = failing {
        (p.status.clone(), Some(p.place))
    } else if let Some(p) = places.iter().find(|p| matches!(p.status, MembershipStatus::PrecisionInsufficient { .. })) {
        (p.status.clone(), None)
    } else if places.iter().all(|p| matches!(p.status, MembershipStatus::CertifiedMember { .. })) {
        let exact = places.iter().all(|p| p.status == MembershipStatus::CertifiedMember { basis: CertificationBasis::ExactZero });
        let basis = if exact { CertificationBasis::ExactZero } else { CertificationBasis::DecayCertificate };
        (MembershipStatus::CertifiedMember { basis }, None)
    } else {
        let fit_accepted = places.iter().all(|p| !matches!(p.status, MembershipStatus::EmpiricalMember { fit_accepted: false }));
        (MembershipStatus::EmpiricalMember { fit_accepted }, None)
    };
    Ok(OMembership { status, failing_place, tolerance: cfg.tolerance, places })
}

/// Entrywise trace, a sequence of `*Z(theta)` whose error is the sum of the local errors.
pub fn trace_push(k: &NumberField, seq: &OApproxSequence) -> Result<ApproxSequence> {
    let tr = |x: &FieldElement| -> Result<BigInt> {
        let t = k.trace(x);
        if t.is_integer() {
            Ok(t.to_integer())
        } else {
            Err(Error::InvalidInput(format!("trace {t} is not an integer; the basis is not integral")))
        }
    };
    let entries = seq.entries.iter().map(tr).collect::<Result<Vec<_>>>()?;
    let duals = seq.duals.iter().map(tr).collect::<Result<Vec<_>>>()?;
    let provenance = match &seq.provenance {
        Provenance::UserSupplied => Provenance::UserSupplied,
        Provenance::Constructed { certificate, .. } => Provenance::Constructed {
            method: "trace".into(),
            certificate: certificate.as_ref().map(|c| DecayCertificate::new(&c.c * BigRational::from_integer(k.degree().into()), c.base.clone())),
        },
    };
    Ok(ApproxSequence { theta: seq.theta.clone(), entries, duals, provenance })
}

/// The image of a sequence under an automorphism, with the induced action on places.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaloisImage {
    pub sequence: OApproxSequence,
    /// `place_permutation[nu] = mu` when `nu(sigma(x)) = mu(x)` for all `x`.
    pub place_permutation: Vec<usize>,
}

/// Applies the automorphism given by the images of the basis elements.
pub fn galois_apply(k: &NumberField, sigma: &[FieldElement], seq: &OApproxSequence) -> Result<GaloisImage> {
    k.check_automorphism(sigma)?;
    let d = k.degree();
    let mut perm = Vec::with_capacity(d);
    for nu in 0..d {
        let imgs = sigma.iter().map(|s| k.embed_at(s, nu, 96)).collect::<Result<Vec<_>>>()?;
        let mu = (0..d).find(|&mu| {
            k.embedding_matrix()[mu].iter().zip(&imgs).all(|(e, x)| e.eval(96).map(|y| y.intersect(&x.inflate(&Dyadic::pow2(-60))).is_some()).unwrap_or(false))
        });
        perm.push(mu.ok_or_else(|| Error::NotAutomorphism(format!("no place matches place {nu} composed with the map")))?);
    }
    let mut sorted = perm.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != d {
        return Err(Error::NotAutomorphism("induced map on places is not a permutation".into()));
    }
    let map = |xs: &[FieldElement]| xs.iter().map(|x| k.apply_map(sigma, x)).collect::<Vec<_>>();
    let sequence = OApproxSequence { theta: seq.theta.clone(), entries: map(&seq.entries), duals: map(&seq.duals), provenance: seq.provenance.clone() };
    Ok(GaloisImage { sequence, place_permutation: perm })
}

/// The conjugate products `f_i(X) = prod_nu (nu(alpha_i) X - nu(alpha_i^perp))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugatePoly {
    /// Coefficients in ascending degree.
    #[serde(serialize_with = "serial::big_grid")]
    pub polys: Vec<Vec<BigInt>>,
    /// Enclosures of `f_i(theta)`.
    pub values: Vec<PrecisionReal>,
    /// Enclosures of `prod_nu |eps_nu,i|`.
    pub error_products: Vec<PrecisionReal>,
}

/// Coefficients of `det(X M_a - M_b)` by exact evaluation at `X = 0..d` and
/// Newton interpolation.
fn char_product(k: &NumberField, a: &FieldElement, b: &FieldElement) -> Vec<BigRational> {
    let d = k.degree();
    let (ma, mb) = (k.mult_matrix(a), k.mult_matrix(b));
    let xs: Vec<BigRational> = (0..=d).map(|x| BigRational::from_integer(x.into())).collect();
    let ys: Vec<BigRational> = xs.iter().map(|x| rational_det((0..d).map(|r| (0..d).map(|c| x * &ma[r][c] - &mb[r][c]).collect()).collect())).collect();
    // divided differences, then expand the Newton form
    let mut dd = ys;
    for lvl in 1..=d {
        for i in (lvl..=d).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - lvl]);
        }
    }
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for i in (0..=d).rev() {
        // coeffs = coeffs * (X - x_i) + dd[i]
        let mut next = vec![BigRational::zero(); d + 1];
        for (j, c) in coeffs.iter().enumerate() {
            if j < d {
                next[j + 1] += c;
            }
            next[j] -= c * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

fn horner(coeffs: &[BigInt], x: &PrecisionReal) -> PrecisionReal {
    coeffs.iter().rev().fold(PrecisionReal::zero(), |acc, c| acc.mul(x).add(&PrecisionReal::from_int(c)))
}

pub fn conjugate_poly(k: &NumberField, theta: &RealOracle, seq: &OApproxSequence, cfg: &Config) -> Result<ConjugatePoly> {
    let mut polys = Vec::with_capacity(seq.len());
    for (i, (a, b)) in seq.entries.iter().zip(&seq.duals).enumerate() {
        let c = char_product(k, a, b);
        if c.iter().any(|x| !x.is_integer()) {
            return Err(Error::NonIntegralCoefficients { index: i });
        }
        polys.push(c.iter().map(|x| x.to_integer()).collect::<Vec<_>>());
    }
    let p = cfg.precision_bits;
    let t = theta.eval(p + 64)?;
    let values = polys.iter().map(|c| horner(c, &t).round_out(p)).collect();
    let per_place = (0..k.degree()).map(|nu| place_errors(k, theta, seq, nu, p + 64)).collect::<Result<Vec<_>>>()?;
    let error_products = (0..seq.len()).map(|i| per_place.iter().fold(PrecisionReal::from_i64(1), |acc, e| acc.mul(&e[i].abs())).round_out(p)).collect();
    Ok(ConjugatePoly { polys, values, error_products })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dagroups::{member_from_convergents, membership, NumeratorConstraint};
    use crate::numeric::parse_oracle;

    fn sqrt2_components(theta: &RealOracle, len: usize) -> OApproxSequence {
        let cfg = Config::default();
        let k = NumberField::builtin("Q(sqrt 2)").unwrap();
        let m = member_from_convergents(theta, len, &cfg).unwrap();
        let n = crate::dagroups::combine(&m, &m, &BigInt::from(2), &BigInt::zero()).unwrap();
        OApproxSequence::from_components(&k, &[m, n]).unwrap()
    }

    #[test]
    fn components_from_convergents_are_global_members() {
        let cfg = Config::default();
        let k = NumberField::builtin("Q(sqrt 2)").unwrap();
        let pi = parse_oracle("pi").unwrap();
        let s = sqrt2_components(&pi, 8);
        let v = o_membership(&k, &pi, &s, &cfg).unwrap();
        assert!(v.is_certified(), "{v:?}");
        assert_eq!(v.places.len(), 2);
    }

    #[test]
    fn multiples_of_sqrt_two_fail_for_pi() {
        let cfg = Config::default();
        let k = NumberField::builtin("Q(sqrt 2)").unwrap();
        let pi = parse_oracle("pi").unwrap();
        let entries = (1..=6).map(|i| FieldElement::from_i64s(&[0, i])).collect();
        let s = OApproxSequence::bind(&k, &pi, entries, &cfg).unwrap();
        let v = o_membership(&k, &pi, &s, &cfg).unwrap();
        assert!(matches!(v.status, MembershipStatus::NotMember { .. }));
        assert!(v.failing_place.is_some());
    }

    #[test]
    fn trace_error_is_sum_of_local_errors() {
        let cfg = Config::default();
        let k = NumberField::builtin("Q(sqrt 2)").unwrap();
        let pi = parse_oracle("pi").unwrap();
        let s = sqrt2_components(&pi, 8);
        let t = trace_push(&k, &s).unwrap();
        for (e, a) in t.entries.iter().zip(&s.entries) {
            assert_eq!(e, &(a.coords[0].to_integer() * 2));
        }
        let tau2 = Config { tolerance: 2.0 * cfg.tolerance, ..cfg.clone() };
        assert!(membership(&pi, &t, NumeratorConstraint::Integers, &tau2).unwrap().is_member());
        let ov = o_membership(&k, &pi, &s, &cfg).unwrap();
        for i in 0..s.len() {
            let tr_err = t.entries[i].clone();
            let x = pi.eval(256).unwrap().mul_int(&tr_err).sub(&PrecisionReal::from_int(&t.duals[i]));
            let sum = ov.places[0].epsilons[i].add(&ov.places[1].epsilons[i]);
            assert!(x.intersect(&sum).is_some());
        }
    }

    #[test]
    fn galois_swaps_places() {
        let cfg = Config::default();
        let k = NumberField::builtin("Q(sqrt 2)").unwrap();
        let pi = parse_oracle("pi").unwrap();
        let s = sqrt2_components(&pi, 6);
        let sigma = k.automorphisms()[0].clone();
        let g = galois_apply(&k, &sigma, &s).unwrap();
        assert_eq!(g.place_permutation, vec![1, 0]);
        let twice = galois_apply(&k, &sigma, &g.sequence).unwrap();
        assert_eq!(twice.sequence.entries, s.entries);
        let a = o_membership(&k, &pi, &s, &cfg).unwrap();
        let b = o_membership(&k, &pi, &g.sequence, &cfg).unwrap();
        assert_eq!(a.is_member(), b.is_member());
        for (x, y) in b.places[0].epsilons.iter().zip(&a.places[1].epsilons) {
            assert!(x.intersect(y).is_some());
        }
        let bad = vec![FieldElement::from_i64s(&[1, 0]), FieldElement::from_i64s(&[1, 1])];
        assert!(matches!(galois_apply(&k, &bad, &s), Err(Error::NotAutomorphism(_))));
    }

    #[test]
    fn conjugate_products() {
        let cfg = Config::default();
        let k = NumberField::builtin("Q(sqrt 2)").unwrap();
        let pi = parse_oracle("pi").unwrap();
        let s = sqrt2_components(&pi, 6);
        let c = conjugate_poly(&k, &pi, &s, &cfg).unwrap();
        for (i, (a, b)) in s.entries.iter().zip(&s.duals).enumerate() {
            // (m X - m')^2 - 2 (n X - n')^2 for alpha = m + n w
            let (m, n) = (a.coords[0].to_integer(), a.coords[1].to_integer());
            let (mp, np) = (b.coords[0].to_integer(), b.coords[1].to_integer());
            let expect = vec![&mp * &mp - 2 * &np * &np, -2 * &m * &mp + 4 * &n * &np, &m * &m - 2 * &n * &n];
            assert_eq!(c.polys[i], expect);
            assert!(c.values[i].abs().lo() <= c.error_products[i].hi());
        }
        // diagonal entries give (n X - n')^d
        let m = member_from_convergents(&pi, 4, &cfg).unwrap();
        let diag = OApproxSequence::diagonal(&k, &m);
        let c = conjugate_poly(&k, &pi, &diag, &cfg).unwrap();
        let (n, np) = (&m.entries[2], &m.duals[2]);
        assert_eq!(c.polys[2], vec![np * np, -2 * n * np, n * n]);
    }

    #[test]
    fn half_shift_members_with_non_member_components() {
        let cfg = Config::default();
        let k = NumberField::builtin("Q(sqrt 5)").unwrap();
        let pi = parse_oracle("pi").unwrap();
        let s = OApproxSequence::half_shift(&k, &pi, 6, &cfg).unwrap();
        assert!(o_membership(&k, &pi, &s, &cfg).unwrap().is_member());
        let q: Vec<BigInt> = s.entries.iter().map(|e| e.coords[1].to_integer() / 2).collect();
        let comp = ApproxSequence::bind(&pi, q, &cfg).unwrap();
        assert!(!membership(&pi, &comp, NumeratorConstraint::Integers, &cfg).unwrap().is_member());
        assert!(OApproxSequence::half_shift(&NumberField::builtin("Q(sqrt 2)").unwrap(), &pi, 3, &cfg).is_err());
    }

    #[test]
    fn cubic_trace_and_rotation() {
        let cfg = Config::default();
        let k = NumberField::maxreal7().unwrap();
        let e = parse_oracle("e").unwrap();
        let m = member_from_convergents(&e, 6, &cfg).unwrap();
        let s = OApproxSequence::from_components(&k, &[m.clone(), m.clone(), m]).unwrap();
        assert!(o_membership(&k, &e, &s, &cfg).unwrap().is_certified());
        let g = galois_apply(&k, &k.automorphisms()[0], &s).unwrap();
        let mut p = g.place_permutation.clone();
        p.sort_unstable();
        assert_eq!(p, vec![0, 1, 2]);
        assert!(g.place_permutation.iter().enumerate().all(|(i, &j)| i != j));
        let c = conjugate_poly(&k, &e, &s, &cfg).unwrap();
        assert!(c.polys.iter().all(|p| p.len() == 4));
    }
}
