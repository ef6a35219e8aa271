//! Polynomial diophantine approximation: error terms `F(theta)`, degree-graded
//! searches for minimal polynomials and algebraic dependences, and
//! divisibility of found relations by a minimal polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::linalg::{height, normalize_vector};
use crate::lattice::{combination, exact_kernel, exact_relation, lattice_relation, lll_reduce, Exclusion, LatticeBasis, RelationCertificate, RelationStatus};
use crate::numeric::exact::poly_is_zero;
use crate::numeric::{round_half_even, Exact, PrecisionReal, RealOracle};
use crate::poly::{IntPolynomial, MonomialOrder, UPoly};
use crate::serial;

/// Enclosure of `F(theta_1, ..., theta_s)`; a point zero when exact forms prove the value vanishes.
pub fn poly_error(thetas: &[RealOracle], f: &IntPolynomial, prec: u32) -> Result<PrecisionReal> {
    if thetas.len() != f.nvars() {
        return Err(Error::DimensionMismatch(format!("{} values for a polynomial in {} variables", thetas.len(), f.nvars())));
    }
    let forms: Vec<Option<Exact>> = thetas.iter().map(|t| t.exact().cloned()).collect();
    if poly_is_zero(f, &forms) == Some(true) {
        return Ok(PrecisionReal::zero());
    }
    let extra = f.height().bits() as u32 + 8 * f.degree().max(1) + 8;
    let xs = thetas.iter().map(|t| t.eval(prec + extra)).collect::<Result<Vec<_>>>()?;
    Ok(f.eval_interval(&xs, prec + extra).round_out(prec))
}

/// The monomial `prod theta_i^e_i` as an oracle.
fn monomial_oracle(thetas: &[RealOracle], e: &[u32], cap: u32) -> Result<RealOracle> {
    let mut acc: Option<RealOracle> = None;
    for (t, &k) in thetas.iter().zip(e) {
        if k == 0 {
            continue;
        }
        let p = t.powi(k as i64, cap)?;
        acc = Some(match acc {
            None => p,
            Some(a) => a.mul(&p),
        });
    }
    Ok(acc.unwrap_or_else(|| RealOracle::int(1)))
}

/// Outcome of one degree of the graded search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeVerdict {
    pub degree: u32,
    pub monomials: usize,
    pub status: RelationStatus,
}

/// A relation search result carrying the polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyRelation {
    pub polynomial: Option<IntPolynomial>,
    pub display: Option<String>,
    pub degree: Option<u32>,
    pub certificate: RelationCertificate,
    pub per_degree: Vec<DegreeVerdict>,
    pub degree_bound: u32,
    #[serde(serialize_with = "serial::big")]
    pub height_bound: BigInt,
}

impl PolyRelation {
    pub fn found(&self) -> bool {
        self.polynomial.is_some()
    }
}

fn search_degree(thetas: &[RealOracle], monos: &[Vec<u32>], h: &BigInt, cfg: &Config) -> Result<RelationCertificate> {
    let xs = monos.iter().map(|e| monomial_oracle(thetas, e, cfg.precision_cap)).collect::<Result<Vec<_>>>()?;
    if let Some(c) = exact_relation(&xs, h) {
        if c.found() || !matches!(c.status, RelationStatus::NoneUpTo { exclusion: Exclusion::None, .. }) {
            return Ok(c);
        }
    }
    let forms: Vec<Option<Exact>> = thetas.iter().map(|t| t.exact().cloned()).collect();
    let s = thetas.len();
    let verify = |m: &[BigInt]| -> Option<bool> { poly_is_zero(&to_poly(s, monos, m), &forms) };
    lattice_relation(&xs, h, cfg, &verify)
}

fn to_poly(s: usize, monos: &[Vec<u32>], m: &[BigInt]) -> IntPolynomial {
    IntPolynomial::from_terms(s, monos.iter().cloned().zip(m.iter().cloned()))
}

/// Degree-graded search: for `d = 1..dmax` look for a relation among all
/// monomials of total degree at most `d` (the constant monomial only when
/// `with_constant`), returning the first verified one, normalized.
pub fn algebraic_dependence(thetas: &[RealOracle], dmax: u32, h: &BigInt, with_constant: bool, cfg: &Config) -> Result<PolyRelation> {
    if thetas.is_empty() {
        return Err(Error::InvalidInput("need at least one number".into()));
    }
    if dmax == 0 {
        return Err(Error::InvalidInput("degree bound must be at least 1".into()));
    }
    let s = thetas.len();
    let mut per_degree = Vec::new();
    let mut last = None;
    for d in 1..=dmax {
        let monos = MonomialOrder::monomials(s, d, with_constant);
        let count = monos.len();
        if count as u64 > cfg.enumeration_cap {
            return Err(Error::EnumerationCapExceeded { size: count.to_string(), cap: cfg.enumeration_cap });
        }
        let cert = search_degree(thetas, &monos, h, cfg)?;
        per_degree.push(DegreeVerdict { degree: d, monomials: count, status: cert.status.clone() });
        if let Some(v) = &cert.vector {
            let f = to_poly(s, &monos, v).normalized();
            let sign_flip = f.leading().map(|(e, c)| to_poly(s, &monos, v).coeff(e) != *c).unwrap_or(false);
            let mut cert = cert.clone();
            if sign_flip {
                cert.vector = cert.vector.map(|v| v.into_iter().map(|x| -x).collect());
            }
            return Ok(PolyRelation {
                display: Some(f.to_string()),
                degree: Some(f.degree()),
                polynomial: Some(f),
                certificate: cert,
                per_degree,
                degree_bound: dmax,
                height_bound: h.clone(),
            });
        }
        last = Some(cert);
    }
    Ok(PolyRelation {
        polynomial: None,
        display: None,
        degree: None,
        certificate: last.expect("dmax >= 1").with_degree_bound(dmax),
        per_degree,
        degree_bound: dmax,
        height_bound: h.clone(),
    })
}

/// The lowest-degree integer polynomial vanishing at `theta`, primitive with
/// positive leading coefficient.
pub fn minimal_polynomial(theta: &RealOracle, dmax: u32, h: &BigInt, cfg: &Config) -> Result<PolyRelation> {
    algebraic_dependence(std::slice::from_ref(theta), dmax, h, true, cfg)
}

/// Every short relation of degree at most `d` for a single number: a
/// kernel basis when exact forms allow, otherwise the verified rows of the
/// reduced relation lattice.
pub fn degree_relations(theta: &RealOracle, d: u32, h: &BigInt, cfg: &Config) -> Result<Vec<IntPolynomial>> {
    let monos = MonomialOrder::monomials(1, d, true);
    let xs = monos.iter().map(|e| monomial_oracle(std::slice::from_ref(theta), e, cfg.precision_cap)).collect::<Result<Vec<_>>>()?;
    let as_poly = |m: &[BigInt]| to_poly(1, &monos, m).normalized();
    if let Some(kernel) = exact_kernel(std::slice::from_ref(&xs)) {
        return Ok(kernel.iter().filter(|v| height(v) <= *h).map(|v| as_poly(v)).collect());
    }
    let forms = [theta.exact().cloned()];
    let n = xs.len();
    let prec = cfg.precision_bits.max(64);
    let p = cfg.lattice_scale_bits(prec);
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut r: Vec<BigInt> = (0..n).map(|i| BigInt::from((i == j) as u8)).collect();
            r.push(round_half_even(&xs[j].eval(prec)?.mid().shl(p as i64).to_rational()));
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let reduced = lll_reduce(&LatticeBasis::new(rows, cfg.delta_rational())?);
    let mut out = Vec::new();
    for r in reduced.rows() {
        let m = normalize_vector(&r[..n]);
        if m.iter().all(|x| x.is_zero()) || height(&m) > *h {
            continue;
        }
        let holds = match poly_is_zero(&to_poly(1, &monos, &m), &forms) {
            Some(b) => b,
            None => combination(&xs, &m, 2 * prec)?.contains_zero(),
        };
        if holds {
            out.push(as_poly(&m));
        }
    }
    Ok(out)
}

/// Exact division verdict for one polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisionEntry {
    pub polynomial: String,
    pub divisible: bool,
    #[serde(serialize_with = "serial::rational_vec")]
    pub quotient: Vec<BigRational>,
    #[serde(serialize_with = "serial::rational_vec")]
    pub remainder: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdealReport {
    pub generator: String,
    pub entries: Vec<DivisionEntry>,
    pub all_divisible: bool,
    /// Index of the first polynomial the generator does not divide.
    pub counterexample: Option<usize>,
}

/// Checks `m | F` by exact division for every univariate `F`.
pub fn ideal_containment(found: &[IntPolynomial], m: &IntPolynomial) -> Result<IdealReport> {
    let uni = |f: &IntPolynomial| -> Result<UPoly> {
        if f.nvars() != 1 {
            return Err(Error::InvalidInput("ideal containment is univariate".into()));
        }
        Ok(f.as_univariate_in(0).expect("one variable"))
    };
    if m.is_zero() {
        return Err(Error::InvalidInput("generator must be nonzero".into()));
    }
    let mu = uni(m)?;
    let mut entries = Vec::with_capacity(found.len());
    for f in found {
        let (q, r) = uni(f)?.divrem(&mu);
        entries.push(DivisionEntry { polynomial: f.to_string(), divisible: r.is_zero(), quotient: q.coeffs().to_vec(), remainder: r.coeffs().to_vec() });
    }
    let counterexample = entries.iter().position(|e| !e.divisible);
    Ok(IdealReport { generator: m.to_string(), all_divisible: counterexample.is_none(), counterexample, entries })
}

/// Polynomials of bounded degree with their evaluation profile at a point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolySequence {
    pub degree_bound: u32,
    pub polys: Vec<IntPolynomial>,
}

impl PolySequence {
    pub fn new(degree_bound: u32, polys: Vec<IntPolynomial>) -> Result<Self> {
        if let Some(p) = polys.iter().find(|p| p.degree() > degree_bound) {
            return Err(Error::InvalidInput(format!("{p} exceeds degree bound {degree_bound}")));
        }
        if polys.windows(2).any(|w| w[0].nvars() != w[1].nvars()) {
            return Err(Error::DimensionMismatch("polynomials in different numbers of variables".into()));
        }
        Ok(PolySequence { degree_bound, polys })
    }

    pub fn profile(&self, thetas: &[RealOracle], prec: u32) -> Result<Vec<PrecisionReal>> {
        self.polys.iter().map(|f| poly_error(thetas, f, prec)).collect()
    }

    fn zip_with(&self, o: &PolySequence, degree_bound: u32, f: impl Fn(&IntPolynomial, &IntPolynomial) -> IntPolynomial) -> Result<PolySequence> {
        if self.polys.len() != o.polys.len() {
            return Err(Error::LengthMismatch { left: self.polys.len(), right: o.polys.len() });
        }
        PolySequence::new(degree_bound, self.polys.iter().zip(&o.polys).map(|(a, b)| f(a, b)).collect())
    }

    pub fn add(&self, o: &PolySequence) -> Result<PolySequence> {
        self.zip_with(o, self.degree_bound.max(o.degree_bound), |a, b| a.add(b))
    }

    pub fn mul(&self, o: &PolySequence) -> Result<PolySequence> {
        self.zip_with(o, self.degree_bound + o.degree_bound, |a, b| a.mul(b))
    }
}

/// Parses `"X^2 - 2"`, `"X1*X2 - X3"` or a JSON ascending coefficient list `[-2, 0, 1]`.
pub fn parse_polynomial(text: &str, nvars: Option<usize>) -> Result<IntPolynomial> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: Vec<serde_json::Value> = serde_json::from_str(t).map_err(|e| Error::Parse(format!("polynomial: {e}")))?;
        let coeffs = v
            .iter()
            .map(|x| match x {
                serde_json::Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|_| Error::Parse(format!("non-integer coefficient {n}"))),
                serde_json::Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("non-integer coefficient {s}"))),
                _ => Err(Error::Parse("coefficients must be integers".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(IntPolynomial::univariate(&coeffs));
    }
    let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms: Vec<String> = Vec::new();
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
            terms.push(String::new());
        }
        if terms.is_empty() {
            terms.push(String::new());
        }
        terms.last_mut().unwrap().push(ch);
    }
    let mut parsed: Vec<(Vec<(usize, u32)>, BigInt)> = Vec::new();
    let mut max_var = 0usize;
    let mut bare_x = false;
    for term in &terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term.strip_prefix('+').unwrap_or(term)),
        };
        let mut coeff = BigInt::from(1);
        let mut vars = Vec::new();
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("malformed term '{term}'")));
            }
            if let Some(rest) = factor.strip_prefix('X').or_else(|| factor.strip_prefix('x')) {
                let (idx, pow) = match rest.split_once('^') {
                    Some((i, p)) => (i, p.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?),
                    None => (rest, 1),
                };
                let v = if idx.is_empty() {
                    bare_x = true;
                    0
                } else {
                    idx.parse::<usize>().ok().filter(|&i| i >= 1).ok_or_else(|| Error::Parse(format!("bad variable '{factor}'")))? - 1
                };
                max_var = max_var.max(v);
                vars.push((v, pow));
            } else {
                coeff *= factor.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient '{factor}'")))?;
            }
        }
        parsed.push((vars, if neg { -coeff } else { coeff }));
    }
    if bare_x && max_var > 0 {
        return Err(Error::Parse("mixes X with indexed variables".into()));
    }
    let s = nvars.unwrap_or(max_var + 1);
    if max_var >= s {
        return Err(Error::DimensionMismatch(format!("variable X{} in a polynomial over {s} variables", max_var + 1)));
    }
    Ok(IntPolynomial::from_terms(
        s,
        parsed.into_iter().map(|(vars, c)| {
            let mut e = vec![0u32; s];
            for (v, p) in vars {
                e[v] += p;
            }
            (e, c)
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_oracle;

    fn o(s: &str) -> RealOracle {
        parse_oracle(s).unwrap()
    }

    #[test]
    fn error_terms() {
        let f = parse_polynomial("X^2 - 2", None).unwrap();
        let z = poly_error(&[o("sqrt(2)")], &f, 128).unwrap();
        assert!(z.is_point() && z.lo().is_zero());
        let v = poly_error(&[o("1.41")], &f, 128).unwrap();
        assert!((v.mid_f64() + 0.0119).abs() < 1e-12);
        let g = parse_polynomial("X1*X2 - X3", None).unwrap();
        assert!(poly_error(&[o("2"), o("3"), o("6")], &g, 64).unwrap().contains_zero());
    }

    #[test]
    fn minimal_polynomials_of_quadratics() {
        let cfg = Config::default();
        let h = BigInt::from(1000);
        let r = minimal_polynomial(&o("sqrt(2)"), 2, &h, &cfg).unwrap();
        assert_eq!(r.display.as_deref(), Some("X^2 - 2"));
        assert!(r.certificate.is_exact());
        let r = minimal_polynomial(&o("phi"), 4, &h, &cfg).unwrap();
        assert_eq!(r.display.as_deref(), Some("X^2 - X - 1"));
    }

    #[test]
    fn cubic_by_lattice() {
        let cfg = Config::default();
        let r = minimal_polynomial(&o("alg([-1,-2,1,1];[1.2,1.3])"), 4, &BigInt::from(100), &cfg).unwrap();
        assert_eq!(r.display.as_deref(), Some("X^3 + X^2 - 2*X - 1"));
        assert!(r.certificate.is_exact());
    }

    #[test]
    fn pi_has_no_small_polynomial() {
        let cfg = Config::default();
        let r = minimal_polynomial(&o("pi"), 4, &BigInt::from(100_000), &cfg).unwrap();
        assert!(!r.found());
        assert_eq!(r.per_degree.len(), 4);
        match &r.certificate.status {
            RelationStatus::NoneUpTo { exclusion, degree_bound, .. } => {
                assert_eq!(*exclusion, Exclusion::UpToHeight);
                assert_eq!(*degree_bound, Some(4));
            }
            s => panic!("{s:?}"),
        }
        assert!(r.certificate.residual.is_some());
    }

    #[test]
    fn dependences() {
        let cfg = Config::default();
        let h = BigInt::from(1000);
        let r = algebraic_dependence(&[o("sqrt(2)"), o("sqrt(8)")], 2, &h, true, &cfg).unwrap();
        assert_eq!(r.display.as_deref(), Some("X2 - 2*X1"));
        assert_eq!(r.degree, Some(1));
        let r = algebraic_dependence(&[o("pi"), o("pi^2")], 2, &h, true, &cfg).unwrap();
        assert_eq!(r.display.as_deref(), Some("X1^2 - X2"));
        assert!(matches!(r.certificate.status, RelationStatus::Empirical { .. }));
        let r = algebraic_dependence(&[o("log(2)"), o("log(3)")], 3, &h, true, &cfg).unwrap();
        assert!(!r.found());
    }

    #[test]
    fn ideal_divisibility() {
        let m = parse_polynomial("X^2 - 2", None).unwrap();
        let cfg = Config::default();
        let rels = degree_relations(&o("sqrt(2)"), 4, &BigInt::from(1000), &cfg).unwrap();
        assert_eq!(rels.len(), 3);
        assert!(ideal_containment(&rels, &m).unwrap().all_divisible);
        let bad = parse_polynomial("X^3 - 3", None).unwrap();
        let rep = ideal_containment(&[m.clone(), bad], &m).unwrap();
        assert_eq!(rep.counterexample, Some(1));
    }

    #[test]
    fn polynomial_parsing() {
        assert_eq!(parse_polynomial("[-2, 0, 1]", None).unwrap(), parse_polynomial("x^2-2", None).unwrap());
        assert_eq!(parse_polynomial("-3*X1^2*X2 + 4", None).unwrap().to_string(), "-3*X1^2*X2 + 4");
        assert!(parse_polynomial("X + X2", None).is_err());
        assert!(parse_polynomial("2*Y", None).is_err());
    }
}
