//! Simultaneous and inhomogeneous diophantine approximation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::basis::{lll_reduce, LatticeBasis};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::{nearest_integer, round_half_even, with_precision, Dyadic, PrecisionReal, RealOracle};
use crate::par::{self, Exec};
use crate::serial;

/// Fractional bits of the fixed-point prefilter used by the scan.
const FIX_BITS: u32 = 96;
const FIX_MASK: u128 = (1u128 << FIX_BITS) - 1;
const SCAN_CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    Scan,
    Lattice,
}

/// `q` with `max_i |q theta_i - p_i| <= Q^(-1/r)`, errors certified.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimultaneousApprox {
    #[serde(serialize_with = "serial::big")]
    pub q: BigInt,
    #[serde(serialize_with = "serial::big_vec")]
    pub p: Vec<BigInt>,
    /// Enclosures of `q theta_i - p_i`.
    pub errors: Vec<PrecisionReal>,
    /// The Dirichlet bound `Q^(-1/r)`.
    pub bound: f64,
    pub method: SearchMethod,
}

impl SimultaneousApprox {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().map(|e| e.mag().to_f64()).fold(0.0, f64::max)
    }
}

/// `max |e_i| ^ r * Q <= 1` checked on upper bounds.
fn within_dirichlet(errors: &[PrecisionReal], q_bound: &BigInt) -> bool {
    let r = errors.len() as u32;
    let worst = errors.iter().map(|e| e.mag()).max().unwrap_or_else(Dyadic::zero);
    let mut acc = Dyadic::one();
    for _ in 0..r {
        acc = &acc * &worst;
    }
    acc.mul_int(q_bound) <= Dyadic::one()
}

/// Residuals `q theta_i - p_i` with `p_i` the nearest integers, exact for rational entries.
fn residuals(thetas: &[RealOracle], q: &BigInt, prec: u32) -> Result<Option<(Vec<BigInt>, Vec<PrecisionReal>)>> {
    let mut ps = Vec::with_capacity(thetas.len());
    let mut es = Vec::with_capacity(thetas.len());
    for t in thetas {
        if let Some(r) = t.as_rational() {
            let x = &r * BigRational::from_integer(q.clone());
            let p = round_half_even(&x);
            let e = x - BigRational::from_integer(p.clone());
            es.push(PrecisionReal::from_rational(&e, prec));
            ps.push(p);
            continue;
        }
        let x = t.eval(prec + q.bits() as u32 + 4)?.mul_int(q);
        match nearest_integer(&x) {
            Ok((p, e)) => {
                ps.push(p);
                es.push(e);
            }
            Err(Error::PrecisionInsufficient { .. }) | Err(Error::InvalidInput(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some((ps, es)))
}

fn dirichlet_bound(q_bound: &BigInt, r: usize) -> f64 {
    let q = q_bound.to_f64().unwrap_or(f64::MAX);
    q.powf(-1.0 / r as f64)
}

/// Finds `1 <= q <= Q` with `max_i ||q theta_i|| <= Q^(-1/r)`.
///
/// Up to the configured scan cap every `q` is examined with a fixed-point
/// prefilter, and the best candidates (smallest maximal error, then smallest
/// `q`) are certified with interval arithmetic. Larger `Q` use a lattice
/// search and fail with `EnumerationCapExceeded` when it does not meet the
/// bound.
pub fn simultaneous_approx(thetas: &[RealOracle], q_bound: &BigInt, cfg: &Config) -> Result<SimultaneousApprox> {
    if thetas.is_empty() {
        return Err(Error::InvalidInput("simultaneous approximation needs at least one value".into()));
    }
    if *q_bound < BigInt::from(2) {
        return Err(Error::InvalidInput("denominator bound must be at least 2".into()));
    }
    match q_bound.to_u64() {
        Some(q) if q <= cfg.scan_cap => scan(thetas, q, cfg),
        _ => lattice_search(thetas, q_bound, cfg),
    }
}

fn fixed_fraction(t: &RealOracle) -> Result<u128> {
    let v = t.eval(FIX_BITS + 16)?;
    let scaled = v.mid().shl(FIX_BITS as i64).floor();
    let m = scaled.mod_floor(&(BigInt::one() << FIX_BITS));
    Ok(m.to_u128().expect("reduced below 2^96"))
}

fn fixed_error(fs: &[u128], q: u64) -> u128 {
    fs.iter()
        .map(|&f| {
            let x = (q as u128).wrapping_mul(f) & FIX_MASK;
            x.min((1u128 << FIX_BITS) - x)
        })
        .max()
        .unwrap_or(0)
}

fn scan(thetas: &[RealOracle], q_max: u64, cfg: &Config) -> Result<SimultaneousApprox> {
    let fs: Vec<u128> = thetas.iter().map(fixed_fraction).collect::<Result<_>>()?;
    let exec = Exec::from_flag(cfg.parallel);
    let best = par::map_chunks(exec, q_max, SCAN_CHUNK, |lo, hi| (lo + 1..=hi).map(|q| fixed_error(&fs, q)).min().unwrap_or(u128::MAX))
        .into_iter()
        .min()
        .unwrap_or(u128::MAX);
    // fixed-point values are off by at most q 2^-96 + 2^-96 < 2^-70 in real terms
    let slack = 1u128 << (FIX_BITS - 70);
    let threshold = best.saturating_add(2 * slack);
    let candidates: Vec<u64> =
        par::map_chunks(exec, q_max, SCAN_CHUNK, |lo, hi| (lo + 1..=hi).filter(|&q| fixed_error(&fs, q) <= threshold).collect::<Vec<_>>())
            .into_iter()
            .flatten()
            .collect();

    let q_bound = BigInt::from(q_max);
    with_precision(cfg.precision_bits, cfg.precision_cap, |prec| {
        let mut chosen: Option<(Dyadic, u64, Vec<BigInt>, Vec<PrecisionReal>)> = None;
        for &q in &candidates {
            let Some((ps, es)) = residuals(thetas, &BigInt::from(q), prec)? else { return Ok(None) };
            let worst = es.iter().map(|e| e.mag()).max().unwrap();
            if chosen.as_ref().is_none_or(|c| worst < c.0) {
                chosen = Some((worst, q, ps, es));
            }
        }
        let Some((_, q, p, errors)) = chosen else { return Ok(None) };
        if !within_dirichlet(&errors, &q_bound) {
            return Ok(None);
        }
        Ok(Some(SimultaneousApprox { q: BigInt::from(q), p, errors, bound: dirichlet_bound(&q_bound, thetas.len()), method: SearchMethod::Scan }))
    })
}

fn lattice_search(thetas: &[RealOracle], q_bound: &BigInt, cfg: &Config) -> Result<SimultaneousApprox> {
    let r = thetas.len();
    let qbits = q_bound.bits() as u32;
    let scale_bits = qbits * 2 + 64 + cfg.guard_bits;
    let c = BigInt::one() << scale_bits;
    // weight on q so that q = Q and error Q^(-1/r) have comparable size
    let shift = q_bound.to_f64().unwrap_or(f64::MAX).log2() * (1.0 + 1.0 / r as f64);
    let c0 = BigInt::one() << (scale_bits as f64 - shift).max(1.0) as u64;
    let mut rows = Vec::with_capacity(r + 1);
    let mut first = vec![c0.clone()];
    for t in thetas {
        let v = t.eval(scale_bits + 8)?;
        first.push(round_half_even(&v.mid().shl(scale_bits as i64).to_rational()));
    }
    rows.push(first);
    for i in 0..r {
        let mut row = vec![BigInt::zero(); r + 1];
        row[i + 1] = c.clone();
        rows.push(row);
    }
    let reduced = lll_reduce(&LatticeBasis::new(rows, cfg.delta_rational())?);
    let mut qs: Vec<BigInt> = reduced
        .rows()
        .iter()
        .filter_map(|v| {
            let (q, rem) = v[0].abs().div_rem(&c0);
            (rem.is_zero() && !q.is_zero() && q <= *q_bound).then_some(q)
        })
        .collect();
    qs.sort();
    qs.dedup();
    let prec = cfg.precision_bits.max(2 * qbits + 64);
    for q in qs {
        if let Some((p, errors)) = residuals(thetas, &q, prec)? {
            if within_dirichlet(&errors, q_bound) {
                return Ok(SimultaneousApprox { q, p, errors, bound: dirichlet_bound(q_bound, r), method: SearchMethod::Lattice });
            }
        }
    }
    Err(Error::EnumerationCapExceeded { size: q_bound.to_string(), cap: cfg.scan_cap })
}

/// `n` and `p` with `|n theta + beta - p| < target`, certified.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InhomogeneousApprox {
    #[serde(serialize_with = "serial::big")]
    pub n: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub p: BigInt,
    pub error: PrecisionReal,
}

/// Solves `|n theta + beta - p| < target` with `|n| <= n_cap`.
///
/// At scale `N = 2^j` the lattice spanned by `(2^(P-2j), round(2^P theta))`
/// and `(0, 2^P)` is Gauss-reduced and the closest vectors to
/// `(0, -round(2^P beta))` are examined; a lattice vector `(n w, 2^P (n theta - p))`
/// near the target has `|n| ~ N` and error `~ 1/N`. Scales grow until the
/// target is met or `N` passes `n_cap`.
pub fn inhomogeneous_approx(theta: &RealOracle, beta: &RealOracle, target: &BigRational, n_cap: &BigInt, cfg: &Config) -> Result<InhomogeneousApprox> {
    let mut j: u32 = 4;
    loop {
        if (BigInt::one() << j) > n_cap * 4 {
            return Err(Error::SearchExhausted { stage: 0, bound: n_cap.to_string() });
        }
        let pbits = 2 * j + 64;
        let w = BigInt::one() << (pbits - 2 * j);
        let a = round_half_even(&theta.eval(pbits + 8)?.mid().shl(pbits as i64).to_rational());
        let b = round_half_even(&beta.eval(pbits + 8)?.mid().shl(pbits as i64).to_rational());
        let (r1, r2) = gauss_reduce([w.clone(), a], [BigInt::zero(), BigInt::one() << pbits]);
        let target_vec = [BigInt::zero(), -b];
        let centre = babai(&r1, &r2, &target_vec);
        let mut best: Option<InhomogeneousApprox> = None;
        for c1 in -1i32..=1 {
            for c2 in -1i32..=1 {
                let v0 = &centre[0] + &r1[0] * c1 + &r2[0] * c2;
                let n = &v0 / &w;
                if n.abs() > *n_cap {
                    continue;
                }
                if let Some(found) = certify_inhomogeneous(theta, beta, &n, target, cfg)? {
                    let better = best.as_ref().is_none_or(|b| (found.n.abs(), &found.n) < (b.n.abs(), &b.n));
                    if better {
                        best = Some(found);
                    }
                }
            }
        }
        if let Some(b) = best {
            return Ok(b);
        }
        j += 2;
    }
}

fn certify_inhomogeneous(theta: &RealOracle, beta: &RealOracle, n: &BigInt, target: &BigRational, cfg: &Config) -> Result<Option<InhomogeneousApprox>> {
    let t = Dyadic::from_rational_floor(target, 64 + target.denom().bits() as u32);
    let start = cfg.precision_bits.max(n.bits() as u32 + 64);
    let step = |prec: u32| -> Result<Option<Option<InhomogeneousApprox>>> {
        let x = theta.eval(prec + n.bits() as u32 + 4)?.mul_int(n).add(&beta.eval(prec)?);
        let (p, e) = match nearest_integer(&x) {
            Ok(v) => v,
            Err(Error::PrecisionInsufficient { .. }) | Err(Error::InvalidInput(_)) => return Ok(None),
            Err(err) => return Err(err),
        };
        if e.mag() < t {
            Ok(Some(Some(InhomogeneousApprox { n: n.clone(), p, error: e })))
        } else if e.mig() >= t {
            Ok(Some(None))
        } else {
            Ok(None)
        }
    };
    match with_precision(start, cfg.precision_cap, step) {
        Ok(v) => Ok(v),
        Err(Error::PrecisionInsufficient { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn dot2(a: &[BigInt; 2], b: &[BigInt; 2]) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1]
}

/// Lagrange-Gauss reduction of a planar basis.
fn gauss_reduce(mut u: [BigInt; 2], mut v: [BigInt; 2]) -> ([BigInt; 2], [BigInt; 2]) {
    if dot2(&u, &u) > dot2(&v, &v) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let uu = dot2(&u, &u);
        let m = round_half_even(&BigRational::new(dot2(&u, &v), uu.clone()));
        let nv = [&v[0] - &m * &u[0], &v[1] - &m * &u[1]];
        if dot2(&nv, &nv) >= uu {
            return (u, nv);
        }
        v = u;
        u = nv;
    }
}

/// Babai rounding: the lattice point with coordinates rounded from `t`.
fn babai(r1: &[BigInt; 2], r2: &[BigInt; 2], t: &[BigInt; 2]) -> [BigInt; 2] {
    let det = &r1[0] * &r2[1] - &r1[1] * &r2[0];
    // t = x r1 + y r2
    let x = round_half_even(&BigRational::new(&t[0] * &r2[1] - &t[1] * &r2[0], det.clone()));
    let y = round_half_even(&BigRational::new(&r1[0] * &t[1] - &r1[1] * &t[0], det));
    [&x * &r1[0] + &y * &r2[0], &x * &r1[1] + &y * &r2[1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_oracle;

    fn o(s: &str) -> RealOracle {
        parse_oracle(s).unwrap()
    }

    #[test]
    fn pi_up_to_120() {
        let s = simultaneous_approx(&[o("pi")], &BigInt::from(120), &Config::default()).unwrap();
        assert_eq!(s.q, BigInt::from(113));
        assert_eq!(s.p, vec![BigInt::from(355)]);
        assert!((s.errors[0].mid_f64() + 3.0e-5).abs() < 2e-6);
    }

    #[test]
    fn half_is_exact() {
        let s = simultaneous_approx(&[o("1/2")], &BigInt::from(2), &Config::default()).unwrap();
        assert_eq!(s.q, BigInt::from(2));
        assert!(s.errors[0].is_point() && s.errors[0].mid_f64() == 0.0);
    }

    #[test]
    fn lattice_branch_meets_the_bound() {
        let cfg = Config { scan_cap: 10, ..Config::default() };
        let s = simultaneous_approx(&[o("sqrt(2)"), o("sqrt(3)")], &BigInt::from(100_000), &cfg).unwrap();
        assert_eq!(s.method, SearchMethod::Lattice);
        assert!(s.max_error() <= s.bound);
    }

    #[test]
    fn inhomogeneous_target() {
        let theta = o("sqrt(2)");
        let beta = o("sqrt(2)/6");
        let target = BigRational::new(1.into(), 1_000_000.into());
        let r = inhomogeneous_approx(&theta, &beta, &target, &BigInt::from(10u64.pow(12)), &Config::default()).unwrap();
        let v = r.n.to_f64().unwrap() * 2f64.sqrt() + 2f64.sqrt() / 6.0 - r.p.to_f64().unwrap();
        assert!(v.abs() < 1e-6);
    }
}
