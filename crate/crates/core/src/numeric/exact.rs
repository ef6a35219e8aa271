//! Symbolic forms for the oracle classes that admit exact zero tests:
//! elements of multiquadratic fields, rational combinations of logarithms of
//! primes, finite sums of algebraic multiples of exponentials of
//! multiquadratic numbers, and real algebraic numbers given by a defining
//! polynomial with an isolating interval.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dyadic::Dyadic;
use super::elementary::{exp_interval, log_rational, refine, sqrt_rational};
use super::interval::PrecisionReal;
use crate::error::Result;
use crate::poly::{IntPolynomial, UPoly};

const TRIAL_LIMIT: u64 = 1 << 20;

/// Prime factorization of `|n|` by trial division, or `None` when a cofactor
/// too large to certify as prime remains.
pub fn factorize(n: &BigInt) -> Option<BTreeMap<u64, u32>> {
    let mut n = n.abs();
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return None;
    }
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        while (&n % &bp).is_zero() {
            n /= &bp;
            *out.entry(p).or_insert(0) += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let lim = BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT);
        if n >= lim {
            return None;
        }
        *out.entry(n.to_u64()?).or_insert(0) += 1;
    }
    Some(out)
}

/// Writes `n > 0` as `s^2 * f` with `f` squarefree; returns `(s, f)`.
pub fn squarefree_decompose(n: &BigInt) -> Option<(BigInt, u64)> {
    let f = factorize(n)?;
    let mut s = BigInt::one();
    let mut core = 1u64;
    for (p, e) in f {
        s *= num_traits::pow(BigInt::from(p), (e / 2) as usize);
        if e % 2 == 1 {
            core = core.checked_mul(p)?;
        }
    }
    Some((s, core))
}

/// Element of a multiquadratic field: `sum c_k sqrt(k)` over squarefree `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiQuad {
    terms: BTreeMap<u64, BigRational>,
}

impl MultiQuad {
    pub fn zero() -> Self {
        MultiQuad::default()
    }

    pub fn rational(r: BigRational) -> Self {
        let mut m = MultiQuad::zero();
        m.add_term(1, r);
        m
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// `sqrt(r)` for a nonnegative rational.
    pub fn sqrt_of(r: &BigRational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Self::zero());
        }
        // sqrt(p/q) = sqrt(p q) / q
        let (s, f) = squarefree_decompose(&(r.numer() * r.denom()))?;
        let mut m = MultiQuad::zero();
        m.add_term(f, BigRational::new(s, r.denom().clone()));
        Some(m)
    }

    /// `(a + b sqrt(d)) / c`.
    pub fn surd(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Option<Self> {
        if c.is_zero() || d.is_negative() {
            return None;
        }
        let root = Self::sqrt_of(&BigRational::from_integer(d.clone()))?;
        let x = Self::rational(BigRational::from_integer(a.clone())).add(&root.scale(&BigRational::from_integer(b.clone())));
        Some(x.scale(&BigRational::new(BigInt::one(), c.clone())))
    }

    fn add_term(&mut self, k: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &MultiQuad) -> MultiQuad {
        let mut m = self.clone();
        for (k, c) in &o.terms {
            m.add_term(*k, c.clone());
        }
        m
    }

    pub fn neg(&self) -> MultiQuad {
        MultiQuad { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, o: &MultiQuad) -> MultiQuad {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &BigRational) -> MultiQuad {
        let mut m = MultiQuad::zero();
        for (k, c) in &self.terms {
            m.add_term(*k, c * r);
        }
        m
    }

    pub fn mul(&self, o: &MultiQuad) -> MultiQuad {
        let mut m = MultiQuad::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let g = a.gcd(b);
                let k = (a / g).checked_mul(b / g).expect("radicand overflow");
                m.add_term(k, ca * cb * BigRational::from_integer(g.into()));
            }
        }
        m
    }

    pub fn pow(&self, n: u32) -> MultiQuad {
        let mut acc = MultiQuad::int(1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Primes dividing some radicand.
    pub fn primes(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for k in self.terms.keys() {
            if let Some(f) = factorize(&BigInt::from(*k)) {
                out.extend(f.keys().copied());
            }
        }
        out
    }

    /// Image under the automorphism `sqrt(p) -> -sqrt(p)`.
    pub fn conjugate(&self, p: u64) -> MultiQuad {
        MultiQuad { terms: self.terms.iter().map(|(k, c)| (*k, if k % p == 0 { -c } else { c.clone() })).collect() }
    }

    pub fn inverse(&self) -> Option<MultiQuad> {
        if self.is_zero() {
            return None;
        }
        let mut num = MultiQuad::int(1);
        let mut den = self.clone();
        for p in self.primes() {
            let c = den.conjugate(p);
            num = num.mul(&c);
            den = den.mul(&c);
        }
        let r = den.as_rational().expect("norm lies in the base field");
        Some(num.scale(&r.recip()))
    }

    pub fn eval(&self, prec: u32) -> PrecisionReal {
        let mut acc = PrecisionReal::zero();
        let extra = self.terms.len() as u32 + 4;
        for (k, c) in &self.terms {
            let cb = (c.numer().bits() as i64 - c.denom().bits() as i64 + 2).max(0) as u32;
            let w = prec + cb + extra;
            let s = sqrt_rational(&BigRational::from_integer((*k).into()), w);
            acc = acc.add(&s.mul_rational(c, w).round_out(w));
        }
        acc
    }

    /// Monic minimal polynomial over the rationals.
    pub fn minimal_polynomial(&self) -> UPoly {
        let primes: Vec<u64> = self.primes().into_iter().collect();
        // product over all sign patterns of (X - sigma(self))
        let mut poly: Vec<MultiQuad> = vec![MultiQuad::int(1)];
        for mask in 0u64..(1u64 << primes.len()) {
            let mut c = self.clone();
            for (i, p) in primes.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    c = c.conjugate(*p);
                }
            }
            let mut next = vec![MultiQuad::zero(); poly.len() + 1];
            for (i, a) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1].add(a);
                next[i] = next[i].sub(&a.mul(&c));
            }
            poly = next;
        }
        let coeffs: Vec<BigRational> = poly.iter().map(|m| m.as_rational().expect("symmetric coefficients are rational")).collect();
        UPoly::new(coeffs).squarefree()
    }
}

/// Rational combination of logarithms of primes, `sum c_p log p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LogLin {
    terms: BTreeMap<u64, BigRational>,
}

impl LogLin {
    /// `log q` for a positive rational.
    pub fn log_of(q: &BigRational) -> Option<LogLin> {
        if !q.is_positive() {
            return None;
        }
        let mut out = LogLin::default();
        for (p, e) in factorize(q.numer())? {
            out.add_term(p, BigRational::from_integer(e.into()));
        }
        for (p, e) in factorize(q.denom())? {
            out.add_term(p, -BigRational::from_integer(e.into()));
        }
        Some(out)
    }

    fn add_term(&mut self, p: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `log p` for each prime `p`.
    pub fn terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    pub fn add(&self, o: &LogLin) -> LogLin {
        let mut m = self.clone();
        for (p, c) in &o.terms {
            m.add_term(*p, c.clone());
        }
        m
    }

    pub fn scale(&self, r: &BigRational) -> LogLin {
        let mut m = LogLin::default();
        for (p, c) in &self.terms {
            m.add_term(*p, c * r);
        }
        m
    }

    /// `exp` of the combination when it is a square root of a rational.
    pub fn exp_as_quad(&self) -> Option<MultiQuad> {
        let two = BigInt::from(2);
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, c) in &self.terms {
            let doubled = c * BigRational::from_integer(two.clone());
            if !doubled.is_integer() {
                return None;
            }
            let k = doubled.to_integer();
            let pk = num_traits::pow(BigInt::from(*p), k.abs().to_usize()?);
            if k.is_negative() {
                den *= pk;
            } else {
                num *= pk;
            }
        }
        MultiQuad::sqrt_of(&BigRational::new(num, den))
    }

    pub fn eval(&self, prec: u32) -> Result<PrecisionReal> {
        let extra = self.terms.len() as u32 + 4;
        let mut acc = PrecisionReal::zero();
        for (p, c) in &self.terms {
            let cb = (c.numer().bits() as i64 - c.denom().bits() as i64 + 2).max(0) as u32;
            let w = prec + cb + extra;
            let l = log_rational(&BigRational::from_integer((*p).into()), w)?;
            acc = acc.add(&l.mul_rational(c, w).round_out(w));
        }
        Ok(acc)
    }
}

/// Finite sum `sum beta_k exp(alpha_k)` with multiquadratic `alpha_k` (distinct) and `beta_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExpSum {
    terms: BTreeMap<MultiQuad, MultiQuad>,
}

impl ExpSum {
    pub fn from_quad(q: MultiQuad) -> Self {
        let mut s = ExpSum::default();
        s.add_term(MultiQuad::zero(), q);
        s
    }

    pub fn exp_of(x: MultiQuad) -> Self {
        let mut s = ExpSum::default();
        s.add_term(x, MultiQuad::int(1));
        s
    }

    fn add_term(&mut self, x: MultiQuad, c: MultiQuad) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(x.clone()).or_default();
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&x);
        }
    }

    /// Zero test, exact by the Lindemann-Weierstrass theorem: the sum vanishes
    /// only when every coefficient attached to a distinct exponent vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient attached to each exponent.
    pub fn terms(&self) -> &BTreeMap<MultiQuad, MultiQuad> {
        &self.terms
    }

    pub fn as_quad(&self) -> Option<MultiQuad> {
        match self.terms.len() {
            0 => Some(MultiQuad::zero()),
            1 => self.terms.get(&MultiQuad::zero()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &ExpSum) -> ExpSum {
        let mut s = self.clone();
        for (x, c) in &o.terms {
            s.add_term(x.clone(), c.clone());
        }
        s
    }

    pub fn neg(&self) -> ExpSum {
        ExpSum { terms: self.terms.iter().map(|(x, c)| (x.clone(), c.neg())).collect() }
    }

    pub fn mul(&self, o: &ExpSum) -> ExpSum {
        let mut s = ExpSum::default();
        for (xa, ca) in &self.terms {
            for (xb, cb) in &o.terms {
                s.add_term(xa.add(xb), ca.mul(cb));
            }
        }
        s
    }

    pub fn inverse(&self) -> Option<ExpSum> {
        if self.terms.len() != 1 {
            return None;
        }
        let (x, c) = self.terms.iter().next().unwrap();
        let mut s = ExpSum::default();
        s.add_term(x.neg(), c.inverse()?);
        Some(s)
    }

    pub fn eval(&self, prec: u32) -> Result<PrecisionReal> {
        refine(prec, |w| {
            let mut acc = PrecisionReal::zero();
            for (x, c) in &self.terms {
                let ex = exp_interval(&x.eval(w + 8), w)?;
                acc = acc.add(&ex.mul(&c.eval(w + 8)));
            }
            Ok(acc)
        })
    }
}

fn rational_value(poly: &UPoly, lo: &BigRational, hi: &BigRational) -> Option<BigRational> {
    if poly.degree() == Some(1) {
        return Some(-poly.monic().coeff(0));
    }
    rational_roots(poly).into_iter().find(|r| r > lo && r <= hi)
}

/// Real algebraic number: the unique root of `poly` in `(lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgNum {
    poly: UPoly,
    lo: BigRational,
    hi: BigRational,
    rational: Option<BigRational>,
}

impl AlgNum {
    /// Validates that `(lo, hi]` isolates exactly one root of `poly`.
    pub fn new(poly: UPoly, lo: BigRational, hi: BigRational) -> Option<AlgNum> {
        if poly.degree().unwrap_or(0) == 0 || lo >= hi {
            return None;
        }
        let sf = poly.squarefree();
        if sf.count_roots(&lo, &hi) != 1 {
            return None;
        }
        let rational = rational_value(&sf, &lo, &hi);
        Some(AlgNum { poly: sf, lo, hi, rational })
    }

    pub fn poly(&self) -> &UPoly {
        &self.poly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    /// Rational value when the root is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.rational.clone()
    }

    /// Multiquadratic form when the root has degree at most two.
    pub fn as_quad(&self) -> Option<MultiQuad> {
        if let Some(r) = self.as_rational() {
            return Some(MultiQuad::rational(r));
        }
        // strip rational roots, then look for a quadratic factor containing the root
        let mut p = self.poly.clone();
        for r in rational_roots(&self.poly) {
            p = p.divrem(&UPoly::linear_root(&r)).0;
        }
        if p.degree() != Some(2) {
            return None;
        }
        let p = p.monic();
        let b = p.coeff(1);
        let c = p.coeff(0);
        let two = BigRational::from_integer(2.into());
        let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
        let root = MultiQuad::sqrt_of(&disc)?;
        let vertex = -&b / &two;
        let base = MultiQuad::rational(vertex.clone());
        let half = root.scale(&two.recip());
        let smaller = if self.hi <= vertex {
            true
        } else if self.lo >= vertex {
            false
        } else {
            p.count_roots(&self.lo, &vertex) == 1
        };
        Some(if smaller { base.sub(&half) } else { base.add(&half) })
    }

    /// Exact zero test for `f(alpha)`.
    pub fn is_root_of(&self, f: &UPoly) -> bool {
        if f.is_zero() {
            return true;
        }
        let g = f.gcd(&self.poly);
        g.degree().unwrap_or(0) > 0 && g.count_roots(&self.lo, &self.hi) == 1
    }

    /// Monic minimal polynomial when the root has degree at most two; otherwise
    /// the monic squarefree defining polynomial with rational roots removed,
    /// which is minimal whenever that remainder is irreducible.
    pub fn minimal_polynomial(&self) -> UPoly {
        if let Some(q) = self.as_quad() {
            return q.minimal_polynomial();
        }
        let mut p = self.poly.clone();
        for r in rational_roots(&self.poly) {
            p = p.divrem(&UPoly::linear_root(&r)).0;
        }
        p.monic()
    }

    /// The root `-alpha`.
    pub fn neg(&self) -> AlgNum {
        self.affine(&-BigRational::one(), &BigRational::zero())
    }

    /// The root `c alpha + d` for `c != 0`, isolated again for `p((y - d) / c)`.
    pub fn affine(&self, c: &BigRational, d: &BigRational) -> AlgNum {
        assert!(!c.is_zero(), "affine map must be invertible");
        let q = self.poly.compose_linear(&c.recip(), &(-d / c));
        let mut bits = 64;
        loop {
            let t = self.eval(bits).mul_rational(c, bits + 8);
            let t = PrecisionReal::from_rational(d, bits + 8).add(&t);
            let pad = Dyadic::pow2(-(bits as i64) + 2);
            let lo = (t.lo() - &pad).to_rational();
            let hi = (t.hi() + &pad).to_rational();
            if let Some(n) = AlgNum::new(q.clone(), lo, hi) {
                return n;
            }
            bits *= 2;
            assert!(bits <= 1 << 14, "roots of a squarefree polynomial are separated");
        }
    }

    /// Exact equality of the two roots.
    pub fn same_value(&self, o: &AlgNum) -> bool {
        let g = self.poly.gcd(&o.poly);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        // g divides both polynomials, so a root of g in either interval is that interval's root
        let lo = std::cmp::max(&self.lo, &o.lo);
        let hi = std::cmp::min(&self.hi, &o.hi);
        lo < hi && g.count_roots(lo, hi) >= 1
    }

    /// `(c, d)` with `o = c self + d` for rationals `c != 0` and `d`, when such exist.
    pub fn affine_relation(&self, o: &AlgNum) -> Option<(BigRational, BigRational)> {
        let p = self.minimal_polynomial();
        let q = o.minimal_polynomial();
        let n = p.degree()?;
        if q.degree() != Some(n) || n == 0 {
            return None;
        }
        let nr = BigRational::from_integer(BigInt::from(n));
        let mu = -p.coeff(n - 1) / &nr;
        let nu = -q.coeff(n - 1) / &nr;
        let pc = p.compose_linear(&BigRational::one(), &mu);
        let qc = q.compose_linear(&BigRational::one(), &nu);
        let mut candidates = Vec::new();
        if n == 1 {
            candidates.push(BigRational::one());
        }
        if let Some(j) = (0..n.saturating_sub(1)).find(|&j| !pc.coeff(j).is_zero()) {
            // centred coefficients scale as q_j = c^(n-j) p_j
            let t = qc.coeff(j) / pc.coeff(j);
            let e = (n - j) as u32;
            let root = |x: &BigInt| -> Option<BigInt> {
                let r = x.nth_root(e);
                (num_traits::pow(r.clone(), e as usize) == *x).then_some(r)
            };
            if t.is_zero() {
                return None;
            }
            let mag = BigRational::new(root(&t.numer().abs())?, root(&t.denom().abs())?);
            if e % 2 == 1 {
                candidates.push(if t.is_negative() { -mag } else { mag });
            } else if t.is_positive() {
                candidates.push(mag.clone());
                candidates.push(-mag);
            }
        }
        for c in candidates {
            let d = &nu - &c * &mu;
            if self.affine(&c, &d).same_value(o) {
                return Some((c, d));
            }
        }
        None
    }

    pub fn eval(&self, prec: u32) -> PrecisionReal {
        if let Some(r) = &self.rational {
            return PrecisionReal::from_rational(r, prec + 2);
        }
        let k = prec + 4;
        let coeffs = self.poly.primitive_int();
        let d = coeffs.len() - 1;
        // sign of p(m / 2^k) from the integer 2^(k d) p(m / 2^k)
        let sign = |m: &BigInt| -> i32 {
            let mut acc = coeffs[d].clone();
            for i in (0..d).rev() {
                acc = acc * m + (&coeffs[i] << ((k as usize) * (d - i)));
            }
            acc.signum().to_i32().unwrap()
        };
        let scale = BigRational::from_integer(BigInt::one() << k);
        let lo_scaled = &self.lo * &scale;
        let hi_scaled = &self.hi * &scale;
        let (lo_floor, hi_ceil) = (lo_scaled.floor().to_integer(), hi_scaled.ceil().to_integer());
        let s_hi = self.poly.sign_at(&self.hi);
        if s_hi == 0 {
            return PrecisionReal::from_rational(&self.hi, prec + 2);
        }
        // the root stays in (a / 2^k, b / 2^k]; p changes sign only there inside (lo, hi]
        let (mut a, mut b) = (lo_floor.clone(), hi_ceil.clone());
        while &b - &a > BigInt::from(2) {
            let m: BigInt = (&a + &b) >> 1;
            if m <= lo_floor {
                a = m;
            } else if m >= hi_ceil {
                b = m;
            } else {
                match sign(&m) {
                    0 => return PrecisionReal::point(Dyadic::new(m, -(k as i64))),
                    s if s == s_hi => b = m,
                    _ => a = m,
                }
            }
        }
        PrecisionReal::new(Dyadic::new(a, -(k as i64)), Dyadic::new(b, -(k as i64)))
    }
}

/// Rational roots of a polynomial with rational coefficients.
pub fn rational_roots(p: &UPoly) -> Vec<BigRational> {
    let ints = p.primitive_int();
    if ints.len() < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if ints[0].is_zero() {
        out.push(BigRational::zero());
    }
    // lowest nonzero coefficient
    let Some(k) = ints.iter().position(|c| !c.is_zero()) else {
        return out;
    };
    let a0 = ints[k].abs();
    let an = ints.last().unwrap().abs();
    if a0.bits() > 40 || an.bits() > 40 {
        return out;
    }
    let divs = |n: &BigInt| -> Vec<BigInt> {
        let n = n.to_u64().unwrap();
        let mut d = Vec::new();
        let mut i = 1u64;
        while i * i <= n {
            if n.is_multiple_of(i) {
                d.push(BigInt::from(i));
                if i * i != n {
                    d.push(BigInt::from(n / i));
                }
            }
            i += 1;
        }
        d
    };
    for num in divs(&a0) {
        for den in divs(&an) {
            for s in [1, -1] {
                let r = BigRational::new(&num * s, den.clone());
                if p.eval(&r).is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out
}

/// Symbolic value of an oracle, when one is known.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exact {
    Quad(MultiQuad),
    Log(LogLin),
    Exp(ExpSum),
    Alg(AlgNum),
}

impl Exact {
    pub fn rational(r: BigRational) -> Exact {
        Exact::Quad(MultiQuad::rational(r))
    }

    /// Normalizes: algebraic numbers of degree at most two become multiquadratic,
    /// exponential sums with only a constant term become multiquadratic.
    pub fn canonical(self) -> Exact {
        match self {
            Exact::Alg(a) => match a.as_quad() {
                Some(q) => Exact::Quad(q),
                None => Exact::Alg(a),
            },
            Exact::Exp(s) => match s.as_quad() {
                Some(q) => Exact::Quad(q),
                None => Exact::Exp(s),
            },
            e => e,
        }
    }

    pub fn as_quad(&self) -> Option<&MultiQuad> {
        match self {
            Exact::Quad(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_quad().and_then(|q| q.as_rational())
    }

    fn as_exp(&self) -> Option<ExpSum> {
        match self {
            Exact::Quad(q) => Some(ExpSum::from_quad(q.clone())),
            Exact::Exp(s) => Some(s.clone()),
            _ => None,
        }
    }

    pub fn is_algebraic(&self) -> bool {
        matches!(self, Exact::Quad(_) | Exact::Alg(_))
    }

    pub fn add(&self, o: &Exact) -> Option<Exact> {
        match (self, o) {
            (Exact::Quad(a), Exact::Quad(b)) => Some(Exact::Quad(a.add(b))),
            (Exact::Log(a), Exact::Log(b)) => Some(Exact::Log(a.add(b))),
            (Exact::Log(a), Exact::Quad(q)) | (Exact::Quad(q), Exact::Log(a)) if q.is_zero() => Some(Exact::Log(a.clone())),
            (Exact::Alg(a), Exact::Quad(q)) | (Exact::Quad(q), Exact::Alg(a)) => Some(Exact::Alg(a.affine(&BigRational::one(), &q.as_rational()?)).canonical()),
            _ => Some(Exact::Exp(self.as_exp()?.add(&o.as_exp()?)).canonical()),
        }
    }

    pub fn neg(&self) -> Exact {
        match self {
            Exact::Quad(a) => Exact::Quad(a.neg()),
            Exact::Log(a) => Exact::Log(a.scale(&-BigRational::one())),
            Exact::Exp(s) => Exact::Exp(s.neg()),
            Exact::Alg(a) => Exact::Alg(a.neg()),
        }
    }

    pub fn mul(&self, o: &Exact) -> Option<Exact> {
        match (self, o) {
            (Exact::Quad(a), Exact::Quad(b)) => Some(Exact::Quad(a.mul(b))),
            (Exact::Log(l), Exact::Quad(q)) | (Exact::Quad(q), Exact::Log(l)) => {
                let r = q.as_rational()?;
                Some(if r.is_zero() { Exact::Quad(MultiQuad::zero()) } else { Exact::Log(l.scale(&r)) })
            }
            (Exact::Alg(a), Exact::Quad(q)) | (Exact::Quad(q), Exact::Alg(a)) => {
                let r = q.as_rational()?;
                Some(if r.is_zero() { Exact::Quad(MultiQuad::zero()) } else { Exact::Alg(a.affine(&r, &BigRational::zero())).canonical() })
            }
            _ => Some(Exact::Exp(self.as_exp()?.mul(&o.as_exp()?)).canonical()),
        }
    }

    pub fn inverse(&self) -> Option<Exact> {
        match self {
            Exact::Quad(q) => Some(Exact::Quad(q.inverse()?)),
            Exact::Exp(s) => Some(Exact::Exp(s.inverse()?).canonical()),
            _ => None,
        }
    }

    pub fn pow(&self, n: i64) -> Option<Exact> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Exact::rational(BigRational::one());
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Some(acc)
    }

    pub fn exp(&self) -> Option<Exact> {
        match self {
            Exact::Quad(q) if q.is_zero() => Some(Exact::rational(BigRational::one())),
            Exact::Quad(q) => Some(Exact::Exp(ExpSum::exp_of(q.clone()))),
            Exact::Log(l) => l.exp_as_quad().map(Exact::Quad),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> Option<bool> {
        match self {
            Exact::Quad(q) => Some(q.is_zero()),
            Exact::Log(l) => Some(l.is_zero()),
            Exact::Exp(s) => Some(s.is_zero()),
            Exact::Alg(a) => Some(a.as_rational().is_some_and(|r| r.is_zero())),
        }
    }

    pub fn eval(&self, prec: u32) -> Result<PrecisionReal> {
        match self {
            Exact::Quad(q) => Ok(q.eval(prec)),
            Exact::Log(l) => l.eval(prec),
            Exact::Exp(s) => s.eval(prec),
            Exact::Alg(a) => Ok(a.eval(prec)),
        }
    }

    /// Monic minimal polynomial for algebraic forms.
    pub fn minimal_polynomial(&self) -> Option<UPoly> {
        match self {
            Exact::Quad(q) => Some(q.minimal_polynomial()),
            Exact::Alg(a) => Some(a.minimal_polynomial()),
            _ => None,
        }
    }
}

/// Member of a family of reals that is linearly independent over `Q`.
///
/// `SqrtExp(a, k)` is `sqrt(k) * exp(a)` (with `a = 0` for algebraic numbers)
/// and `Log(p)` is the logarithm of a prime. The numbers `sqrt(k) exp(a)`
/// are independent by Lindemann-Weierstrass; `sqrt(k)` together with `log p`
/// are independent by Baker's theorem. Logarithms are never mixed with
/// nontrivial exponentials.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisNumber {
    SqrtExp(MultiQuad, u64),
    Log(u64),
}

/// Rational coordinates of each form over independent basis numbers, or
/// `None` when some form has no such expansion.
pub fn linear_coordinates(xs: &[&Exact]) -> Option<Vec<BTreeMap<BasisNumber, BigRational>>> {
    let mut out = Vec::with_capacity(xs.len());
    let (mut has_log, mut has_exp) = (false, false);
    for x in xs {
        let mut coords = BTreeMap::new();
        match x {
            Exact::Quad(q) => {
                for (k, c) in q.terms() {
                    coords.insert(BasisNumber::SqrtExp(MultiQuad::zero(), *k), c.clone());
                }
            }
            Exact::Log(l) => {
                has_log |= !l.is_zero();
                for (p, c) in l.terms() {
                    coords.insert(BasisNumber::Log(*p), c.clone());
                }
            }
            Exact::Exp(s) => {
                for (a, beta) in s.terms() {
                    has_exp |= !a.is_zero();
                    for (k, c) in beta.terms() {
                        coords.insert(BasisNumber::SqrtExp(a.clone(), *k), c.clone());
                    }
                }
            }
            Exact::Alg(a) => {
                for (k, c) in a.as_quad()?.terms() {
                    coords.insert(BasisNumber::SqrtExp(MultiQuad::zero(), *k), c.clone());
                }
            }
        }
        out.push(coords);
    }
    if has_log && has_exp {
        return None;
    }
    Some(out)
}

/// Exact test of `sum m_i x_i == 0`. `None` when the classes involved admit no decision.
pub fn linear_is_zero(xs: &[&Exact], m: &[BigInt]) -> Option<bool> {
    assert_eq!(xs.len(), m.len());
    // logarithmic and algebraic parts separate: a nonzero rational combination of
    // logs of primes is the log of an algebraic number other than 1, hence transcendental
    let mut logs = LogLin::default();
    let mut alg = Exact::Quad(MultiQuad::zero());
    for (x, c) in xs.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        let cr = BigRational::from_integer(c.clone());
        match x {
            Exact::Log(l) => logs = logs.add(&l.scale(&cr)),
            Exact::Alg(a) => {
                if let Some(q) = a.as_quad() {
                    alg = alg.add(&Exact::Quad(q.scale(&cr)))?;
                } else {
                    return single_alg_linear(xs, m);
                }
            }
            other => alg = alg.add(&other.mul(&Exact::rational(cr))?)?,
        }
    }
    if !logs.is_zero() {
        return if alg.is_algebraic() { Some(false) } else { None };
    }
    alg.is_zero()
}

/// Linear combination whose algebraic terms of degree at least three are all
/// affine images `c alpha + d` of one number `alpha`, the rest rational.
fn single_alg_linear(xs: &[&Exact], m: &[BigInt]) -> Option<bool> {
    let mut base: Option<&AlgNum> = None;
    let mut k = BigRational::zero();
    let mut rest = BigRational::zero();
    for (x, c) in xs.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        let cr = BigRational::from_integer(c.clone());
        match x {
            Exact::Alg(a) if a.as_quad().is_none() => match base {
                None => {
                    base = Some(a);
                    k += cr;
                }
                Some(b) => {
                    let (s, t) = b.affine_relation(a)?;
                    k += &cr * s;
                    rest += cr * t;
                }
            },
            other => rest += other.as_rational()? * cr,
        }
    }
    base?;
    // k alpha + rest = 0 forces k = 0 because alpha is irrational
    Some(k.is_zero() && rest.is_zero())
}

/// Exact test of `F(x_1, ..., x_s) == 0`. `None` when undecidable with the known forms.
pub fn poly_is_zero(f: &IntPolynomial, xs: &[Option<Exact>]) -> Option<bool> {
    if f.is_zero() {
        return Some(true);
    }
    let used = f.used_vars();
    if used.is_empty() {
        return Some(false);
    }
    if used.len() == 1 {
        let i = used[0];
        if let Some(Exact::Alg(a)) = xs[i].as_ref() {
            if a.as_quad().is_none() {
                return Some(a.is_root_of(&f.as_univariate_in(i)?));
            }
        }
    }
    if f.degree() <= 1 {
        let mut forms: Vec<Exact> = Vec::new();
        let mut coeffs = Vec::new();
        for (e, c) in f.terms() {
            match e.iter().position(|&k| k > 0) {
                None => forms.push(Exact::rational(BigRational::one())),
                Some(i) => forms.push(xs[i].clone()?.canonical()),
            }
            coeffs.push(c.clone());
        }
        let refs: Vec<&Exact> = forms.iter().collect();
        return linear_is_zero(&refs, &coeffs);
    }
    let mut acc = Exact::Quad(MultiQuad::zero());
    for (e, c) in f.terms() {
        let mut t = Exact::rational(BigRational::from_integer(c.clone()));
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                let x = xs[i].clone()?.canonical();
                if matches!(x, Exact::Log(_) | Exact::Alg(_)) {
                    return None;
                }
                t = t.mul(&x.pow(k as i64)?)?;
            }
        }
        acc = acc.add(&t)?;
    }
    acc.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn phi() -> MultiQuad {
        MultiQuad::surd(&1.into(), &1.into(), &2.into(), &5.into()).unwrap()
    }

    #[test]
    fn golden_ratio_identity() {
        let p = phi();
        let lhs = MultiQuad::int(1).add(&p).sub(&p.mul(&p));
        assert!(lhs.is_zero());
        assert_eq!(p.minimal_polynomial(), UPoly::from_i64s(&[-1, -1, 1]));
    }

    #[test]
    fn inverse_in_biquadratic_field() {
        let a = MultiQuad::sqrt_of(&q(2)).unwrap().add(&MultiQuad::sqrt_of(&q(3)).unwrap()).add(&MultiQuad::int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), MultiQuad::int(1));
        let mp = a.minimal_polynomial();
        assert_eq!(mp.degree(), Some(4));
    }

    #[test]
    fn sqrt_normalizes_radicand() {
        let s = MultiQuad::sqrt_of(&q(8)).unwrap();
        assert_eq!(s, MultiQuad::sqrt_of(&q(2)).unwrap().scale(&q(2)));
        let h = MultiQuad::sqrt_of(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(h.mul(&h), MultiQuad::rational(BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn log_relations() {
        let l2 = Exact::Log(LogLin::log_of(&q(2)).unwrap());
        let l3 = Exact::Log(LogLin::log_of(&q(3)).unwrap());
        let l6 = Exact::Log(LogLin::log_of(&q(6)).unwrap());
        assert_eq!(linear_is_zero(&[&l2, &l3, &l6], &[1.into(), 1.into(), (-1).into()]), Some(true));
        assert_eq!(linear_is_zero(&[&l2, &l3], &[1.into(), 1.into()]), Some(false));
        let one = Exact::rational(q(1));
        assert_eq!(linear_is_zero(&[&one, &l2], &[3.into(), 5.into()]), Some(false));
    }

    #[test]
    fn exponential_relations() {
        let e1 = Exact::Quad(MultiQuad::int(1)).exp().unwrap();
        let e2 = Exact::Quad(MultiQuad::int(2)).exp().unwrap();
        let x1 = IntPolynomial::var(2, 0);
        let x2 = IntPolynomial::var(2, 1);
        let f = x1.mul(&x1).sub(&x2);
        assert_eq!(poly_is_zero(&f, &[Some(e1.clone()), Some(e2.clone())]), Some(true));
        assert_eq!(poly_is_zero(&x1.sub(&x2), &[Some(e1), Some(e2)]), Some(false));
    }

    #[test]
    fn algebraic_root_tests() {
        // x^3 - 2, real root in (1, 2]
        let a = AlgNum::new(UPoly::from_i64s(&[-2, 0, 0, 1]), q(1), q(2)).unwrap();
        assert!(a.is_root_of(&UPoly::from_i64s(&[-2, 0, 0, 1]).mul(&UPoly::from_i64s(&[1, 1]))));
        assert!(!a.is_root_of(&UPoly::from_i64s(&[-2, 0, 1])));
        let v = a.eval(64);
        assert!((v.mid_f64() - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
        let b = AlgNum::new(UPoly::from_i64s(&[-2, 0, 1]), BigRational::new(14.into(), 10.into()), BigRational::new(15.into(), 10.into())).unwrap();
        assert_eq!(b.as_quad().unwrap(), MultiQuad::sqrt_of(&q(2)).unwrap());
        let c = AlgNum::new(UPoly::from_i64s(&[-2, 0, 1]), q(-2), q(0)).unwrap();
        assert_eq!(c.as_quad().unwrap(), MultiQuad::sqrt_of(&q(2)).unwrap().neg());
    }

    #[test]
    fn factorization() {
        let f = factorize(&BigInt::from(360)).unwrap();
        assert_eq!(f.into_iter().collect::<Vec<_>>(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(squarefree_decompose(&BigInt::from(72)).unwrap(), (BigInt::from(6), 2));
    }
}
