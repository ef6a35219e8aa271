use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::dyadic::Dyadic;
use super::elementary::{self, exp_interval, refine};
use super::exact::{AlgNum, Exact, LogLin, MultiQuad};
use super::interval::PrecisionReal;
use crate::error::{Error, Result};
use crate::poly::UPoly;

/// Named transcendental constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constant {
    E,
    Pi,
    /// Natural logarithm of a positive rational.
    Log(BigRational),
}

/// How an oracle produces its value.
#[derive(Clone, Debug)]
pub enum OracleKind {
    Rational(BigRational),
    /// `(a + b sqrt(d)) / c`.
    QuadraticSurd {
        a: BigInt,
        b: BigInt,
        c: BigInt,
        d: BigInt,
    },
    AlgebraicByMinpoly(AlgNum),
    Constant(Constant),
    /// Truncated positional expansion; the value lies within one unit of the last digit.
    DigitStream {
        base: u32,
        negative: bool,
        integer: BigInt,
        digits: Vec<u32>,
    },
    Sum(RealOracle, RealOracle),
    Product(RealOracle, RealOracle),
    Neg(RealOracle),
    Recip(RealOracle),
    Pow(RealOracle, i64),
    Exp(RealOracle),
}

/// Coarse exactness class used in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactnessClass {
    Rational,
    QuadraticSurd,
    Algebraic,
    SymbolicConstant,
    DigitStream,
    Composite,
}

struct Inner {
    kind: OracleKind,
    exact: Option<Exact>,
    literal: String,
    cache: Mutex<BTreeMap<u32, PrecisionReal>>,
}

/// A refinable real number. Clones share the evaluation cache.
#[derive(Clone)]
pub struct RealOracle {
    inner: Arc<Inner>,
}

const MIN_BUCKET: u32 = 64;

impl RealOracle {
    fn build(kind: OracleKind, exact: Option<Exact>, literal: String) -> Self {
        RealOracle { inner: Arc::new(Inner { kind, exact: exact.map(Exact::canonical), literal, cache: Mutex::new(BTreeMap::new()) }) }
    }

    pub fn rational(r: BigRational) -> Self {
        let literal = if r.denom().is_one() { r.numer().to_string() } else { format!("{}/{}", r.numer(), r.denom()) };
        Self::build(OracleKind::Rational(r.clone()), Some(Exact::rational(r)), literal)
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::rational(BigRational::new(p.into(), q.into()))
    }

    /// `(a + b sqrt(d)) / c`.
    pub fn surd(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidInput("surd denominator is zero".into()));
        }
        if d.is_negative() {
            return Err(Error::InvalidInput("surd radicand is negative".into()));
        }
        let q = MultiQuad::surd(&a, &b, &c, &d).ok_or_else(|| Error::InvalidInput("surd radicand too large to factor".into()))?;
        if let Some(r) = q.as_rational() {
            return Ok(Self::rational(r));
        }
        let literal = format!("surd({a},{b},{c},{d})");
        Ok(Self::build(OracleKind::QuadraticSurd { a, b, c, d }, Some(Exact::Quad(q)), literal))
    }

    pub fn sqrt(n: i64) -> Self {
        Self::surd(0.into(), 1.into(), 1.into(), n.into()).expect("nonnegative radicand")
    }

    /// `sqrt(r)` for a nonnegative rational.
    pub fn sqrt_rational(r: &BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidInput("square root of a negative number".into()));
        }
        // sqrt(p/q) = sqrt(p q) / q
        Self::surd(BigInt::zero(), BigInt::one(), r.denom().clone(), r.numer() * r.denom())
    }

    /// The unique root of `coeffs` (lowest degree first) in `(lo, hi]`.
    pub fn algebraic(coeffs: &[BigInt], lo: BigRational, hi: BigRational) -> Result<Self> {
        let poly = UPoly::from_ints(coeffs);
        let literal =
            format!("alg([{}];[{},{}])", coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","), rational_literal(&lo), rational_literal(&hi));
        let a = AlgNum::new(poly, lo, hi).ok_or_else(|| Error::InvalidInput(format!("{literal}: interval does not isolate exactly one root")))?;
        if let Some(r) = a.as_rational() {
            return Ok(Self::rational(r));
        }
        Ok(Self::build(OracleKind::AlgebraicByMinpoly(a.clone()), Some(Exact::Alg(a)), literal))
    }

    pub fn pi() -> Self {
        Self::build(OracleKind::Constant(Constant::Pi), None, "pi".into())
    }

    pub fn e() -> Self {
        let exact = Exact::rational(BigRational::one()).exp();
        Self::build(OracleKind::Constant(Constant::E), exact, "e".into())
    }

    pub fn log(q: BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::InvalidInput("logarithm of a non-positive number".into()));
        }
        if q.is_one() {
            return Ok(Self::int(0));
        }
        let literal = format!("log({})", rational_literal(&q));
        let exact = LogLin::log_of(&q).map(Exact::Log);
        Ok(Self::build(OracleKind::Constant(Constant::Log(q)), exact, literal))
    }

    pub fn log_int(n: i64) -> Self {
        Self::log(BigRational::from_integer(n.into())).expect("positive argument")
    }

    /// Truncated expansion in `base` with the given integer part and fractional digits.
    pub fn digit_stream(base: u32, negative: bool, integer: BigInt, digits: Vec<u32>) -> Result<Self> {
        if base < 2 || digits.iter().any(|&d| d >= base) {
            return Err(Error::InvalidInput("digit out of range for base".into()));
        }
        let body: String =
            if base <= 10 { digits.iter().map(|d| char::from_digit(*d, base).unwrap()).collect() } else { digits.iter().map(|d| format!("[{d}]")).collect() };
        let literal = format!("stream({base};{}{}.{})", if negative { "-" } else { "" }, integer, body);
        Ok(Self::build(OracleKind::DigitStream { base, negative, integer, digits }, None, literal))
    }

    pub fn add(&self, o: &RealOracle) -> RealOracle {
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return Self::rational(a + b);
        }
        let exact = both(self, o).and_then(|(a, b)| a.add(b));
        Self::build(OracleKind::Sum(self.clone(), o.clone()), exact, format!("({} + {})", self.literal(), o.literal()))
    }

    pub fn sub(&self, o: &RealOracle) -> RealOracle {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RealOracle {
        if let Some(a) = self.as_rational() {
            return Self::rational(-a);
        }
        let exact = self.exact().map(|e| e.neg());
        Self::build(OracleKind::Neg(self.clone()), exact, format!("-{}", self.literal()))
    }

    pub fn mul(&self, o: &RealOracle) -> RealOracle {
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return Self::rational(a * b);
        }
        let exact = both(self, o).and_then(|(a, b)| a.mul(b));
        Self::build(OracleKind::Product(self.clone(), o.clone()), exact, format!("({} * {})", self.literal(), o.literal()))
    }

    pub fn mul_rational(&self, r: &BigRational) -> RealOracle {
        Self::rational(r.clone()).mul(self)
    }

    pub fn mul_int(&self, n: i64) -> RealOracle {
        self.mul_rational(&BigRational::from_integer(n.into()))
    }

    /// Reciprocal; fails when the value is certified zero.
    pub fn recip(&self, cap: u32) -> Result<RealOracle> {
        if let Some(a) = self.as_rational() {
            if a.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Self::rational(a.recip()));
        }
        if self.exact().and_then(|e| e.is_zero()) == Some(true) {
            return Err(Error::DivisionByZero);
        }
        self.sign(cap)?;
        let exact = self.exact().and_then(|e| e.inverse());
        Ok(Self::build(OracleKind::Recip(self.clone()), exact, format!("(1 / {})", self.literal())))
    }

    pub fn div(&self, o: &RealOracle, cap: u32) -> Result<RealOracle> {
        Ok(self.mul(&o.recip(cap)?))
    }

    pub fn powi(&self, n: i64, cap: u32) -> Result<RealOracle> {
        if n == 0 {
            return Ok(Self::int(1));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        if let Some(a) = self.as_rational() {
            if a.is_zero() && n < 0 {
                return Err(Error::DivisionByZero);
            }
            let p = num_traits::pow(a, n.unsigned_abs() as usize);
            return Ok(Self::rational(if n < 0 { p.recip() } else { p }));
        }
        if n < 0 {
            return self.recip(cap)?.powi(-n, cap);
        }
        let exact = self.exact().and_then(|e| e.pow(n));
        Ok(Self::build(OracleKind::Pow(self.clone(), n), exact, format!("{}^{}", self.literal(), n)))
    }

    pub fn exp(&self) -> RealOracle {
        if let Some(a) = self.as_rational() {
            if a.is_zero() {
                return Self::int(1);
            }
        }
        if let OracleKind::Constant(Constant::Log(q)) = self.kind() {
            return Self::rational(q.clone());
        }
        let exact = self.exact().and_then(|e| e.exp());
        if let Some(Exact::Quad(q)) = exact.as_ref().map(|e| e.clone().canonical()) {
            if let Some(r) = q.as_rational() {
                return Self::rational(r);
            }
        }
        let literal = if self.literal() == "1" { "e".to_string() } else { format!("exp({})", self.literal()) };
        Self::build(OracleKind::Exp(self.clone()), exact, literal)
    }

    pub fn kind(&self) -> &OracleKind {
        &self.inner.kind
    }

    pub fn literal(&self) -> &str {
        &self.inner.literal
    }

    /// Symbolic value, when known.
    pub fn exact(&self) -> Option<&Exact> {
        self.inner.exact.as_ref()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.exact().and_then(|e| e.as_rational())
    }

    /// True when exact symbolic verification is available.
    pub fn is_exact_class(&self) -> bool {
        self.inner.exact.is_some()
    }

    /// True when the value is known to be algebraic.
    pub fn is_algebraic(&self) -> bool {
        self.exact().is_some_and(|e| e.is_algebraic())
    }

    pub fn class(&self) -> ExactnessClass {
        match self.kind() {
            OracleKind::Rational(_) => ExactnessClass::Rational,
            OracleKind::QuadraticSurd { .. } => ExactnessClass::QuadraticSurd,
            OracleKind::AlgebraicByMinpoly(_) => ExactnessClass::Algebraic,
            OracleKind::Constant(_) => ExactnessClass::SymbolicConstant,
            OracleKind::DigitStream { .. } => ExactnessClass::DigitStream,
            _ => match self.exact() {
                Some(Exact::Quad(q)) if q.as_rational().is_some() => ExactnessClass::Rational,
                Some(Exact::Quad(_)) | Some(Exact::Alg(_)) => ExactnessClass::Algebraic,
                _ => ExactnessClass::Composite,
            },
        }
    }

    /// Enclosure of width at most `2^-prec`. Successive calls return nested intervals.
    pub fn eval(&self, prec: u32) -> Result<PrecisionReal> {
        let prec = prec.max(1);
        match self.kind() {
            OracleKind::Rational(r) => return Ok(PrecisionReal::from_rational(r, prec)),
            OracleKind::DigitStream { .. } => return self.eval_stream(prec),
            _ => {}
        }
        let bucket = prec.next_power_of_two().max(MIN_BUCKET);
        if let Some(x) = self.inner.cache.lock().unwrap().get(&bucket) {
            return Ok(x.clone());
        }
        let raw = self.raw(bucket)?;
        let value = if bucket > MIN_BUCKET {
            let coarse = self.eval(bucket / 2)?;
            raw.intersect(&coarse).expect("enclosures of one value intersect")
        } else {
            raw
        };
        self.inner.cache.lock().unwrap().insert(bucket, value.clone());
        Ok(value)
    }

    fn eval_stream(&self, prec: u32) -> Result<PrecisionReal> {
        let OracleKind::DigitStream { base, negative, integer, digits } = self.kind() else { unreachable!() };
        let b = BigInt::from(*base);
        let mut num = integer.clone();
        for d in digits {
            num = num * &b + BigInt::from(*d);
        }
        let den = num_traits::pow(b, digits.len());
        let v = BigRational::new(num, den.clone());
        let unit = BigRational::new(BigInt::one(), den);
        // |value - v| <= one unit of the last digit
        let (lo, hi) = if *negative { (-(&v + &unit), -(&v - &unit)) } else { (&v - &unit, &v + &unit) };
        let width = &hi - &lo;
        let available = (width.denom().bits() as i64 - width.numer().bits() as i64).max(0) as u32;
        let limit = BigRational::new(BigInt::one(), BigInt::one() << prec as u64);
        if width > limit {
            return Err(Error::UnevaluatableDigitStream { needed_bits: prec, available_bits: available });
        }
        let w = prec + 8;
        Ok(PrecisionReal::new(Dyadic::from_rational_floor(&lo, w), Dyadic::from_rational_ceil(&hi, w)))
    }

    fn raw(&self, prec: u32) -> Result<PrecisionReal> {
        match self.kind() {
            OracleKind::Rational(r) => Ok(PrecisionReal::from_rational(r, prec)),
            OracleKind::QuadraticSurd { .. } | OracleKind::AlgebraicByMinpoly(_) => {
                Ok(self.exact().expect("algebraic oracles carry an exact form").eval(prec + 4)?.round_out(prec + 2))
            }
            OracleKind::Constant(Constant::Pi) => Ok(elementary::pi(prec)),
            OracleKind::Constant(Constant::E) => Ok(elementary::e(prec)),
            OracleKind::Constant(Constant::Log(q)) => elementary::log_rational(q, prec),
            OracleKind::DigitStream { .. } => self.eval_stream(prec),
            OracleKind::Sum(a, b) => refine(prec, |w| Ok(a.eval(w)?.add(&b.eval(w)?))),
            OracleKind::Neg(a) => Ok(-a.eval(prec)?),
            OracleKind::Product(a, b) => {
                let ma = magnitude_bits(a)?;
                let mb = magnitude_bits(b)?;
                refine(prec, |w| Ok(a.eval(w + mb)?.mul(&b.eval(w + ma)?)))
            }
            OracleKind::Recip(a) => {
                let low = lower_magnitude_bits(a)?;
                refine(prec, |w| a.eval(w + 2 * low)?.recip(w + 4))
            }
            OracleKind::Pow(a, n) => {
                let ma = magnitude_bits(a)?;
                let extra = ma * (*n as u32) + 8;
                refine(prec, |w| Ok(a.eval(w + extra)?.powi(*n as u32)))
            }
            OracleKind::Exp(a) => {
                let ma = magnitude_bits(a)?;
                let extra = (1u32 << ma.min(24)) * 2;
                refine(prec, |w| exp_interval(&a.eval(w + extra)?, w))
            }
        }
    }

    /// Certified sign, refining up to `cap` bits. Zero is reported only for exact zeros.
    pub fn sign(&self, cap: u32) -> Result<i32> {
        if let Some(z) = self.exact().and_then(|e| e.is_zero()) {
            if z {
                return Ok(0);
            }
        }
        let mut p = MIN_BUCKET;
        loop {
            let x = self.eval(p)?;
            if let Some(s) = x.sign() {
                return Ok(s);
            }
            if p >= cap {
                return Err(Error::PrecisionInsufficient { bits: p });
            }
            p = (p * 2).min(cap);
        }
    }

    /// Approximate value for reports.
    pub fn to_f64(&self) -> f64 {
        self.eval(64).map(|x| x.mid_f64()).unwrap_or(f64::NAN)
    }
}

/// Number of bits needed to bound `|x|`, at least 1.
fn magnitude_bits(x: &RealOracle) -> Result<u32> {
    let v = x.eval(MIN_BUCKET)?;
    Ok(v.mag().magnitude_bits().max(1) as u32 + 1)
}

/// Bits of `1/|x|`, refining until `x` is bounded away from zero.
fn lower_magnitude_bits(x: &RealOracle) -> Result<u32> {
    let mut p = MIN_BUCKET;
    loop {
        let v = x.eval(p)?;
        let m = v.mig();
        if !m.is_zero() {
            return Ok((-m.magnitude_bits() + 2).max(1) as u32);
        }
        if p > 1 << 14 {
            return Err(Error::DivisionByZero);
        }
        p *= 2;
    }
}

fn both<'a>(a: &'a RealOracle, b: &'a RealOracle) -> Option<(&'a Exact, &'a Exact)> {
    Some((a.exact()?, b.exact()?))
}

pub(crate) fn rational_literal(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Debug for RealOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealOracle({})", self.literal())
    }
}

impl fmt::Display for RealOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.literal())
    }
}

impl Serialize for RealOracle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.literal())
    }
}

impl PartialEq for RealOracle {
    fn eq(&self, other: &Self) -> bool {
        self.literal() == other.literal()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_is_tight() {
        let x = RealOracle::ratio(3, 7);
        let v = x.eval(10).unwrap();
        assert!(v.width_bits() >= 10);
        assert!(v.contains_rational(&BigRational::new(3.into(), 7.into())));
        let h = RealOracle::ratio(1, 2).eval(10).unwrap();
        assert!(h.is_point());
    }

    #[test]
    fn nested_refinement() {
        let phi = RealOracle::surd(1.into(), 1.into(), 2.into(), 5.into()).unwrap();
        let a = phi.eval(64).unwrap();
        let b = phi.eval(300).unwrap();
        assert!(b.subset_of(&a));
        assert!(b.width_bits() >= 300);
    }

    #[test]
    fn composite_exact_forms() {
        let x = RealOracle::sqrt(2).add(&RealOracle::int(1));
        let sq = x.mul(&x);
        // (1 + sqrt2)^2 = 3 + 2 sqrt2
        let expect = RealOracle::surd(3.into(), 2.into(), 1.into(), 2.into()).unwrap();
        assert_eq!(sq.exact(), expect.exact());
        assert!(RealOracle::log_int(2).exp().as_rational().is_some());
    }

    #[test]
    fn digit_stream_limits() {
        let s = RealOracle::digit_stream(10, false, 3.into(), vec![1, 4, 1, 5, 9]).unwrap();
        assert!(s.eval(8).is_ok());
        assert!(matches!(s.eval(40), Err(Error::UnevaluatableDigitStream { .. })));
    }

    #[test]
    fn exponential_composite() {
        let x = RealOracle::sqrt(2).exp();
        let v = x.eval(128).unwrap();
        assert!((v.mid_f64() - 2f64.sqrt().exp()).abs() < 1e-14);
        assert!(v.width_bits() >= 128);
    }
}
