use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numeric::interval::PrecisionReal;

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        UPoly::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        UPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(BigRational::one())
    }

    /// `x - r`.
    pub fn linear_root(r: &BigRational) -> Self {
        UPoly::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigRational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn pow(&self, n: u32) -> UPoly {
        let mut acc = UPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    /// `p(a x + b)`.
    pub fn compose_linear(&self, a: &BigRational, b: &BigRational) -> UPoly {
        let x = UPoly::new(vec![b.clone(), a.clone()]);
        let mut q = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            q = q.mul(&x).add(&UPoly::constant(c.clone()));
        }
        q
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_interval(&self, x: &PrecisionReal, prec: u32) -> PrecisionReal {
        let mut acc = PrecisionReal::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&PrecisionReal::from_rational(c, prec + 8)).round_out(prec + 8);
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Sturm chain of the polynomial.
    pub fn sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    fn sign_changes(chain: &[UPoly], x: &BigRational) -> usize {
        let signs: Vec<i32> = chain.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        let chain = self.squarefree().sturm_chain();
        Self::sign_changes(&chain, a).saturating_sub(Self::sign_changes(&chain, b))
    }

    /// Bound `B` such that every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.lead().abs();
        let mut m = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let r = c.abs() / &lead;
            if r > m {
                m = r;
            }
        }
        m + BigRational::one()
    }

    /// Disjoint isolating intervals `(a, b]`, one per distinct real root, in increasing order.
    pub fn isolate_roots(&self) -> Vec<(BigRational, BigRational)> {
        let sf = self.squarefree();
        if sf.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let chain = sf.sturm_chain();
        let b = sf.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = Self::sign_changes(&chain, &lo).saturating_sub(Self::sign_changes(&chain, &hi));
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort();
        out
    }

    /// Integer multiple with coprime coefficients and positive leading coefficient.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        for c in ints.iter_mut() {
            *c = &*c / &g * &sign;
        }
        ints
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coeff = if a.is_one() && i > 0 { String::new() } else { a.to_string() };
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coeff}x")?,
                _ => write!(f, "{coeff}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn division_identity() {
        let a = UPoly::from_i64s(&[-3, 0, 0, 1]);
        let b = UPoly::from_i64s(&[-2, 0, 1]);
        let (quo, r) = a.divrem(&b);
        assert_eq!(quo.mul(&b).add(&r), a);
        assert_eq!(r, UPoly::from_i64s(&[-3, 2]));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = UPoly::from_i64s(&[-1, 0, 1]).mul(&UPoly::from_i64s(&[-1, 1]));
        assert_eq!(a.squarefree(), UPoly::from_i64s(&[-1, 0, 1]));
        assert_eq!(a.gcd(&UPoly::from_i64s(&[1, 1])), UPoly::from_i64s(&[1, 1]));
    }

    #[test]
    fn sturm_counts() {
        let p = UPoly::from_i64s(&[-2, 0, 1]);
        assert_eq!(p.count_roots(&q(-2), &q(2)), 2);
        assert_eq!(p.count_roots(&q(0), &q(2)), 1);
        let r = UPoly::from_i64s(&[-1, -1, 0, 1]).isolate_roots();
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn primitive_normalization() {
        let p = UPoly::new(vec![BigRational::new(1.into(), 2.into()), q(0), BigRational::new((-3).into(), 4.into())]);
        assert_eq!(p.primitive_int(), vec![BigInt::from(-2), BigInt::from(0), BigInt::from(3)]);
    }
}
