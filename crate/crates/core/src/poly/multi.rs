use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::upoly::UPoly;
use crate::numeric::interval::PrecisionReal;

/// Graded order on exponent tuples: total degree first, then the exponent of
/// the last variable, then the one before it, and so on. Degree one
/// monomials therefore sort `X1 < X2 < ... < Xs`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MonomialOrder;

impl MonomialOrder {
    pub fn cmp(a: &[u32], b: &[u32]) -> Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| a.iter().rev().cmp(b.iter().rev()))
    }

    /// All exponent tuples in `nvars` variables of total degree at most `d`,
    /// ascending. The constant monomial is included when `with_constant`.
    pub fn monomials(nvars: usize, d: u32, with_constant: bool) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, d, &mut cur, &mut out);
        if !with_constant {
            out.retain(|m| m.iter().any(|&e| e > 0));
        }
        out.sort_by(|a, b| Self::cmp(a, b));
        out
    }

    /// Number of monomials of total degree in `(0, d]`.
    pub fn count(nvars: usize, d: u32) -> usize {
        Self::monomials(nvars, d, false).len()
    }
}

/// Multivariate polynomial with integer coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPolynomial {
    pub fn zero(nvars: usize) -> Self {
        IntPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The variable `X_{i+1}` (zero-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent tuple length");
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from integer coefficients, lowest degree first.
    pub fn univariate(coeffs: &[BigInt]) -> Self {
        Self::from_terms(1, coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())))
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Largest coefficient magnitude.
    pub fn height(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Indices of the variables that occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn add(&self, o: &IntPolynomial) -> IntPolynomial {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &IntPolynomial) -> IntPolynomial {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigInt) -> IntPolynomial {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c * k)))
    }

    pub fn mul(&self, o: &IntPolynomial) -> IntPolynomial {
        let mut p = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca * cb);
            }
        }
        p
    }

    /// Leading monomial in the graded order.
    pub fn leading(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().max_by(|a, b| MonomialOrder::cmp(a.0, b.0))
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive representative with positive leading coefficient.
    pub fn normalized(&self) -> IntPolynomial {
        let Some((_, lead)) = self.leading() else {
            return self.clone();
        };
        let mut g = self.content();
        if lead.is_negative() {
            g = -g;
        }
        IntPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c / &g)).collect() }
    }

    /// Interval evaluation at the given points.
    pub fn eval_interval(&self, xs: &[PrecisionReal], prec: u32) -> PrecisionReal {
        assert_eq!(xs.len(), self.nvars, "variable count");
        let mut acc = PrecisionReal::zero();
        for (e, c) in &self.terms {
            let mut t = PrecisionReal::from_int(c);
            for (x, &k) in xs.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&x.powi(k)).round_out(prec + 16);
                }
            }
            acc = acc.add(&t);
        }
        acc.round_out(prec + 8)
    }

    /// Exact evaluation at rational points.
    pub fn eval_rational(&self, xs: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (x, &k) in xs.iter().zip(e) {
                t *= num_traits::pow(x.clone(), k as usize);
            }
            acc += t;
        }
        acc
    }

    /// The polynomial in variable `i` when no other variable occurs.
    pub fn as_univariate_in(&self, i: usize) -> Option<UPoly> {
        if self.terms.keys().any(|e| e.iter().enumerate().any(|(j, &k)| j != i && k > 0)) {
            return None;
        }
        let d = self.terms.keys().map(|e| e[i]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![BigRational::zero(); d + 1];
        for (e, c) in &self.terms {
            coeffs[e[i] as usize] = BigRational::from_integer(c.clone());
        }
        Some(UPoly::new(coeffs))
    }

    /// Rename variables into a larger space: variable `j` becomes `map[j]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> IntPolynomial {
        Self::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut f = vec![0; nvars];
                for (j, &k) in e.iter().enumerate() {
                    f[map[j]] += k;
                }
                (f, c.clone())
            }),
        )
    }

    /// Serialization key for an exponent tuple, e.g. `"2,0"`.
    pub fn exponent_key(e: &[u32]) -> String {
        e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| MonomialOrder::cmp(b.0, a.0));
        for (k, (e, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    let name = if self.nvars == 1 { "X".to_string() } else { format!("X{}", i + 1) };
                    if p == 1 {
                        name
                    } else {
                        format!("{name}^{p}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| MonomialOrder::cmp(b.0, a.0));
        let map: Vec<(String, String)> = ts.into_iter().map(|(e, c)| (Self::exponent_key(e), c.to_string())).collect();
        s.collect_map(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order_puts_later_variables_higher() {
        let m = MonomialOrder::monomials(2, 2, true);
        assert_eq!(m, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(MonomialOrder::count(2, 2), 5);
        assert_eq!(MonomialOrder::count(3, 1), 3);
    }

    #[test]
    fn normalization_fixes_sign_and_content() {
        let x1 = IntPolynomial::var(2, 0);
        let x2 = IntPolynomial::var(2, 1);
        let p = x1.scale(&4.into()).sub(&x2.scale(&2.into()));
        assert_eq!(p.normalized().to_string(), "X2 - 2*X1");
        let q = x2.sub(&x1.mul(&x1)).scale(&(-3).into());
        assert_eq!(q.normalized().to_string(), "X1^2 - X2");
    }

    #[test]
    fn exact_evaluation() {
        let x = IntPolynomial::var(3, 0);
        let y = IntPolynomial::var(3, 1);
        let z = IntPolynomial::var(3, 2);
        let p = x.mul(&y).sub(&z);
        let pts: Vec<BigRational> = [2, 3, 6].iter().map(|&v| BigRational::from_integer(v.into())).collect();
        assert!(p.eval_rational(&pts).is_zero());
    }
}
