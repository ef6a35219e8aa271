//! Lattice bases and exact integral LLL reduction.
//!
//! The reduction follows the all-integer variant of LLL: Gram-Schmidt data
//! is kept as the integers `d_i` (leading Gram minors) and
//! `lambda_ij = d_{j+1} mu_ij`, so no rational arithmetic is needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg::rank;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: Vec<Vec<BigInt>>,
    delta: BigRational,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `a / b` for `b > 0`, ties rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a * BigInt::from(2) + b).div_floor(&(b * BigInt::from(2)))
}

impl LatticeBasis {
    /// Validates equal row lengths, `1/4 < delta < 1` and full row rank.
    pub fn new(rows: Vec<Vec<BigInt>>, delta: BigRational) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("lattice basis has no rows".into()));
        }
        let dim = rows[0].len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("lattice rows have different lengths".into()));
        }
        let quarter = BigRational::new(1.into(), 4.into());
        if delta <= quarter || delta >= BigRational::one() {
            return Err(Error::InvalidInput(format!("LLL parameter {delta} outside (1/4, 1)")));
        }
        if rank(&rows) < rows.len() {
            return Err(Error::DependentRows);
        }
        Ok(LatticeBasis { rows, delta })
    }

    pub fn from_i64(rows: &[&[i64]], delta: BigRational) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), delta)
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    /// Leading Gram minors `d_0 = 1, d_1, ..., d_n`.
    pub fn gram_minors(&self) -> Vec<BigInt> {
        let (d, _) = integral_gram_schmidt(&self.rows);
        d
    }

    /// Squared Gram-Schmidt norms `|b*_i|^2 = d_{i+1} / d_i`.
    pub fn gram_schmidt_norms(&self) -> Vec<BigRational> {
        let d = self.gram_minors();
        d.windows(2).map(|w| BigRational::new(w[1].clone(), w[0].clone())).collect()
    }

    /// Checks size reduction (`|mu_ij| <= 1/2`) and the Lovasz condition with exact arithmetic.
    pub fn is_reduced(&self) -> bool {
        let (d, lam) = integral_gram_schmidt(&self.rows);
        let n = self.rows.len();
        for (i, row) in lam.iter().enumerate().take(n) {
            // mu_ij = lam_ij / d_{j+1}
            if row[..i].iter().zip(&d[1..]).any(|(l, dj)| l.abs() * BigInt::from(2) > *dj) {
                return false;
            }
        }
        for k in 1..n {
            // |b*_k|^2 >= (delta - mu^2) |b*_{k-1}|^2, multiplied through by d_k d_{k-1}
            let lhs = BigRational::from_integer(&d[k + 1] * &d[k - 1]);
            let rhs = &self.delta * BigRational::from_integer(&d[k] * &d[k]) - BigRational::from_integer(&lam[k][k - 1] * &lam[k][k - 1]);
            if lhs < rhs {
                return false;
            }
        }
        true
    }
}

/// Integer Gram-Schmidt data of independent rows: `d` (length `n + 1`) and
/// `lambda` with `lambda[i][j] = d_{j+1} mu_ij` for `j < i`.
fn integral_gram_schmidt(rows: &[Vec<BigInt>]) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let n = rows.len();
    let mut d = vec![BigInt::one(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    for k in 0..n {
        for j in 0..=k {
            let mut u = dot(&rows[k], &rows[j]);
            for i in 0..j {
                u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
            }
            if j < k {
                lam[k][j] = u;
            } else {
                d[k + 1] = u;
            }
        }
    }
    (d, lam)
}

struct Reducer {
    b: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
    num: BigInt,
    den: BigInt,
}

impl Reducer {
    fn red(&mut self, k: usize, l: usize) {
        if (&self.lam[k][l] * BigInt::from(2)).abs() <= self.d[l + 1] {
            return;
        }
        let q = round_div(&self.lam[k][l], &self.d[l + 1]);
        let (head, tail) = self.b.split_at_mut(k);
        for (x, y) in tail[0].iter_mut().zip(&head[l]) {
            *x -= &q * y;
        }
        self.lam[k][l] -= &q * &self.d[l + 1];
        for i in 0..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lam = self.lam[k][k - 1].clone();
        let bb = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k + 1] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k];
            self.lam[i][k - 1] = (&bb * &t + &lam * &self.lam[i][k]) / &self.d[k + 1];
        }
        self.d[k] = bb;
    }

    /// Lovasz test in integers: `den d_{k+1} d_{k-1} < num d_k^2 - den lam^2` means swap.
    fn lovasz_fails(&self, k: usize) -> bool {
        let l = &self.lam[k][k - 1];
        &self.den * &self.d[k + 1] * &self.d[k - 1] < &self.num * &self.d[k] * &self.d[k] - &self.den * l * l
    }

    fn run(&mut self) {
        let n = self.b.len();
        if n == 0 {
            return;
        }
        self.d[1] = dot(&self.b[0], &self.b[0]);
        let mut k = 1;
        let mut kmax = 0;
        while k < n {
            if k > kmax {
                kmax = k;
                for j in 0..=k {
                    let mut u = dot(&self.b[k], &self.b[j]);
                    for i in 0..j {
                        u = (&self.d[i + 1] * &u - &self.lam[k][i] * &self.lam[j][i]) / &self.d[i];
                    }
                    if j < k {
                        self.lam[k][j] = u;
                    } else {
                        debug_assert!(!u.is_zero(), "rows were validated independent");
                        self.d[k + 1] = u;
                    }
                }
            }
            self.red(k, k - 1);
            if self.lovasz_fails(k) {
                self.swap(k, kmax);
                k = (k - 1).max(1);
            } else {
                for l in (0..k - 1).rev() {
                    self.red(k, l);
                }
                k += 1;
            }
        }
    }
}

/// LLL-reduces a basis; the output spans the same lattice and satisfies
/// size reduction and the Lovasz condition at the basis's `delta`.
pub fn lll_reduce(basis: &LatticeBasis) -> LatticeBasis {
    let n = basis.rows.len();
    let mut r = Reducer {
        b: basis.rows.clone(),
        d: vec![BigInt::one(); n + 1],
        lam: vec![vec![BigInt::zero(); n]; n],
        num: basis.delta.numer().clone(),
        den: basis.delta.denom().clone(),
    };
    r.run();
    LatticeBasis { rows: r.b, delta: basis.delta.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta() -> BigRational {
        BigRational::new(3.into(), 4.into())
    }

    #[test]
    fn identity_is_fixed() {
        let b = LatticeBasis::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], delta()).unwrap();
        assert_eq!(lll_reduce(&b), b);
    }

    #[test]
    fn small_example_is_reduced() {
        let b = LatticeBasis::from_i64(&[&[1, 0], &[4, 1]], delta()).unwrap();
        assert!(!b.is_reduced());
        let r = lll_reduce(&b);
        assert!(r.is_reduced());
        assert_eq!(r.rows(), &[vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]]);
    }

    #[test]
    fn dependent_rows_rejected() {
        let e = LatticeBasis::from_i64(&[&[1, 2], &[2, 4]], delta()).unwrap_err();
        assert_eq!(e, Error::DependentRows);
    }

    #[test]
    fn knapsack_style_reduction() {
        let b = LatticeBasis::from_i64(
            &[&[1, 0, 0, 0, 1000], &[0, 1, 0, 0, 1414], &[0, 0, 1, 0, 1732], &[0, 0, 0, 1, 2236]],
            BigRational::new(99.into(), 100.into()),
        )
        .unwrap();
        let r = lll_reduce(&b);
        assert!(r.is_reduced());
        assert_eq!(r.gram_minors().last(), b.gram_minors().last());
    }
}
