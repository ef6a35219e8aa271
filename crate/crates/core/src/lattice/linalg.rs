//! Exact integer linear algebra: rank by fraction-free elimination and
//! saturated integer kernels by unimodular column operations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::basis::{lll_reduce, LatticeBasis};

/// Rank over `Q` of an integer matrix (Bareiss elimination).
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m[0].len();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..ncols {
                m[i][j] = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Determinant of a square integer matrix (Bareiss elimination).
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Gcd of the maximal minors of a `k x n` integer matrix of rank `k`: the
/// index of the row lattice in its saturation.
pub fn maximal_minor_gcd(rows: &[Vec<BigInt>]) -> BigInt {
    let k = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut g = BigInt::zero();
    let mut cols: Vec<usize> = (0..k).collect();
    if k == 0 {
        return BigInt::one();
    }
    if k > n {
        return BigInt::zero();
    }
    loop {
        let sub: Vec<Vec<BigInt>> = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        g = g.gcd(&determinant(&sub));
        if g.is_one() {
            return g;
        }
        // next k-subset of 0..n in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| cols[i] < n - k + i) else { return g };
        cols[i] += 1;
        for j in i + 1..k {
            cols[j] = cols[j - 1] + 1;
        }
    }
}

/// Scales each rational row by the lcm of its denominators.
pub fn clear_row_denominators(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Divides by the content and makes the first nonzero entry positive.
pub fn normalize_vector(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = v.iter().find(|x| !x.is_zero()).map(|x| x.signum()).unwrap_or_else(BigInt::one);
    let g = g * sign;
    v.iter().map(|x| x / &g).collect()
}

pub fn height(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

/// A `Z`-basis of `{m in Z^n : A m = 0}` for an integer matrix `A` with `n`
/// columns, LLL-reduced and with normalized rows.
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    // columns of u record the unimodular transformation applied to the columns of m
    let mut u: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect()).collect();
    let mut pivot = 0;
    for row in 0..m.len() {
        if pivot == n {
            break;
        }
        for c in pivot + 1..n {
            if m[row][c].is_zero() {
                continue;
            }
            let a0 = m[row][pivot].clone();
            let b0 = m[row][c].clone();
            let e = a0.extended_gcd(&b0);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (ag, bg) = (&a0 / &g, &b0 / &g);
            let combine = |mat: &mut Vec<Vec<BigInt>>| {
                for r in mat.iter_mut() {
                    let (p, q) = (r[pivot].clone(), r[c].clone());
                    r[pivot] = &x * &p + &y * &q;
                    r[c] = &ag * &q - &bg * &p;
                }
            };
            combine(&mut m);
            combine(&mut u);
        }
        if !m[row][pivot].is_zero() {
            pivot += 1;
        }
    }
    let kernel: Vec<Vec<BigInt>> = (pivot..n).map(|c| u.iter().map(|r| r[c].clone()).collect()).collect();
    if kernel.is_empty() {
        return kernel;
    }
    let basis = LatticeBasis::new(kernel, BigRational::new(99.into(), 100.into())).expect("kernel columns are independent");
    let mut out: Vec<Vec<BigInt>> = lll_reduce(&basis).into_rows().iter().map(|v| normalize_vector(v)).collect();
    out.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)));
    out
}

/// Integer kernel of a rational matrix.
pub fn rational_kernel(a: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigInt>> {
    integer_kernel(&clear_row_denominators(a), n)
}
