use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::serial;

/// `a * alpha` and its monic integer minimal polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClearedDenominator {
    /// Ascending coefficients of the monic polynomial of `a * alpha`.
    #[serde(serialize_with = "serial::big_vec")]
    pub monic: Vec<BigInt>,
    #[serde(serialize_with = "serial::big")]
    pub multiplier: BigInt,
}

/// For `alpha` a root of the primitive `p(x) = sum c_k x^k` of degree `n` and
/// leading coefficient `a`, `a alpha` is a root of the monic
/// `y^n + sum_(k<n) c_k a^(n-1-k) y^k`.
pub fn clear_denominator(coeffs: &[BigInt]) -> Result<ClearedDenominator> {
    let mut c: Vec<BigInt> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() < 2 {
        return Err(Error::InvalidInput("polynomial must have degree at least 1".into()));
    }
    let content = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !content.is_one() {
        return Err(Error::InvalidInput(format!("polynomial is not primitive (content {content})")));
    }
    if c.last().unwrap().is_negative() {
        c.iter_mut().for_each(|x| *x = -x.clone());
    }
    let n = c.len() - 1;
    let a = c[n].clone();
    let mut monic: Vec<BigInt> = (0..n).map(|k| &c[k] * num_traits::pow(a.clone(), n - 1 - k)).collect();
    monic.push(BigInt::one());
    Ok(ClearedDenominator { monic, multiplier: a })
}
