use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Effective configuration shared by all operations. Every CLI output embeds it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Working precision in bits.
    pub precision_bits: u32,
    /// Upper limit for automatic precision doubling.
    pub precision_cap: u32,
    /// Guard bits subtracted from the working precision for the relation-lattice scale.
    pub guard_bits: u32,
    /// Membership tolerance.
    pub tolerance: f64,
    /// Minimum decay rate (bits per index) for an accepted decay fit.
    pub lambda_min: f64,
    /// Minimum coefficient of determination for an accepted decay fit.
    pub r2_min: f64,
    /// LLL reduction parameter.
    pub lll_delta: f64,
    /// Height bound for relation searches.
    pub height_bound: u64,
    /// Degree bound for polynomial relation searches.
    pub degree_bound: u32,
    /// Cap on pigeonhole box enumeration.
    pub enumeration_cap: u64,
    /// Cluster density threshold for standard part estimates.
    pub cluster_density: f64,
    /// Gap separating clusters in standard part estimates.
    pub cluster_gap: f64,
    /// Seed for every randomized routine.
    pub seed: u64,
    /// Default length of constructed sequences.
    pub sequence_length: usize,
    /// Maximum number of hat-generator stages.
    pub hat_stage_cap: usize,
    /// Extra decay bits per hat-generator stage.
    pub hat_decay_bits: u32,
    /// Bound B for the divisible-by-all numerator constraint.
    pub divisible_bound: u64,
    /// Search bound for scaling witnesses.
    pub witness_search_bound: u64,
    /// Largest denominator bound handled by a direct scan in simultaneous approximation.
    pub scan_cap: u64,
    /// Run batch work on the rayon pool when the `parallel` feature is enabled.
    pub parallel: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision_bits: 256,
            precision_cap: 4096,
            guard_bits: 16,
            tolerance: 1e-3,
            lambda_min: 0.1,
            r2_min: 0.9,
            lll_delta: 0.99,
            height_bound: 10_000,
            degree_bound: 4,
            enumeration_cap: 1_000_000,
            cluster_density: 0.8,
            cluster_gap: 1.0 / 32.0,
            seed: 0,
            sequence_length: 12,
            hat_stage_cap: 6,
            hat_decay_bits: 4,
            divisible_bound: 10,
            witness_search_bound: 10_000,
            scan_cap: 10_000_000,
            parallel: true,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that every field lies in its documented range.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidInput(format!("config field out of range: {what}")));
        if self.precision_bits < 32 || self.precision_bits > self.precision_cap {
            return bad("precision_bits (32..=precision_cap)");
        }
        if self.precision_cap > 1 << 16 {
            return bad("precision_cap (<= 65536)");
        }
        if self.guard_bits >= self.precision_bits / 2 {
            return bad("guard_bits (< precision_bits / 2)");
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return bad("tolerance (0, 1)");
        }
        if self.lambda_min.is_nan() || self.lambda_min <= 0.0 {
            return bad("lambda_min (> 0)");
        }
        if !(0.0..=1.0).contains(&self.r2_min) {
            return bad("r2_min [0, 1]");
        }
        if !(self.lll_delta > 0.25 && self.lll_delta < 1.0) {
            return bad("lll_delta (1/4, 1)");
        }
        if self.height_bound == 0 || self.degree_bound == 0 {
            return bad("height_bound, degree_bound (>= 1)");
        }
        if !(self.cluster_density > 0.0 && self.cluster_density <= 1.0) {
            return bad("cluster_density (0, 1]");
        }
        if !(self.cluster_gap > 0.0 && self.cluster_gap < 0.5) {
            return bad("cluster_gap (0, 1/2)");
        }
        if self.sequence_length < 3 {
            return bad("sequence_length (>= 3)");
        }
        if self.hat_stage_cap == 0 || self.hat_stage_cap > 8 {
            return bad("hat_stage_cap (1..=8)");
        }
        if self.divisible_bound == 0 || self.divisible_bound > 40 {
            return bad("divisible_bound (1..=40)");
        }
        Ok(())
    }

    /// Tolerance as an exact rational.
    pub fn tolerance_rational(&self) -> BigRational {
        f64_to_rational(self.tolerance)
    }

    /// LLL parameter as an exact rational, read from its shortest decimal form.
    pub fn delta_rational(&self) -> BigRational {
        decimal_to_rational(self.lll_delta)
    }

    /// Scale exponent for the relation lattice at a given working precision.
    pub fn lattice_scale_bits(&self, working: u32) -> u32 {
        working.saturating_sub(self.guard_bits).max(16)
    }
}

/// Exact value of an f64.
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)))
}

/// Rational read from the shortest decimal representation of an f64 (0.99 -> 99/100).
pub fn decimal_to_rational(x: f64) -> BigRational {
    let s = format!("{x}");
    parse_decimal(&s).unwrap_or_else(|| f64_to_rational(x))
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int.is_empty() && frac.is_empty() || body.contains(['e', 'E']) {
        return None;
    }
    let digits: String = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(num, den);
    Some(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Config::default().validate().unwrap();
    }

    #[test]
    fn delta_is_exact_decimal() {
        let cfg = Config::default();
        assert_eq!(cfg.delta_rational(), BigRational::new(99.into(), 100.into()));
    }

    #[test]
    fn toml_overrides_and_rejects_unknown() {
        let cfg = Config::from_toml("precision_bits = 512\ntolerance = 0.01\n").unwrap();
        assert_eq!(cfg.precision_bits, 512);
        assert_eq!(cfg.height_bound, 10_000);
        assert!(Config::from_toml("bogus = 1").is_err());
        assert!(Config::from_toml("lll_delta = 0.2").is_err());
    }
}
