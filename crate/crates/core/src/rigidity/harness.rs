use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use super::{ad_check, graph_pullback, ld_check, ld_exp_certificate, ExpBinomial, GraphMap, PullbackReport, RelationVerdict};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::{parse_oracle, RealOracle};
use crate::numfield::NumberField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conjecture {
    Baker,
    Lw,
    Logconj,
    Schanuel,
}

impl FromStr for Conjecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "baker" => Ok(Conjecture::Baker),
            "lw" | "lindemann-weierstrass" => Ok(Conjecture::Lw),
            "logconj" | "log" => Ok(Conjecture::Logconj),
            "schanuel" => Ok(Conjecture::Schanuel),
            _ => Err(Error::Parse(format!("unknown statement {s:?} (expected baker, lw, logconj or schanuel)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Consistent,
    VacuouslyConsistent,
    #[serde(rename = "COUNTEREXAMPLE-CANDIDATE")]
    CounterexampleCandidate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Relation(Box<RelationVerdict>),
    Pullback(PullbackReport),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clause {
    pub statement: String,
    pub satisfied: bool,
    pub evidence: Evidence,
}

/// Search bounds shared by every check of one harness run.
#[derive(Clone, Debug)]
pub struct HarnessBounds {
    pub height: BigInt,
    pub degree: u32,
    /// Stand-in for the algebraic closure in Baker's conclusion.
    pub field: NumberField,
}

impl HarnessBounds {
    pub fn from_config(cfg: &Config) -> Result<Self> {
        Ok(HarnessBounds { height: BigInt::from(cfg.height_bound), degree: cfg.degree_bound, field: NumberField::builtin("Q(sqrt 2)")? })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessReport {
    pub statement: Conjecture,
    pub theta: Vec<String>,
    pub premise: Clause,
    pub conclusion: Clause,
    pub outcome: Outcome,
    /// For every positive `LD^Q` verdict on `theta`, the induced relation on `exp(theta)`.
    pub exp_certificate: Option<ExpBinomial>,
}

fn shape(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::WrongInstanceShape(what.into()))
    }
}

fn relation(statement: &str, satisfied: bool, v: RelationVerdict) -> Clause {
    Clause { statement: statement.into(), satisfied, evidence: Evidence::Relation(Box::new(v)) }
}

/// Evaluates premise and conclusion of a statement at the given bounds.
///
/// * `baker`: for `theta` in `L` (each `exp(theta_i)` algebraic), `LD^Q`
///   not detected implies `LD^K` not detected.
/// * `lw`: for algebraic `theta`, `LD^Q` not detected implies `AD(exp theta)`
///   not detected.
/// * `logconj`: for `theta` in `L`, `AD(theta)` implies `LD^Q(theta)`.
/// * `schanuel`: `Gr(exp)*AD` at `theta` implies `LD^Q(theta)`.
///
/// A premise that holds with a failing conclusion is reported as a
/// candidate together with all certificates; it is never a disproof.
pub fn conjecture_harness(statement: Conjecture, thetas: &[RealOracle], bounds: &HarnessBounds, cfg: &Config) -> Result<HarnessReport> {
    shape(thetas.len() >= 2, "at least two numbers are required")?;
    let q = NumberField::builtin("Q")?;
    let h = &bounds.height;
    let in_l = || thetas.iter().all(|t| t.exp().is_algebraic());
    let ld_q = ld_check(thetas, &q, h, cfg)?;
    let (premise, conclusion) = match statement {
        Conjecture::Baker => {
            shape(in_l(), "every exp(theta_i) must be exactly algebraic")?;
            let ld_k = ld_check(thetas, &bounds.field, h, cfg)?;
            (relation("LD^Q not detected", !ld_q.holds(), ld_q.clone()), relation(&format!("LD^{} not detected", bounds.field.name()), !ld_k.holds(), ld_k))
        }
        Conjecture::Lw => {
            shape(thetas.iter().all(|t| t.is_algebraic()), "every theta_i must be exactly algebraic")?;
            let exps: Vec<RealOracle> = thetas.iter().map(|t| t.exp()).collect();
            let ad = ad_check(&exps, bounds.degree, h, cfg)?;
            (relation("LD^Q not detected", !ld_q.holds(), ld_q.clone()), relation("AD(exp theta) not detected", !ad.holds(), ad))
        }
        Conjecture::Logconj => {
            shape(in_l(), "every exp(theta_i) must be exactly algebraic")?;
            let ad = ad_check(thetas, bounds.degree, h, cfg)?;
            (relation("AD holds", ad.holds(), ad), relation("LD^Q holds", ld_q.holds(), ld_q.clone()))
        }
        Conjecture::Schanuel => {
            let gr = graph_pullback(thetas, GraphMap::Exp, bounds.degree, h, false, cfg)?;
            (
                Clause { statement: "Gr(exp)*AD holds".into(), satisfied: gr.holds(), evidence: Evidence::Pullback(gr) },
                relation("LD^Q holds", ld_q.holds(), ld_q.clone()),
            )
        }
    };
    let outcome = match (premise.satisfied, conclusion.satisfied) {
        (false, _) => Outcome::VacuouslyConsistent,
        (true, true) => Outcome::Consistent,
        (true, false) => Outcome::CounterexampleCandidate,
    };
    Ok(HarnessReport {
        statement,
        theta: thetas.iter().map(|t| t.literal().to_string()).collect(),
        exp_certificate: ld_exp_certificate(thetas, &ld_q, cfg.precision_bits)?,
        premise,
        conclusion,
        outcome,
    })
}

/// A regression instance with the outcome the harness must report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuratedInstance {
    pub statement: Conjecture,
    pub theta: Vec<&'static str>,
    pub expected: Outcome,
}

impl CuratedInstance {
    pub fn oracles(&self) -> Result<Vec<RealOracle>> {
        self.theta.iter().map(|s| parse_oracle(s)).collect()
    }
}

/// Twenty exact-class instances, five per statement.
pub fn curated_suite() -> Vec<CuratedInstance> {
    use Conjecture::*;
    use Outcome::*;
    let table: [(Conjecture, &[&'static str], Outcome); 20] = [
        (Baker, &["log(2)", "log(3)"], Consistent),
        (Baker, &["log(2)", "log(3)", "log(6)"], VacuouslyConsistent),
        (Baker, &["log(2)", "log(4)"], VacuouslyConsistent),
        (Baker, &["log(3)", "log(5)", "log(7)"], Consistent),
        (Baker, &["log(3/2)", "log(2)", "log(3)"], VacuouslyConsistent),
        (Lw, &["1", "sqrt(2)"], Consistent),
        (Lw, &["1", "2"], VacuouslyConsistent),
        (Lw, &["sqrt(2)", "sqrt(3)"], Consistent),
        (Lw, &["1", "sqrt(2)", "sqrt(3)"], Consistent),
        (Lw, &["1/2", "3/4"], VacuouslyConsistent),
        (Logconj, &["log(2)", "log(3)", "log(6)"], Consistent),
        (Logconj, &["log(2)", "log(3)"], VacuouslyConsistent),
        (Logconj, &["log(5)", "log(25)"], Consistent),
        (Logconj, &["log(2)", "log(8)", "log(3)"], Consistent),
        (Logconj, &["log(7)", "log(11)"], VacuouslyConsistent),
        (Schanuel, &["1", "2"], Consistent),
        (Schanuel, &["1", "sqrt(2)"], VacuouslyConsistent),
        (Schanuel, &["log(2)", "log(3)"], VacuouslyConsistent),
        (Schanuel, &["log(2)", "log(4)"], Consistent),
        (Schanuel, &["1/2", "1/3"], Consistent),
    ];
    table.into_iter().map(|(statement, theta, expected)| CuratedInstance { statement, theta: theta.to_vec(), expected }).collect()
}
