use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use diophlab::dagroups::{
    circle_part, convergents, dual, error_term, hat_element, member_from_convergents, membership, pair_form, scaling_witness, ApproxSequence,
    NumeratorConstraint,
};
use diophlab::foliation::{classify_leaves, covering_tower, minimality, orbit_sample, render, RenderFormat, RenderOptions};
use diophlab::lattice::simultaneous_approx;
use diophlab::matrixdioph::{homogeneous_independence, inhomogeneous_independence, torus_closure, RealMatrix};
use diophlab::numeric::parse::{parse_int_list, parse_oracle_list, parse_rational};
use diophlab::numeric::parse_oracle;
use diophlab::numfield::{
    clear_denominator, conjugate_poly, galois_apply, k_dirichlet, krational_test, o_membership, trace_push, FieldElement, NumberField, OApproxSequence,
};
use diophlab::polyapprox::{algebraic_dependence, degree_relations, ideal_containment, minimal_polynomial, parse_polynomial};
use diophlab::rigidity::{ad_check, conjecture_harness, curated_suite, graph_pullback, ld_check, GraphMap, HarnessBounds};
use diophlab::{Config, Error, RealOracle, Result};

use crate::args::{
    Command, Construct, FoliateAction, FoliateArgs, Format, GroupAction, GroupArgs, IndepMode, MapArg, OfieldAction, OfieldArgs, RigidityAction, RigidityArgs,
};

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Name used in the `command` field of the output.
pub fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Cf { .. } => "cf".into(),
        Command::Group(a) => format!("group {}", action_name(a.action)),
        Command::Simul { .. } => "simul".into(),
        Command::Indep { mode, .. } => format!("indep {}", action_name(*mode)),
        Command::DirichletK { .. } => "dirichlet-k".into(),
        Command::Ofield(a) => format!("ofield {}", action_name(a.action)),
        Command::Minpoly { .. } => "minpoly".into(),
        Command::Algdep { .. } => "algdep".into(),
        Command::Foliate(a) => format!("foliate {}", action_name(a.action)),
        Command::Rigidity(a) => format!("rigidity {}", action_name(a.action)),
    }
}

fn action_name<T: clap::ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

pub fn run(cmd: &Command, cfg: &Config) -> Result<Value> {
    match cmd {
        Command::Cf { theta, k } => cf(theta, k.unwrap_or(cfg.sequence_length), cfg),
        Command::Group(a) => group(a, cfg),
        Command::Simul { theta, q_bound } => {
            let thetas = parse_oracle_list(theta)?;
            let q: BigInt = q_bound.trim().parse().map_err(|_| Error::Parse(format!("denominator bound {q_bound:?} is not an integer")))?;
            Ok(to_value(&simultaneous_approx(&thetas, &q, cfg)?))
        }
        Command::Indep { mode, matrix, samples } => {
            let m = RealMatrix::parse(matrix)?;
            let h = BigInt::from(cfg.height_bound);
            Ok(match mode {
                IndepMode::Homogeneous => to_value(&homogeneous_independence(&m, &h, cfg)?),
                IndepMode::Inhomogeneous => to_value(&inhomogeneous_independence(&m, &h, cfg)?),
                IndepMode::Rows => to_value(&torus_closure(&m, &h, *samples, cfg)?),
            })
        }
        Command::DirichletK { field, theta, eta } => {
            let k = load_field(field)?;
            let eta = k.parse_element(eta)?;
            Ok(json!({ "field": to_value(&k), "result": to_value(&k_dirichlet(&k, &parse_oracle(theta)?, &eta, cfg)?) }))
        }
        Command::Ofield(a) => ofield(a, cfg),
        Command::Minpoly { theta, ideal } => minpoly(theta, *ideal, cfg),
        Command::Algdep { theta, homogeneous } => {
            let thetas = parse_oracle_list(theta)?;
            Ok(to_value(&algebraic_dependence(&thetas, cfg.degree_bound, &BigInt::from(cfg.height_bound), !homogeneous, cfg)?))
        }
        Command::Foliate(a) => foliate(a, cfg),
        Command::Rigidity(a) => rigidity(a, cfg),
    }
}

fn cf(theta: &str, k: usize, cfg: &Config) -> Result<Value> {
    let th = parse_oracle(theta)?;
    let c = convergents(&th, k, cfg)?;
    let p: Vec<String> = c.pairs.iter().map(|x| x.p.to_string()).collect();
    let q: Vec<String> = c.pairs.iter().map(|x| x.q.to_string()).collect();
    let mut v = to_value(&c);
    v["theta"] = json!(th.literal());
    v["p"] = json!(p);
    v["q"] = json!(q);
    Ok(v)
}

fn sequence(th: &RealOracle, seq: &Option<String>, len: Option<usize>, cfg: &Config) -> Result<ApproxSequence> {
    match seq {
        Some(s) => ApproxSequence::bind(th, parse_int_list(s)?, cfg),
        None => member_from_convergents(th, len.unwrap_or(cfg.sequence_length), cfg),
    }
}

fn group(a: &GroupArgs, cfg: &Config) -> Result<Value> {
    let th = parse_oracle(&a.theta)?;
    if a.action == GroupAction::Hat {
        return Ok(to_value(&hat_element(&th, a.stages, cfg)?));
    }
    let seq = sequence(&th, &a.seq, a.len, cfg)?;
    let out = match a.action {
        GroupAction::Membership => {
            let constraint: NumeratorConstraint = a.constraint.parse()?;
            json!({ "sequence": to_value(&seq), "constraint": to_value(&constraint), "verdict": to_value(&membership(&th, &seq, constraint, cfg)?) })
        }
        GroupAction::Error => json!({ "sequence": to_value(&seq), "profile": to_value(&error_term(&th, &seq, cfg)?) }),
        GroupAction::Dual => {
            let (inv, d) = dual(&th, &seq, cfg)?;
            json!({ "sequence": to_value(&seq), "theta_inverse": inv.literal(), "dual": to_value(&d) })
        }
        GroupAction::Witness => json!({ "sequence": to_value(&seq), "witnesses": to_value(&scaling_witness(&th, &seq, cfg)?) }),
        GroupAction::Circle => json!({ "sequence": to_value(&seq), "circle_part": to_value(&circle_part(&th, &seq, cfg)?) }),
        GroupAction::Pairs => {
            let pairs: Vec<[String; 2]> = pair_form(&seq).into_iter().map(|(n, d)| [n.to_string(), d.to_string()]).collect();
            json!({ "theta": th.literal(), "pairs": pairs })
        }
        GroupAction::Hat => unreachable!("handled above"),
    };
    Ok(out)
}

/// A built-in field name, or a path to a TOML field description.
pub fn load_field(spec: &str) -> Result<NumberField> {
    let path = Path::new(spec);
    if path.extension().is_some_and(|e| e == "toml") || path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read field file {spec}: {e}")))?;
        return NumberField::from_toml(&text);
    }
    NumberField::builtin(spec)
}

fn field_elements(k: &NumberField, text: &str) -> Result<Vec<FieldElement>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("element list: {e}")))?;
    let arr = v.as_array().ok_or_else(|| Error::Parse("element list must be a JSON array".into()))?;
    arr.iter()
        .map(|x| match x {
            Value::String(s) => k.parse_element(s),
            other => k.parse_element(&other.to_string()),
        })
        .collect()
}

fn o_sequence(k: &NumberField, th: &RealOracle, a: &OfieldArgs, cfg: &Config) -> Result<OApproxSequence> {
    let len = a.len.unwrap_or(cfg.sequence_length);
    if let Some(s) = &a.seq {
        return OApproxSequence::bind(k, th, field_elements(k, s)?, cfg);
    }
    match a.construct {
        Construct::HalfShift => OApproxSequence::half_shift(k, th, len, cfg),
        Construct::Diagonal => Ok(OApproxSequence::diagonal(k, &member_from_convergents(th, len, cfg)?)),
        Construct::Components => {
            let member = member_from_convergents(th, len, cfg)?;
            let comps = vec![member; k.degree()];
            OApproxSequence::from_components(k, &comps)
        }
    }
}

fn require<'a>(x: &'a Option<String>, flag: &str) -> Result<&'a str> {
    x.as_deref().ok_or_else(|| Error::Parse(format!("missing required option --{flag}")))
}

fn ofield(a: &OfieldArgs, cfg: &Config) -> Result<Value> {
    let k = load_field(&a.field)?;
    if a.action == OfieldAction::Cleardenom {
        let f = parse_polynomial(require(&a.poly, "poly")?, Some(1))?;
        let coeffs: Vec<BigInt> = (0..=f.degree()).map(|i| f.coeff(&[i])).collect();
        return Ok(json!({ "polynomial": f.to_string(), "result": to_value(&clear_denominator(&coeffs)?) }));
    }
    let th = parse_oracle(require(&a.theta, "theta")?)?;
    let h = BigInt::from(cfg.height_bound);
    if a.action == OfieldAction::Krational {
        return Ok(json!({ "field": to_value(&k), "result": to_value(&krational_test(&k, &th, &h, cfg)?) }));
    }
    let seq = o_sequence(&k, &th, a, cfg)?;
    let result = match a.action {
        OfieldAction::OMembership => to_value(&o_membership(&k, &th, &seq, cfg)?),
        OfieldAction::Trace => {
            let t = trace_push(&k, &seq)?;
            // the trace error is a sum of degree-many local errors
            let wider = Config { tolerance: (cfg.tolerance * k.degree() as f64).min(0.5), ..cfg.clone() };
            json!({
                "trace_sequence": to_value(&t),
                "tolerance": wider.tolerance,
                "membership": to_value(&membership(&th, &t, NumeratorConstraint::Integers, &wider)?),
            })
        }
        OfieldAction::Galois => {
            let sigma =
                k.automorphisms().get(a.sigma).ok_or_else(|| Error::InvalidInput(format!("field {} has no automorphism with index {}", k.name(), a.sigma)))?;
            to_value(&galois_apply(&k, sigma, &seq)?)
        }
        OfieldAction::Conjpoly => to_value(&conjugate_poly(&k, &th, &seq, cfg)?),
        OfieldAction::Krational | OfieldAction::Cleardenom => unreachable!("handled above"),
    };
    Ok(json!({ "field": to_value(&k), "sequence": to_value(&seq), "result": result }))
}

fn minpoly(theta: &str, ideal: Option<u32>, cfg: &Config) -> Result<Value> {
    let th = parse_oracle(theta)?;
    let h = BigInt::from(cfg.height_bound);
    let m = minimal_polynomial(&th, cfg.degree_bound, &h, cfg)?;
    let mut v = to_value(&m);
    if let (Some(d), Some(f)) = (ideal, &m.polynomial) {
        let found = degree_relations(&th, d, &h, cfg)?;
        v["ideal"] = to_value(&ideal_containment(&found, f)?);
    }
    Ok(v)
}

fn rationals(text: &str) -> Result<Vec<BigRational>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("rational list: {e}")))?;
    let arr = v.as_array().ok_or_else(|| Error::Parse("rational list must be a JSON array".into()))?;
    arr.iter()
        .map(|x| match x {
            Value::String(s) => parse_rational(s),
            other => parse_rational(&other.to_string()),
        })
        .collect()
}

fn foliate(a: &FoliateArgs, cfg: &Config) -> Result<Value> {
    let h = BigInt::from(cfg.height_bound);
    if a.action == FoliateAction::Tower {
        let th = parse_oracle(require(&a.theta, "theta")?)?;
        let ns: Vec<u64> = serde_json::from_str(&a.ns).map_err(|e| Error::Parse(format!("covering degrees: {e}")))?;
        let step = match &a.step {
            Some(s) => rationals(s)?.first().cloned().ok_or_else(|| Error::Parse("empty step".into()))?,
            None => BigRational::from_integer(1.into()),
        };
        return Ok(json!({ "theta": th.literal(), "levels": to_value(&covering_tower(&th, &ns, a.n, &step, cfg)?) }));
    }
    let m = RealMatrix::parse(require(&a.matrix, "matrix")?)?;
    match a.action {
        FoliateAction::Classify => Ok(to_value(&classify_leaves(&m, &h, cfg)?)),
        FoliateAction::Minimal => Ok(to_value(&minimality(&m, &h, a.n, cfg)?)),
        FoliateAction::Orbit | FoliateAction::Render => {
            let s = m.cols();
            let start = match &a.start {
                Some(t) => rationals(t)?,
                None => vec![BigRational::from_integer(0.into()); s],
            };
            let step = match &a.step {
                Some(t) => rationals(t)?,
                None => vec![BigRational::from_integer(1.into()); s],
            };
            let sample = orbit_sample(&m, a.n, &start, &step, cfg)?;
            if a.action == FoliateAction::Orbit {
                return Ok(to_value(&sample));
            }
            let out = a.out.as_ref().ok_or_else(|| Error::Parse("render needs --out FILE".into()))?;
            let project = a.project.as_deref().map(parse_projection).transpose()?;
            let format = match a.format {
                Format::Csv => RenderFormat::Csv,
                Format::Svg => RenderFormat::Svg,
            };
            let doc = render(&sample, format, RenderOptions { project })?;
            fs::write(out, &doc).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", out.display())))?;
            Ok(json!({
                "path": out.display().to_string(),
                "format": to_value(&format),
                "bytes": doc.len(),
                "points": sample.n,
                "dimension": sample.dimension(),
            }))
        }
        FoliateAction::Tower => unreachable!("handled above"),
    }
}

/// `i,j`, one-based, to a zero-based pair.
fn parse_projection(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("projection {text:?} must be two positive indices i,j"));
    let (i, j) = text.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

fn rigidity(a: &RigidityArgs, cfg: &Config) -> Result<Value> {
    let h = BigInt::from(cfg.height_bound);
    if a.action == RigidityAction::Harness && a.suite {
        let mut bounds = HarnessBounds::from_config(cfg)?;
        if let Some(f) = &a.field {
            bounds.field = load_field(f)?;
        }
        let reports = curated_suite()
            .iter()
            .map(|inst| {
                let r = conjecture_harness(inst.statement, &inst.oracles()?, &bounds, cfg)?;
                Ok(json!({ "expected": to_value(&inst.expected), "matches": r.outcome == inst.expected, "report": to_value(&r) }))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(json!({ "suite": reports }));
    }
    let thetas = parse_oracle_list(require(&a.theta, "theta")?)?;
    match a.action {
        RigidityAction::Ld => {
            let k = load_field(a.field.as_deref().unwrap_or("Q"))?;
            Ok(to_value(&ld_check(&thetas, &k, &h, cfg)?))
        }
        RigidityAction::Ad => Ok(to_value(&ad_check(&thetas, cfg.degree_bound, &h, cfg)?)),
        RigidityAction::Pullback => {
            let map = match a.map {
                MapArg::Exp => GraphMap::Exp,
                MapArg::Identity => GraphMap::Identity,
            };
            Ok(to_value(&graph_pullback(&thetas, map, cfg.degree_bound, &h, a.algebraic_class, cfg)?))
        }
        RigidityAction::Harness => {
            let name = require(&a.name, "name")?.parse()?;
            let mut bounds = HarnessBounds::from_config(cfg)?;
            if let Some(f) = &a.field {
                bounds.field = load_field(f)?;
            }
            Ok(to_value(&conjecture_harness(name, &thetas, &bounds, cfg)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projections_are_one_based() {
        assert_eq!(parse_projection("1,3").unwrap(), (0, 2));
        assert!(parse_projection("0,1").is_err());
        assert!(parse_projection("2").is_err());
    }

    #[test]
    fn rational_lists() {
        let r = rationals(r#"["1/2", 3]"#).unwrap();
        assert_eq!(r.len(), 2);
        assert!(rationals("[\"pi\"]").is_err());
    }
}
