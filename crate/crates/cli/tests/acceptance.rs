//! Acceptance run: every criterion prints one PASS/FAIL line.
//!
//! Expected values come from oracles written here, independent of the
//! library: f64 box scans, exact rational elimination, brute-force
//! coefficient searches and Fibonacci recurrences.

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diophlab::dagroups::{
    convergents, dual, error_term, hat_element, member_from_convergents, membership, scaling_witness, ApproxSequence, NumeratorConstraint,
};
use diophlab::foliation::{classify_leaves, LeafType};
use diophlab::lattice::{Exclusion, RelationStatus};
use diophlab::matrixdioph::{homogeneous_independence, inhomogeneous_independence, IndependenceReport, IndependenceVerdict, RealMatrix};
use diophlab::numfield::{conjugate_poly, galois_apply, k_dirichlet, o_membership, trace_push, FieldElement, NumberField, OApproxSequence};
use diophlab::poly::IntPolynomial;
use diophlab::polyapprox::{degree_relations, ideal_containment, minimal_polynomial};
use diophlab::rigidity::{conjecture_harness, curated_suite, Evidence, HarnessBounds, Outcome};
use diophlab::{Config, RealOracle};

const SEED: u64 = 0x5eed_d10f;

/// Criteria whose failure is recorded and expected.
const KNOWN_FAILURES: &[usize] = &[3];

type Check = Result<String, String>;

/// Number, name and check of one criterion.
type Criterion = (usize, &'static str, fn() -> Check);

trait Ctx<T> {
    fn ctx(self, what: &str) -> Result<T, String>;
}

impl<T> Ctx<T> for diophlab::Result<T> {
    fn ctx(self, what: &str) -> Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

fn within(t0: Instant, budget: Duration) -> Result<(), String> {
    let el = t0.elapsed();
    if el > budget {
        Err(format!("took {el:.2?}, budget {budget:?}"))
    } else {
        Ok(())
    }
}

fn fibonacci(n: usize) -> Vec<BigInt> {
    // fib[k] = F_k with F_0 = 0, F_1 = 1
    let mut fib = vec![BigInt::zero(), BigInt::one()];
    while fib.len() <= n {
        let next = &fib[fib.len() - 1] + &fib[fib.len() - 2];
        fib.push(next);
    }
    fib
}

fn criterion_1() -> Check {
    let t0 = Instant::now();
    let cfg = Config::default();
    let phi = RealOracle::surd(int(1), int(1), int(2), int(5)).ctx("phi")?;
    let fib = fibonacci(40);
    let c = convergents(&phi, 20, &cfg).ctx("convergents")?;
    ensure!(c.pairs.len() == 20, "expected 20 convergents, got {}", c.pairs.len());
    for (k, pq) in c.pairs.iter().enumerate() {
        ensure!(pq.q == fib[k + 1] && pq.p == fib[k + 2], "convergent {k} is {}/{}", pq.p, pq.q);
    }

    let seq = member_from_convergents(&phi, 18, &cfg).ctx("member")?;
    let eps = error_term(&phi, &seq, &cfg).ctx("error term")?.epsilons;
    let phi_f = (1.0 + 5f64.sqrt()) / 2.0;
    for (i, n) in seq.entries.iter().enumerate() {
        let k = (2..fib.len()).find(|&k| &fib[k] == n).ok_or_else(|| format!("entry {n} is not a Fibonacci number"))?;
        let want = phi_f.powi(-(k as i32));
        let got = eps[i].mid_f64().abs();
        ensure!((got - want).abs() <= 1e-12, "|eps| for F_{k} is {got:e}, expected {want:e}");
    }
    let v = membership(&phi, &seq, NumeratorConstraint::Integers, &cfg).ctx("membership")?;
    ensure!(v.is_certified(), "golden-mean member is not certified: {:?}", v.status);

    let (inv, d) = dual(&phi, &seq, &cfg).ctx("dual")?;
    for (n, m) in seq.entries.iter().zip(&d.entries) {
        let k = (2..fib.len()).find(|&k| &fib[k] == n).unwrap();
        ensure!(m == &fib[k + 1], "dual entry for F_{k} is {m}, expected F_{}", k + 1);
    }
    let (_, dd) = dual(&inv, &d, &cfg).ctx("second dual")?;
    ensure!(dd.entries == seq.entries && dd.duals == seq.duals, "dual is not an involution on the pairs");
    within(t0, Duration::from_secs(1))?;
    Ok(format!("18 entries match phi^-k, dual involutive, {:.0?}", t0.elapsed()))
}

fn criterion_2() -> Check {
    let t0 = Instant::now();
    let cfg = Config::default();
    let mut checked = 0usize;
    for b in 2..=12i64 {
        for a in 1..b {
            if num_integer::gcd(a, b) != 1 {
                continue;
            }
            let theta = RealOracle::rational(ratio(a, b));
            for n in -100..=100i64 {
                let seq = ApproxSequence::bind(&theta, vec![int(n); 3], &cfg).ctx("bind")?;
                let v = membership(&theta, &seq, NumeratorConstraint::Integers, &cfg).ctx("membership")?;
                let expect = n % b == 0;
                ensure!(v.is_certified() == expect, "theta {a}/{b}, n {n}: {:?}", v.status);
                ensure!(expect || !v.is_member(), "theta {a}/{b}, n {n} reported a member");
                checked += 1;
            }
        }
    }
    within(t0, Duration::from_secs(10))?;
    Ok(format!("{checked} rational instances certified iff b | n, {:.1?}", t0.elapsed()))
}

fn criterion_3() -> Check {
    let cfg = Config { witness_search_bound: 10_000, ..Config::default() };
    let quarter = ratio(1, 4);
    let mut failures = Vec::new();
    let mut passed = Vec::new();
    for lit in ["sqrt(2)", "surd(1,1,2,5)", "pi"] {
        let theta = diophlab::numeric::parse_oracle(lit).ctx(lit)?;
        let seq = member_from_convergents(&theta, 11, &cfg).ctx(lit)?;
        match scaling_witness(&theta, &seq, &cfg) {
            Ok(ws) if ws.len() == seq.len() && ws.iter().all(|w| w.distance.lo().to_rational() > quarter) => passed.push(lit),
            Ok(ws) => failures.push(format!("{lit}: {} witnesses for {} entries", ws.len(), seq.len())),
            Err(e) => failures.push(format!("{lit}: {e}")),
        }
    }
    if failures.is_empty() {
        Ok(format!("witnesses within 10^4 for {}", passed.join(", ")))
    } else {
        Err(format!("passed [{}]; {}", passed.join(", "), failures.join("; ")))
    }
}

fn criterion_4() -> Check {
    let cfg = Config::default();
    let root2 = RealOracle::sqrt(2);
    let hat = hat_element(&root2, 4, &cfg).ctx("hat")?;
    let entries = hat.sequence.entries.clone();
    for n in &entries {
        for p in [2, 3] {
            ensure!(n.mod_floor(&int(p)).is_one(), "entry {n} is not 1 mod {p}");
        }
    }
    for q in 1..=4i64 {
        let theta = root2.mul_rational(&ratio(q, 1));
        let seq = ApproxSequence::bind(&theta, entries.clone(), &cfg).ctx("bind")?;
        let v = membership(&theta, &seq, NumeratorConstraint::Integers, &cfg).ctx("membership")?;
        ensure!(v.is_member(), "hat element is not a member for {q} sqrt(2): {:?}", v.status);
    }
    Ok(format!("{} stages, member for q sqrt(2), q = 1..4, entries 1 mod 2 and 3", hat.stages.len()))
}

/// Box of each coordinate `floor(n_j frac(beta_j x))`, or `None` too close to a wall to trust f64.
fn f64_boxes(x: f64, beta: &[u64], n: &[u64]) -> Option<Vec<u64>> {
    beta.iter()
        .zip(n)
        .map(|(&b, &nj)| {
            let y = (b as f64 * x).fract() * nj as f64;
            if (y - y.round()).abs() < 1e-9 && b != 0 {
                None
            } else {
                Some(y.floor() as u64)
            }
        })
        .collect()
}

fn lattice_points(n: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &nj in n {
        out = out.into_iter().flat_map(|p| (0..nj).map(move |a| [p.clone(), vec![a]].concat())).collect();
    }
    out
}

fn coords_u64(a: &FieldElement) -> Option<Vec<u64>> {
    a.int_coords()?.iter().map(|c| c.to_u64()).collect()
}

fn criterion_5() -> Check {
    let t0 = Instant::now();
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let fields = ["Q(sqrt 2)", "Q(sqrt 3)", "Q(sqrt 5)", "maxreal7"].iter().map(|f| NumberField::builtin(f).ctx(f)).collect::<Result<Vec<_>, _>>()?;
    let thetas = [("pi", std::f64::consts::PI), ("e", std::f64::consts::E), ("log(2)", std::f64::consts::LN_2)];
    let mut nontrivial = 0;
    for inst in 0..100 {
        let k = &fields[rng.gen_range(0..fields.len())];
        let (lit, x) = thetas[rng.gen_range(0..thetas.len())];
        let n: Vec<u64> = (0..k.degree()).map(|_| rng.gen_range(1..=5)).collect();
        let eta = FieldElement::from_i64s(&n.iter().map(|&v| v as i64).collect::<Vec<_>>());
        let theta = diophlab::numeric::parse_oracle(lit).ctx(lit)?;
        let tag = format!("instance {inst} ({}, {lit}, eta {n:?})", k.name());
        let r = k_dirichlet(k, &theta, &eta, &cfg).ctx(&tag)?;
        ensure!(r.norm_certified && r.error_certified, "{tag}: inequalities not certified");

        let unit: Vec<u64> = n.iter().map(|&v| v - 1).collect();
        let mut boxes: Vec<Vec<u64>> = Vec::new();
        for p in lattice_points(&n) {
            boxes.push(f64_boxes(x, &p, &n).ok_or_else(|| format!("{tag}: f64 oracle too close to a box wall"))?);
        }
        boxes.push(unit.clone());
        let distinct: HashSet<&Vec<u64>> = boxes.iter().collect();
        ensure!(distinct.len() < boxes.len(), "{tag}: oracle pair scan found no collision");

        let earlier = coords_u64(&r.earlier).ok_or_else(|| format!("{tag}: earlier point outside the box"))?;
        ensure!(f64_boxes(x, &earlier, &n).as_ref() == Some(&r.boxes), "{tag}: earlier point is not in box {:?}", r.boxes);
        let gamma: Vec<i64> = match &r.later {
            Some(l) => {
                let later = coords_u64(l).ok_or_else(|| format!("{tag}: later point outside the box"))?;
                ensure!(f64_boxes(x, &later, &n).as_ref() == Some(&r.boxes), "{tag}: later point is not in box {:?}", r.boxes);
                later.iter().zip(&earlier).map(|(a, b)| *a as i64 - *b as i64).collect()
            }
            None => {
                ensure!(r.boxes == unit, "{tag}: unit point is in box {unit:?}, solver says {:?}", r.boxes);
                earlier.iter().map(|&a| a as i64).collect()
            }
        };
        let want_gamma = FieldElement::from_i64s(&gamma);
        ensure!(r.gamma == want_gamma, "{tag}: gamma disagrees with the pair");
        let err: f64 = gamma.iter().map(|&g| (g as f64 * x - (g as f64 * x).round()).powi(2)).sum();
        let bound: f64 = n.iter().map(|&v| 1.0 / (v * v) as f64).sum();
        let gnorm: i64 = gamma.iter().map(|g| g * g).sum();
        let enorm: u64 = n.iter().map(|v| v * v).sum();
        ensure!(err < bound && (gnorm as u64) < enorm, "{tag}: f64 recomputation breaks an inequality");
        if !r.trivial {
            nontrivial += 1;
        }
    }
    Ok(format!("100 instances certified, pair scans agree ({nontrivial} nontrivial), {:.1?}", t0.elapsed()))
}

/// Rank over `Q` by exact Gaussian elimination.
fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn random_rational_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<BigRational>> {
    let r = rng.gen_range(1..=3);
    let s = rng.gen_range(1..=3);
    (0..r)
        .map(|_| {
            (0..s)
                .map(|_| {
                    // a quarter of the entries are small integers, which makes kernels common
                    if rng.gen_bool(0.25) {
                        ratio(rng.gen_range(-2..=2), 1)
                    } else {
                        ratio(rng.gen_range(-20..=20), rng.gen_range(1..=20))
                    }
                })
                .collect()
        })
        .collect()
}

/// `Theta` with `-I` appended, the system of `Theta n = n^perp`.
fn affine(theta: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let r = theta.len();
    theta
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().cloned().chain((0..r).map(|k| if k == i { -BigRational::one() } else { BigRational::zero() })).collect())
        .collect()
}

fn apply(theta: &[Vec<BigRational>], m: &[BigInt]) -> Vec<BigRational> {
    theta.iter().map(|row| row.iter().zip(m).map(|(a, x)| a * BigRational::from_integer(x.clone())).sum()).collect()
}

fn check_report(rep: &IndependenceReport, kernel_dim: usize, unbounded: bool, tag: &str) -> Result<(), String> {
    match (&rep.verdict, kernel_dim) {
        (IndependenceVerdict::Dependent, d) if d > 0 => {
            let basis = rep.kernel_basis.as_ref().ok_or_else(|| format!("{tag}: no exact kernel"))?;
            ensure!(basis.len() == d, "{tag}: kernel rank {} but oracle says {d}", basis.len());
            Ok(())
        }
        (IndependenceVerdict::Independent, 0) if unbounded => Ok(()),
        (IndependenceVerdict::IndependentUpTo { .. }, 0) if !unbounded => {
            let all = matches!(rep.certificate.status, RelationStatus::NoneUpTo { exclusion: Exclusion::AllHeights, .. });
            ensure!(all, "{tag}: independence not proved at all heights");
            Ok(())
        }
        (v, d) => Err(format!("{tag}: verdict {v:?}, oracle kernel dimension {d}")),
    }
}

fn criterion_6() -> Check {
    let cfg = Config::default();
    let h = BigInt::from(cfg.height_bound);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let (mut dep, mut indep) = (0, 0);
    for inst in 0..200 {
        let theta = random_rational_matrix(&mut rng);
        let s = theta[0].len();
        let r = theta.len();
        let tag = format!("matrix {inst}");
        let mat = RealMatrix::from_rationals(&theta).ctx(&tag)?;

        let hom = homogeneous_independence(&mat, &h, &cfg).ctx(&tag)?;
        let hdim = s - rank(theta.clone());
        check_report(&hom, hdim, true, &format!("{tag} homogeneous"))?;
        if let Some(m) = &hom.columns {
            ensure!(m.iter().any(|x| !x.is_zero()), "{tag}: zero certificate");
            ensure!(apply(&theta, m).iter().all(Zero::is_zero), "{tag}: Theta m != 0 for {m:?}");
        }
        if hdim > 0 {
            dep += 1;
        } else {
            indep += 1;
        }

        let inh = inhomogeneous_independence(&mat, &h, &cfg).ctx(&tag)?;
        let idim = s + r - rank(affine(&theta));
        check_report(&inh, idim, true, &format!("{tag} inhomogeneous"))?;
        if let (Some(m), Some(mp)) = (&inh.columns, &inh.affine) {
            let lhs = apply(&theta, m);
            ensure!(lhs.iter().zip(mp).all(|(a, b)| *a == BigRational::from_integer(b.clone())), "{tag}: Theta m != m_perp");
        }
    }
    Ok(format!("200 rational matrices agree with exact elimination ({dep} dependent, {indep} independent homogeneous)"))
}

/// Coordinates over `{1, sqrt 2, sqrt 3}` of `(a + b sqrt d) / c`.
struct Surd {
    coords: [BigRational; 3],
    literal: (i64, i64, i64, i64),
}

fn random_surd(rng: &mut ChaCha8Rng) -> Surd {
    let (a, b, c) = (rng.gen_range(-4..=4), rng.gen_range(-3..=3), rng.gen_range(1..=4));
    let d = if rng.gen_bool(0.5) { 2 } else { 3 };
    let mut coords = [ratio(a, c), BigRational::zero(), BigRational::zero()];
    coords[if d == 2 { 1 } else { 2 }] = ratio(b, c);
    Surd { coords, literal: (a, b, c, d) }
}

/// Rational rows of a surd system, one block per basis number.
fn expand(rows: &[Vec<[BigRational; 3]>]) -> Vec<Vec<BigRational>> {
    (0..3).flat_map(|t| rows.iter().map(move |row| row.iter().map(|c| c[t].clone()).collect())).collect()
}

fn expected_leaf(leaf: &LeafType, dim: usize, tag: &str) -> Result<(), String> {
    match (leaf, dim) {
        (LeafType::Planar { .. }, 0) => Ok(()),
        (LeafType::NonSimplyConnected { rank, .. }, d) if *rank == d && d > 0 => Ok(()),
        (l, d) => Err(format!("{tag}: leaf {l:?}, oracle lattice rank {d}")),
    }
}

fn criterion_7() -> Check {
    let cfg = Config::default();
    let h = BigInt::from(cfg.height_bound);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut planar = 0;
    for inst in 0..200 {
        let theta = random_rational_matrix(&mut rng);
        let (r, s) = (theta.len(), theta[0].len());
        let tag = format!("matrix {inst}");
        let mat = RealMatrix::from_rationals(&theta).ctx(&tag)?;
        let cl = classify_leaves(&mat, &h, &cfg).ctx(&tag)?;
        expected_leaf(&cl.homogeneous.leaf, s - rank(theta.clone()), &format!("{tag} f"))?;
        expected_leaf(&cl.inhomogeneous.leaf, s + r - rank(affine(&theta)), &format!("{tag} F"))?;
        let hom = homogeneous_independence(&mat, &h, &cfg).ctx(&tag)?;
        ensure!(cl.homogeneous.independence == hom, "{tag}: leaf and independence reports differ");
        planar += usize::from(cl.homogeneous.leaf.is_planar());
    }
    let mut surd_planar = 0;
    for inst in 0..20 {
        let (r, s) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
        let grid: Vec<Vec<Surd>> = (0..r).map(|_| (0..s).map(|_| random_surd(&mut rng)).collect()).collect();
        let oracles = grid
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let (a, b, c, d) = x.literal;
                        RealOracle::surd(int(a), int(b), int(c), int(d))
                    })
                    .collect::<diophlab::Result<Vec<_>>>()
            })
            .collect::<diophlab::Result<Vec<_>>>()
            .ctx("surd")?;
        let tag = format!("surd matrix {inst}");
        let mat = RealMatrix::new(oracles).ctx(&tag)?;
        let coords: Vec<Vec<[BigRational; 3]>> = grid.iter().map(|row| row.iter().map(|x| x.coords.clone()).collect()).collect();
        let hdim = s - rank(expand(&coords));
        let mut aff = coords.clone();
        for (i, row) in aff.iter_mut().enumerate() {
            for k in 0..r {
                let one = if k == i { -BigRational::one() } else { BigRational::zero() };
                row.push([one, BigRational::zero(), BigRational::zero()]);
            }
        }
        let idim = s + r - rank(expand(&aff));
        let cl = classify_leaves(&mat, &h, &cfg).ctx(&tag)?;
        expected_leaf(&cl.homogeneous.leaf, hdim, &format!("{tag} f"))?;
        expected_leaf(&cl.inhomogeneous.leaf, idim, &format!("{tag} F"))?;
        check_report(&cl.homogeneous.independence, hdim, mat.rational_entries().is_some(), &format!("{tag} f"))?;
        surd_planar += usize::from(cl.inhomogeneous.leaf.is_planar());
    }
    Ok(format!("220 leaf classes match the relation lattices ({planar} planar f, {surd_planar} planar F among surds)"))
}

fn eval_f64(c: &[i64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a as f64)
}

fn eval_rat(c: &[i64], x: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, &a| acc * x + ratio(a, 1))
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Remainder of `a` by `b` over `Q`.
fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    while r.len() >= b.len() {
        let f = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - b.len();
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &f * y;
        }
        r = trim(r);
    }
    r
}

fn gcd_degree(a: &[i64], b: &[i64]) -> usize {
    let q = |c: &[i64]| trim(c.iter().map(|&x| ratio(x, 1)).collect());
    let (mut x, mut y) = (q(a), q(b));
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    x.len().saturating_sub(1)
}

/// True when some integer polynomial of degree below `deg p` with coefficients in `[-20, 20]` shares a root with `p`.
fn lower_degree_vanisher(p: &[i64], alpha: f64) -> bool {
    let d = p.len() - 1;
    let mut c = vec![-20i64; d];
    loop {
        let lead = c.iter().rposition(|&x| x != 0);
        if lead.is_some() && eval_f64(&c, alpha).abs() < 1e-6 * (1.0 + alpha.abs()).powi(d as i32) && gcd_degree(p, &c) > 0 {
            return true;
        }
        let Some(j) = c.iter().position(|&x| x < 20) else { return false };
        c[j] += 1;
        for x in c.iter_mut().take(j) {
            *x = -20;
        }
    }
}

/// An irreducible integer polynomial of degree at most 4 and height at most 20 with an isolated real root.
fn random_algebraic(rng: &mut ChaCha8Rng) -> (Vec<i64>, RealOracle) {
    loop {
        let d = rng.gen_range(1..=4usize);
        let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-20..=20)).collect();
        if c[d] == 0 || c[0] == 0 {
            continue;
        }
        let g = c.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        c.iter_mut().for_each(|x| *x /= g);
        if c[d] < 0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
        let bound = 1 + c.iter().map(|x| (x.abs() + c[d].abs() - 1) / c[d].abs()).max().unwrap();
        let steps = 1024 * bound;
        let found = (-steps..steps).find_map(|i| {
            let (lo, hi) = (ratio(i, 1024), ratio(i + 1, 1024));
            let (a, b) = (eval_rat(&c, &lo), eval_rat(&c, &hi));
            if (a.is_negative() && b.is_positive()) || (a.is_positive() && b.is_negative()) {
                let x = RealOracle::algebraic(&c.iter().map(|&v| int(v)).collect::<Vec<_>>(), lo.clone(), hi.clone()).ok()?;
                Some(x)
            } else {
                None
            }
        });
        let Some(x) = found else { continue };
        let Ok(alpha) = x.eval(80).map(|v| v.mid_f64()) else { continue };
        if d > 1 && lower_degree_vanisher(&c, alpha) {
            continue;
        }
        return (c, x);
    }
}

fn criterion_8() -> Check {
    let t0 = Instant::now();
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut degrees = [0usize; 5];
    for inst in 0..50 {
        let (c, x) = random_algebraic(&mut rng);
        let tag = format!("instance {inst} ({c:?})");
        let rel = minimal_polynomial(&x, 4, &int(20), &cfg).ctx(&tag)?;
        let p = rel.polynomial.ok_or_else(|| format!("{tag}: no relation found"))?;
        let sign = if p.coeff(&[p.degree()]).is_negative() { -1 } else { 1 };
        let got: Vec<BigInt> = (0..=p.degree()).map(|i| p.coeff(&[i]) * sign).collect();
        let want: Vec<BigInt> = c.iter().map(|&v| int(v)).collect();
        ensure!(got == want, "{tag}: recovered {got:?}");
        ensure!(rel.certificate.is_exact(), "{tag}: certificate is not exact");
        degrees[c.len() - 1] += 1;
    }
    Ok(format!("50 minimal polynomials recovered (degrees 1..4: {:?}), {:.1?}", &degrees[1..], t0.elapsed()))
}

fn criterion_9() -> Check {
    let cfg = Config::default();
    let mut counts = Vec::new();
    for (lit, m) in [("sqrt(2)", [-2i64, 0, 1]), ("surd(1,1,2,5)", [-1, -1, 1])] {
        let theta = diophlab::numeric::parse_oracle(lit).ctx(lit)?;
        let found = degree_relations(&theta, 4, &int(100), &cfg).ctx(lit)?;
        ensure!(!found.is_empty(), "{lit}: no relations found");
        let gen = IntPolynomial::univariate(&m.map(int));
        let rep = ideal_containment(&found, &gen).ctx(lit)?;
        ensure!(rep.all_divisible, "{lit}: relation {:?} not divisible by {}", rep.counterexample, rep.generator);
        counts.push(format!("{lit}: {}", found.len()));
    }
    Ok(format!("every relation up to degree 4 lies in the ideal ({})", counts.join(", ")))
}

fn criterion_10() -> Check {
    let t0 = Instant::now();
    let cfg = Config::default();
    let bounds = HarnessBounds::from_config(&cfg).ctx("bounds")?;
    let mut binomials = 0;
    for (i, inst) in curated_suite().iter().enumerate() {
        let tag = format!("suite {i} ({:?} {:?})", inst.statement, inst.theta);
        let rep = conjecture_harness(inst.statement, &inst.oracles().ctx(&tag)?, &bounds, &cfg).ctx(&tag)?;
        ensure!(rep.outcome != Outcome::CounterexampleCandidate, "{tag}: counterexample candidate");
        ensure!(rep.outcome == inst.expected, "{tag}: outcome {:?}, expected {:?}", rep.outcome, inst.expected);
        let ld_holds = [&rep.premise, &rep.conclusion].iter().any(|c| matches!(&c.evidence, Evidence::Relation(v) if v.relation == "LD^Q" && v.holds()));
        if ld_holds {
            let b = rep.exp_certificate.as_ref().ok_or_else(|| format!("{tag}: LD^Q holds without an exp binomial"))?;
            ensure!(b.exact && b.verified, "{tag}: binomial {} not verified exactly", b.polynomial);
            binomials += 1;
        }
    }
    Ok(format!("20 instances consistent, {binomials} exp binomials verified exactly, {:.1?}", t0.elapsed()))
}

fn quadratic_sequence(rng: &mut ChaCha8Rng, k: &NumberField, theta: &RealOracle, cfg: &Config) -> Result<(OApproxSequence, &'static str), String> {
    let len = 8;
    let half_ok = k.name() == "Q(sqrt 5)" || k.name() == "Q(sqrt 13)";
    let choice = rng.gen_range(0..if half_ok { 3 } else { 2 });
    if choice == 2 {
        return Ok((OApproxSequence::half_shift(k, theta, len, cfg).ctx("half shift")?, "half-shift"));
    }
    let long = member_from_convergents(theta, len + 1, cfg).ctx("member")?;
    let head = ApproxSequence { entries: long.entries[..len].to_vec(), duals: long.duals[..len].to_vec(), ..long.clone() };
    let tail = ApproxSequence { entries: long.entries[1..].to_vec(), duals: long.duals[1..].to_vec(), ..long.clone() };
    if choice == 0 {
        return Ok((OApproxSequence::diagonal(k, &head), "diagonal"));
    }
    let mut comps = Vec::new();
    for _ in 0..k.degree() {
        let (a, b) = loop {
            let (a, b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if a != 0 || b != 0 {
                break (a, b);
            }
        };
        comps.push(diophlab::dagroups::combine(&head, &tail, &int(a), &int(b)).ctx("combine")?);
    }
    Ok((OApproxSequence::from_components(k, &comps).ctx("components")?, "components"))
}

fn criterion_11() -> Check {
    let t0 = Instant::now();
    let cfg = Config::default();
    let mut wide = cfg.clone();
    wide.tolerance = 2.0 * cfg.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let fields = [2, 3, 5, 13].iter().map(|&d| NumberField::quadratic(d).ctx("field")).collect::<Result<Vec<_>, _>>()?;
    let thetas = ["pi", "e", "log(2)", "sqrt(3)"];
    let mut kinds = std::collections::BTreeMap::<&str, usize>::new();
    for inst in 0..50 {
        let k = &fields[rng.gen_range(0..fields.len())];
        let lit = thetas[rng.gen_range(0..thetas.len())];
        let theta = diophlab::numeric::parse_oracle(lit).ctx(lit)?;
        let (seq, kind) = quadratic_sequence(&mut rng, k, &theta, &cfg)?;
        *kinds.entry(kind).or_default() += 1;
        let tag = format!("instance {inst} ({}, {lit}, {kind})", k.name());
        let om = o_membership(k, &theta, &seq, &cfg).ctx(&tag)?;
        ensure!(om.is_member(), "{tag}: constructed sequence is not a member: {:?}", om.status);

        let tr = trace_push(k, &seq).ctx(&tag)?;
        let v = membership(&theta, &tr, NumeratorConstraint::Integers, &wide).ctx(&tag)?;
        ensure!(v.is_member(), "{tag}: trace is not a member at 2 tau: {:?}", v.status);

        let sigma = k
            .automorphisms()
            .iter()
            .find(|s| s.iter().enumerate().any(|(j, x)| *x != k.basis(j)))
            .ok_or_else(|| format!("{tag}: no nontrivial automorphism"))?;
        let img = galois_apply(k, sigma, &seq).ctx(&tag)?;
        let om2 = o_membership(k, &theta, &img.sequence, &cfg).ctx(&tag)?;
        ensure!(om2.is_member() == om.is_member() && om2.is_certified() == om.is_certified(), "{tag}: galois image changes the verdict");
        for (nu, &mu) in img.place_permutation.iter().enumerate() {
            let (a, b) = (&om2.places[nu].epsilons, &om.places[mu].epsilons);
            ensure!(a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.intersect(y).is_some()), "{tag}: place {nu} of the image is not place {mu}");
        }

        let cp = conjugate_poly(k, &theta, &seq, &cfg).ctx(&tag)?;
        let slack = BigRational::new(BigInt::one(), BigInt::one() << 60);
        for (i, (f, e)) in cp.values.iter().zip(&cp.error_products).enumerate() {
            ensure!(cp.polys[i].len() == 3, "{tag}: conjugate polynomial {i} has degree {}", cp.polys[i].len() - 1);
            ensure!(f.abs().lo().to_rational() <= e.hi().to_rational() + &slack, "{tag}: |f_{i}(theta)| exceeds the error product");
        }
    }
    Ok(format!("50 quadratic sequences {kinds:?}, {:.1?}", t0.elapsed()))
}

fn cli_matrix(dir: &std::path::Path) -> Vec<Vec<String>> {
    let svg = dir.join("orbit.svg").display().to_string();
    let rows: Vec<Vec<&str>> = vec![
        vec!["cf", "--theta", "surd(1,1,2,5)", "-k", "6"],
        vec!["cf", "--theta", "pi", "-k", "8"],
        vec!["group", "membership", "--theta", "3/7", "--seq", "[1,2,3]"],
        vec!["group", "error", "--theta", "sqrt(2)", "--len", "6"],
        vec!["group", "dual", "--theta", "sqrt(2)", "--len", "6"],
        vec!["group", "witness", "--theta", "sqrt(2)", "--len", "6"],
        vec!["group", "hat", "--theta", "sqrt(2)", "--stages", "3"],
        vec!["simul", "--theta", "[\"pi\"]", "--q-bound", "120"],
        vec!["indep", "homogeneous", "--matrix", "[[\"sqrt(2)\",\"sqrt(3)\"]]"],
        vec!["indep", "inhomogeneous", "--matrix", "[[\"1/2\",\"1/3\"]]"],
        vec!["dirichlet-k", "--field", "Q(sqrt 2)", "--theta", "pi", "--eta", "3+3w"],
        vec!["ofield", "o-membership", "--theta", "pi"],
        vec!["ofield", "galois", "--theta", "pi"],
        vec!["ofield", "conjpoly", "--theta", "pi", "--len", "5"],
        vec!["minpoly", "--theta", "sqrt(2)", "--ideal", "4"],
        vec!["algdep", "--theta", "[\"sqrt(2)\",\"sqrt(8)\"]"],
        vec!["foliate", "classify", "--matrix", "[[\"sqrt(2)\"]]"],
        vec!["foliate", "orbit", "--matrix", "[[\"sqrt(2)\",\"sqrt(3)\"]]", "-n", "50"],
        vec!["foliate", "render", "--matrix", "[[\"sqrt(2)\",\"sqrt(3)\"]]", "-n", "50", "--format", "svg", "--project", "1,2", "-o", &svg],
        vec!["foliate", "tower", "--theta", "sqrt(2)"],
        vec!["rigidity", "ld", "--theta", "[\"log(2)\",\"log(4)\"]"],
        vec!["rigidity", "pullback", "--theta", "[\"1\",\"sqrt(2)\"]"],
        vec!["rigidity", "harness", "--name", "lw", "--theta", "[\"1\",\"sqrt(2)\"]"],
        vec!["--pretty", "cf", "--theta", "sqrt(2)", "-k", "5"],
        vec!["cf", "--theta", "bogus("],
        vec!["dirichlet-k", "--field", "Q(sqrt 2)", "--theta", "3/7", "--eta", "2+2w"],
    ];
    rows.into_iter().map(|r| r.into_iter().map(String::from).collect()).collect()
}

#[derive(PartialEq)]
struct Run {
    stdout: Vec<u8>,
    code: Option<i32>,
    /// Bytes of the rendered file, for the render invocation.
    file: Vec<u8>,
}

fn run_matrix(dir: &std::path::Path) -> Result<Vec<Run>, String> {
    let bin = env!("CARGO_BIN_EXE_diophlab");
    cli_matrix(dir)
        .iter()
        .map(|args| {
            let out = Command::new(bin).args(args).env_remove("DIOPHLAB_CONFIG").output().map_err(|e| format!("{args:?}: {e}"))?;
            let file = if args.contains(&"render".to_string()) { std::fs::read(dir.join("orbit.svg")).map_err(|e| e.to_string())? } else { Vec::new() };
            Ok(Run { stdout: out.stdout, code: out.status.code(), file })
        })
        .collect()
}

fn criterion_12() -> Check {
    let t0 = Instant::now();
    let dir = std::env::temp_dir().join(format!("diophlab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let first = run_matrix(&dir)?;
    let second = run_matrix(&dir)?;
    let _ = std::fs::remove_dir_all(&dir);
    let args = cli_matrix(&dir);
    for ((a, b), argv) in first.iter().zip(&second).zip(&args) {
        ensure!(a == b, "output differs between runs for {argv:?}");
        ensure!(!a.stdout.is_empty(), "no output for {argv:?}");
    }
    let codes: Vec<i32> = first.iter().map(|r| r.code.unwrap_or(-1)).collect();
    ensure!(codes[..codes.len() - 2].iter().all(|&c| c == 0), "unexpected exit codes {codes:?}");
    ensure!(codes[codes.len() - 2..] == [2, 3], "error cases exit with {:?}", &codes[codes.len() - 2..]);
    Ok(format!("{} invocations byte-identical across two runs, {:.1?}", args.len(), t0.elapsed()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "golden-mean member and dual", criterion_1),
        (2, "rational theta membership", criterion_2),
        (3, "scaling witnesses", criterion_3),
        (4, "hat element", criterion_4),
        (5, "K-Dirichlet pigeonhole", criterion_5),
        (6, "matrix independence", criterion_6),
        (7, "leaf classification", criterion_7),
        (8, "minimal polynomial recovery", criterion_8),
        (9, "relation ideal", criterion_9),
        (10, "curated rigidity suite", criterion_10),
        (11, "trace, galois and conjugate polynomials", criterion_11),
        (12, "CLI determinism", criterion_12),
    ];
    let mut unexpected = Vec::new();
    for (n, name, f) in criteria {
        let known = KNOWN_FAILURES.contains(&n);
        match f() {
            Ok(detail) => {
                println!("criterion {n}: PASS {name}: {detail}");
                if known {
                    println!("  criterion {n} is listed as a known failure but passed");
                    unexpected.push(n);
                }
            }
            Err(detail) => {
                println!("criterion {n}: FAIL {name}{}: {detail}", if known { " (known)" } else { "" });
                if !known {
                    unexpected.push(n);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected results for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
