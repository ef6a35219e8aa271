//! Totally real number fields given by an integral basis, a multiplication
//! table and real embeddings; O-approximation sequences, the K-Dirichlet
//! pigeonhole construction, traces, Galois actions and conjugate products.

mod clear;
mod dirichlet;
mod oseq;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{parse_oracle, PrecisionReal, RealOracle};
use crate::serial;

pub use clear::{clear_denominator, ClearedDenominator};
pub use dirichlet::{k_dirichlet, krational_test, KDirichlet, KRationalVerdict};
pub use oseq::{conjugate_poly, galois_apply, o_membership, trace_push, ConjugatePoly, GaloisImage, OApproxSequence, OMembership, PlaceProfile};

/// An element of `K` by its coordinates in the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    pub coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn new(coords: Vec<BigRational>) -> Self {
        FieldElement { coords }
    }

    pub fn from_ints(coords: &[BigInt]) -> Self {
        FieldElement { coords: coords.iter().map(|c| BigRational::from_integer(c.clone())).collect() }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        FieldElement { coords: coords.iter().map(|&c| BigRational::from_integer(c.into())).collect() }
    }

    pub fn zero(d: usize) -> Self {
        FieldElement { coords: vec![BigRational::zero(); d] }
    }

    /// The rational `q` as an element (`q * alpha_1`, with `alpha_1 = 1`).
    pub fn rational(d: usize, q: BigRational) -> Self {
        let mut e = Self::zero(d);
        e.coords[0] = q;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Whether every coordinate is an integer, i.e. the element lies in `O`.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn int_coords(&self) -> Option<Vec<BigInt>> {
        self.coords.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        FieldElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        FieldElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> FieldElement {
        FieldElement { coords: self.coords.iter().map(|a| a * c).collect() }
    }

    /// Squared `A`-norm: the sum of squared coordinates.
    pub fn norm_a_squared(&self) -> BigRational {
        self.coords.iter().map(|c| c * c).sum()
    }

    /// `>_A 0`: every coordinate positive.
    pub fn is_positive_a(&self) -> bool {
        self.coords.iter().all(|c| c.is_positive())
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serial::rational_vec(&self.coords, s)
    }
}

/// A totally real number field.
#[derive(Clone, Debug)]
pub struct NumberField {
    name: String,
    basis_names: Vec<String>,
    /// `mult[i][j]` holds the coordinates of `alpha_i alpha_j`.
    mult: Vec<Vec<Vec<BigRational>>>,
    /// `embeddings[nu][j] = nu(alpha_j)`.
    embeddings: Vec<Vec<RealOracle>>,
    /// Known automorphisms as images of the basis elements.
    automorphisms: Vec<Vec<FieldElement>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TomlNumber {
    Int(i64),
    Text(String),
}

impl TomlNumber {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            TomlNumber::Int(i) => Ok(BigRational::from_integer((*i).into())),
            TomlNumber::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    name: Option<String>,
    degree: usize,
    basis: Vec<String>,
    multiplication: Vec<Vec<Vec<TomlNumber>>>,
    embeddings: Vec<Vec<String>>,
    #[serde(default)]
    automorphisms: Vec<Vec<Vec<TomlNumber>>>,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let r = match t.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
            let b: BigInt = b.trim().parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
            if b.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            BigRational::new(a, b)
        }
        None => BigRational::from_integer(t.parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?),
    };
    Ok(r)
}

fn ints(xs: &[i64]) -> Vec<BigRational> {
    xs.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

impl NumberField {
    /// Builds a field and checks the table (unit, commutativity,
    /// associativity), the embeddings (certified consistency with the table,
    /// nonzero determinant) and any automorphisms.
    pub fn new(
        name: String,
        basis_names: Vec<String>,
        mult: Vec<Vec<Vec<BigRational>>>,
        embeddings: Vec<Vec<RealOracle>>,
        automorphisms: Vec<Vec<FieldElement>>,
    ) -> Result<Self> {
        let d = basis_names.len();
        let bad = |m: &str| Err(Error::InvalidInput(format!("field {name}: {m}")));
        if d == 0 {
            return bad("empty basis");
        }
        if mult.len() != d || mult.iter().any(|r| r.len() != d || r.iter().any(|c| c.len() != d)) {
            return bad("multiplication table must be d x d x d");
        }
        if embeddings.len() != d || embeddings.iter().any(|r| r.len() != d) {
            return bad("embedding matrix must be d x d (one row per real place)");
        }
        let field = NumberField { name: name.clone(), basis_names, mult, embeddings, automorphisms: Vec::new() };
        let one = field.one();
        for j in 0..d {
            let e = field.basis(j);
            if field.mul(&one, &e) != e {
                return bad("first basis element must be 1");
            }
            for i in 0..d {
                if field.mult[i][j] != field.mult[j][i] {
                    return bad("multiplication table is not commutative");
                }
                for k in 0..d {
                    let (a, b, c) = (field.basis(i), field.basis(j), field.basis(k));
                    if field.mul(&field.mul(&a, &b), &c) != field.mul(&a, &field.mul(&b, &c)) {
                        return bad("multiplication table is not associative");
                    }
                }
            }
        }
        for (nu, row) in field.embeddings.iter().enumerate() {
            let v = row.iter().map(|x| x.eval(96)).collect::<Result<Vec<_>>>()?;
            if !v[0].contains(&crate::numeric::Dyadic::one()) {
                return bad("embedding of the first basis element must be 1");
            }
            for i in 0..d {
                for j in 0..d {
                    let lhs = v[i].mul(&v[j]);
                    let rhs = field.mult[i][j].iter().zip(&v).fold(PrecisionReal::zero(), |acc, (c, x)| acc.add(&x.mul_rational(c, 96)));
                    if lhs.intersect(&rhs.inflate(&crate::numeric::Dyadic::pow2(-60))).is_none() {
                        return bad(&format!("place {nu} is not a ring homomorphism on basis elements {i}, {j}"));
                    }
                }
            }
        }
        if field.embedding_determinant(128)?.contains_zero() {
            return bad("embedding matrix is singular");
        }
        let mut field = field;
        for sigma in automorphisms {
            field.check_automorphism(&sigma)?;
            field.automorphisms.push(sigma);
        }
        Ok(field)
    }

    /// Resolves a built-in name: `Q`, `Q(sqrt D)` for square-free `D > 1`, or `maxreal7`.
    pub fn builtin(name: &str) -> Result<Self> {
        let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "Q" {
            return Self::new("Q".into(), vec!["1".into()], vec![vec![ints(&[1])]], vec![vec![RealOracle::int(1)]], vec![]);
        }
        if compact == "maxreal7" {
            return Self::maxreal7();
        }
        let inner = compact
            .strip_prefix("Q(sqrt")
            .or_else(|| compact.strip_prefix("Q(\u{221a}"))
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("unknown field '{name}'")))?;
        let inner = inner.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(inner);
        let d: i64 = inner.parse().map_err(|_| Error::Parse(format!("unknown field '{name}'")))?;
        Self::quadratic(d)
    }

    /// `Q(sqrt D)` with basis `{1, w}`: `w = (1 + sqrt D)/2` when `D = 1 mod 4`, else `w = sqrt D`.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d <= 1 || (2..).take_while(|k: &i64| k * k <= d).any(|k| d % (k * k) == 0) {
            return Err(Error::InvalidInput(format!("Q(sqrt {d}) needs a square-free D > 1")));
        }
        let name = format!("Q(sqrt {d})");
        let root = RealOracle::sqrt(d);
        if d.rem_euclid(4) == 1 {
            let half = BigRational::new(1.into(), 2.into());
            let w1 = RealOracle::int(1).add(&root).mul_rational(&half);
            let w2 = RealOracle::int(1).sub(&root).mul_rational(&half);
            let mult = vec![vec![ints(&[1, 0]), ints(&[0, 1])], vec![ints(&[0, 1]), ints(&[(d - 1) / 4, 1])]];
            let sigma = vec![FieldElement::from_i64s(&[1, 0]), FieldElement::from_i64s(&[1, -1])];
            Self::new(name, vec!["1".into(), "w".into()], mult, vec![vec![RealOracle::int(1), w1], vec![RealOracle::int(1), w2]], vec![sigma])
        } else {
            let mult = vec![vec![ints(&[1, 0]), ints(&[0, 1])], vec![ints(&[0, 1]), ints(&[d, 0])]];
            let sigma = vec![FieldElement::from_i64s(&[1, 0]), FieldElement::from_i64s(&[0, -1])];
            Self::new(name, vec!["1".into(), "w".into()], mult, vec![vec![RealOracle::int(1), root.clone()], vec![RealOracle::int(1), root.neg()]], vec![sigma])
        }
    }

    /// The cubic field `Q(2 cos(2 pi / 7))` with basis `{1, c, c^2}` and `c^3 = 1 + 2c - c^2`.
    pub fn maxreal7() -> Result<Self> {
        let poly: Vec<BigInt> = [-1, -2, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
        let r = |lo: (i64, i64), hi: (i64, i64)| {
            RealOracle::algebraic(&poly, BigRational::new(lo.0.into(), lo.1.into()), BigRational::new(hi.0.into(), hi.1.into()))
        };
        // the conjugates 2cos(2k pi/7); squaring doubles the angle, so c_k^2 = 2 + c_(2k)
        let c = [r((6, 5), (13, 10))?, r((-1, 2), (-2, 5))?, r((-19, 10), (-9, 5))?];
        let two = RealOracle::int(2);
        let emb = vec![
            vec![RealOracle::int(1), c[0].clone(), two.add(&c[1])],
            vec![RealOracle::int(1), c[1].clone(), two.add(&c[2])],
            vec![RealOracle::int(1), c[2].clone(), two.add(&c[0])],
        ];
        let mult = vec![
            vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])],
            vec![ints(&[0, 1, 0]), ints(&[0, 0, 1]), ints(&[1, 2, -1])],
            vec![ints(&[0, 0, 1]), ints(&[1, 2, -1]), ints(&[-1, -1, 3])],
        ];
        // c -> c^2 - 2 generates the Galois group
        let sigma = vec![FieldElement::from_i64s(&[1, 0, 0]), FieldElement::from_i64s(&[-2, 0, 1]), FieldElement::from_i64s(&[3, -1, -1])];
        Self::new("maxreal7".into(), vec!["1".into(), "c".into(), "c2".into()], mult, emb, vec![sigma])
    }

    /// Parses a TOML field definition.
    pub fn from_toml(text: &str) -> Result<Self> {
        let f: FieldFile = toml::from_str(text).map_err(|e| Error::Parse(format!("field file: {e}")))?;
        if f.basis.len() != f.degree {
            return Err(Error::InvalidInput(format!("field file: {} basis names for degree {}", f.basis.len(), f.degree)));
        }
        let conv =
            |grid: &Vec<Vec<TomlNumber>>| -> Result<Vec<Vec<BigRational>>> { grid.iter().map(|r| r.iter().map(TomlNumber::to_rational).collect()).collect() };
        let mult = f.multiplication.iter().map(conv).collect::<Result<Vec<_>>>()?;
        let emb = f.embeddings.iter().map(|r| r.iter().map(|s| parse_oracle(s)).collect()).collect::<Result<Vec<_>>>()?;
        let autos = f.automorphisms.iter().map(|a| Ok(conv(a)?.into_iter().map(FieldElement::new).collect())).collect::<Result<Vec<Vec<FieldElement>>>>()?;
        let name = f.name.unwrap_or_else(|| format!("field of degree {}", f.degree));
        Self::new(name, f.basis, mult, emb, autos)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn embedding_matrix(&self) -> &[Vec<RealOracle>] {
        &self.embeddings
    }

    pub fn automorphisms(&self) -> &[Vec<FieldElement>] {
        &self.automorphisms
    }

    pub fn basis(&self, j: usize) -> FieldElement {
        let mut e = FieldElement::zero(self.degree());
        e.coords[j] = BigRational::one();
        e
    }

    pub fn one(&self) -> FieldElement {
        self.basis(0)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.degree();
        let mut out = vec![BigRational::zero(); d];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        FieldElement { coords: out }
    }

    /// Matrix of multiplication by `a`: column `j` holds the coordinates of `a alpha_j`.
    pub fn mult_matrix(&self, a: &FieldElement) -> Vec<Vec<BigRational>> {
        let d = self.degree();
        let cols: Vec<FieldElement> = (0..d).map(|j| self.mul(a, &self.basis(j))).collect();
        (0..d).map(|k| (0..d).map(|j| cols[j].coords[k].clone()).collect()).collect()
    }

    /// Exact trace `sum_nu nu(a)`.
    pub fn trace(&self, a: &FieldElement) -> BigRational {
        let m = self.mult_matrix(a);
        (0..self.degree()).map(|i| m[i][i].clone()).sum()
    }

    /// Exact norm `prod_nu nu(a)`.
    pub fn norm(&self, a: &FieldElement) -> BigRational {
        rational_det(self.mult_matrix(a))
    }

    /// Enclosure of `nu(a)`.
    pub fn embed_at(&self, a: &FieldElement, nu: usize, prec: u32) -> Result<PrecisionReal> {
        let extra = a.coords.iter().map(|c| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0) as u32 + 8;
        let mut acc = PrecisionReal::zero();
        for (c, x) in a.coords.iter().zip(&self.embeddings[nu]) {
            if !c.is_zero() {
                acc = acc.add(&x.eval(prec + extra)?.mul_rational(c, prec + extra));
            }
        }
        Ok(acc)
    }

    /// The Minkowski vector `(nu(a))_nu`.
    pub fn embed(&self, a: &FieldElement, prec: u32) -> Result<Vec<PrecisionReal>> {
        (0..self.degree()).map(|nu| self.embed_at(a, nu, prec)).collect()
    }

    fn embedding_determinant(&self, prec: u32) -> Result<PrecisionReal> {
        let m = self.embeddings.iter().map(|r| r.iter().map(|x| x.eval(prec)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Ok(interval_det(&m))
    }

    /// Checks that the images of the basis define a ring automorphism.
    pub fn check_automorphism(&self, sigma: &[FieldElement]) -> Result<()> {
        let d = self.degree();
        if sigma.len() != d || sigma.iter().any(|e| e.coords.len() != d) {
            return Err(Error::NotAutomorphism(format!("expected {d} images of {d} coordinates")));
        }
        if sigma[0] != self.one() {
            return Err(Error::NotAutomorphism("1 must map to 1".into()));
        }
        if sigma.iter().any(|e| !e.is_integral()) {
            return Err(Error::NotAutomorphism("images must lie in O".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = self.apply_map(sigma, &self.basis_product(i, j));
                let rhs = self.mul(&sigma[i], &sigma[j]);
                if lhs != rhs {
                    return Err(Error::NotAutomorphism(format!("fails on basis product {i} * {j}")));
                }
            }
        }
        let m: Vec<Vec<BigRational>> = (0..d).map(|k| (0..d).map(|j| sigma[j].coords[k].clone()).collect()).collect();
        if rational_det(m).is_zero() {
            return Err(Error::NotAutomorphism("map is not invertible".into()));
        }
        Ok(())
    }

    fn basis_product(&self, i: usize, j: usize) -> FieldElement {
        FieldElement { coords: self.mult[i][j].clone() }
    }

    /// Applies the linear map sending `alpha_j` to `sigma[j]`.
    pub fn apply_map(&self, sigma: &[FieldElement], a: &FieldElement) -> FieldElement {
        let mut out = FieldElement::zero(self.degree());
        for (c, img) in a.coords.iter().zip(sigma) {
            out = out.add(&img.scale(c));
        }
        out
    }

    /// Parses `3+3w`, `1/2 - c2`, or a JSON coordinate list such as `[3, 3]`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let t = text.trim();
        let d = self.degree();
        if t.starts_with('[') {
            let v: Vec<serde_json::Value> = serde_json::from_str(t).map_err(|e| Error::Parse(format!("element: {e}")))?;
            if v.len() != d {
                return Err(Error::DimensionMismatch(format!("element has {} coordinates, field degree is {d}", v.len())));
            }
            let coords = v
                .iter()
                .map(|x| match x {
                    serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                    serde_json::Value::String(s) => parse_rational(s),
                    _ => Err(Error::Parse("element coordinates must be numbers or rational strings".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(FieldElement::new(coords));
        }
        let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let mut names: Vec<(usize, &String)> = self.basis_names.iter().enumerate().skip(1).collect();
        names.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));
        let mut coords = vec![BigRational::zero(); d];
        let mut terms: Vec<String> = Vec::new();
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with(['*', '/']) {
                terms.push(String::new());
            }
            if terms.is_empty() {
                terms.push(String::new());
            }
            terms.last_mut().unwrap().push(ch);
        }
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (idx, coef) = match names.iter().find(|(_, n)| body.ends_with(n.as_str())) {
                Some((j, n)) => {
                    let c = body[..body.len() - n.len()].trim_end_matches('*');
                    (*j, if c.is_empty() { BigRational::one() } else { parse_rational(c)? })
                }
                None => (0, parse_rational(body).map_err(|_| Error::Parse(format!("cannot read term '{term}' with basis {:?}", self.basis_names)))?),
            };
            coords[idx] += if neg { -coef } else { coef };
        }
        Ok(FieldElement::new(coords))
    }

    /// Renders an element with the basis names.
    pub fn format_element(&self, a: &FieldElement) -> String {
        let mut out = String::new();
        for (j, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let body = if j == 0 {
                mag.to_string()
            } else if mag.is_one() {
                self.basis_names[j].clone()
            } else {
                format!("{mag}*{}", self.basis_names[j])
            };
            out.push_str(sign);
            out.push_str(&body);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl Serialize for NumberField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            name: &'a str,
            degree: usize,
            basis: &'a [String],
            embeddings: Vec<Vec<String>>,
        }
        View {
            name: &self.name,
            degree: self.degree(),
            basis: &self.basis_names,
            embeddings: self.embeddings.iter().map(|r| r.iter().map(|x| x.literal().to_string()).collect()).collect(),
        }
        .serialize(s)
    }
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub(crate) fn rational_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else { return BigRational::zero() };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= &m[k][k];
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            if f.is_zero() {
                continue;
            }
            let (top, bottom) = m.split_at_mut(i);
            for (x, y) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Determinant of a small interval matrix by cofactor expansion.
fn interval_det(m: &[Vec<PrecisionReal>]) -> PrecisionReal {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = PrecisionReal::zero();
    for j in 0..n {
        let minor: Vec<Vec<PrecisionReal>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = m[0][j].mul(&interval_det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in ["Q", "Q(sqrt 2)", "Q(sqrt(3))", "Q(sqrt 5)", "maxreal7"] {
            let k = NumberField::builtin(name).unwrap();
            assert!(!k.automorphisms().is_empty() || k.degree() == 1);
        }
        assert!(NumberField::builtin("Q(sqrt 8)").is_err());
        assert!(NumberField::builtin("Q(i)").is_err());
    }

    #[test]
    fn embeddings_of_sqrt_two() {
        let k = NumberField::builtin("Q(sqrt 2)").unwrap();
        let one = k.embed(&k.one(), 64).unwrap();
        assert!(one.iter().all(|x| (x.mid_f64() - 1.0).abs() < 1e-15));
        let w = k.embed(&k.basis(1), 64).unwrap();
        assert!((w[0].mid_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((w[1].mid_f64() + std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn cubic_arithmetic() {
        let k = NumberField::maxreal7().unwrap();
        let c = k.basis(1);
        // c^3 + c^2 - 2c - 1 = 0
        let c2 = k.mul(&c, &c);
        let c3 = k.mul(&c2, &c);
        let zero = c3.add(&c2).sub(&c.scale(&BigRational::from_integer(2.into()))).sub(&k.one());
        assert!(zero.is_zero());
        assert_eq!(k.trace(&c), BigRational::from_integer((-1).into()));
        assert_eq!(k.norm(&c), BigRational::one());
    }

    #[test]
    fn element_parsing() {
        let k = NumberField::builtin("Q(sqrt 2)").unwrap();
        assert_eq!(k.parse_element("3+3w").unwrap(), FieldElement::from_i64s(&[3, 3]));
        assert_eq!(k.parse_element("-w + 1/2").unwrap().coords[0], BigRational::new(1.into(), 2.into()));
        assert_eq!(k.parse_element("[1, -2]").unwrap(), FieldElement::from_i64s(&[1, -2]));
        assert_eq!(k.format_element(&FieldElement::from_i64s(&[3, -1])), "3-w");
        let m = NumberField::maxreal7().unwrap();
        assert_eq!(m.parse_element("2c2-c+1").unwrap(), FieldElement::from_i64s(&[1, -1, 2]));
    }

    #[test]
    fn toml_field_and_rejections() {
        let text = r#"
name = "Q(sqrt 3) by hand"
degree = 2
basis = ["1", "r"]
multiplication = [[[1, 0], [0, 1]], [[0, 1], [3, 0]]]
embeddings = [["1", "sqrt(3)"], ["1", "-sqrt(3)"]]
automorphisms = [[[1, 0], [0, -1]]]
"#;
        let k = NumberField::from_toml(text).unwrap();
        assert_eq!(k.degree(), 2);
        let bad = text.replace("[3, 0]", "[2, 0]");
        assert!(NumberField::from_toml(&bad).is_err());
        let bad_sigma = text.replace("[[[1, 0], [0, -1]]]", "[[[1, 0], [1, 1]]]");
        assert!(matches!(NumberField::from_toml(&bad_sigma), Err(Error::NotAutomorphism(_))));
    }

    #[test]
    fn automorphisms_are_valid() {
        for name in ["Q(sqrt 2)", "Q(sqrt 5)", "maxreal7"] {
            let k = NumberField::builtin(name).unwrap();
            for s in k.automorphisms() {
                k.check_automorphism(s).unwrap();
            }
        }
    }
}
