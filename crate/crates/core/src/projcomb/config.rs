use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::parse_rational;
use crate::error::{Error, Result};
use crate::linalg::{int_rank, nullspace, Field, Matrix};

/// A point of rational projective space: primitive integer coordinates
/// with positive first nonzero entry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec<i64>,
}

impl ProjPoint {
    pub fn new(coords: &[i64]) -> Result<Self> {
        let v: Vec<BigRational> = coords.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        normalize(&v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Projective dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.coords.iter().map(|&c| BigRational::from_integer(c.into())).collect()
    }

    pub fn dot(&self, other: &[i64]) -> i128 {
        self.coords.iter().zip(other).map(|(&a, &b)| a as i128 * b as i128).sum()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

/// The primitive sign-normalized integer representative of `[v]`.
pub fn normalize(v: &[BigRational]) -> Result<ProjPoint> {
    if v.is_empty() || v.iter().all(|x| x.is_zero()) {
        return Err(Error::Invalid("zero vector has no projective class".into()));
    }
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let lead_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let coords = ints
        .iter()
        .map(|x| {
            let y = x / &g;
            let y = if lead_neg { -y } else { y };
            y.to_i64().ok_or_else(|| Error::Invalid("coordinate exceeds 64 bits after normalization".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjPoint { coords })
}

/// Rank of the coordinate matrix of `pts`; `r` points span a `P^{r-1}`.
pub fn span_rank(pts: &[&ProjPoint]) -> usize {
    let rows: Vec<&[i64]> = pts.iter().map(|p| p.coords.as_slice()).collect();
    int_rank(&rows)
}

pub fn collinear(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> bool {
    span_rank(&[p, q, r]) <= 2
}

/// A finite set of distinct points in `P^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    dim: usize,
    points: Vec<ProjPoint>,
}

impl Configuration {
    pub fn new(dim: usize, points: Vec<ProjPoint>) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::Invalid(format!("point {p} does not lie in P^{dim}")));
            }
            if !seen.insert(p) {
                return Err(Error::Invalid(format!("point {p} listed twice")));
            }
        }
        Ok(Configuration { dim, points })
    }

    pub fn from_ints(dim: usize, pts: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, pts.iter().map(|p| ProjPoint::new(p)).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn rank(&self) -> usize {
        span_rank(&self.points.iter().collect::<Vec<_>>())
    }

    pub fn spans(&self) -> bool {
        self.rank() == self.dim + 1
    }

    pub fn to_json(&self) -> Value {
        json!({ "dim": self.dim, "points": self.points.iter().map(|p| p.coords.clone()).collect::<Vec<_>>() })
    }

    /// `{"dim": d, "points": [[..], ..]}`; coordinates are integers or
    /// `"p/q"` strings.
    pub fn from_json_value(v: &Value) -> Result<Self> {
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("configuration needs an integer \"dim\"".into()))? as usize;
        if dim == 0 || dim > 16 {
            return Err(Error::Invalid(format!("dimension {dim} outside 1..=16")));
        }
        let pts = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("configuration needs a \"points\" array".into()))?;
        let points = pts.iter().map(|p| normalize(&rational_vector(p)?)).collect::<Result<_>>()?;
        Self::new(dim, points)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json_value(&serde_json::from_str(s)?)
    }
}

/// A JSON array of integers or rational strings.
pub fn rational_vector(v: &Value) -> Result<Vec<BigRational>> {
    let arr = v.as_array().ok_or_else(|| Error::Json(format!("expected an array, got {v}")))?;
    arr.iter()
        .map(|x| match x {
            Value::Number(n) => n
                .as_i64()
                .map(|i| BigRational::from_integer(i.into()))
                .ok_or_else(|| Error::Json(format!("non-integer number {n}; use a \"p/q\" string"))),
            Value::String(s) => parse_rational(s),
            other => Err(Error::Json(format!("expected a number, got {other}"))),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SgWitness {
    /// A line meeting the configuration in exactly these two points.
    OrdinaryLine(ProjPoint, ProjPoint),
    /// Every point lies on one line; `rank` is the coordinate rank (at most 2).
    Collinear { rank: usize },
}

impl SgWitness {
    pub fn to_json(&self) -> Value {
        match self {
            SgWitness::OrdinaryLine(p, q) => json!({ "kind": "ordinary_line", "points": [p.coords, q.coords] }),
            SgWitness::Collinear { rank } => json!({ "kind": "collinear", "rank": rank }),
        }
    }
}

/// An ordinary line, or a certificate that the configuration is collinear.
/// Scans pairs in order and returns the first ordinary line.
pub fn sylvester_gallai_witness(cfg: &Configuration) -> Result<SgWitness> {
    let pts = cfg.points();
    if pts.len() < 2 {
        return Err(Error::Precondition("need at least two points".into()));
    }
    let rank = cfg.rank();
    if rank <= 2 {
        return Ok(SgWitness::Collinear { rank });
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let on_line = pts.iter().filter(|r| collinear(&pts[i], &pts[j], r)).count();
            if on_line == 2 {
                return Ok(SgWitness::OrdinaryLine(pts[i].clone(), pts[j].clone()));
            }
        }
    }
    Err(Error::Consistency("non-collinear configuration without an ordinary line".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HansenWitness {
    /// Primitive normal vector of the hyperplane.
    pub normal: ProjPoint,
    /// The configuration points on the hyperplane other than `exceptional`;
    /// they lie in a codimension-2 subspace.
    pub subspace_points: Vec<ProjPoint>,
    pub exceptional: ProjPoint,
}

impl HansenWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "normal": self.normal.coords,
            "exceptional": self.exceptional.coords,
            "subspace_points": self.subspace_points.iter().map(|p| p.coords.clone()).collect::<Vec<_>>(),
        })
    }
}

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if rec(i + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// A hyperplane spanned by configuration points whose points, except
/// exactly one, lie in a codimension-2 subspace. Exhaustive over
/// point-spanned hyperplanes.
pub fn hansen_witness(cfg: &Configuration) -> Result<HansenWitness> {
    let d = cfg.dim();
    if !cfg.spans() {
        return Err(Error::Precondition(format!("configuration does not span P^{d}")));
    }
    let pts = cfg.points();
    let mut seen = HashSet::new();
    let mut found = None;
    for_each_subset(pts.len(), d, &mut |idx| {
        let sub: Vec<&ProjPoint> = idx.iter().map(|&i| &pts[i]).collect();
        if span_rank(&sub) != d {
            return false;
        }
        let m: Matrix = sub.iter().map(|p| p.to_rational()).collect();
        let ns = nullspace(Field::Rational, &m, d + 1);
        let normal = normalize(&ns[0]).expect("nonzero normal");
        if !seen.insert(normal.clone()) {
            return false;
        }
        let on: Vec<&ProjPoint> = pts.iter().filter(|p| p.dot(&normal.coords) == 0).collect();
        for (e, &ex) in on.iter().enumerate() {
            let rest: Vec<&ProjPoint> = on.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, p)| *p).collect();
            if span_rank(&rest) < d {
                found = Some(HansenWitness {
                    normal: normal.clone(),
                    subspace_points: rest.into_iter().cloned().collect(),
                    exceptional: ex.clone(),
                });
                return true;
            }
        }
        false
    });
    found.ok_or_else(|| Error::Consistency("spanning configuration without a Hansen hyperplane".into()))
}

/// A line violating one of the two incidence conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineViolation {
    /// 1 for the two-point condition, 2 for the mixed condition.
    pub condition: u8,
    pub through: (ProjPoint, ProjPoint),
}

impl LineViolation {
    pub fn to_json(&self) -> Value {
        json!({ "condition": self.condition, "through": [self.through.0.coords, self.through.1.coords] })
    }
}

fn check_disjoint(omega: &Configuration, n: &Configuration) -> Result<()> {
    if omega.dim() != n.dim() {
        return Err(Error::Precondition("configurations live in different dimensions".into()));
    }
    let set: HashSet<&ProjPoint> = omega.points().iter().collect();
    if let Some(p) = n.points().iter().find(|p| set.contains(p)) {
        return Err(Error::Precondition(format!("point {p} lies in both sets")));
    }
    Ok(())
}

fn mixed_condition(omega: &Configuration, n: &Configuration) -> Option<LineViolation> {
    for w in omega.points() {
        for v in n.points() {
            if !omega.points().iter().any(|w2| w2 != w && collinear(w, v, w2)) {
                return Some(LineViolation { condition: 2, through: (w.clone(), v.clone()) });
            }
        }
    }
    None
}

/// `None` when (i) every line through two points of `omega` contains a
/// point of `n` and (ii) every line through a point of `omega` and a point
/// of `n` contains a second point of `omega`; otherwise the first
/// violating line.
pub fn s2comb_check(omega: &Configuration, n: &Configuration) -> Result<Option<LineViolation>> {
    check_disjoint(omega, n)?;
    let w = omega.points();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if !n.points().iter().any(|v| collinear(&w[i], &w[j], v)) {
                return Ok(Some(LineViolation { condition: 1, through: (w[i].clone(), w[j].clone()) }));
            }
        }
    }
    Ok(mixed_condition(omega, n))
}

/// Like [`s2comb_check`], but the two-point condition only asks for a third
/// point of `omega ∪ n` on the line.
pub fn extended_sg_check(omega: &Configuration, n: &Configuration) -> Result<Option<LineViolation>> {
    check_disjoint(omega, n)?;
    let w = omega.points();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let third = w.iter().enumerate().any(|(k, x)| k != i && k != j && collinear(&w[i], &w[j], x))
                || n.points().iter().any(|v| collinear(&w[i], &w[j], v));
            if !third {
                return Ok(Some(LineViolation { condition: 1, through: (w[i].clone(), w[j].clone()) }));
            }
        }
    }
    Ok(mixed_condition(omega, n))
}
