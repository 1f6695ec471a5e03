use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::config::{normalize, rational_vector, ProjPoint};
use crate::arith::format_rational;
use crate::error::{Error, Result};
use crate::linalg::{inverse, mat_vec, nullspace, rank, rref, solve, transpose, Field, Matrix};

pub type Vector = Vec<BigRational>;

const Q: Field = Field::Rational;

/// Three weight multisets in `Q^d`, the edge labels of a triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    dim: usize,
    sets: [Vec<Vector>; 3],
}

impl Triangle {
    /// Sizes may differ here; equal sizes are part of the axiom check.
    pub fn new(a: Vec<Vector>, b: Vec<Vector>, c: Vec<Vector>) -> Result<Self> {
        let dim = a.first().map(Vec::len).ok_or_else(|| Error::Invalid("weight set A is empty".into()))?;
        if dim < 2 {
            return Err(Error::Invalid("weights need at least two coordinates".into()));
        }
        for (name, set) in ["A", "B", "C"].iter().zip([&a, &b, &c]) {
            if set.is_empty() {
                return Err(Error::Invalid(format!("weight set {name} is empty")));
            }
            for w in set {
                if w.len() != dim {
                    return Err(Error::Invalid(format!("weight in {name} has {} coordinates, expected {dim}", w.len())));
                }
                if w.iter().all(Zero::is_zero) {
                    return Err(Error::Invalid(format!("zero weight in {name}")));
                }
            }
        }
        Ok(Triangle { dim, sets: [a, b, c] })
    }

    pub fn from_ints(a: &[&[i64]], b: &[&[i64]], c: &[&[i64]]) -> Result<Self> {
        let conv = |s: &[&[i64]]| -> Vec<Vector> {
            s.iter().map(|w| w.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()
        };
        Self::new(conv(a), conv(b), conv(c))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sets(&self) -> &[Vec<Vector>; 3] {
        &self.sets
    }

    pub fn to_json(&self) -> Value {
        let enc = |s: &Vec<Vector>| -> Value { json!(s.iter().map(|w| vec_json(w)).collect::<Vec<_>>()) };
        json!({ "A": enc(&self.sets[0]), "B": enc(&self.sets[1]), "C": enc(&self.sets[2]) })
    }

    /// `{"A": [[..]], "B": [[..]], "C": [[..]]}` with integer or `"p/q"` entries.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s)?;
        let get = |k: &str| -> Result<Vec<Vector>> {
            v.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Json(format!("triangle needs an array \"{k}\"")))?
                .iter()
                .map(rational_vector)
                .collect()
        };
        Self::new(get("A")?, get("B")?, get("C")?)
    }

    /// Applies `m` to every weight.
    pub fn transform(&self, m: &Matrix) -> Triangle {
        let sets = self.sets.clone().map(|s| s.iter().map(|w| mat_vec(Q, m, w)).collect());
        Triangle { dim: m.len(), sets }
    }

    /// Multiplies each weight by its own nonzero scalar, given per set in
    /// input order.
    pub fn rescale(&self, scalars: &[Vec<BigRational>; 3]) -> Result<Triangle> {
        for (set, s) in self.sets.iter().zip(scalars) {
            if set.len() != s.len() || s.iter().any(Zero::is_zero) {
                return Err(Error::Invalid("one nonzero scalar per weight required".into()));
            }
        }
        let sets = std::array::from_fn(|k| self.sets[k].iter().zip(&scalars[k]).map(|(w, x)| scale(x, w)).collect());
        Ok(Triangle { dim: self.dim, sets })
    }
}

fn vec_json(v: &[BigRational]) -> Value {
    let enc = |x: &BigRational| match x.to_integer().to_i64() {
        Some(i) if x.is_integer() => json!(i),
        _ => json!(format_rational(x)),
    };
    json!(v.iter().map(enc).collect::<Vec<_>>())
}

fn rat_json(v: &[BigRational]) -> Value {
    json!(v.iter().map(format_rational).collect::<Vec<_>>())
}

fn span_rank(vs: &[&Vector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    rank(Q, &vs.iter().map(|v| (*v).clone()).collect())
}

fn in_span(v: &Vector, basis: &[&Vector]) -> bool {
    let mut all: Vec<&Vector> = basis.to_vec();
    all.push(v);
    span_rank(&all) == span_rank(basis)
}

fn parallel(u: &Vector, v: &Vector) -> bool {
    span_rank(&[u, v]) == 1
}

/// Rows spanning the same space as `vs`, in echelon form.
fn span_basis(vs: &[Vector]) -> Matrix {
    let mut m: Matrix = vs.to_vec();
    let piv = rref(Q, &mut m);
    m.truncate(piv.len());
    m
}

fn intersection(a: &Matrix, b: &Matrix, d: usize) -> Matrix {
    // columns a_1..a_r, -b_1..-b_s; a null vector (x, y) gives sum x_i a_i
    let mut cols: Vec<Vector> = a.clone();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x).collect()));
    let m = transpose(&cols, d);
    let ns = nullspace(Q, &m, cols.len());
    let vs: Vec<Vector> = ns
        .iter()
        .map(|x| (0..d).map(|k| a.iter().zip(x).fold(BigRational::zero(), |acc, (ai, xi)| acc + &ai[k] * xi)).collect())
        .collect();
    span_basis(&vs)
}

fn add(u: &Vector, v: &Vector) -> Vector {
    u.iter().zip(v).map(|(x, y)| x + y).collect()
}

fn sub(u: &Vector, v: &Vector) -> Vector {
    u.iter().zip(v).map(|(x, y)| x - y).collect()
}

fn scale(s: &BigRational, v: &Vector) -> Vector {
    v.iter().map(|x| s * x).collect()
}

fn is_zero(v: &Vector) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Sizes agree, and for every plane `V` spanned by weights from two
/// different sets, `A`, `B` and `C` meet `V` in the same number of weights
/// (with multiplicity), at most two.
pub fn triangle_axioms_check(t: &Triangle) -> std::result::Result<(), String> {
    let [a, b, c] = &t.sets;
    if a.len() != b.len() || b.len() != c.len() {
        return Err(format!("set sizes differ: {}, {}, {}", a.len(), b.len(), c.len()));
    }
    for (x_set, y_set) in [(0, 1), (0, 2), (1, 2)] {
        for x in &t.sets[x_set] {
            for y in &t.sets[y_set] {
                if parallel(x, y) {
                    continue;
                }
                let counts: Vec<usize> = t.sets.iter().map(|s| s.iter().filter(|w| in_span(w, &[x, y])).count()).collect();
                if counts[0] != counts[1] || counts[1] != counts[2] {
                    return Err(format!("plane through {} and {} meets the sets in {:?} weights", show(x), show(y), counts));
                }
                if counts[0] > 2 {
                    return Err(format!("plane through {} and {} meets each set in {} > 2 weights", show(x), show(y), counts[0]));
                }
            }
        }
    }
    Ok(())
}

fn show(v: &Vector) -> String {
    format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(","))
}

type Poly = BTreeMap<Vec<u32>, BigRational>;

fn product(ws: &[Vector], d: usize) -> Poly {
    let mut p: Poly = BTreeMap::from([(vec![0; d], BigRational::one())]);
    for w in ws {
        let mut next = Poly::new();
        for (mono, coef) in &p {
            for (k, x) in w.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let mut m = mono.clone();
                m[k] += 1;
                *next.entry(m).or_insert_with(BigRational::zero) += coef * x;
            }
        }
        next.retain(|_, v| !v.is_zero());
        p = next;
    }
    p
}

/// Whether the three products of the weight sets are linearly dependent as
/// polynomials in `d` variables.
pub fn lindep_products_check(t: &Triangle) -> bool {
    let polys: Vec<Poly> = t.sets.iter().map(|s| product(s, t.dim)).collect();
    let monos: Vec<&Vec<u32>> = polys.iter().flat_map(|p| p.keys()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let m: Matrix = polys
        .iter()
        .map(|p| monos.iter().map(|k| p.get(*k).cloned().unwrap_or_else(BigRational::zero)).collect())
        .collect();
    monos.is_empty() || rank(Q, &m) <= 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TriangleKind {
    /// `({a}, {b}, {a+b})`
    Type1 { a: Vector, b: Vector },
    /// `({a, a+c}, {b, b+c}, {a-b, a+b+c})`, `c` zero or independent of `a, b`.
    Type2 { a: Vector, b: Vector, c: Vector },
    NotTransversal,
    AxiomViolation { reason: String },
}

impl TriangleKind {
    pub fn name(&self) -> &'static str {
        match self {
            TriangleKind::Type1 { .. } => "type1",
            TriangleKind::Type2 { .. } => "type2",
            TriangleKind::NotTransversal => "not_transversal",
            TriangleKind::AxiomViolation { .. } => "axiom_violation",
        }
    }
}

/// The normal form, as weights in the coordinates of the new basis.
pub fn normal_form(kind: &TriangleKind, dim: usize) -> Option<[Vec<Vector>; 3]> {
    let e = |k: usize| -> Vector { (0..dim).map(|j| if j == k { BigRational::one() } else { BigRational::zero() }).collect() };
    match kind {
        TriangleKind::Type1 { .. } => Some([vec![e(0)], vec![e(1)], vec![add(&e(0), &e(1))]]),
        TriangleKind::Type2 { c, .. } => {
            let c = if is_zero(c) { vec![BigRational::zero(); dim] } else { e(2) };
            Some([
                vec![e(0), add(&e(0), &c)],
                vec![e(1), add(&e(1), &c)],
                vec![sub(&e(0), &e(1)), add(&add(&e(0), &e(1)), &c)],
            ])
        }
        _ => None,
    }
}

/// The normal form of `kind` as a triangle in `Q^dim`.
pub fn normal_form_triangle(kind: &TriangleKind, dim: usize) -> Option<Triangle> {
    let [a, b, c] = normal_form(kind, dim)?;
    Triangle::new(a, b, c).ok()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleClassification {
    pub kind: TriangleKind,
    /// `M` with `s_w M w` equal to a normal-form weight for every input
    /// weight `w`.
    pub basis_change: Option<Matrix>,
    /// `s_w`, in input order per set.
    pub scalars: Option<[Vec<BigRational>; 3]>,
}

impl TriangleClassification {
    fn violation(reason: impl Into<String>) -> Self {
        TriangleClassification { kind: TriangleKind::AxiomViolation { reason: reason.into() }, basis_change: None, scalars: None }
    }

    pub fn m_bound_holds(&self) -> bool {
        match &self.kind {
            TriangleKind::Type1 { .. } => true,
            TriangleKind::Type2 { .. } => true,
            _ => false,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = serde_json::Map::new();
        out.insert("kind".into(), json!(self.kind.name()));
        match &self.kind {
            TriangleKind::Type1 { a, b } => {
                out.insert("a".into(), rat_json(a));
                out.insert("b".into(), rat_json(b));
            }
            TriangleKind::Type2 { a, b, c } => {
                out.insert("a".into(), rat_json(a));
                out.insert("b".into(), rat_json(b));
                out.insert("c".into(), rat_json(c));
            }
            TriangleKind::AxiomViolation { reason } => {
                out.insert("reason".into(), json!(reason));
            }
            TriangleKind::NotTransversal => {}
        }
        if let Some(m) = &self.basis_change {
            out.insert("basis_change".into(), json!(m.iter().map(|r| rat_json(r)).collect::<Vec<_>>()));
        }
        if let Some(s) = &self.scalars {
            out.insert("scalars".into(), json!({ "A": rat_json(&s[0]), "B": rat_json(&s[1]), "C": rat_json(&s[2]) }));
        }
        Value::Object(out)
    }
}

impl fmt::Display for TriangleClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TriangleKind::Type1 { a, b } => write!(f, "type 1: a = {}, b = {}", show(a), show(b)),
            TriangleKind::Type2 { a, b, c } => write!(f, "type 2: a = {}, b = {}, c = {}", show(a), show(b), show(c)),
            TriangleKind::NotTransversal => write!(f, "not transversal: one span contains the other"),
            TriangleKind::AxiomViolation { reason } => write!(f, "axiom violation: {reason}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Also require the products of the three sets to be linearly dependent.
    pub lindep: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { lindep: true }
    }
}

fn direction(v: &Vector) -> ProjPoint {
    normalize(v).expect("nonzero weight")
}

/// Input indices of `set` sorted by projective class, for deterministic
/// choices.
fn ordered(set: &[Vector]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..set.len()).collect();
    idx.sort_by_key(|&i| direction(&set[i]));
    idx
}

/// Reduces a triangle to one of the two normal forms following the
/// constructive argument: split `<A ∪ B ∪ C> = <a> ⊕ <b> ⊕ (<A> ∩ <B>)`,
/// rescale so that the `a`- and `b`-coordinates are one, and read off the
/// residues in `<A> ∩ <B>`.
pub fn triangle_classify(t: &Triangle, opts: ClassifyOptions) -> TriangleClassification {
    if let Err(reason) = triangle_axioms_check(t) {
        return TriangleClassification::violation(reason);
    }
    let [sa, sb, sc] = &t.sets;
    let d = t.dim;
    let ba = span_basis(sa);
    let bb = span_basis(sb);
    let outside = |set: &[Vector], basis: &[Vector]| -> Option<usize> {
        let b: Vec<&Vector> = basis.iter().collect();
        ordered(set).into_iter().find(|&i| !in_span(&set[i], &b))
    };
    let (Some(ia), Some(ib)) = (outside(sa, &bb), outside(sb, &ba)) else {
        return TriangleClassification { kind: TriangleKind::NotTransversal, basis_change: None, scalars: None };
    };
    if opts.lindep && !lindep_products_check(t) {
        return TriangleClassification::violation("the products of the three weight sets are linearly independent");
    }
    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        for u in &t.sets[x] {
            if t.sets[y].iter().any(|v| parallel(u, v)) {
                return TriangleClassification::violation(format!("weight {} is shared by two sets of a transversal triangle", show(u)));
            }
        }
    }
    let a = sa[ia].clone();
    let b = sb[ib].clone();
    let k = intersection(&ba, &bb, d);
    let mut cols = vec![a.clone(), b.clone()];
    cols.extend(k.iter().cloned());
    let all: Vec<&Vector> = sa.iter().chain(sb).chain(sc).collect();
    if span_rank(&cols.iter().collect::<Vec<_>>()) != cols.len() || span_rank(&all) != cols.len() {
        return TriangleClassification::violation("the span of all weights is not <a> + <b> + (<A> ∩ <B>)");
    }
    let p = transpose(&cols, d);
    let coords = |w: &Vector| -> Option<Vector> { solve(Q, &p, w) };
    // (a-coordinate, b-coordinate) of every weight
    let mut ab: [Vec<(BigRational, BigRational)>; 3] = Default::default();
    for (s, set) in t.sets.iter().enumerate() {
        for w in set {
            let Some(x) = coords(w) else {
                return TriangleClassification::violation(format!("weight {} leaves the span", show(w)));
            };
            ab[s].push((x[0].clone(), x[1].clone()));
        }
    }
    for (i, (xa, xb)) in ab[0].iter().enumerate() {
        if xa.is_zero() || !xb.is_zero() {
            return TriangleClassification::violation(format!("weight {} of A has a-coordinate zero or b-coordinate nonzero", show(&sa[i])));
        }
    }
    for (i, (xa, xb)) in ab[1].iter().enumerate() {
        if xb.is_zero() || !xa.is_zero() {
            return TriangleClassification::violation(format!("weight {} of B has b-coordinate zero or a-coordinate nonzero", show(&sb[i])));
        }
    }
    for (i, (xa, xb)) in ab[2].iter().enumerate() {
        if xa.is_zero() || xb.is_zero() {
            return TriangleClassification::violation(format!("weight {} of C lies in <A> or <B>", show(&sc[i])));
        }
    }
    // rescaled weights and residues in <A> ∩ <B>
    let ra: Vec<Vector> = sa.iter().zip(&ab[0]).map(|(w, (xa, _))| sub(&scale(&xa.recip(), w), &a)).collect();
    let rb: Vec<Vector> = sb.iter().zip(&ab[1]).map(|(w, (_, xb))| sub(&scale(&xb.recip(), w), &b)).collect();
    let gamma: Vec<BigRational> = ab[2].iter().map(|(xa, xb)| xb / xa).collect();
    let rc: Vec<Vector> = sc
        .iter()
        .zip(&ab[2])
        .zip(&gamma)
        .map(|((w, (xa, _)), g)| sub(&sub(&scale(&xa.recip(), w), &a), &scale(g, &b)))
        .collect();
    let Some(i1) = ordered(sc).into_iter().find(|&i| is_zero(&rc[i])) else {
        return TriangleClassification::violation("no weight of C lies in <a, b>");
    };
    let g1 = gamma[i1].clone();
    // span of b_i and c_1 must hold the weight a - g1 R_i of A
    for (i, r) in rb.iter().enumerate() {
        if is_zero(r) {
            continue;
        }
        let want = sub(&a, &scale(&g1, r));
        if !sa.iter().any(|w| parallel(w, &want)) {
            return TriangleClassification::violation(format!(
                "span of {} and {} contains no weight of A",
                show(&sb[i]),
                show(&sc[i1])
            ));
        }
    }
    let m = sa.len();
    let kind = match m {
        1 => TriangleKind::Type1 { a: a.clone(), b: scale(&g1, &b) },
        2 => {
            let c = ra.iter().find(|r| !is_zero(r)).cloned().unwrap_or_else(|| vec![BigRational::zero(); d]);
            TriangleKind::Type2 { a: a.clone(), b: scale(&-g1, &b), c }
        }
        _ => return TriangleClassification::violation(format!("m = {m}: residue constructions do not close up")),
    };
    match realize(t, &kind) {
        Ok((mat, scalars)) => TriangleClassification { kind, basis_change: Some(mat), scalars: Some(scalars) },
        Err(reason) => TriangleClassification::violation(reason),
    }
}

/// The basis change and scalars taking `t` to the normal form of `kind`.
fn realize(t: &Triangle, kind: &TriangleKind) -> std::result::Result<(Matrix, [Vec<BigRational>; 3]), String> {
    let d = t.dim;
    let (a, b, c) = match kind {
        TriangleKind::Type1 { a, b } => (a, b, None),
        TriangleKind::Type2 { a, b, c } => (a, b, (!is_zero(c)).then_some(c)),
        _ => unreachable!("only normal forms are realized"),
    };
    let mut basis: Vec<Vector> = vec![a.clone(), b.clone()];
    basis.extend(c.cloned());
    if span_rank(&basis.iter().collect::<Vec<_>>()) != basis.len() {
        return Err("c is neither zero nor independent of a and b".into());
    }
    for j in 0..d {
        let e: Vector = (0..d).map(|k| if k == j { BigRational::one() } else { BigRational::zero() }).collect();
        let mut next = basis.clone();
        next.push(e);
        if span_rank(&next.iter().collect::<Vec<_>>()) == next.len() {
            basis = next;
        }
    }
    let m = inverse(Q, &transpose(&basis, d)).expect("basis is invertible");
    let target = normal_form(kind, d).expect("normal form");
    let mut scalars: [Vec<BigRational>; 3] = Default::default();
    for s in 0..3 {
        let mut used = vec![false; target[s].len()];
        for w in &t.sets[s] {
            let img = mat_vec(Q, &m, w);
            let hit = (0..target[s].len()).find(|&j| !used[j] && parallel(&img, &target[s][j]));
            let Some(j) = hit else {
                return Err(format!("weight {} does not match the normal form", show(w)));
            };
            used[j] = true;
            let k = img.iter().position(|x| !x.is_zero()).expect("nonzero image");
            scalars[s].push(&target[s][j][k] / &img[k]);
        }
    }
    Ok((m, scalars))
}

/// `s_w M w` for every weight, or `None` for non-normal-form classifications.
pub fn apply_basis_change(t: &Triangle, cl: &TriangleClassification) -> Option<[Vec<Vector>; 3]> {
    let m = cl.basis_change.as_ref()?;
    let s = cl.scalars.as_ref()?;
    Some(std::array::from_fn(|k| t.sets[k].iter().zip(&s[k]).map(|(w, x)| scale(x, &mat_vec(Q, m, w))).collect()))
}
