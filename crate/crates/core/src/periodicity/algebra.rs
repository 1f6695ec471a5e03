use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational};
use crate::error::{Error, Result};
use crate::linalg::{Field, Scalar};

/// A homogeneous class: coordinates over the basis of `H^degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub degree: usize,
    pub coords: Vec<Scalar>,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "coords": self.coords.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "H^{}[{}]", self.degree, c.join(","))
    }
}

/// One block of structure constants: products `H^a x H^b -> H^{a+b}`.
///
/// `table` has `dims[a] * dims[b]` rows; row `i * dims[b] + j` holds the
/// coordinates of `e_i * f_j` in `H^{a+b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureBlock {
    pub a: usize,
    pub b: usize,
    pub table: Vec<Vec<Scalar>>,
}

/// Finite-dimensional graded-commutative algebra over `Q` or `F_p`, with
/// `H^i = 0` above the formal dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: Field,
    n: usize,
    dims: Vec<usize>,
    /// `blocks[a][b]`, defined for `a + b <= n`.
    blocks: Vec<Vec<Vec<Vec<Scalar>>>>,
}

impl GradedAlgebra {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or(0)
    }

    pub fn unit(&self) -> Element {
        Element { degree: 0, coords: vec![self.field.from_i64(1)] }
    }

    pub fn zero(&self, degree: usize) -> Element {
        Element { degree, coords: vec![Scalar::zero(); self.dim(degree)] }
    }

    pub fn basis(&self, degree: usize, i: usize) -> Element {
        let mut e = self.zero(degree);
        e.coords[i] = self.field.from_i64(1);
        e
    }

    /// Builds an element, embedding the coordinates into the field.
    pub fn element(&self, degree: usize, coords: &[Scalar]) -> Result<Element> {
        if degree > self.n || coords.len() != self.dim(degree) {
            return Err(Error::Invalid(format!(
                "element of degree {degree} needs {} coordinates, got {}",
                self.dim(degree),
                coords.len()
            )));
        }
        let coords = coords.iter().map(|c| self.field.embed(c)).collect::<Result<_>>()?;
        Ok(Element { degree, coords })
    }

    /// Product of basis elements `e_i in H^a`, `e_j in H^b`.
    pub fn basis_product(&self, a: usize, i: usize, b: usize, j: usize) -> &[Scalar] {
        &self.blocks[a][b][i * self.dims[b] + j]
    }

    /// `x * y`; an error when the degree exceeds `n`.
    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        let d = x.degree + y.degree;
        if d > self.n {
            return Err(Error::Precondition(format!("product degree {d} exceeds n = {}", self.n)));
        }
        let f = self.field;
        let mut out = self.zero(d);
        for (i, xi) in x.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let s = f.mul(xi, yj);
                for (o, t) in out.coords.iter_mut().zip(self.basis_product(x.degree, i, y.degree, j)) {
                    *o = f.add(o, &f.mul(&s, t));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        assert_eq!(x.degree, y.degree);
        let coords = x.coords.iter().zip(&y.coords).map(|(a, b)| self.field.add(a, b)).collect();
        Element { degree: x.degree, coords }
    }

    pub fn scale(&self, c: &Scalar, x: &Element) -> Element {
        Element { degree: x.degree, coords: x.coords.iter().map(|v| self.field.mul(c, v)).collect() }
    }

    pub fn to_json(&self) -> Value {
        let mut structure = Vec::new();
        for a in 0..=self.n {
            for b in 0..=self.n - a {
                let t = &self.blocks[a][b];
                if t.is_empty() || t.iter().all(|r| r.iter().all(|c| c.is_zero())) {
                    continue;
                }
                let table: Vec<Vec<Value>> =
                    t.iter().map(|r| r.iter().map(scalar_json).collect()).collect();
                structure.push(json!({"a": a, "b": b, "table": table}));
            }
        }
        json!({"field": self.field.to_string(), "n": self.n, "dims": self.dims, "structure": structure})
    }

    pub fn from_json_str(s: &str) -> Result<GradedAlgebra> {
        let v: Value = serde_json::from_str(s)?;
        let obj = v.as_object().ok_or_else(|| Error::Json("algebra must be an object".into()))?;
        let field: Field = obj
            .get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json("missing string field \"field\"".into()))?
            .parse()?;
        let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Json("missing integer \"n\"".into()))?;
        if n > MAX_N as u64 {
            return Err(Error::InvalidAlgebra(format!("n = {n} exceeds {MAX_N}")));
        }
        let dims: Vec<usize> = obj
            .get("dims")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing array \"dims\"".into()))?
            .iter()
            .map(|d| d.as_u64().map(|x| x as usize).ok_or_else(|| Error::Json("dims must be integers".into())))
            .collect::<Result<_>>()?;
        if dims.iter().sum::<usize>() > MAX_TOTAL_DIM {
            return Err(Error::InvalidAlgebra(format!("total dimension above {MAX_TOTAL_DIM} is not supported")));
        }
        let mut blocks = Vec::new();
        if let Some(s) = obj.get("structure") {
            for b in s.as_array().ok_or_else(|| Error::Json("\"structure\" must be an array".into()))? {
                let a = b.get("a").and_then(Value::as_u64).ok_or_else(|| Error::Json("block needs \"a\"".into()))?;
                let bb = b.get("b").and_then(Value::as_u64).ok_or_else(|| Error::Json("block needs \"b\"".into()))?;
                let rows = b.get("table").and_then(Value::as_array).ok_or_else(|| Error::Json("block needs \"table\"".into()))?;
                let table = rows
                    .iter()
                    .map(|r| {
                        r.as_array()
                            .ok_or_else(|| Error::Json("table rows must be arrays".into()))?
                            .iter()
                            .map(parse_scalar)
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                blocks.push(StructureBlock { a: a as usize, b: bb as usize, table });
            }
        }
        make_algebra(field, n as usize, dims, blocks)
    }
}

const MAX_N: usize = 256;
const MAX_TOTAL_DIM: usize = 64;

fn scalar_json(c: &Scalar) -> Value {
    if c.is_integer() {
        if let Ok(v) = c.numer().to_string().parse::<i64>() {
            return json!(v);
        }
    }
    json!(format_rational(c))
}

fn parse_scalar(v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(crate::arith::rat(i)),
            None => Err(Error::Json(format!("non-integer number {n}; use a \"p/q\" string"))),
        },
        Value::String(s) if s.len() <= 200 => parse_rational(s),
        _ => Err(Error::Json("structure constants must be integers or \"p/q\" strings".into())),
    }
}

/// Validates structure constants and fills in the implied blocks: products
/// with the unit, the mirror block `(b, a)` by graded commutativity, and
/// zero for anything unspecified.
pub fn make_algebra(field: Field, n: usize, dims: Vec<usize>, structure: Vec<StructureBlock>) -> Result<GradedAlgebra> {
    if dims.len() != n + 1 {
        return Err(Error::InvalidAlgebra(format!("expected {} dimensions for n = {n}, got {}", n + 1, dims.len())));
    }
    if dims[0] != 1 {
        return Err(Error::InvalidAlgebra("H^0 must be one-dimensional".into()));
    }
    let mut given: BTreeMap<(usize, usize), Vec<Vec<Scalar>>> = BTreeMap::new();
    for blk in structure {
        let (a, b) = (blk.a, blk.b);
        if a + b > n {
            return Err(Error::InvalidAlgebra(format!("block ({a},{b}) lands above n = {n}")));
        }
        if blk.table.len() != dims[a] * dims[b] {
            return Err(Error::InvalidAlgebra(format!(
                "block ({a},{b}) needs {} rows, got {}",
                dims[a] * dims[b],
                blk.table.len()
            )));
        }
        if blk.table.iter().any(|r| r.len() != dims[a + b]) {
            return Err(Error::InvalidAlgebra(format!("block ({a},{b}) rows need {} entries", dims[a + b])));
        }
        let table = blk
            .table
            .iter()
            .map(|r| r.iter().map(|c| field.embed(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if given.insert((a, b), table).is_some() {
            return Err(Error::InvalidAlgebra(format!("block ({a},{b}) given twice")));
        }
    }
    let mut blocks: Vec<Vec<Vec<Vec<Scalar>>>> = vec![Vec::new(); n + 1];
    for a in 0..=n {
        for b in 0..=n - a {
            let t = if let Some(t) = given.get(&(a, b)) {
                t.clone()
            } else if let Some(t) = given.get(&(b, a)) {
                mirror(field, t, a, b, &dims)
            } else if a == 0 || b == 0 {
                identity(field, dims[a + b])
            } else {
                vec![vec![Scalar::zero(); dims[a + b]]; dims[a] * dims[b]]
            };
            blocks[a].push(t);
        }
    }
    let alg = GradedAlgebra { field, n, dims, blocks };
    alg.validate()?;
    Ok(alg)
}

/// `(b, a)` block from the `(a', b') = (b, a)` block: `f_j e_i = (-1)^{ab} e_i f_j`.
fn mirror(field: Field, t: &[Vec<Scalar>], a: usize, b: usize, dims: &[usize]) -> Vec<Vec<Scalar>> {
    // t is the (b, a) table: row j * dims[a] + i holds f_j * e_i with f_j in H^b
    let sign = (a * b) % 2 == 1;
    let mut out = Vec::with_capacity(dims[a] * dims[b]);
    for i in 0..dims[a] {
        for j in 0..dims[b] {
            let row = &t[j * dims[a] + i];
            out.push(if sign { row.iter().map(|c| field.neg(c)).collect() } else { row.clone() });
        }
    }
    out
}

fn identity(field: Field, d: usize) -> Vec<Vec<Scalar>> {
    (0..d).map(|i| (0..d).map(|j| field.from_i64((i == j) as i64)).collect()).collect()
}

impl GradedAlgebra {
    fn validate(&self) -> Result<()> {
        let f = self.field;
        for d in 0..=self.n {
            for i in 0..self.dims[d] {
                let e = self.basis(d, i);
                if self.mul(&self.unit(), &e)? != e || self.mul(&e, &self.unit())? != e {
                    return Err(Error::InvalidAlgebra(format!("unit does not act as identity on H^{d}")));
                }
            }
        }
        for a in 1..=self.n {
            for b in 1..=self.n - a {
                for i in 0..self.dims[a] {
                    for j in 0..self.dims[b] {
                        let xy = self.basis_product(a, i, b, j);
                        let yx = self.basis_product(b, j, a, i);
                        let ok = if (a * b) % 2 == 1 {
                            xy.iter().zip(yx).all(|(u, v)| f.add(u, v).is_zero())
                        } else {
                            xy == yx
                        };
                        if !ok {
                            return Err(Error::InvalidAlgebra(format!(
                                "graded commutativity fails for basis elements {i} of H^{a} and {j} of H^{b}"
                            )));
                        }
                    }
                }
            }
        }
        for a in 1..=self.n {
            for b in 1..=self.n - a {
                for c in 1..=self.n - a - b {
                    for i in 0..self.dims[a] {
                        for j in 0..self.dims[b] {
                            for k in 0..self.dims[c] {
                                let (x, y, z) = (self.basis(a, i), self.basis(b, j), self.basis(c, k));
                                let l = self.mul(&self.mul(&x, &y)?, &z)?;
                                let r = self.mul(&x, &self.mul(&y, &z)?)?;
                                if l != r {
                                    return Err(Error::InvalidAlgebra(format!(
                                        "associativity fails in degrees ({a},{b},{c}) at basis ({i},{j},{k})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The shipped model algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Sphere(usize),
    Cp(usize),
    Hp(usize),
    CayleyPlane,
    SphereCrossHp(usize, usize),
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Sphere(n) => write!(f, "sphere({n})"),
            Model::Cp(m) => write!(f, "cp({m})"),
            Model::Hp(m) => write!(f, "hp({m})"),
            Model::CayleyPlane => write!(f, "cayley_plane"),
            Model::SphereCrossHp(h, k) => write!(f, "sphere_cross_hp({h},{k})"),
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "cayley_plane" {
            return Ok(Model::CayleyPlane);
        }
        let bad = || Error::Invalid(format!("unknown model {s:?}"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args: Vec<usize> = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .split(',')
            .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (name, args.as_slice()) {
            ("sphere", &[n]) => Ok(Model::Sphere(n)),
            ("cp", &[m]) => Ok(Model::Cp(m)),
            ("hp", &[m]) => Ok(Model::Hp(m)),
            ("sphere_cross_hp", &[h, k]) => Ok(Model::SphereCrossHp(h, k)),
            _ => Err(bad()),
        }
    }
}

/// Truncated polynomial ring `F[x]/x^{m+1}` with `|x| = g`.
fn truncated(field: Field, g: usize, m: usize) -> Result<GradedAlgebra> {
    let n = g * m;
    let mut dims = vec![0; n + 1];
    for j in 0..=m {
        dims[j * g] = 1;
    }
    let mut blocks = Vec::new();
    for a in 1..=m {
        for b in 1..=m - a {
            blocks.push(StructureBlock { a: a * g, b: b * g, table: vec![vec![field.from_i64(1)]] });
        }
    }
    make_algebra(field, n, dims, blocks)
}

/// The models swept by the closure checks.
pub fn model_catalog() -> Vec<Model> {
    let mut out: Vec<Model> = (2..=8).map(Model::Sphere).collect();
    out.extend((1..=4).map(Model::Cp));
    out.extend((1..=3).map(Model::Hp));
    out.push(Model::CayleyPlane);
    for h in [2, 3] {
        out.extend((1..=3).map(|k| Model::SphereCrossHp(h, k)));
    }
    out
}

pub fn model(m: Model, field: Field) -> Result<GradedAlgebra> {
    let check = |v: usize, n: usize, what: &str| {
        if v == 0 || n > MAX_N {
            Err(Error::Invalid(format!("{what} must be positive with formal dimension at most {MAX_N}")))
        } else {
            Ok(v)
        }
    };
    match m {
        Model::Sphere(n) => truncated(field, check(n, n, "sphere dimension")?, 1),
        Model::Cp(k) => truncated(field, 2, check(k, 2 * k, "cp parameter")?),
        Model::Hp(k) => truncated(field, 4, check(k, 4 * k, "hp parameter")?),
        Model::CayleyPlane => truncated(field, 8, 2),
        Model::SphereCrossHp(h, k) => {
            if h != 2 && h != 3 {
                return Err(Error::Invalid(format!("sphere_cross_hp needs h in {{2,3}}, got {h}")));
            }
            let k = check(k, h + 4 * k, "hp parameter")?;
            let n = h + 4 * k;
            let mut dims = vec![0; n + 1];
            let deg = |e: usize, j: usize| e * h + 4 * j;
            for e in 0..=1 {
                for j in 0..=k {
                    dims[deg(e, j)] = 1;
                }
            }
            let mut blocks = Vec::new();
            for e1 in 0..=1 {
                for j1 in 0..=k {
                    for e2 in 0..=1 {
                        for j2 in 0..=k {
                            let (a, b) = (deg(e1, j1), deg(e2, j2));
                            if a == 0 || b == 0 || a + b > n || e1 + e2 > 1 || j1 + j2 > k {
                                continue;
                            }
                            blocks.push(StructureBlock { a, b, table: vec![vec![field.from_i64(1)]] });
                        }
                    }
                }
            }
            make_algebra(field, n, dims, blocks)
        }
    }
}
