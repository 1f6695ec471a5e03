use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::Zero;
use serde_json::{json, Value};

use super::algebra::{Element, GradedAlgebra};
use crate::arith::rat;
use crate::error::{Error, Result};
use crate::linalg::{rank, solve, Field, Matrix, Scalar};

/// Largest candidate set enumerated exhaustively in one degree.
pub const SEARCH_BOUND: u64 = 100_000;

/// Matrix of `y -> x * y` from `H^i` to `H^{i+|x|}`.
pub fn cup_map(a: &GradedAlgebra, x: &Element, i: usize) -> Result<Matrix> {
    let t = i + x.degree;
    if t > a.n() {
        return Err(Error::Precondition(format!("cup map lands in degree {t} > n = {}", a.n())));
    }
    let cols: Vec<Element> = (0..a.dim(i)).map(|j| a.mul(x, &a.basis(i, j))).collect::<Result<_>>()?;
    Ok((0..a.dim(t)).map(|r| cols.iter().map(|c| c.coords[r].clone()).collect()).collect())
}

fn map_rank(a: &GradedAlgebra, m: &Matrix) -> usize {
    if m.is_empty() || m[0].is_empty() {
        0
    } else {
        rank(a.field(), m)
    }
}

/// The cup-product conclusion of the definition, without the degree bound:
/// `x*` injective on `H^i` for `0 < i <= n-|x|` and surjective onto
/// `H^{i+|x|}` for `0 <= i < n-|x|`.
pub fn cup_condition(a: &GradedAlgebra, x: &Element) -> bool {
    let n = a.n();
    let k = x.degree;
    if k > n {
        return false;
    }
    for i in 0..=n - k {
        let m = cup_map(a, x, i).expect("degree checked");
        let r = map_rank(a, &m);
        if i > 0 && r != a.dim(i) {
            return false;
        }
        if i < n - k && r != a.dim(i + k) {
            return false;
        }
    }
    true
}

/// Clause one of the definition: `2|x| <= n` and the cup condition.
pub fn clause_one(a: &GradedAlgebra, x: &Element) -> bool {
    2 * x.degree <= a.n() && cup_condition(a, x)
}

/// Some `z` with `y * z = x`: free coordinates set to zero. `None` when no
/// such `z` exists.
pub fn divide(a: &GradedAlgebra, x: &Element, y: &Element) -> Option<Element> {
    if y.degree > x.degree {
        return None;
    }
    let d = x.degree - y.degree;
    if a.dim(x.degree) == 0 {
        return Some(a.zero(d));
    }
    let m = cup_map(a, y, d).ok()?;
    if a.dim(d) == 0 {
        return x.is_zero().then(|| a.zero(d));
    }
    let z = solve(a.field(), &m, &x.coords)?;
    Some(Element { degree: d, coords: z })
}

/// Representatives of the nonzero classes of `H^d` up to scalars, plus zero.
///
/// Exhaustive over `F_p` when the projective space has at most
/// [`SEARCH_BOUND`] points and over `Q` when `dim <= 1`; otherwise a
/// structured sample (vectors with entries in `{-1, 0, 1}`, or basis vectors
/// and their pairwise sums) and the second component is `false`.
pub fn candidates(a: &GradedAlgebra, d: usize) -> (Vec<Element>, bool) {
    let dim = a.dim(d);
    let field = a.field();
    let mut out = vec![a.zero(d)];
    if dim == 0 {
        return (out, true);
    }
    let (digits, exact): (Vec<Scalar>, bool) = match field {
        Field::Prime(p) => {
            let size = (0..dim).try_fold(1u64, |acc, _| acc.checked_mul(p));
            let exact = size.is_some_and(|s| s / (p - 1) <= SEARCH_BOUND);
            if exact {
                ((0..p as i64).map(rat).collect(), true)
            } else {
                ((0..p.min(3) as i64).map(|v| field.from_i64(v - 1)).collect(), false)
            }
        }
        Field::Rational if dim == 1 => (vec![rat(1)], true),
        Field::Rational => (vec![rat(-1), rat(0), rat(1)], false),
    };
    let total = (digits.len() as u64).checked_pow(dim as u32);
    if total.is_some_and(|t| t <= 3 * SEARCH_BOUND) {
        let mut v = vec![0usize; dim];
        loop {
            let coords: Vec<Scalar> = v.iter().map(|&i| digits[i].clone()).collect();
            let lead = coords.iter().find(|c| !c.is_zero());
            if lead.is_some_and(|c| *c == rat(1)) {
                out.push(Element { degree: d, coords });
            }
            let Some(pos) = v.iter().position(|&i| i + 1 < digits.len()) else {
                break;
            };
            v[pos] += 1;
            for q in v.iter_mut().take(pos) {
                *q = 0;
            }
        }
        (out, exact)
    } else {
        for i in 0..dim {
            out.push(a.basis(d, i));
            for j in i + 1..dim {
                out.push(a.add(&a.basis(d, i), &a.basis(d, j)));
            }
        }
        (out, false)
    }
}

/// Memoized decision procedure for "induces periodicity".
///
/// Clause two asks for a factorization into clause-one elements. It is
/// decided by trying every clause-one candidate `y` of positive degree
/// `a < |x|` and dividing: `y*` is injective on `H^{|x|-a}`, so the cofactor
/// is unique and only needs to be tested recursively.
pub struct Checker<'a> {
    alg: &'a GradedAlgebra,
    clause_one_by_degree: HashMap<usize, Vec<Element>>,
    memo: HashMap<Element, bool>,
    exact: bool,
}

impl<'a> Checker<'a> {
    pub fn new(alg: &'a GradedAlgebra) -> Self {
        Checker { alg, clause_one_by_degree: HashMap::new(), memo: HashMap::new(), exact: true }
    }

    /// False once any sampled (non-exhaustive) candidate set was used.
    pub fn exact(&self) -> bool {
        self.exact
    }

    fn clause_one_candidates(&mut self, d: usize) -> &[Element] {
        if !self.clause_one_by_degree.contains_key(&d) {
            let (cands, exact) = candidates(self.alg, d);
            self.exact &= exact;
            let good = cands.into_iter().filter(|y| clause_one(self.alg, y)).collect();
            self.clause_one_by_degree.insert(d, good);
        }
        &self.clause_one_by_degree[&d]
    }

    pub fn induces(&mut self, x: &Element) -> bool {
        if let Some(&v) = self.memo.get(x) {
            return v;
        }
        let v = self.decide(x);
        self.memo.insert(x.clone(), v);
        v
    }

    fn decide(&mut self, x: &Element) -> bool {
        let alg = self.alg;
        if x.degree > alg.n() {
            return false;
        }
        if clause_one(alg, x) {
            return true;
        }
        for d in 1..x.degree {
            if 2 * d > alg.n() {
                break;
            }
            let ys = self.clause_one_candidates(d).to_vec();
            for y in ys {
                if let Some(z) = divide(alg, x, &y) {
                    if self.induces(&z) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Whether `x` induces periodicity. Exact for all algebras whose degrees
/// below `n/2` have exhaustively searchable candidate sets.
pub fn induces_periodicity(a: &GradedAlgebra, x: &Element) -> bool {
    Checker::new(a).induces(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicityReport {
    pub spectrum: Vec<usize>,
    pub witnesses: BTreeMap<usize, Element>,
    pub minimal_degree: Option<usize>,
    /// False when some degree was only sampled; the spectrum is then a lower bound.
    pub exact: bool,
}

impl PeriodicityReport {
    pub fn to_json(&self) -> Value {
        let w: serde_json::Map<String, Value> =
            self.witnesses.iter().map(|(d, e)| (d.to_string(), e.to_json())).collect();
        json!({
            "spectrum": self.spectrum,
            "witnesses": w,
            "minimal_degree": self.minimal_degree,
            "exact": self.exact,
        })
    }
}

/// Every degree `1..=n` carrying an element that induces periodicity, with
/// one witness each.
pub fn periodicity_spectrum(a: &GradedAlgebra) -> PeriodicityReport {
    let mut ck = Checker::new(a);
    let mut witnesses = BTreeMap::new();
    let mut exact = true;
    for d in 1..=a.n() {
        let (cands, ex) = candidates(a, d);
        exact &= ex;
        if let Some(x) = cands.into_iter().find(|x| ck.induces(x)) {
            witnesses.insert(d, x);
        }
    }
    let spectrum: Vec<usize> = witnesses.keys().copied().collect();
    PeriodicityReport {
        minimal_degree: spectrum.first().copied(),
        spectrum,
        witnesses,
        exact: exact && ck.exact(),
    }
}

/// Outcome of the closure-lemma checks on one algebra; each entry of
/// `failures` names a counterexample.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub factorizations_checked: usize,
    pub sums_checked: usize,
    pub failures: Vec<String>,
}

/// Checks on one algebra: factors of inducers induce; spectrum is closed
/// under gcd; in one-dimensional degrees every nonzero class induces and
/// any splitting `x = y + z` has an inducing summand; clause-two inducers
/// satisfy the cup condition.
pub fn lemma_checks(a: &GradedAlgebra) -> LemmaReport {
    let mut ck = Checker::new(a);
    let mut rep = LemmaReport::default();
    let report = periodicity_spectrum(a);
    let cand: Vec<Vec<Element>> = (0..=a.n()).map(|d| candidates(a, d).0).collect();
    for &k in &report.spectrum {
        let inducers: Vec<Element> = cand[k].iter().filter(|x| ck.induces(x)).cloned().collect();
        for x in &inducers {
            if !cup_condition(a, x) {
                rep.failures.push(format!("inducer {x} fails the cup condition"));
            }
            for d in 1..k {
                for y in &cand[d] {
                    let Some(z) = divide(a, x, y) else { continue };
                    rep.factorizations_checked += 1;
                    if a.mul(y, &z).ok().as_ref() != Some(x) {
                        rep.failures.push(format!("divide({x}, {y}) returned a non-factor {z}"));
                    } else if !ck.induces(y) || !ck.induces(&z) {
                        rep.failures.push(format!("{x} = {y} * {z} induces but a factor does not"));
                    }
                }
            }
            if a.dim(k) == 1 {
                for c in scalar_sample(a.field()) {
                    let y = a.scale(&c, x);
                    let z = a.add(x, &a.scale(&a.field().from_i64(-1), &y));
                    rep.sums_checked += 1;
                    if !y.is_zero() && !x.is_zero() && !ck.induces(&y) {
                        rep.failures.push(format!("nonzero {y} in the degree of inducer {x} does not induce"));
                    }
                    if !ck.induces(&y) && !ck.induces(&z) {
                        rep.failures.push(format!("{x} = {y} + {z} with neither summand inducing"));
                    }
                }
            }
        }
    }
    for &k in &report.spectrum {
        for &l in &report.spectrum {
            let g = k.gcd(&l);
            if !report.spectrum.contains(&g) {
                rep.failures.push(format!("degrees {k} and {l} are periodic but gcd {g} is not"));
            }
        }
    }
    rep
}

fn scalar_sample(field: Field) -> Vec<Scalar> {
    match field {
        Field::Prime(p) => (0..p.min(50) as i64).map(rat).collect(),
        Field::Rational => {
            let mut v: Vec<Scalar> = (-2..=2).map(rat).collect();
            v.push(crate::arith::parse_rational("1/2").expect("literal"));
            v.push(crate::arith::parse_rational("-3/2").expect("literal"));
            v
        }
    }
}
