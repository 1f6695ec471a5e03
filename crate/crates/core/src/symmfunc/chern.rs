//! Conversion between the monomial basis and products of elementary
//! symmetric functions `c_k = e_k = ((1)^k)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::partition::{partitions_of, Partition};
use super::symfunc::{mult, SymFunc};
use crate::arith::mod_p;
use crate::error::{Error, Result};

/// Integer polynomial in the Chern classes.
///
/// A key `(k_1, ..., k_r)` (non-increasing) stands for `c_{k_1} ... c_{k_r}`;
/// the empty key is the constant `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChernPoly {
    terms: BTreeMap<Partition, BigInt>,
}

impl ChernPoly {
    pub fn zero() -> Self {
        ChernPoly::default()
    }

    pub fn one() -> Self {
        Self::term(Partition::empty(), BigInt::one())
    }

    /// The single class `c_k`.
    pub fn c(k: u32) -> Self {
        Self::term(Partition::from_unsorted(vec![k]), BigInt::one())
    }

    pub fn term(key: Partition, c: BigInt) -> Self {
        let mut f = ChernPoly::zero();
        f.add_term(key, c);
        f
    }

    pub fn add_term(&mut self, key: Partition, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &Partition) -> BigInt {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Terms in decreasing lexicographic order of their index multisets.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Partition, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn reduce_mod(&self, p: u64) -> ChernPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, v)| {
                let r = mod_p(v, p);
                (r != 0).then(|| (k.clone(), BigInt::from(r)))
            })
            .collect();
        ChernPoly { terms }
    }

    pub fn sub(&self, other: &ChernPoly) -> ChernPoly {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), -v);
        }
        out
    }

    /// Drops the term `c_k` itself, keeping everything else.
    pub fn without(&self, key: &Partition) -> ChernPoly {
        let mut out = self.clone();
        out.terms.remove(key);
        out
    }

    /// JSON list `[{"classes":[3,3],"coeff":2}, ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.iter()
                .map(|(k, c)| {
                    serde_json::json!({
                        "classes": k.parts(),
                        "coeff": super::symfunc::JsonInt::from_big(c),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for ChernPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if k.is_empty() {
                write!(f, "{a}")?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{a}")?;
            }
            let factors: Vec<String> = k
                .multiplicities()
                .iter()
                .map(|&(n, r)| if r == 1 { format!("c_{n}") } else { format!("c_{n}^{r}") })
                .collect();
            write!(f, "{}", factors.join(""))?;
        }
        Ok(())
    }
}

/// Expands a Chern polynomial in the monomial basis by multiplying out the
/// factors `((1)^k)`.
pub fn elementary_to_monomial(g: &ChernPoly) -> SymFunc {
    let mut out = SymFunc::zero();
    for (key, c) in &g.terms {
        let e = key
            .parts()
            .iter()
            .fold(SymFunc::one(), |acc, &k| mult(&acc, &SymFunc::elementary(k as usize)));
        out = out.add(&e.scale(c));
    }
    out
}

/// Writes a homogeneous symmetric function as an integer polynomial in the
/// elementary functions.
///
/// Triangular elimination: `e_{nu'} = m_nu + (terms below nu)`, so the
/// lexicographically largest remaining term is always cleared by one
/// multiple of `e_{nu'}`. All work stays below the initial leading term.
pub fn monomial_to_elementary(f: &SymFunc) -> Result<ChernPoly> {
    monomial_to_elementary_impl(f, None)
}

/// As [`monomial_to_elementary`] with all coefficients reduced mod `p`
/// along the way.
pub fn monomial_to_elementary_mod(f: &SymFunc, p: u64) -> Result<ChernPoly> {
    crate::arith::check_prime(p)?;
    monomial_to_elementary_impl(f, Some(p))
}

fn monomial_to_elementary_impl(f: &SymFunc, p: Option<u64>) -> Result<ChernPoly> {
    let Some(w) = f.require_homogeneous()? else {
        return Ok(ChernPoly::zero());
    };
    let top = f.leading().expect("nonzero").0.clone();
    let lower: Vec<Partition> = partitions_of(w).into_iter().filter(|q| *q <= top).collect();
    let reduce = |x: BigInt| match p {
        Some(p) => BigInt::from(mod_p(&x, p)),
        None => x,
    };
    let mut rem: BTreeMap<Partition, BigInt> =
        f.iter().map(|(k, v)| (k.clone(), reduce(v.clone()))).filter(|(_, v)| !v.is_zero()).collect();
    let mut out = ChernPoly::zero();
    while let Some((nu, c)) = rem.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
        let mu = nu.conjugate();
        for rho in lower.iter().filter(|r| **r <= nu && dominated(r, &nu)) {
            let m = zero_one_count(&mu, rho);
            if m.is_zero() {
                continue;
            }
            let e = rem.entry(rho.clone()).or_default();
            *e = reduce(&*e - &c * m);
            if e.is_zero() {
                rem.remove(rho);
            }
        }
        if rem.contains_key(&nu) {
            return Err(Error::Consistency(format!("elimination did not clear {nu}")));
        }
        out.add_term(mu, c);
    }
    Ok(out)
}

/// Dominance order `a <= b`: partial sums of `a` never exceed those of `b`.
pub fn dominated(a: &Partition, b: &Partition) -> bool {
    let (mut sa, mut sb) = (0u32, 0u32);
    let n = a.len().max(b.len());
    for i in 0..n {
        sa += a.parts().get(i).copied().unwrap_or(0);
        sb += b.parts().get(i).copied().unwrap_or(0);
        if sa > sb {
            return false;
        }
    }
    true
}

type CountCache = RwLock<HashMap<(Vec<u32>, Vec<u32>), BigInt>>;

fn count_cache() -> &'static CountCache {
    static CACHE: OnceLock<CountCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Number of 0-1 matrices with row sums `rows` and column sums `cols`: the
/// coefficient of `m_cols` in `e_rows`.
pub fn zero_one_count(rows: &Partition, cols: &Partition) -> BigInt {
    if rows.weight() != cols.weight() {
        return BigInt::zero();
    }
    // symmetric under transposition; recurse over the longer side
    let (r, c) = if rows.len() <= cols.len() { (rows, cols) } else { (cols, rows) };
    count_rec(r.parts().to_vec(), c.parts())
}

/// Removes the first column: it hits some rows, chosen by how many rows of
/// each remaining value it takes. Row states are kept sorted so that equal
/// rows collapse, and memoized globally since suffixes of `cols` recur
/// across calls.
fn count_rec(state: Vec<u32>, cols: &[u32]) -> BigInt {
    let Some((&first, rest)) = cols.split_first() else {
        return if state.is_empty() { BigInt::one() } else { BigInt::zero() };
    };
    if state.len() < first as usize {
        return BigInt::zero();
    }
    let key = (state, cols.to_vec());
    if let Some(v) = count_cache().read().expect("cache lock").get(&key) {
        return v.clone();
    }
    let state = &key.0;
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for &x in state {
        match groups.last_mut() {
            Some((v, n)) if *v == x => *n += 1,
            _ => groups.push((x, 1)),
        }
    }
    let mut total = BigInt::zero();
    let mut pick = vec![0usize; groups.len()];
    choose_rows(&groups, 0, first as usize, &mut pick, &mut |pick| {
        let mut next = Vec::with_capacity(state.len());
        let mut ways = BigInt::one();
        for (&(v, n), &k) in groups.iter().zip(pick.iter()) {
            ways *= crate::arith::binom(n as i64, k as i64);
            next.extend(std::iter::repeat_n(v, n - k));
            if v > 1 {
                next.extend(std::iter::repeat_n(v - 1, k));
            }
        }
        next.sort_unstable_by(|a, b| b.cmp(a));
        total += ways * count_rec(next, rest);
    });
    count_cache().write().expect("cache lock").insert(key, total.clone());
    total
}

fn choose_rows(groups: &[(u32, usize)], gi: usize, left: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if gi == groups.len() {
        if left == 0 {
            f(pick);
        }
        return;
    }
    let cap: usize = groups[gi..].iter().map(|g| g.1).sum();
    if cap < left {
        return;
    }
    for k in 0..=left.min(groups[gi].1) {
        pick[gi] = k;
        choose_rows(groups, gi + 1, left - k, pick, f);
    }
    pick[gi] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn sf(s: &str) -> SymFunc {
        s.parse().unwrap()
    }

    #[test]
    fn basic_conversions() {
        assert_eq!(monomial_to_elementary(&sf("(1,1)")).unwrap().to_string(), "c_2");
        assert_eq!(monomial_to_elementary(&sf("(1)")).unwrap().to_string(), "c_1");
        assert_eq!(monomial_to_elementary(&sf("(2)")).unwrap().to_string(), "-2c_2 + c_1^2");
        assert_eq!(elementary_to_monomial(&ChernPoly::c(2)), sf("(1,1)"));
        let c1sq = ChernPoly::term(p("(1,1)"), BigInt::one());
        assert_eq!(elementary_to_monomial(&c1sq), sf("(2) + 2(1,1)"));
        assert_eq!(elementary_to_monomial(&ChernPoly::one()), SymFunc::one());
        assert!(monomial_to_elementary(&sf("(2)+(1)")).is_err());
    }

    #[test]
    fn zero_one_counts_match_products() {
        for w in 1..=7 {
            for mu in partitions_of(w) {
                let e = mu.parts().iter().fold(SymFunc::one(), |a, &k| mult(&a, &SymFunc::elementary(k as usize)));
                for rho in partitions_of(w) {
                    assert_eq!(zero_one_count(&mu, &rho), e.coeff(&rho), "{mu} {rho}");
                }
            }
        }
    }

    #[test]
    fn round_trip_weight_six() {
        for lam in partitions_of(6) {
            let f = SymFunc::monomial(lam.clone());
            let g = monomial_to_elementary(&f).unwrap();
            assert_eq!(elementary_to_monomial(&g), f, "{lam}");
        }
    }

    #[test]
    fn modular_conversion_agrees() {
        let f = sf("(3,1,1) + 4(2,2,1)");
        let exact = monomial_to_elementary(&f).unwrap().reduce_mod(3);
        assert_eq!(monomial_to_elementary_mod(&f, 3).unwrap(), exact);
    }

    #[test]
    fn dominance() {
        assert!(dominated(&p("(2,2)"), &p("(3,1)")));
        assert!(!dominated(&p("(3,1,1,1)"), &p("(2,2,2)")));
        assert!(!dominated(&p("(2,2,2)"), &p("(3,1,1,1)")));
    }
}
