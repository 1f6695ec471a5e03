use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matching::enumerate_matchings;
use super::partition::{Cursor, Partition};
use crate::arith::{check_prime, mod_p};
use crate::error::{Error, Result};

/// Integer linear combination of monomial symmetric functions.
///
/// Zero coefficients are never stored. Iteration and display run in
/// decreasing lexicographic order of the partitions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymFunc {
    terms: BTreeMap<Partition, BigInt>,
}

impl SymFunc {
    pub fn zero() -> Self {
        SymFunc::default()
    }

    pub fn one() -> Self {
        SymFunc::monomial(Partition::empty())
    }

    pub fn monomial(p: Partition) -> Self {
        Self::term(p, BigInt::one())
    }

    pub fn term(p: Partition, c: BigInt) -> Self {
        let mut f = SymFunc::zero();
        f.add_term(p, c);
        f
    }

    /// `e_k = ((1)^k)`.
    pub fn elementary(k: usize) -> Self {
        SymFunc::monomial(Partition::rectangle(1, k))
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

    pub fn coeff(&self, p: &Partition) -> BigInt {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    /// Terms in decreasing lexicographic order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Partition, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Partition, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, p: Partition, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(p) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, p: &Partition, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(p) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(p);
                }
            }
            None => {
                self.terms.insert(p.clone(), c.clone());
            }
        }
    }

    /// The common weight of all terms; `None` for heterogeneous input and
    /// for zero.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|p| p.weight());
        let w = it.next()?;
        it.all(|v| v == w).then_some(w)
    }

    /// Weight of a homogeneous function; zero is homogeneous of every weight
    /// and reports `Ok(None)`.
    pub fn require_homogeneous(&self) -> Result<Option<u32>> {
        if self.is_zero() {
            return Ok(None);
        }
        self.homogeneous_weight().map(Some).ok_or(Error::Heterogeneous)
    }

    pub fn max_parts(&self) -> usize {
        self.terms.keys().map(|p| p.len()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigInt) -> SymFunc {
        if c.is_zero() {
            return SymFunc::zero();
        }
        SymFunc { terms: self.terms.iter().map(|(p, v)| (p.clone(), v * c)).collect() }
    }

    pub fn add(&self, other: &SymFunc) -> SymFunc {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term_ref(p, c);
        }
        out
    }

    pub fn sub(&self, other: &SymFunc) -> SymFunc {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term_ref(p, &-c);
        }
        out
    }

    pub fn mult(&self, other: &SymFunc) -> SymFunc {
        mult(self, other)
    }

    pub fn reduce_mod(&self, p: u64) -> Result<SymFunc> {
        reduce_mod(self, p)
    }

    pub(crate) fn reduce_mod_unchecked(&self, p: u64) -> SymFunc {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, v)| {
                let r = mod_p(v, p);
                (r != 0).then(|| (k.clone(), BigInt::from(r)))
            })
            .collect();
        SymFunc { terms }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> =
            self.iter().map(|(p, c)| JsonTerm { parts: p.parts().to_vec(), coeff: JsonInt::from_big(c) }).collect();
        serde_json::to_value(JsonSymFunc { terms }).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<SymFunc> {
        let raw: JsonSymFunc = serde_json::from_str(s)?;
        let mut f = SymFunc::zero();
        for t in raw.terms {
            let p = Partition::new(t.parts)?;
            if p.len() > 4096 || p.weight() > 1 << 16 {
                return Err(Error::Invalid("partition too large".into()));
            }
            f.add_term(p, t.coeff.to_big()?);
        }
        Ok(f)
    }
}

impl FromIterator<(Partition, BigInt)> for SymFunc {
    fn from_iter<I: IntoIterator<Item = (Partition, BigInt)>>(iter: I) -> Self {
        let mut f = SymFunc::zero();
        for (p, c) in iter {
            f.add_term(p, c);
        }
        f
    }
}

/// `m_pn * m_pm` as the sum over matching classes of coefficient times target.
pub fn mult_monomial(pn: &Partition, pm: &Partition) -> SymFunc {
    let mut out = SymFunc::zero();
    for m in enumerate_matchings(pn, pm) {
        out.add_term(m.target(), m.coefficient());
    }
    out
}

pub fn mult(f: &SymFunc, g: &SymFunc) -> SymFunc {
    let mut out = SymFunc::zero();
    for (a, ca) in &f.terms {
        for (b, cb) in &g.terms {
            let c = ca * cb;
            for (t, ct) in mult_monomial(a, b).terms {
                out.add_term(t, ct * &c);
            }
        }
    }
    out
}

/// `f^n` by repeated multiplication.
pub fn power(f: &SymFunc, n: u32) -> SymFunc {
    (0..n).fold(SymFunc::one(), |acc, _| mult(&acc, f))
}

pub fn reduce_mod(f: &SymFunc, p: u64) -> Result<SymFunc> {
    check_prime(p)?;
    Ok(f.reduce_mod_unchecked(p))
}

impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Longest accepted coefficient literal, in digits.
const MAX_COEFF_DIGITS: usize = 1000;

impl FromStr for SymFunc {
    type Err = Error;

    /// Accepts `0` or a signed sum of terms `[coeff][*]partition`, e.g.
    /// `(4,2,1) + 3(4,1,1,1) - 2*((1)^3)`.
    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        cur.skip_ws();
        if cur.peek() == Some(b'0') {
            let save = cur.pos;
            cur.pos += 1;
            cur.skip_ws();
            if cur.at_end() {
                return Ok(SymFunc::zero());
            }
            cur.pos = save;
        }
        let mut f = SymFunc::zero();
        let mut first = true;
        loop {
            cur.skip_ws();
            let mut sign = BigInt::one();
            if cur.eat(b'-') {
                sign = -sign;
            } else if !cur.eat(b'+') && !first {
                return Err(cur.err("expected '+' or '-' between terms"));
            }
            let coeff = match cur.digits() {
                Some(d) if d.len() > MAX_COEFF_DIGITS => return Err(cur.err("coefficient too long")),
                Some(d) => {
                    let c: BigInt = d.parse().map_err(|_| cur.err("bad coefficient"))?;
                    cur.eat(b'*');
                    c
                }
                None => BigInt::one(),
            };
            let p = cur.partition()?;
            f.add_term(p, sign * coeff);
            first = false;
            cur.skip_ws();
            if cur.at_end() {
                return Ok(f);
            }
        }
    }
}

pub fn parse_symfunc(text: &str) -> Result<SymFunc> {
    text.parse()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSymFunc {
    terms: Vec<JsonTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTerm {
    parts: Vec<u32>,
    coeff: JsonInt,
}

/// Integers that fit in `i64` are plain JSON numbers; larger ones are
/// decimal strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    pub(crate) fn from_big(c: &BigInt) -> Self {
        match c.to_i64() {
            Some(v) => JsonInt::Small(v),
            None => JsonInt::Big(c.to_string()),
        }
    }

    pub(crate) fn to_big(&self) -> Result<BigInt> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) if s.len() <= MAX_COEFF_DIGITS + 1 => {
                s.parse().map_err(|_| Error::Invalid(format!("bad integer {s:?}")))
            }
            JsonInt::Big(_) => Err(Error::Invalid("integer too long".into())),
        }
    }
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
    fn small_products() {
        assert_eq!(mult_monomial(&p("(1)"), &p("(1)")).to_string(), "(2) + 2(1,1)");
        assert_eq!(mult_monomial(&p("(5)"), &Partition::empty()).to_string(), "(5)");
        assert_eq!(mult(&sf("(2)+(1,1)"), &SymFunc::one()), sf("(2)+(1,1)"));
        assert!(mult(&sf("(2)"), &SymFunc::zero()).is_zero());
    }

    #[test]
    fn worked_product() {
        let f = mult_monomial(&p("(2,1,1)"), &p("(2,1)"));
        assert_eq!(
            f.to_string(),
            "(4,2,1) + 3(4,1,1,1) + 2(3,3,1) + 2(3,2,2) + 3(3,2,1,1) + 6(2,2,2,1) + 6(2,2,1,1,1)"
        );
        assert_eq!(f.homogeneous_weight(), Some(7));
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["0", "(4,2,1) + 3(4,1,1,1)", "-(2) - 2(1,1)", "()", "12(3) - 7()"] {
            assert_eq!(sf(s).to_string(), s);
        }
        assert_eq!(sf("2*((1)^2) + (2) - (2)"), sf("2(1,1)"));
        for bad in ["", "(1) (2)", "3", "(1) +", "--(1)", "(1,2)"] {
            assert!(bad.parse::<SymFunc>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn json_round_trip() {
        let f = sf("(4,2,1) - 3(4,1,1,1)");
        let j = f.to_json().to_string();
        assert_eq!(j, r#"{"terms":[{"coeff":1,"parts":[4,2,1]},{"coeff":-3,"parts":[4,1,1,1]}]}"#);
        assert_eq!(SymFunc::from_json_str(&j).unwrap(), f);
        let big = SymFunc::term(p("(1)"), BigInt::from(10).pow(30));
        assert_eq!(SymFunc::from_json_str(&big.to_json().to_string()).unwrap(), big);
        assert!(SymFunc::from_json_str(r#"{"terms":[{"parts":[1,2],"coeff":1}]}"#).is_err());
    }

    #[test]
    fn reductions() {
        assert_eq!(reduce_mod(&sf("(2) + 2(1,1)"), 2).unwrap(), sf("(2)"));
        assert!(reduce_mod(&sf("6(2,2,2,1)"), 3).unwrap().is_zero());
        assert!(reduce_mod(&SymFunc::zero(), 5).unwrap().is_zero());
        assert_eq!(reduce_mod(&sf("-(1)"), 5).unwrap(), sf("4(1)"));
        assert!(matches!(reduce_mod(&sf("(1)"), 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn homogeneity() {
        assert_eq!(sf("(2)+(1)").homogeneous_weight(), None);
        assert!(sf("(2)+(1)").require_homogeneous().is_err());
        assert_eq!(SymFunc::zero().require_homogeneous().unwrap(), None);
    }
}
