//! Brute-force evaluation in finitely many commuting variables.
//!
//! Nothing here uses matchings; these routines exist to cross-check the
//! matching product and the Steenrod machinery.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::partition::Partition;
use super::symfunc::SymFunc;
use crate::error::{Error, Result};

/// Polynomial in `x_1..x_N` as exponent tuple -> coefficient.
pub type PolyTable = BTreeMap<Vec<u32>, BigInt>;

/// All distinct rearrangements of `v`.
pub fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // next_permutation over the sorted multiset
    loop {
        let n = sorted.len();
        let Some(i) = (1..n).rev().find(|&i| sorted[i - 1] < sorted[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| sorted[j] > sorted[i - 1]).expect("exists");
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
        out.push(sorted.clone());
    }
    out
}

fn padded(p: &Partition, n: usize) -> Vec<u32> {
    let mut v = p.parts().to_vec();
    v.resize(n, 0);
    v
}

/// Full coefficient table of `f` as a polynomial in `n` variables.
pub fn expand_oracle(f: &SymFunc, n: usize) -> Result<PolyTable> {
    if f.max_parts() > n {
        return Err(Error::BelowFaithfulness { vars: n, parts: f.max_parts() });
    }
    let mut out = PolyTable::new();
    for (p, c) in f.iter() {
        for e in distinct_permutations(&padded(p, n)) {
            *out.entry(e).or_default() += c;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

pub fn poly_mul(a: &PolyTable, b: &PolyTable) -> PolyTable {
    let mut out = PolyTable::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_default() += ca * cb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Reads a symmetric polynomial back in the monomial basis.
///
/// Fails if the table is not symmetric.
pub fn collect(t: &PolyTable) -> Result<SymFunc> {
    let mut f = SymFunc::zero();
    for (e, c) in t {
        if e.windows(2).all(|w| w[0] >= w[1]) {
            f.add_term(Partition::from_unsorted(e.clone()), c.clone());
        }
    }
    let n = t.keys().next().map_or(0, |e| e.len());
    if expand_oracle(&f, n)? != *t {
        return Err(Error::Invalid("polynomial is not symmetric".into()));
    }
    Ok(f)
}

/// Product `m_a * m_b` computed from monomial pairs in `parts(a)+parts(b)`
/// variables.
///
/// Only pairs `(alpha, beta)` with `alpha + beta` non-increasing are visited:
/// the coefficient of `m_nu` in a symmetric polynomial is the coefficient of
/// the single monomial `x^nu`.
pub fn product_oracle(a: &Partition, b: &Partition) -> SymFunc {
    let n = a.len() + b.len();
    let mut ra = multiset(&padded(a, n));
    let mut rb = multiset(&padded(b, n));
    let mut acc: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut cur = Vec::with_capacity(n);
    walk(&mut ra, &mut rb, u32::MAX, n, &mut cur, &mut acc);
    acc.into_iter().map(|(e, c)| (Partition::from_unsorted(e), BigInt::from(c))).collect()
}

fn multiset(v: &[u32]) -> Vec<(u32, usize)> {
    let mut m: BTreeMap<u32, usize> = BTreeMap::new();
    for &x in v {
        *m.entry(x).or_default() += 1;
    }
    m.into_iter().collect()
}

fn walk(
    ra: &mut Vec<(u32, usize)>,
    rb: &mut Vec<(u32, usize)>,
    bound: u32,
    left: usize,
    cur: &mut Vec<u32>,
    acc: &mut BTreeMap<Vec<u32>, u64>,
) {
    if left == 0 {
        *acc.entry(cur.clone()).or_default() += 1;
        return;
    }
    for i in 0..ra.len() {
        if ra[i].1 == 0 {
            continue;
        }
        for j in 0..rb.len() {
            if rb[j].1 == 0 {
                continue;
            }
            let s = ra[i].0 + rb[j].0;
            if s > bound {
                continue;
            }
            ra[i].1 -= 1;
            rb[j].1 -= 1;
            cur.push(s);
            walk(ra, rb, s, left - 1, cur, acc);
            cur.pop();
            ra[i].1 += 1;
            rb[j].1 += 1;
        }
    }
}
