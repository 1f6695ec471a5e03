//! Matchings: equivalence classes of contributing monomial pairs in a
//! product of two monomial symmetric functions.
//!
//! A contributing term `x^alpha * x^beta` is written as a two-row exponent
//! matrix whose columns are `(alpha_j, beta_j)`. Permuting variables permutes
//! columns, so a class is determined by the multiset of nonzero columns. The
//! canonical representative sorts columns by decreasing column sum and, within
//! a block of equal sums, by decreasing top entry.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::partition::Partition;
use crate::arith::multinomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Matching {
    columns: Vec<(u32, u32)>,
}

/// A maximal run of columns with constant sum `o_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub sum: u32,
    /// Number of columns in the block, `r_i`.
    pub size: usize,
    /// Column types and their counts `r_{a,b}`, in canonical order.
    pub column_counts: Vec<((u32, u32), usize)>,
}

impl Matching {
    /// Builds the canonical representative from arbitrary columns; `(0,0)`
    /// columns are discarded.
    pub fn from_columns(mut columns: Vec<(u32, u32)>) -> Self {
        columns.retain(|&(t, b)| t != 0 || b != 0);
        columns.sort_unstable_by(|x, y| (y.0 + y.1, y.0).cmp(&(x.0 + x.1, x.0)));
        Matching { columns }
    }

    pub fn columns(&self) -> &[(u32, u32)] {
        &self.columns
    }

    pub fn top(&self) -> Partition {
        Partition::from_unsorted(self.columns.iter().map(|c| c.0).collect())
    }

    pub fn bottom(&self) -> Partition {
        Partition::from_unsorted(self.columns.iter().map(|c| c.1).collect())
    }

    /// The partition of column sums; canonical order makes it already sorted.
    pub fn target(&self) -> Partition {
        Partition::new(self.columns.iter().map(|c| c.0 + c.1).collect()).expect("canonical columns are sorted")
    }

    pub fn blocks(&self) -> Vec<Block> {
        let mut out: Vec<Block> = Vec::new();
        for &col in &self.columns {
            let s = col.0 + col.1;
            match out.last_mut() {
                Some(b) if b.sum == s => {
                    b.size += 1;
                    match b.column_counts.last_mut() {
                        Some((c, n)) if *c == col => *n += 1,
                        _ => b.column_counts.push((col, 1)),
                    }
                }
                _ => out.push(Block { sum: s, size: 1, column_counts: vec![(col, 1)] }),
            }
        }
        out
    }

    /// Number of matchings in this class whose column sums read off the
    /// target in order: the product over blocks of
    /// `multinomial(r_i; (r_{a,b} | a+b = o_i))`.
    pub fn coefficient(&self) -> BigInt {
        self.blocks().iter().fold(BigInt::one(), |acc, b| {
            let counts: Vec<usize> = b.column_counts.iter().map(|&(_, n)| n).collect();
            acc * multinomial(&counts)
        })
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top: Vec<String> = self.columns.iter().map(|c| c.0.to_string()).collect();
        let bot: Vec<String> = self.columns.iter().map(|c| c.1.to_string()).collect();
        write!(f, "[[{}],[{}]]", top.join(","), bot.join(","))
    }
}

pub fn matching_coefficient(m: &Matching) -> BigInt {
    m.coefficient()
}

/// Every matching class of `pn * pm`, canonical, without duplicates.
///
/// Classes correspond one-to-one to count tables `r_{a,b}`: how many parts of
/// value `b` in `pm` sit over parts of value `a` in `pn` (or over an empty
/// slot, `a = 0`). The tables are enumerated directly, so no class is
/// generated twice. Output is sorted by target partition (descending), then by
/// columns (descending).
pub fn enumerate_matchings(pn: &Partition, pm: &Partition) -> Vec<Matching> {
    let tops = pn.multiplicities();
    let bottoms = pm.multiplicities();
    let mut capacity: Vec<usize> = tops.iter().map(|&(_, r)| r).collect();
    let mut out = Vec::new();
    let mut cols: Vec<(u32, u32)> = Vec::new();
    distribute(&tops, &bottoms, 0, &mut capacity, &mut cols, &mut out);
    out.sort_unstable_by(|a, b| (b.target(), &b.columns).cmp(&(a.target(), &a.columns)));
    out
}

fn distribute(
    tops: &[(u32, usize)],
    bottoms: &[(u32, usize)],
    bi: usize,
    capacity: &mut Vec<usize>,
    cols: &mut Vec<(u32, u32)>,
    out: &mut Vec<Matching>,
) {
    if bi == bottoms.len() {
        let mut all = cols.clone();
        for (&(a, _), &left) in tops.iter().zip(capacity.iter()) {
            all.extend(std::iter::repeat_n((a, 0), left));
        }
        out.push(Matching::from_columns(all));
        return;
    }
    let (value, count) = bottoms[bi];
    place(tops, bottoms, bi, value, count, 0, capacity, cols, out);
}

/// Places `left` copies of bottom value `value` over top groups `ti..`; the
/// remainder goes over empty slots.
#[allow(clippy::too_many_arguments)]
fn place(
    tops: &[(u32, usize)],
    bottoms: &[(u32, usize)],
    bi: usize,
    value: u32,
    left: usize,
    ti: usize,
    capacity: &mut Vec<usize>,
    cols: &mut Vec<(u32, u32)>,
    out: &mut Vec<Matching>,
) {
    if ti == tops.len() {
        let mark = cols.len();
        cols.extend(std::iter::repeat_n((0, value), left));
        distribute(tops, bottoms, bi + 1, capacity, cols, out);
        cols.truncate(mark);
        return;
    }
    let max = left.min(capacity[ti]);
    for x in 0..=max {
        capacity[ti] -= x;
        let mark = cols.len();
        cols.extend(std::iter::repeat_n((tops[ti].0, value), x));
        place(tops, bottoms, bi, value, left - x, ti + 1, capacity, cols, out);
        cols.truncate(mark);
        capacity[ti] += x;
    }
}
