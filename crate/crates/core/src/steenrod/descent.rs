use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DescentRow {
    pub j: u32,
    /// `ceil(j(p-1)/lambda)`
    pub a_j: u32,
    /// `a_j lambda - j(p-1)`
    pub deg_factor: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentTrace {
    pub p: u64,
    pub lambda: u32,
    pub rows: Vec<DescentRow>,
    pub witness_a: Option<u32>,
}

/// `[x]_{m}`: least nonnegative residue.
pub fn residue(x: u64, m: u64) -> u64 {
    x % m
}

/// `p [a lambda]_{p-1} < a lambda`.
pub fn residue_inequality(p: u64, lambda: u32, a: u32) -> bool {
    let al = a as u64 * lambda as u64;
    p * residue(al, p - 1) < al
}

/// Tabulates `a_j` and the degree factors until the first `a` satisfying the
/// residue inequality; rows stop at the last `j` with `a_j = a`, where the
/// degree factor equals `[a lambda]_{p-1}`.
pub fn descent_trace(p: u64, lambda: u32) -> Result<DescentTrace> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Precondition(format!("p must be an odd prime, got {p}")));
    }
    if (lambda as u64).is_multiple_of(p) || lambda as u64 <= p {
        return Err(Error::Precondition(format!("need p not dividing lambda and lambda > p, got lambda={lambda}, p={p}")));
    }
    let half = ((p - 1) / 2) as u32;
    let witness = (1..=half).find(|&a| residue_inequality(p, lambda, a));
    let step = (p - 1) as u32;
    let last_a = witness.unwrap_or(half);
    let last_j = last_a * lambda / step;
    let rows = (1..=last_j)
        .map(|j| {
            let a_j = (j * step).div_ceil(lambda);
            DescentRow { j, a_j, deg_factor: a_j * lambda - j * step }
        })
        .collect();
    Ok(DescentTrace { p, lambda, rows, witness_a: witness })
}
