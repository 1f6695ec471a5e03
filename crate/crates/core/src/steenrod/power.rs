use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{binom, check_prime, mod_p};
use crate::error::{Error, Result};
use crate::symmfunc::{Partition, SymFunc};

/// A prime together with the degree of the variables.
///
/// `var_degree = 2` models Chern roots (`P^i` raises weight by `(p-1)i`);
/// `var_degree = 1` models Stiefel-Whitney roots at `p = 2` with raw `Sq^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeContext {
    p: u64,
    var_degree: u8,
}

impl PrimeContext {
    pub fn new(p: u64, var_degree: u8) -> Result<Self> {
        check_prime(p)?;
        match var_degree {
            2 => {}
            1 if p == 2 => {}
            1 => return Err(Error::Precondition("degree-1 variables require p = 2".into())),
            d => return Err(Error::Precondition(format!("variable degree must be 1 or 2, got {d}"))),
        }
        Ok(PrimeContext { p, var_degree })
    }

    /// Chern-root context at `p`.
    pub fn chern(p: u64) -> Result<Self> {
        Self::new(p, 2)
    }

    /// Stiefel-Whitney context, `p = 2` with degree-1 variables.
    pub fn stiefel_whitney() -> Self {
        PrimeContext { p: 2, var_degree: 1 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn var_degree(&self) -> u8 {
        self.var_degree
    }

    /// Weight added by the operation with exponent `i`.
    pub fn weight_shift(&self, i: u32) -> u32 {
        (self.p as u32 - 1) * i
    }
}

type PowerCache = RwLock<HashMap<(u64, u32, Partition), SymFunc>>;

fn cache() -> &'static PowerCache {
    static CACHE: OnceLock<PowerCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `P^i(f)` mod p (raw `Sq^i` for degree-1 variables).
///
/// Each variable transforms by the total power `x -> x + x^p`; `P^i` is the
/// part raising the total weight by `(p-1)i`.
pub fn steenrod_power(ctx: PrimeContext, i: u32, f: &SymFunc) -> Result<SymFunc> {
    f.require_homogeneous()?;
    let mut out = SymFunc::zero();
    for (mu, c) in f.iter() {
        let c = mod_p(c, ctx.p);
        if c == 0 {
            continue;
        }
        out = out.add(&power_of_monomial(ctx.p, i, mu).scale(&BigInt::from(c)));
    }
    Ok(out.reduce_mod_unchecked(ctx.p))
}

/// `Sq^j` on the context's variables. With degree-2 variables odd squares
/// vanish and `Sq^{2i} = P^i`.
pub fn sq(ctx: PrimeContext, j: u32, f: &SymFunc) -> Result<SymFunc> {
    if ctx.p != 2 {
        return Err(Error::Precondition("Sq is defined at p = 2".into()));
    }
    match ctx.var_degree {
        1 => steenrod_power(ctx, j, f),
        _ if j % 2 == 1 => {
            f.require_homogeneous()?;
            Ok(SymFunc::zero())
        }
        _ => steenrod_power(ctx, j / 2, f),
    }
}

/// `f^p` mod p: every part scaled by `p`.
pub fn frobenius_power(ctx: PrimeContext, f: &SymFunc) -> SymFunc {
    let p = ctx.p as u32;
    f.iter()
        .map(|(mu, c)| (mu.scaled(p), c.clone()))
        .collect::<SymFunc>()
        .reduce_mod_unchecked(ctx.p)
}

/// `P^i(m_mu)` mod p, memoized.
pub(crate) fn power_of_monomial(p: u64, i: u32, mu: &Partition) -> SymFunc {
    if i == 0 {
        return SymFunc::monomial(mu.clone());
    }
    if i > mu.weight() {
        return SymFunc::zero();
    }
    let key = (p, i, mu.clone());
    if let Some(v) = cache().read().expect("cache lock").get(&key) {
        return v.clone();
    }
    let v = compute_power(p, i, mu);
    cache().write().expect("cache lock").insert(key, v.clone());
    v
}

/// Works in `len(mu)` variables: a monomial `x^alpha` (alpha a rearrangement
/// of mu) maps to `prod_j sum_t C(alpha_j, t) x_j^{alpha_j + (p-1)t}`. Every
/// output exponent is positive, so `len(mu)` variables are faithful and the
/// coefficient of `m_nu` is that of the single monomial `x^nu`; only choices
/// giving non-increasing exponents are visited.
fn compute_power(p: u64, i: u32, mu: &Partition) -> SymFunc {
    let mut rest: Vec<(u32, usize)> = mu.multiplicities();
    let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut cur = Vec::with_capacity(mu.len());
    let total = mu.weight();
    walk(p, i, &mut rest, total, u32::MAX, 0, 1, &mut cur, &mut acc);
    acc.into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(e, c)| (Partition::new(e).expect("walk emits non-increasing exponents"), BigInt::from(c)))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn walk(
    p: u64,
    i: u32,
    rest: &mut Vec<(u32, usize)>,
    rest_weight: u32,
    bound: u32,
    used: u32,
    coeff: u64,
    cur: &mut Vec<u32>,
    acc: &mut HashMap<Vec<u32>, u64>,
) {
    if rest_weight == 0 {
        if used == i {
            let e = acc.entry(cur.clone()).or_default();
            *e = (*e + coeff) % p;
        }
        return;
    }
    if used + rest_weight < i {
        return;
    }
    let step = p as u32 - 1;
    for k in 0..rest.len() {
        if rest[k].1 == 0 {
            continue;
        }
        let a = rest[k].0;
        rest[k].1 -= 1;
        for t in 0..=a.min(i - used) {
            let e = a + step * t;
            if e > bound {
                break;
            }
            let b = mod_p(&binom(a as i64, t as i64), p);
            if b == 0 {
                continue;
            }
            cur.push(e);
            walk(p, i, rest, rest_weight - a, e, used + t, coeff * b % p, cur, acc);
            cur.pop();
        }
        rest[k].1 += 1;
    }
}
