use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::power::{power_of_monomial, steenrod_power, PrimeContext};
use crate::arith::{binom, check_prime, mod_p};
use crate::error::{Error, Result};
use crate::symmfunc::{monomial_to_elementary_mod, mult, mult_monomial, partitions_of, partitions_up_to, ChernPoly, Partition, SymFunc};

/// `P^i(fg) = sum_{a+b=i} P^a(f) P^b(g)` mod p.
pub fn verify_cartan(ctx: PrimeContext, i: u32, f: &SymFunc, g: &SymFunc) -> Result<bool> {
    let p = ctx.p();
    let lhs = steenrod_power(ctx, i, &mult(f, g))?;
    let mut rhs = SymFunc::zero();
    for a in 0..=i {
        let pa = steenrod_power(ctx, a, f)?;
        let pb = steenrod_power(ctx, i - a, g)?;
        rhs = rhs.add(&mult(&pa, &pb));
    }
    Ok(lhs == rhs.reduce_mod_unchecked(p))
}

/// One term `coeff * P^{outer} P^{inner}` of the right side of an Adem relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdemTerm {
    pub coeff: u64,
    pub outer: u32,
    pub inner: u32,
}

/// `P^a P^b = sum_{j <= a/p} (-1)^{a+j} C((p-1)(b-j)-1, a-pj) P^{a+b-j} P^j`
/// for `a < pb`, coefficients reduced mod p.
pub fn adem_expansion(p: u64, a: u32, b: u32) -> Result<Vec<AdemTerm>> {
    check_prime(p)?;
    if a as u64 >= p * b as u64 {
        return Err(Error::Precondition(format!("Adem relation needs a < pb, got a={a}, b={b}, p={p}")));
    }
    let mut out = Vec::new();
    for j in 0..=(a as u64 / p) as u32 {
        let top = (p as i64 - 1) * (b as i64 - j as i64) - 1;
        let mut c = binom(top, a as i64 - p as i64 * j as i64);
        if (a + j) % 2 == 1 {
            c = -c;
        }
        let c = mod_p(&c, p);
        if c != 0 {
            out.push(AdemTerm { coeff: c, outer: a + b - j, inner: j });
        }
    }
    Ok(out)
}

/// Checks the Adem relation for `(a, b)` on every monomial of weight at most
/// `weight_bound`.
pub fn verify_adem_instance(ctx: PrimeContext, a: u32, b: u32, weight_bound: u32) -> Result<bool> {
    let p = ctx.p();
    let terms = adem_expansion(p, a, b)?;
    let ok = partitions_up_to(weight_bound).into_par_iter().all(|mu| {
        let f = SymFunc::monomial(mu);
        let lhs = twice(p, a, b, &f);
        let mut rhs = SymFunc::zero();
        for t in &terms {
            rhs = rhs.add(&twice(p, t.outer, t.inner, &f).scale(&BigInt::from(t.coeff)));
        }
        lhs == rhs.reduce_mod_unchecked(p)
    });
    Ok(ok)
}

/// `P^outer(P^inner(f))`.
fn twice(p: u64, outer: u32, inner: u32, f: &SymFunc) -> SymFunc {
    apply(p, outer, &apply(p, inner, f))
}

fn apply(p: u64, i: u32, f: &SymFunc) -> SymFunc {
    let mut out = SymFunc::zero();
    for (mu, c) in f.iter() {
        out = out.add(&power_of_monomial(p, i, mu).scale(c));
    }
    out.reduce_mod_unchecked(p)
}

/// Stiefel-Whitney class `w_j = ((1)^j)` on degree-1 roots.
fn w(j: u32) -> SymFunc {
    SymFunc::elementary(j as usize)
}

/// Right side of Wu's formula,
/// `Sq^i(w_{k-i}) = sum_{t=0}^{i} C(k-i-1-t, i-t) w_t w_{k-t}` mod 2.
pub fn wu_rhs(k: u32, i: u32) -> SymFunc {
    let mut out = SymFunc::zero();
    for t in 0..=i {
        let c = mod_p(&binom(k as i64 - i as i64 - 1 - t as i64, (i - t) as i64), 2);
        if c == 1 {
            out = out.add(&mult(&w(t), &w(k - t)));
        }
    }
    out.reduce_mod_unchecked(2)
}

/// Compares `Sq^i(w_{k-i})`, computed on degree-1 roots, with Wu's formula.
pub fn verify_wu(k: u32, i: u32) -> Result<bool> {
    if 2 * i > k {
        return Err(Error::Precondition(format!("Wu formula needs 0 <= i <= k - i, got k={k}, i={i}")));
    }
    let lhs = steenrod_power(PrimeContext::stiefel_whitney(), i, &w(k - i))?;
    Ok(lhs == wu_rhs(k, i))
}

/// Chern expansion of `P^i(c_source)` mod p.
pub fn chern_coefficient_profile(ctx: PrimeContext, i: u32, source: u32) -> Result<ChernPoly> {
    if ctx.var_degree() != 2 {
        return Err(Error::Precondition("Chern profiles need degree-2 variables".into()));
    }
    let image = steenrod_power(ctx, i, &SymFunc::elementary(source as usize))?;
    monomial_to_elementary_mod(&image, ctx.p())
}

/// Coefficient of `c_k` in `P^i(c_{k-(p-1)i})` mod p, cross-checked against
/// `C(k-(p-1)i-1, i)`.
pub fn bp_leading_coefficient(p: u64, k: u32, i: u32) -> Result<u64> {
    let ctx = PrimeContext::chern(p)?;
    let shift = ctx.weight_shift(i);
    if shift >= k {
        return Err(Error::Precondition(format!("need k - (p-1)i >= 1, got k={k}, i={i}, p={p}")));
    }
    let source = k - shift;
    let profile = chern_coefficient_profile(ctx, i, source)?;
    let got = mod_p(&profile.coeff(&Partition::from_unsorted(vec![k])), p);
    let expected = mod_p(&binom(source as i64 - 1, i as i64), p);
    if got != expected {
        return Err(Error::Consistency(format!(
            "coefficient of c_{k} in P^{i}(c_{source}) is {got}, expected {expected} (p={p})"
        )));
    }
    Ok(got)
}

/// `S_l`: partitions with some multiplicity not divisible by `p^l`.
pub fn in_sl(mu: &Partition, p: u64, l: u32) -> bool {
    let q = p.pow(l) as usize;
    mu.multiplicities().iter().any(|&(_, r)| r % q != 0)
}

/// A product `m_pm * m_po` with `pm` in `S_l` hitting `pn` outside `S_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlCounterexample {
    pub pm: Partition,
    pub po: Partition,
    pub pn: Partition,
    pub coeff: u64,
}

/// Searches all `pm in S_l`, `po` with `|pm| + |po| <= weight_bound` for a
/// product term outside `S_l` with coefficient nonzero mod p.
pub fn sl_ideal_counterexample(p: u64, l: u32, weight_bound: u32) -> Result<Option<SlCounterexample>> {
    check_prime(p)?;
    if l == 0 {
        return Err(Error::Precondition("l must be positive".into()));
    }
    let pms: Vec<Partition> = partitions_up_to(weight_bound).into_iter().filter(|m| in_sl(m, p, l)).collect();
    let found = pms.par_iter().find_map_first(|pm| {
        for wo in 0..=weight_bound - pm.weight() {
            for po in partitions_of(wo) {
                for (pn, c) in mult_monomial(pm, &po).iter() {
                    let c = mod_p(c, p);
                    if c != 0 && !in_sl(pn, p, l) {
                        return Some(SlCounterexample { pm: pm.clone(), po, pn: pn.clone(), coeff: c });
                    }
                }
            }
        }
        None
    });
    Ok(found)
}

pub fn verify_sl_ideal(p: u64, l: u32, weight_bound: u32) -> Result<bool> {
    Ok(sl_ideal_counterexample(p, l, weight_bound)?.is_none())
}
