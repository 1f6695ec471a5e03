use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::json;

use super::power::{steenrod_power, PrimeContext};
use crate::arith::{check_prime, mod_p};
use crate::error::{Error, Result};
use crate::symmfunc::{dominated, monomial_to_elementary_mod, partitions_of, zero_one_count, ChernPoly, Partition, SymFunc};

/// `c_k` written, modulo decomposables, as a multiple of a Steenrod image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub p: u64,
    pub k: u32,
    pub lambda: u32,
    /// `i` in `k = lambda p^i`.
    pub i: u32,
    pub source_index: u32,
    /// Exponent of the operation `P^{op_exponent}` (`Sq^{2 op_exponent}` at p = 2).
    pub op_exponent: u32,
    pub leading_coeff: u64,
    pub decomposable_part: ChernPoly,
    pub verified: bool,
}

impl DecompositionCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "k": self.k,
            "op_exponent": self.op_exponent,
            "source": self.source_index,
            "leading_coeff": self.leading_coeff,
            "decomposable": self.decomposable_part.to_json(),
            "verified": self.verified,
        })
    }
}

/// Splits `k = lambda p^i` with `p` not dividing `lambda`.
pub fn split_prime_power(k: u32, p: u64) -> (u32, u32) {
    let (mut lambda, mut i) = (k, 0);
    while lambda > 0 && (lambda as u64).is_multiple_of(p) {
        lambda /= p as u32;
        i += 1;
    }
    (lambda, i)
}

/// True when `k = lambda p^i` with `lambda > p`.
pub fn eligible(p: u64, k: u32) -> bool {
    let (lambda, _) = split_prime_power(k, p);
    lambda as u64 > p
}

/// Operation exponent and source index for `c_k`:
/// odd p uses `P^{p^i}(c_{(lambda-p+1)p^i})`; at p = 2, `lambda = 3 mod 4`
/// uses `P^{2^i}(c_{(lambda-1)2^i})` and `lambda = 1 mod 4` uses
/// `P^{2^{i+1}}(c_{(lambda-2)2^i})`.
pub fn decomposition_plan(p: u64, k: u32) -> Result<(u32, u32, u32, u32)> {
    check_prime(p)?;
    let (lambda, i) = split_prime_power(k, p);
    if k == 0 || lambda as u64 <= p {
        return Err(Error::Precondition(format!("k={k} is not lambda*p^i with lambda > p={p}")));
    }
    let pi = (p as u32).pow(i);
    let (op, source) = if p != 2 {
        (pi, (lambda - p as u32 + 1) * pi)
    } else if lambda % 4 == 3 {
        (pi, (lambda - 1) * pi)
    } else {
        (2 * pi, (lambda - 2) * pi)
    };
    Ok((lambda, i, op, source))
}

/// Builds and independently re-verifies the certificate for `c_k`.
pub fn decompose_chern(p: u64, k: u32) -> Result<DecompositionCertificate> {
    let (lambda, i, op, source) = decomposition_plan(p, k)?;
    let ctx = PrimeContext::chern(p)?;
    let image = steenrod_power(ctx, op, &SymFunc::elementary(source as usize))?;
    let profile = monomial_to_elementary_mod(&image, p)?;
    let ck = Partition::from_unsorted(vec![k]);
    let leading = mod_p(&profile.coeff(&ck), p);
    let decomposable = profile.without(&ck);
    let all_products = decomposable.iter().all(|(key, _)| key.len() >= 2);
    let recomputed = chern_to_monomial_mod(&profile, p, k) == image;
    Ok(DecompositionCertificate {
        p,
        k,
        lambda,
        i,
        source_index: source,
        op_exponent: op,
        leading_coeff: leading,
        decomposable_part: decomposable,
        verified: leading != 0 && all_products && recomputed,
    })
}

/// Monomial expansion of a weight-`w` Chern polynomial mod p, computed term
/// by term from 0-1 matrix counts rather than by multiplication.
pub fn chern_to_monomial_mod(g: &ChernPoly, p: u64, w: u32) -> SymFunc {
    let Some(top) = g.iter().map(|(key, _)| key.conjugate()).max() else {
        return SymFunc::zero();
    };
    let lower: Vec<Partition> = partitions_of(w).into_iter().filter(|q| *q <= top).collect();
    let mut out = SymFunc::zero();
    for rho in &lower {
        let mut c = BigInt::zero();
        for (key, v) in g.iter() {
            if key.weight() == w && dominated(rho, &key.conjugate()) {
                c += v * zero_one_count(key, rho);
            }
        }
        out.add_term(rho.clone(), BigInt::from(mod_p(&c, p)));
    }
    out
}
