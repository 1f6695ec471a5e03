//! Integer and rational helpers shared by the algebraic modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes at or above this bound are rejected: residues are multiplied in `u64`.
pub const PRIME_BOUND: u64 = 1 << 32;

pub fn check_prime(p: u64) -> Result<()> {
    if p < PRIME_BOUND && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Generalized binomial coefficient `n(n-1)...(n-k+1)/k!` for any integer `n`.
///
/// `binom(-1, 0) = 1`, `binom(n, k) = 0` for `0 <= n < k`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// `n! / (k_1! ... k_l!)` where `n = sum k_i`.
pub fn multinomial(parts: &[usize]) -> BigInt {
    let mut total = 0usize;
    let mut acc = BigInt::one();
    for &k in parts {
        for j in 1..=k {
            total += 1;
            acc *= BigInt::from(total);
            acc /= BigInt::from(j);
        }
    }
    acc
}

/// Least nonnegative residue of `x` modulo `p`.
pub fn mod_p(x: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    x.mod_floor(&m).to_u64().expect("residue fits in u64")
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(p as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(p as i128) as u64)
}

/// Residue of a rational number modulo `p`; `None` when `p` divides the denominator.
pub fn rational_mod_p(x: &BigRational, p: u64) -> Option<u64> {
    let num = mod_p(x.numer(), p);
    let den = mod_p(x.denom(), p);
    let inv = inv_mod(den, p)?;
    Some(((num as u128 * inv as u128) % p as u128) as u64)
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Invalid(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn abs_i64(x: &BigInt) -> Option<i64> {
    x.abs().to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(check_prime(9).is_err());
        assert!(is_prime(4_294_967_291));
        assert!(check_prime(4_294_967_291).is_ok());
        // 2^64 - 59 is prime but out of range; must not overflow.
        assert!(check_prime(18_446_744_073_709_551_557).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(-1, 0), BigInt::from(1));
        assert_eq!(binom(-1, 3), BigInt::from(-1));
        assert_eq!(binom(2, 3), BigInt::from(0));
        assert_eq!(binom(7, -1), BigInt::from(0));
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[1, 1]), BigInt::from(2));
        assert_eq!(multinomial(&[2, 1]), BigInt::from(3));
        assert_eq!(multinomial(&[2, 2, 2]), BigInt::from(90));
        assert_eq!(multinomial(&[]), BigInt::from(1));
    }

    #[test]
    fn rationals_round_trip() {
        let x = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&x), "-3/2");
        assert_eq!(format_rational(&parse_rational(" 7 ").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert_eq!(rational_mod_p(&x, 5), Some(1)); // -3 * 2^{-1} = -3*3 = -9 = 1 mod 5
        assert_eq!(rational_mod_p(&x, 2), None);
    }
}
