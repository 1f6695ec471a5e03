//! Exact linear algebra over `Q` and `F_p`.
//!
//! Scalars are always `BigRational`; for `F_p` every stored value is an
//! integer in `0..p` and all operations reduce.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{inv_mod, mod_p, rational_mod_p};
use crate::error::{Error, Result};

pub type Scalar = BigRational;
pub type Matrix = Vec<Vec<Scalar>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Invalid(format!("bad field {s:?}")))?;
            crate::arith::check_prime(p)?;
            return Ok(Field::Prime(p));
        }
        Err(Error::Invalid(format!("unknown field {s:?}; expected Q or Fp:<p>")))
    }
}

impl Field {
    /// Maps an arbitrary rational into the field.
    pub fn embed(&self, x: &Scalar) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(x.clone()),
            Field::Prime(p) => rational_mod_p(x, *p)
                .map(|r| BigRational::from_integer(BigInt::from(r)))
                .ok_or_else(|| Error::Invalid(format!("{x} has denominator divisible by {p}"))),
        }
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        let v = BigRational::from_integer(BigInt::from(x));
        self.embed(&v).expect("integers embed in every field")
    }

    fn reduce(&self, x: Scalar) -> Scalar {
        match self {
            Field::Rational => x,
            Field::Prime(p) => {
                debug_assert!(x.is_integer());
                BigRational::from_integer(BigInt::from(mod_p(x.numer(), *p)))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            Field::Rational => a.recip(),
            Field::Prime(p) => {
                let r = mod_p(a.numer(), *p);
                let i = inv_mod(r, *p).expect("nonzero residue is invertible");
                BigRational::from_integer(BigInt::from(i))
            }
        }
    }

    pub fn size(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p),
        }
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(field: Field, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = field.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = field.mul(&f, &m[r][j]);
                    m[i][j] = field.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(field: Field, m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(field, &mut m).len()
}

/// Solves `A x = b`. Free variables are set to zero, which gives the
/// solution with the fewest nonzero leading coordinates.
pub fn solve(field: Field, a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    if a.is_empty() {
        return Some(vec![Scalar::zero(); cols]);
    }
    let pivots = rref(field, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the null space `{x : A x = 0}`.
pub fn nullspace(field: Field, a: &Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    let mut m = a.clone();
    let pivots = rref(field, &mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&m[r][f]);
            }
            v
        })
        .collect()
}

pub fn transpose(m: &Matrix, cols: usize) -> Matrix {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec(field: Field, m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Scalar::zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
        })
        .collect()
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(field: Field, m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Rank of a small integer matrix, computed fraction-free.
///
/// Falls back to rational elimination when intermediate values leave `i128`.
pub fn int_rank(rows: &[&[i64]]) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let n = m.len();
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        if rank == n {
            break;
        }
        let Some(pr) = (rank..n).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        for i in rank + 1..n {
            for j in c + 1..cols {
                let v = m[rank][c]
                    .checked_mul(m[i][j])
                    .and_then(|x| m[i][c].checked_mul(m[rank][j]).and_then(|y| x.checked_sub(y)));
                match v {
                    Some(v) => m[i][j] = v / prev,
                    None => return rational_rank(rows),
                }
            }
            m[i][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
    }
    rank
}

fn rational_rank(rows: &[&[i64]]) -> usize {
    let m: Matrix = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    rank(Field::Rational, &m)
}

/// Determinant of a square integer matrix by cofactor expansion.
pub fn int_det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => {
            let mut acc = 0i64;
            for c in 0..n {
                if m[0][c] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                acc += s * m[0][c] * int_det(&minor);
            }
            acc
        }
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn abs_max(v: &[Scalar]) -> Scalar {
    v.iter().map(|x| x.abs()).fold(Scalar::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn rank_depends_on_field() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(rank(Field::Rational, &a), 2);
        let a2: Matrix = a.iter().map(|r| r.iter().map(|x| Field::Prime(2).embed(x).unwrap()).collect()).collect();
        assert_eq!(rank(Field::Prime(2), &a2), 1);
    }

    #[test]
    fn solve_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let x = solve(Field::Rational, &a, &[rat(3), rat(6)]).unwrap();
        assert_eq!(x, vec![rat(3), rat(0), rat(0)]);
        assert!(solve(Field::Rational, &a, &[rat(1), rat(1)]).is_none());
        let ns = nullspace(Field::Rational, &a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(is_zero_vec(&mat_vec(Field::Rational, &a, &v)));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = inverse(Field::Rational, &a).unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(Field::Rational, &m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn integer_rank_and_det() {
        let r1: &[i64] = &[1, 2, 3];
        let r2: &[i64] = &[2, 4, 6];
        let r3: &[i64] = &[0, 1, 1];
        assert_eq!(int_rank(&[r1, r2]), 1);
        assert_eq!(int_rank(&[r1, r2, r3]), 2);
        let big: &[i64] = &[i64::MAX / 2, 1, 0];
        let big2: &[i64] = &[1, i64::MAX / 3, 7];
        assert_eq!(int_rank(&[big, big2, r3]), 3);
        let d = int_det(&[vec![0, 0, 1, 1], vec![0, 0, 1, -1], vec![1, 0, 1, 0], vec![0, 1, 1, 0]]);
        assert_eq!(d.abs(), 2);
    }
}
