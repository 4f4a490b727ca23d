//! Small exact linear algebra over `BigInt` / `BigRational`.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Everything here is sized for
//! desk-scale problems (dimension below ten), so plain Gaussian elimination
//! is all we need.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn to_rat(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

/// Returns the integer value of `x` if its denominator is one.
pub fn as_integer(x: &BigRational) -> Option<BigInt> {
    if x.is_integer() {
        Some(x.to_integer())
    } else {
        None
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(col, p);
        let pivot = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..n {
            if i != col && !aug[i][col].is_zero() {
                let factor = aug[i][col].clone();
                let pivot = aug[col].clone();
                for (x, p) in aug[i][col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &factor * p;
                }
            }
        }
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn inverse(a: &[Vec<BigRational>]) -> Option<RatMatrix> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<BigRational> = (0..n)
            .map(|i| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        cols.push(solve(a, &e)?);
    }
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect(),
    )
}

/// Inverse of a unimodular integer matrix. `None` if singular or the
/// inverse is not integral.
pub fn unimodular_inverse(a: &[Vec<BigInt>]) -> Option<IntMatrix> {
    let inv = inverse(&to_rat(a))?;
    inv.iter()
        .map(|row| row.iter().map(as_integer).collect::<Option<Vec<_>>>())
        .collect()
}

pub fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a = to_rat(rows);
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if !a[i][col].is_zero() {
                let f = &a[i][col] / &a[r][col];
                let pivot = a[r].clone();
                for (x, p) in a[i][col..cols].iter_mut().zip(&pivot[col..cols]) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Divides out the content of an integer vector (zero stays zero).
pub fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// Clears denominators of a rational vector and makes it primitive.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    primitive(
        v.iter()
            .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
            .collect(),
    )
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_nonneg(v: &[BigInt]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
