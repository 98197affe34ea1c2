//! Exact linear algebra over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<BigRational>]) -> usize {
    rref(&mut m.to_vec()).len()
}

pub fn rank_int(m: &[Vec<i64>]) -> usize {
    let q: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    rank(&q)
}

/// A basis of the right kernel, each vector scaled to a primitive integer vector
/// with positive first nonzero entry.
pub fn kernel(m: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        out.push(primitive_vector(&v));
    }
    out
}

/// Clears denominators and content; the first nonzero entry becomes positive.
pub fn primitive_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
        -g
    } else {
        g
    };
    ints.iter().map(|x| x / &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        assert_eq!(rank_int(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]), 2);
        let r = |v: i64| BigRational::from_integer(BigInt::from(v));
        let m = vec![vec![r(1), r(2), r(3)], vec![r(0), r(1), r(1)]];
        let k = kernel(&m, 3);
        assert_eq!(k, vec![vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1)]]);
    }
}
