//! Implicit equations of images of a curve under pairs of functions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bipoly::BiPoly;
use crate::buium::{primitive_int, reduction_exponent};
use crate::curve::RationalFunction;
use crate::error::{Error, Result};
use crate::linalg::kernel;

fn degree(f: &RationalFunction) -> i64 {
    f.num.total_degree().max(f.den.total_degree())
}

/// H(X, Y) of least total degree with H(f, g) = 0 on h = 0, found among
/// bidegrees (a, b) with a + b ≤ `max_total`.
///
/// Columns are X^a Y^b ↦ num_f^a den_f^(dx−a) num_g^b den_g^(dy−b), reduced
/// modulo h with one common pseudo-division exponent so the map stays linear.
pub fn image_curve(
    h: &BiPoly<BigInt>,
    f: &RationalFunction,
    g: &RationalFunction,
    max_total: u32,
) -> Result<BiPoly<BigInt>> {
    let pows = |a: &BiPoly<BigInt>, n: u32| -> Vec<BiPoly<BigInt>> {
        let mut v = vec![BiPoly::constant(BigInt::from(1))];
        for i in 0..n as usize {
            v.push(v[i].mul(a));
        }
        v
    };
    let cap = max_total.min((degree(f) + degree(g)) as u32 * h.total_degree().max(1) as u32);
    for total in 1..=cap {
        for dx in 0..=total {
            let dy = total - dx;
            let (pf, qf) = (pows(&f.num, dx), pows(&f.den, dx));
            let (pg, qg) = (pows(&g.num, dy), pows(&g.den, dy));
            let mut keys = Vec::new();
            let mut cols = Vec::new();
            for a in 0..=dx {
                let fa = pf[a as usize].mul(&qf[(dx - a) as usize]);
                for b in 0..=dy {
                    keys.push((a, b));
                    cols.push(fa.mul(&pg[b as usize]).mul(&qg[(dy - b) as usize]));
                }
            }
            let e = reduction_exponent(&cols.iter().collect::<Vec<_>>(), h);
            let red: Vec<BiPoly<BigInt>> = cols.iter().map(|c| c.reduce_fixed(h, e)).collect();
            let mut monos: Vec<(u32, u32)> = red.iter().flat_map(|r| r.terms.keys().copied()).collect();
            monos.sort();
            monos.dedup();
            let m: Vec<Vec<BigRational>> = monos
                .iter()
                .map(|k| {
                    red.iter()
                        .map(|r| BigRational::from_integer(r.terms.get(k).cloned().unwrap_or_else(BigInt::zero)))
                        .collect()
                })
                .collect();
            let ker = kernel(&m, keys.len());
            if let Some(v) = ker.first() {
                let hh = BiPoly::from_terms(
                    keys.iter()
                        .zip(v)
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(&k, c)| (k, c.clone())),
                );
                return Ok(primitive_int(&hh));
            }
        }
    }
    Err(Error::InvalidInput(format!(
        "no relation between the pair of total degree at most {cap}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_fn(c: &[i64]) -> RationalFunction {
        RationalFunction::poly(BiPoly::from_int_terms(
            &c.iter().enumerate().map(|(i, &v)| ((i as u32, 0), v)).collect::<Vec<_>>(),
        ))
    }

    #[test]
    fn line_pairs() {
        let h = BiPoly::from_int_terms(&[((0, 1), 1), ((1, 0), -1)]);
        let (a, b, c) = (t_fn(&[0, 1]), t_fn(&[1, -1]), t_fn(&[1, 1]));
        // X + Y − 1
        let hab = image_curve(&h, &a, &b, 8).unwrap();
        assert_eq!(hab, primitive_int(&BiPoly::from_int_terms(&[((1, 0), 1), ((0, 1), 1), ((0, 0), -1)])));
        // X + Y − 2
        let hbc = image_curve(&h, &b, &c, 8).unwrap();
        assert_eq!(hbc, primitive_int(&BiPoly::from_int_terms(&[((1, 0), 1), ((0, 1), 1), ((0, 0), -2)])));
        // (t, t²): Y − X²
        let sq = t_fn(&[0, 0, 1]);
        let hs = image_curve(&h, &a, &sq, 8).unwrap();
        assert_eq!(hs, primitive_int(&BiPoly::from_int_terms(&[((0, 1), 1), ((2, 0), -1)])));
    }

    #[test]
    fn coordinates_on_a_conic() {
        // on x² + y² = 1 the functions x and y satisfy the curve itself
        let h = BiPoly::from_int_terms(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -1)]);
        let got = image_curve(&h, &RationalFunction::x(), &RationalFunction::y(), 6).unwrap();
        assert_eq!(got, primitive_int(&h));
    }
}
