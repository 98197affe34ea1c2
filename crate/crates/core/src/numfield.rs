//! Exact arithmetic in ℚ[t]/(φ) for an irreducible φ ∈ ℤ[t].

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::upoly::UPoly;
use crate::zpoly::ZPoly;

pub type QPoly = UPoly<BigRational>;

#[derive(Clone, Debug)]
pub struct NumberField {
    pub modulus: QPoly,
}

pub fn to_q(f: &ZPoly) -> QPoly {
    f.map(|c| BigRational::from_integer(c.clone()))
}

impl NumberField {
    pub fn new(phi: &ZPoly) -> Result<Self> {
        if phi.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput("constant modulus".into()));
        }
        Ok(NumberField { modulus: to_q(phi).monic() })
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn reduce(&self, a: &QPoly) -> QPoly {
        a.rem(&self.modulus)
    }

    pub fn elem(&self, f: &ZPoly) -> QPoly {
        self.reduce(&to_q(f))
    }

    pub fn one(&self) -> QPoly {
        UPoly::constant(BigRational::from_integer(BigInt::from(1)))
    }

    pub fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a.mulmod(b, &self.modulus)
    }

    pub fn inv(&self, a: &QPoly) -> Result<QPoly> {
        a.inv_mod(&self.modulus).ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, a: &QPoly, e: i64) -> Result<QPoly> {
        let base = if e < 0 { self.inv(a)? } else { self.reduce(a) };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    /// c(a) for an integer polynomial c.
    pub fn eval(&self, c: &ZPoly, a: &QPoly) -> QPoly {
        let mut acc = UPoly::zero();
        for k in c.coeffs.iter().rev() {
            acc = self.mul(&acc, a).add(&UPoly::constant(BigRational::from_integer(k.clone())));
        }
        self.reduce(&acc)
    }

    /// The value of Π (num_i/den_i)^{e_i} at the class of t.
    pub fn monomial(&self, fs: &[(ZPoly, ZPoly)], e: &[i64]) -> Result<QPoly> {
        let mut acc = self.one();
        for ((num, den), &k) in fs.iter().zip(e) {
            if k == 0 {
                continue;
            }
            let v = self.mul(&self.elem(num), &self.inv(&self.elem(den))?);
            acc = self.mul(&acc, &self.pow(&v, k)?);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpoly::{cyclotomic, zpoly};

    #[test]
    fn sixth_root_relations() {
        let k = NumberField::new(&zpoly(&[1, -1, 1])).unwrap();
        let t = k.elem(&zpoly(&[0, 1]));
        assert_eq!(k.pow(&t, 6).unwrap(), k.one());
        assert!(k.eval(&cyclotomic(6), &t).is_zero());
        let fs = vec![(zpoly(&[0, 1]), zpoly(&[1])), (zpoly(&[1, -1]), zpoly(&[1]))];
        assert_eq!(k.monomial(&fs, &[1, 1]).unwrap(), k.one());
        assert!(k.eval(&cyclotomic(3), &k.monomial(&fs, &[1, -1]).unwrap()).is_zero());
    }
}
