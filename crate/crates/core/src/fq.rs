//! Finite fields F_q = F_p[θ]/(m(θ)) with a shared field descriptor.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fp::{FiniteField, Fp};
use crate::num_util::{inv_mod_u64, is_prime, mul_mod};
use crate::scalar::Scalar;
use crate::upoly::UPoly;

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FqField {
    pub p: u64,
    /// Monic modulus, constant term first, length `deg + 1`.
    pub modulus: Vec<u64>,
}

impl FqField {
    pub fn new(p: u64, modulus: &[u64]) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let m = UPoly::new(modulus.iter().map(|&c| Fp::from_u64(c, p)).collect());
        if m.degree().unwrap_or(0) == 0 || !m.lc().unwrap().is_one_s() || !m.is_irreducible() {
            return Err(Error::ReducibleModulus);
        }
        Ok(Arc::new(FqField {
            p,
            modulus: m.coeffs.iter().map(|c| c.v).collect(),
        }))
    }

    /// The first monic irreducible polynomial of the given degree, scanning
    /// coefficient vectors (c_0, …, c_{deg-1}) as base-p numbers in increasing order.
    pub fn default_modulus(p: u64, deg: u32) -> Result<Vec<u64>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if deg == 1 {
            return Ok(vec![0, 1]);
        }
        let total = p.checked_pow(deg).ok_or_else(|| Error::InvalidInput("field too large".into()))?;
        for idx in 0..total {
            let mut c = Vec::with_capacity(deg as usize + 1);
            let mut r = idx;
            for _ in 0..deg {
                c.push(r % p);
                r /= p;
            }
            c.push(1);
            let f = UPoly::new(c.iter().map(|&v| Fp::from_u64(v, p)).collect());
            if f.is_irreducible() {
                return Ok(c);
            }
        }
        Err(Error::ReducibleModulus)
    }

    pub fn with_degree(p: u64, deg: u32) -> Result<Arc<Self>> {
        Self::new(p, &Self::default_modulus(p, deg)?)
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus_poly(&self) -> UPoly<Fp> {
        UPoly::new(self.modulus.iter().map(|&c| Fp::from_u64(c, self.p)).collect())
    }
}

#[derive(Clone)]
pub struct Fq {
    pub c: Vec<u64>,
    pub field: Arc<FqField>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c)
    }
}

impl PartialEq for Fq {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && (Arc::ptr_eq(&self.field, &o.field) || self.field == o.field)
    }
}

impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl Fq {
    pub fn from_vec(field: &Arc<FqField>, mut c: Vec<u64>) -> Self {
        let p = field.p;
        for x in c.iter_mut() {
            *x %= p;
        }
        let d = field.degree();
        if c.len() > d {
            let poly = UPoly::new(c.iter().map(|&v| Fp::from_u64(v, p)).collect());
            let r = poly.rem(&field.modulus_poly());
            c = r.coeffs.iter().map(|x| x.v).collect();
        }
        c.resize(d, 0);
        Fq { c, field: field.clone() }
    }

    pub fn from_int(field: &Arc<FqField>, n: i64) -> Self {
        let mut c = vec![0; field.degree()];
        c[0] = n.rem_euclid(field.p as i64) as u64;
        Fq { c, field: field.clone() }
    }

    /// The generator θ (a root of the modulus).
    pub fn generator(field: &Arc<FqField>) -> Self {
        Fq::from_vec(field, vec![0, 1])
    }

    pub fn from_fp_poly(field: &Arc<FqField>, f: &UPoly<Fp>) -> Self {
        Fq::from_vec(field, f.coeffs.iter().map(|c| c.v).collect())
    }

    pub fn to_fp_poly(&self) -> UPoly<Fp> {
        UPoly::new(self.c.iter().map(|&v| Fp::from_u64(v, self.field.p)).collect())
    }

    /// Element of the prime field, if it lies there.
    pub fn as_prime(&self) -> Option<u64> {
        if self.c[1..].iter().all(|&x| x == 0) {
            Some(self.c[0])
        } else {
            None
        }
    }

    /// Index of the element in 0..q (base-p digits); used for enumeration and ordering.
    pub fn index(&self) -> u64 {
        self.c.iter().rev().fold(0, |acc, &d| acc * self.field.p + d)
    }
}

impl Scalar for Fq {
    fn zero_like(&self) -> Self {
        Fq::from_int(&self.field, 0)
    }
    fn one_like(&self) -> Self {
        Fq::from_int(&self.field, 1)
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        let p = BigInt::from(self.field.p);
        let r = ((n % &p) + &p) % &p;
        Fq::from_int(&self.field, r.to_i64().unwrap())
    }
    fn vanishes(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    fn plus(&self, o: &Self) -> Self {
        let p = self.field.p;
        Fq {
            c: self.c.iter().zip(&o.c).map(|(a, b)| (a + b) % p).collect(),
            field: self.field.clone(),
        }
    }
    fn minus(&self, o: &Self) -> Self {
        let p = self.field.p;
        Fq {
            c: self.c.iter().zip(&o.c).map(|(a, b)| (a + p - b) % p).collect(),
            field: self.field.clone(),
        }
    }
    fn times(&self, o: &Self) -> Self {
        let p = self.field.p;
        let d = self.field.degree();
        if d == 1 {
            return Fq {
                c: vec![mul_mod(self.c[0], o.c[0], p)],
                field: self.field.clone(),
            };
        }
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        let m = &self.field.modulus;
        for i in (d..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..d {
                prod[i - d + j] = (prod[i - d + j] + p - mul_mod(c, m[j], p)) % p;
            }
        }
        prod.truncate(d);
        Fq {
            c: prod,
            field: self.field.clone(),
        }
    }
    fn negate(&self) -> Self {
        let p = self.field.p;
        Fq {
            c: self.c.iter().map(|&a| (p - a) % p).collect(),
            field: self.field.clone(),
        }
    }
    fn recip(&self) -> Option<Self> {
        if self.vanishes() {
            return None;
        }
        if self.field.degree() == 1 {
            return inv_mod_u64(self.c[0], self.field.p).map(|v| Fq {
                c: vec![v],
                field: self.field.clone(),
            });
        }
        let inv = self.to_fp_poly().inv_mod(&self.field.modulus_poly())?;
        Some(Fq::from_fp_poly(&self.field, &inv))
    }
    fn val_at(&self, _p: u64) -> Option<i64> {
        if self.vanishes() {
            None
        } else {
            Some(0)
        }
    }
}

impl FiniteField for Fq {
    fn characteristic(&self) -> u64 {
        self.field.p
    }
    fn degree(&self) -> u32 {
        self.field.degree() as u32
    }
    fn random_like<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let p = self.field.p;
        Fq {
            c: (0..self.field.degree()).map(|_| rng.gen_range(0..p)).collect(),
            field: self.field.clone(),
        }
    }
    fn elements(&self) -> Vec<Self> {
        let p = self.field.p;
        let d = self.field.degree();
        let q = p.pow(d as u32);
        (0..q)
            .map(|mut idx| {
                let mut c = Vec::with_capacity(d);
                for _ in 0..d {
                    c.push(idx % p);
                    idx /= p;
                }
                Fq {
                    c,
                    field: self.field.clone(),
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f49_with_given_modulus() {
        let f = FqField::new(7, &[3, 6, 1]).unwrap();
        let g = Fq::generator(&f);
        let units: Vec<Fq> = g.elements().into_iter().filter(|x| !x.vanishes()).collect();
        assert_eq!(units.len(), 48);
        for u in &units {
            assert!(u.pow_u(48).is_one_s());
            assert_eq!(u.times(&u.recip().unwrap()), u.one_like());
        }
        assert_eq!(FqField::new(7, &[6, 0, 1]), Err(Error::ReducibleModulus));
        assert_eq!(FqField::new(4, &[1, 1]).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn default_modulus_scan() {
        // x^2 + 1 is the first irreducible quadratic over F_7 in the scan order
        assert_eq!(FqField::default_modulus(7, 2).unwrap(), vec![1, 0, 1]);
        assert_eq!(FqField::default_modulus(2, 2).unwrap(), vec![1, 1, 1]);
    }
}
