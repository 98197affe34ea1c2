//! Galois rings (Z/p^k)[θ]/(M(θ)) with M monic and irreducible mod p, i.e.
//! truncations W(F_q)/p^k of the unramified Witt ring, plus the Frobenius lift.
//!
//! Arithmetic routines take an explicit exponent `j <= k` so that elements known
//! to lower precision can share the same ring description.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fq::{Fq, FqField};
use crate::num_util::{is_prime, val_p};
use crate::scalar::Scalar;

#[derive(Debug, PartialEq, Eq)]
pub struct GaloisRing {
    pub p: u64,
    pub k: u32,
    /// Monic lift of the modulus, constant term first.
    pub modulus: Vec<BigInt>,
    pows: Vec<BigInt>,
    /// σ(θ), the root of the modulus congruent to θ^p, known mod p^k.
    sigma_theta: Vec<BigInt>,
    pub residue: Arc<FqField>,
}

impl GaloisRing {
    pub fn new(p: u64, k: u32, modulus: &[BigInt]) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        if modulus.len() < 2 || !modulus.last().unwrap().is_one() {
            return Err(Error::ReducibleModulus);
        }
        let pb = BigInt::from(p);
        let red: Vec<u64> = modulus
            .iter()
            .map(|c| c.mod_floor(&pb).try_into().unwrap())
            .collect();
        let residue = FqField::new(p, &red)?;
        let mut pows = vec![BigInt::one()];
        for i in 0..k as usize {
            pows.push(&pows[i] * &pb);
        }
        let pk = pows[k as usize].clone();
        let mut ring = GaloisRing {
            p,
            k,
            modulus: modulus.iter().map(|c| c.mod_floor(&pk)).collect(),
            pows,
            sigma_theta: Vec::new(),
            residue,
        };
        ring.sigma_theta = ring.frobenius_of_theta();
        Ok(Arc::new(ring))
    }

    pub fn with_degree(p: u64, k: u32, f_deg: u32) -> Result<Arc<Self>> {
        let m = FqField::default_modulus(p, f_deg)?;
        Self::new(p, k, &m.into_iter().map(BigInt::from).collect::<Vec<_>>())
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn pk(&self, j: u32) -> &BigInt {
        &self.pows[j as usize]
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.degree()]
    }

    pub fn one(&self) -> Vec<BigInt> {
        let mut v = self.zero();
        v[0] = BigInt::one();
        v
    }

    pub fn from_int(&self, n: &BigInt, j: u32) -> Vec<BigInt> {
        let mut v = self.zero();
        v[0] = n.mod_floor(self.pk(j));
        v
    }

    /// Reduces an arbitrary coefficient vector modulo the modulus and p^j.
    pub fn reduce(&self, mut c: Vec<BigInt>, j: u32) -> Vec<BigInt> {
        let d = self.degree();
        let m = self.pk(j);
        for i in (d..c.len()).rev() {
            let lead = std::mem::take(&mut c[i]);
            if lead.is_zero() {
                continue;
            }
            for t in 0..d {
                let sub = &lead * &self.modulus[t];
                c[i - d + t] -= sub;
            }
        }
        c.truncate(d);
        c.resize(d, BigInt::zero());
        for x in c.iter_mut() {
            *x = x.mod_floor(m);
        }
        c
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt], j: u32) -> Vec<BigInt> {
        let m = self.pk(j);
        a.iter().zip(b).map(|(x, y)| (x + y).mod_floor(m)).collect()
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt], j: u32) -> Vec<BigInt> {
        let m = self.pk(j);
        a.iter().zip(b).map(|(x, y)| (x - y).mod_floor(m)).collect()
    }

    pub fn neg(&self, a: &[BigInt], j: u32) -> Vec<BigInt> {
        let m = self.pk(j);
        a.iter().map(|x| (-x).mod_floor(m)).collect()
    }

    pub fn scale(&self, a: &[BigInt], s: &BigInt, j: u32) -> Vec<BigInt> {
        let m = self.pk(j);
        a.iter().map(|x| (x * s).mod_floor(m)).collect()
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt], j: u32) -> Vec<BigInt> {
        let d = self.degree();
        if d == 1 {
            return vec![(&a[0] * &b[0]).mod_floor(self.pk(j))];
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (t, y) in b.iter().enumerate() {
                prod[i + t] += x * y;
            }
        }
        self.reduce(prod, j)
    }

    pub fn pow(&self, a: &[BigInt], e: &BigInt, j: u32) -> Vec<BigInt> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        let mut e = e.clone();
        let two = BigInt::from(2);
        while e.is_positive() {
            if e.is_odd() {
                acc = self.mul(&acc, &base, j);
            }
            e /= &two;
            if e.is_positive() {
                base = self.mul(&base, &base, j);
            }
        }
        acc
    }

    pub fn is_zero_at(&self, a: &[BigInt], j: u32) -> bool {
        let m = self.pk(j);
        a.iter().all(|x| x.mod_floor(m).is_zero())
    }

    /// Minimum p-adic valuation over the coefficients; `None` if all vanish.
    pub fn valuation(&self, a: &[BigInt]) -> Option<i64> {
        a.iter().filter_map(|x| val_p(x, self.p)).min()
    }

    /// Divides every coefficient by p^e (caller guarantees exactness).
    pub fn shift_down(&self, a: &[BigInt], e: i64) -> Vec<BigInt> {
        let pe = &self.pows[e as usize];
        a.iter().map(|x| x / pe).collect()
    }

    pub fn residue_of(&self, a: &[BigInt]) -> Fq {
        let pb = BigInt::from(self.p);
        Fq::from_vec(
            &self.residue,
            a.iter().map(|x| x.mod_floor(&pb).try_into().unwrap()).collect(),
        )
    }

    pub fn lift_residue(&self, a: &Fq) -> Vec<BigInt> {
        a.c.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Inverse modulo p^j of an element that is a unit mod p.
    pub fn inv(&self, a: &[BigInt], j: u32) -> Option<Vec<BigInt>> {
        let r = self.residue_of(a).recip()?;
        let mut x = self.lift_residue(&r);
        let two = self.from_int(&BigInt::from(2), j);
        let mut prec = 1u32;
        while prec < j {
            prec = (2 * prec).min(j);
            let ax = self.mul(a, &x, prec);
            x = self.mul(&x, &self.sub(&two, &ax, prec), prec);
        }
        Some(self.reduce(x, j))
    }

    fn eval_modulus(&self, r: &[BigInt], j: u32) -> Vec<BigInt> {
        let mut acc = self.zero();
        for c in self.modulus.iter().rev() {
            acc = self.mul(&acc, r, j);
            acc[0] = (&acc[0] + c).mod_floor(self.pk(j));
        }
        acc
    }

    fn frobenius_of_theta(&self) -> Vec<BigInt> {
        let d = self.degree();
        if d == 1 {
            return self.zero();
        }
        let theta = self.reduce(vec![BigInt::zero(), BigInt::one()], 1);
        let mut r = self.pow(&theta, &BigInt::from(self.p), 1);
        let dm: Vec<BigInt> = (1..self.modulus.len())
            .map(|i| &self.modulus[i] * BigInt::from(i))
            .collect();
        let k = self.k;
        let mut prec = 1u32;
        while prec < k {
            prec = (2 * prec).min(k);
            let fr = self.eval_modulus(&r, prec);
            let mut dr = self.zero();
            for c in dm.iter().rev() {
                dr = self.mul(&dr, &r, prec);
                dr[0] = (&dr[0] + c).mod_floor(self.pk(prec));
            }
            let inv = self.inv(&dr, prec).expect("modulus is separable mod p");
            r = self.sub(&r, &self.mul(&fr, &inv, prec), prec);
        }
        r
    }

    /// The Frobenius lift σ(Σ a_i θ^i) = Σ a_i σ(θ)^i, modulo p^j.
    pub fn sigma(&self, a: &[BigInt], j: u32) -> Vec<BigInt> {
        if self.degree() == 1 {
            return vec![a[0].mod_floor(self.pk(j))];
        }
        let mut acc = self.zero();
        for c in a.iter().rev() {
            acc = self.mul(&acc, &self.sigma_theta, j);
            acc[0] = (&acc[0] + c).mod_floor(self.pk(j));
        }
        acc
    }

    /// The Teichmüller representative of a unit, modulo p^j.
    pub fn teichmueller(&self, a: &[BigInt], j: u32) -> Vec<BigInt> {
        let q = num_traits::pow(BigInt::from(self.p), self.degree());
        let mut x = self.reduce(a.to_vec(), j);
        for _ in 0..j {
            x = self.pow(&x, &q, j);
        }
        x
    }
}

/// An element of a Galois ring at its full precision p^k; used as a coefficient
/// domain for polynomials over W(F_q)/p^k.
#[derive(Clone, Debug)]
pub struct GrElem {
    pub c: Vec<BigInt>,
    pub ring: Arc<GaloisRing>,
}

impl PartialEq for GrElem {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl GrElem {
    pub fn new(ring: &Arc<GaloisRing>, c: Vec<BigInt>) -> Self {
        GrElem {
            c: ring.reduce(c, ring.k),
            ring: ring.clone(),
        }
    }

    pub fn from_int(ring: &Arc<GaloisRing>, n: i64) -> Self {
        GrElem {
            c: ring.from_int(&BigInt::from(n), ring.k),
            ring: ring.clone(),
        }
    }

    pub fn sigma(&self) -> Self {
        GrElem {
            c: self.ring.sigma(&self.c, self.ring.k),
            ring: self.ring.clone(),
        }
    }

    pub fn residue(&self) -> Fq {
        self.ring.residue_of(&self.c)
    }

    /// Exact division by p; panics if some coefficient is not divisible.
    pub fn div_p(&self) -> Self {
        let pb = BigInt::from(self.ring.p);
        let c = self
            .c
            .iter()
            .map(|x| {
                let (q, r) = x.div_rem(&pb);
                assert!(r.is_zero(), "element not divisible by p");
                q
            })
            .collect();
        GrElem::new(&self.ring, c)
    }
}

impl Scalar for GrElem {
    fn zero_like(&self) -> Self {
        GrElem {
            c: self.ring.zero(),
            ring: self.ring.clone(),
        }
    }
    fn one_like(&self) -> Self {
        GrElem {
            c: self.ring.one(),
            ring: self.ring.clone(),
        }
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        GrElem {
            c: self.ring.from_int(n, self.ring.k),
            ring: self.ring.clone(),
        }
    }
    fn vanishes(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn plus(&self, o: &Self) -> Self {
        GrElem {
            c: self.ring.add(&self.c, &o.c, self.ring.k),
            ring: self.ring.clone(),
        }
    }
    fn minus(&self, o: &Self) -> Self {
        GrElem {
            c: self.ring.sub(&self.c, &o.c, self.ring.k),
            ring: self.ring.clone(),
        }
    }
    fn times(&self, o: &Self) -> Self {
        GrElem {
            c: self.ring.mul(&self.c, &o.c, self.ring.k),
            ring: self.ring.clone(),
        }
    }
    fn negate(&self) -> Self {
        GrElem {
            c: self.ring.neg(&self.c, self.ring.k),
            ring: self.ring.clone(),
        }
    }
    fn recip(&self) -> Option<Self> {
        self.ring.inv(&self.c, self.ring.k).map(|c| GrElem {
            c,
            ring: self.ring.clone(),
        })
    }
    fn val_at(&self, _p: u64) -> Option<i64> {
        self.ring.valuation(&self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn frobenius_is_an_involution_on_w_f49() {
        let r = GaloisRing::new(7, 4, &big(&[3, 6, 1])).unwrap();
        let a = r.reduce(big(&[12, 345]), 4);
        let b = r.reduce(big(&[-5, 77]), 4);
        let sa = r.sigma(&a, 4);
        assert_eq!(r.sigma(&sa, 4), a);
        assert_eq!(r.sigma(&r.mul(&a, &b, 4), 4), r.mul(&sa, &r.sigma(&b, 4), 4));
        // σ(a) ≡ a^7 mod 7
        assert_eq!(
            r.residue_of(&sa),
            r.residue_of(&r.pow(&a, &BigInt::from(7), 1))
        );
    }

    #[test]
    fn teichmueller_of_two_mod_49() {
        let r = GaloisRing::new(7, 2, &big(&[0, 1])).unwrap();
        let w = r.teichmueller(&big(&[2]), 2);
        assert_eq!(w, big(&[30]));
        assert_eq!(r.pow(&w, &BigInt::from(3), 2), big(&[1]));
    }

    #[test]
    fn inverse_lifts() {
        let r = GaloisRing::new(5, 3, &big(&[0, 1])).unwrap();
        assert_eq!(r.inv(&big(&[4]), 3).unwrap(), big(&[94]));
        assert!(r.inv(&big(&[10]), 3).is_none());
    }
}
