//! Dense univariate polynomials over any [`Scalar`], with Euclidean
//! operations over fields and Cantor–Zassenhaus factorization over finite fields.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fp::FiniteField;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<C> {
    /// Coefficients, constant term first; never has a trailing zero.
    pub coeffs: Vec<C>,
}

impl<C: Scalar> UPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.vanishes()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        UPoly::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![c.zero_like(); k + 1];
        v[k] = c;
        UPoly::new(v)
    }

    /// `x` over the domain of `proto`.
    pub fn x(proto: &C) -> Self {
        UPoly::new(vec![proto.zero_like(), proto.one_like()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&C> {
        self.coeffs.get(i)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one_s()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UPoly::new(v)
    }

    pub fn neg(&self) -> Self {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| c.negate()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.vanishes() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].plus(&a.times(b));
            }
        }
        UPoly::new(v)
    }

    pub fn scale(&self, c: &C) -> Self {
        UPoly::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![self.coeffs[0].zero_like(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap_or_else(|| match self.coeffs.first() {
            Some(c) => UPoly::constant(c.one_like()),
            None => UPoly::zero(),
        })
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    /// Evaluation at an element of a larger domain, through a coefficient map.
    pub fn eval_with<D: Scalar>(&self, x: &D, map: impl Fn(&C) -> D) -> D {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(&map(c));
        }
        acc
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.times(&c.from_i64_like(i as i64)))
                .collect(),
        )
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> UPoly<D> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Exact quotient over an integral domain whose coefficient division is exact.
    pub fn div_exact_domain(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(UPoly::zero());
        }
        if self.deg_i() < dd as i64 {
            return None;
        }
        let lc = d.lc().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![lc.zero_like(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].vanishes() {
                continue;
            }
            let c = r[i].exact_quo(lc)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j].minus(&c.times(dc));
            }
            q[i - dd] = c;
        }
        if r.iter().all(|c| c.vanishes()) {
            Some(UPoly::new(q))
        } else {
            None
        }
    }

    // ---- field operations ----

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => UPoly::zero(),
            Some(l) => self.scale(&l.recip().expect("leading coefficient not invertible")),
        }
    }

    /// Division with remainder; the divisor's leading coefficient must be invertible.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lc().unwrap().recip().expect("leading coefficient not invertible");
        if self.deg_i() < dd as i64 {
            return (UPoly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let z = d.coeffs[0].zero_like();
        let mut q = vec![z; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i].times(&inv);
            if c.vanishes() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j].minus(&c.times(dc));
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both inputs vanish).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let proto = self
            .coeffs
            .first()
            .or(o.coeffs.first())
            .expect("ext_gcd of two zero polynomials")
            .clone();
        let one = UPoly::constant(proto.one_like());
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (one.clone(), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let l = r0.lc().unwrap().recip().unwrap();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    /// Inverse of `self` modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if g.is_one() {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn mulmod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, e: &BigInt, m: &Self) -> Self {
        let proto = m.coeffs[0].clone();
        let mut acc = UPoly::constant(proto.one_like()).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m);
            if e.bit(i) {
                acc = acc.mulmod(&base, m);
            }
        }
        acc
    }
}

impl<C: FiniteField> UPoly<C> {
    fn proto(&self) -> C {
        self.coeffs[0].clone()
    }

    /// Coefficientwise p-th root of a polynomial in x^p.
    fn pth_root(&self) -> Self {
        let c0 = self.proto();
        let p = c0.characteristic();
        let k = c0.degree();
        // a^(p^(k-1)) is the inverse of Frobenius on F_{p^k}
        let e = num_traits::pow(BigInt::from(p), (k - 1) as usize);
        let v: Vec<C> = self
            .coeffs
            .iter()
            .step_by(p as usize)
            .map(|a| pow_big(a, &e))
            .collect();
        UPoly::new(v)
    }

    /// Square-free decomposition: pairs `(g, m)` with `self = lc·Π g^m`, `g` monic squarefree.
    pub fn squarefree(&self) -> Vec<(Self, u32)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = f.proto().characteristic() as u32;
        let mut out = Vec::new();
        let d = f.derivative();
        if d.is_zero() {
            for (g, m) in f.pth_root().squarefree() {
                out.push((g, m * p));
            }
            return out;
        }
        let mut c = f.gcd(&d);
        let mut w = f.div_exact(&c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_exact(&y);
            if fac.degree().unwrap_or(0) > 0 {
                out.push((fac, i));
            }
            w = y;
            c = c.div_exact(&w);
            i += 1;
        }
        if !c.is_one() {
            for (g, m) in c.pth_root().squarefree() {
                out.push((g, m * p));
            }
        }
        out
    }

    /// `x^(q^k) mod self` for the field size `q`.
    fn frobenius_power_of_x(&self, k: u32) -> Self {
        let proto = self.proto();
        let q = proto.order();
        let mut h = UPoly::x(&proto).rem(self);
        for _ in 0..k {
            h = h.powmod(&q, self);
        }
        h
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn distinct_degree(&self) -> Vec<(Self, u32)> {
        let proto = self.proto();
        let q = proto.order();
        let x = UPoly::x(&proto);
        let mut f = self.clone();
        let mut out = Vec::new();
        let mut h = x.rem(&f);
        let mut d = 1u32;
        while f.degree().unwrap_or(0) >= 2 * d as usize {
            h = h.powmod(&q, &f);
            let g = h.sub(&x).gcd(&f);
            if !g.is_one() {
                f = f.div_exact(&g);
                h = h.rem(&f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.degree().unwrap_or(0) > 0 {
            let dd = f.degree().unwrap() as u32;
            out.push((f, dd));
        }
        out
    }

    /// Splits a monic squarefree product of irreducibles of degree `d`.
    pub fn equal_degree(&self, d: u32, rng: &mut impl Rng) -> Vec<Self> {
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return Vec::new();
        }
        if n as u32 == d {
            return vec![self.clone()];
        }
        let proto = self.proto();
        let p = proto.characteristic();
        let q = proto.order();
        loop {
            let a = UPoly::new((0..n).map(|_| proto.random_like(rng)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if p == 2 {
                // trace map to F_2
                let k = proto.degree() * d;
                let mut t = a.rem(self);
                let mut s = t.clone();
                for _ in 1..k {
                    t = t.mulmod(&t, self);
                    s = s.add(&t);
                }
                s
            } else {
                let e = (num_traits::pow(q.clone(), d as usize) - 1u32) / 2u32;
                a.powmod(&e, self).sub(&UPoly::constant(proto.one_like()))
            };
            let g = b.gcd(self);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let mut out = g.equal_degree(d, rng);
                out.extend(self.div_exact(&g).equal_degree(d, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities.
    pub fn factor(&self) -> Vec<(Self, u32)> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        self.factor_with(&mut rng)
    }

    pub fn factor_with(&self, rng: &mut impl Rng) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        for (g, m) in self.squarefree() {
            for (h, d) in g.distinct_degree() {
                for f in h.equal_degree(d, rng) {
                    out.push((f, m));
                }
            }
        }
        out.sort_by(|a, b| a.0.deg_i().cmp(&b.0.deg_i()));
        out
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n as u32,
        };
        let f = self.monic();
        let x = UPoly::x(&f.proto());
        if !f.frobenius_power_of_x(n).sub(&x).rem(&f).is_zero() {
            return false;
        }
        for r in crate::num_util::prime_factors(n as u64) {
            let h = f.frobenius_power_of_x(n / r as u32).sub(&x);
            if !h.gcd(&f).is_one() {
                return false;
            }
        }
        true
    }

    /// Roots in the coefficient field, without multiplicity.
    pub fn roots(&self) -> Vec<C> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let proto = f.proto();
        let x = UPoly::x(&proto);
        let lin = f.frobenius_power_of_x(1).sub(&x).gcd(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(0x7005);
        lin.equal_degree(1, &mut rng)
            .into_iter()
            .map(|g| g.coeffs[0].negate())
            .collect()
    }
}

fn pow_big<C: Scalar>(a: &C, e: &BigInt) -> C {
    let mut acc = a.one_like();
    for i in (0..e.bits()).rev() {
        acc = acc.times(&acc);
        if e.bit(i) {
            acc = acc.times(a);
        }
    }
    acc
}

/// Integer exponentiation of a scalar by an arbitrary-size exponent.
pub fn scalar_pow<C: Scalar>(a: &C, e: &BigInt) -> C {
    if e.is_zero() {
        return a.one_like();
    }
    pow_big(a, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Fp;

    fn fp(v: &[i64], p: u64) -> UPoly<Fp> {
        UPoly::new(v.iter().map(|&c| Fp::new(c, p)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        let a = fp(&[-1, 0, 1], 7); // x^2 - 1
        let b = fp(&[1, 1], 7);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, fp(&[-1, 1], 7));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&fp(&[-1, 1], 7)), fp(&[-1, 1], 7));
    }

    #[test]
    fn x2_plus_6x_plus_3_irreducible_mod_7() {
        // exhaustive root search as the oracle
        let f = fp(&[3, 6, 1], 7);
        let has_root = (0..7).any(|x| f.eval(&Fp::new(x, 7)).vanishes());
        assert!(!has_root);
        assert!(f.is_irreducible());
        assert!(!fp(&[-1, 0, 1], 7).is_irreducible());
    }

    #[test]
    fn factor_recovers_product() {
        let f = fp(&[1, 1], 5)
            .mul(&fp(&[2, 0, 1], 5))
            .mul(&fp(&[1, 1], 5))
            .mul(&fp(&[0, 1], 5));
        let fac = f.factor();
        let mut prod = fp(&[1], 5);
        for (g, m) in &fac {
            assert!(g.is_irreducible());
            prod = prod.mul(&g.pow(*m));
        }
        assert_eq!(prod, f.monic());
        assert!(fac.iter().any(|(g, m)| *g == fp(&[1, 1], 5) && *m == 2));
    }

    #[test]
    fn factor_in_characteristic_two_and_pth_powers() {
        let g = fp(&[1, 1, 1], 2); // irreducible over F_2
        let f = g.pow(2).mul(&fp(&[1, 1], 2)).mul(&fp(&[1, 1, 0, 1], 2));
        let fac = f.factor();
        let mut prod = fp(&[1], 2);
        for (h, m) in &fac {
            prod = prod.mul(&h.pow(*m));
        }
        assert_eq!(prod, f);
        // x^9 - 1 over F_3 is (x - 1)^9
        let h = fp(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 1], 3);
        assert_eq!(h.factor(), vec![(fp(&[-1, 1], 3), 9)]);
    }

    #[test]
    fn roots_of_t2_minus_t_plus_1_mod_7() {
        let mut r: Vec<u64> = fp(&[1, -1, 1], 7).roots().iter().map(|x| x.v).collect();
        r.sort();
        assert_eq!(r, vec![3, 5]);
    }
}
