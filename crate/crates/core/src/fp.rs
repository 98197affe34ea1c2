//! Prime fields with the modulus carried inline, so elements stay `Copy`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::num_util::{inv_mod_u64, mul_mod};
use crate::scalar::Scalar;

/// Finite fields, as needed by polynomial factorization.
pub trait FiniteField: Scalar {
    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> u32;
    fn random_like<R: Rng + ?Sized>(&self, rng: &mut R) -> Self;
    /// Every element of the field; only sensible for small fields.
    fn elements(&self) -> Vec<Self>;

    fn order(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.characteristic()), self.degree() as usize)
    }

    fn frobenius(&self) -> Self {
        self.pow_u(self.characteristic())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        Fp { v: v.rem_euclid(p as i64) as u64, p }
    }

    pub fn from_u64(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    pub fn from_big(n: &BigInt, p: u64) -> Self {
        Fp {
            v: n.mod_floor(&BigInt::from(p)).to_u64().unwrap(),
            p,
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Scalar for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1 % self.p, p: self.p }
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        Fp::from_big(n, self.p)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Fp::new(n, self.p)
    }
    fn vanishes(&self) -> bool {
        self.v == 0
    }
    #[inline]
    fn plus(&self, o: &Self) -> Self {
        let s = self.v + o.v;
        Fp {
            v: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
    #[inline]
    fn minus(&self, o: &Self) -> Self {
        Fp {
            v: if self.v >= o.v { self.v - o.v } else { self.v + self.p - o.v },
            p: self.p,
        }
    }
    #[inline]
    fn times(&self, o: &Self) -> Self {
        Fp {
            v: mul_mod(self.v, o.v, self.p),
            p: self.p,
        }
    }
    fn negate(&self) -> Self {
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }
    fn recip(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        inv_mod_u64(self.v, self.p).map(|v| Fp { v, p: self.p })
    }
    fn val_at(&self, _p: u64) -> Option<i64> {
        if self.v == 0 {
            None
        } else {
            Some(0)
        }
    }
}

impl FiniteField for Fp {
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> u32 {
        1
    }
    fn random_like<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        Fp {
            v: rng.gen_range(0..self.p),
            p: self.p,
        }
    }
    fn elements(&self) -> Vec<Self> {
        (0..self.p).map(|v| Fp { v, p: self.p }).collect()
    }
    fn frobenius(&self) -> Self {
        *self
    }
}
