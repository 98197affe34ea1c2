//! Fixed-precision elements of Q_p and of its unramified extensions.
//!
//! A nonzero scalar is `p^v · u` with `u` a unit of W(F_q), known modulo
//! p^(prec − v). Zero carries the absolute precision to which it is known;
//! a zero produced by cancellation is therefore distinguishable from an exact
//! zero, and callers can refuse to read digits that were never computed.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::galois_ring::GaloisRing;
use crate::num_util::{ilog, pow_big, split_p, val_p};
use crate::scalar::{Scalar, Valuation};

pub const EXACT: i64 = i64::MAX;

#[derive(Debug, PartialEq, Eq)]
pub struct PadicContext {
    pub p: u64,
    /// Relative precision given to freshly created scalars.
    pub n: u32,
    pub f_deg: u32,
    pub ring: Arc<GaloisRing>,
}

/// Builds a context; with `f_deg > 1` and no modulus the first irreducible
/// monic polynomial in scan order is used.
pub fn make_context(p: u64, n: u32, f_deg: u32, modulus: Option<&[BigInt]>) -> Result<Arc<PadicContext>> {
    if n == 0 || f_deg == 0 {
        return Err(Error::InvalidInput("precision and residue degree must be positive".into()));
    }
    let ring = match modulus {
        Some(m) => {
            if m.len() != f_deg as usize + 1 {
                return Err(Error::InvalidInput("modulus degree differs from f_deg".into()));
            }
            GaloisRing::new(p, n, m)?
        }
        None => GaloisRing::with_degree(p, n, f_deg)?,
    };
    Ok(Arc::new(PadicContext { p, n, f_deg, ring }))
}

impl PadicContext {
    pub fn q(&self) -> BigInt {
        pow_big(self.p, self.f_deg)
    }
}

#[derive(Clone)]
pub struct PadicScalar {
    pub ctx: Arc<PadicContext>,
    /// `None` for zero.
    pub val: Option<i64>,
    pub unit: Vec<BigInt>,
    /// Absolute precision; `EXACT` only for exact zero.
    pub prec: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarRecord {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u32,
    pub f_deg: u32,
    pub v: Option<i64>,
    pub unit: Vec<String>,
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.val {
            None if self.prec == EXACT => write!(f, "0"),
            None => write!(f, "O({}^{})", self.ctx.p, self.prec),
            Some(v) => {
                let u: Vec<String> = self.unit.iter().map(|c| c.to_string()).collect();
                write!(f, "{}^{}*[{}] + O({}^{})", self.ctx.p, v, u.join(","), self.ctx.p, self.prec)
            }
        }
    }
}

impl PadicScalar {
    pub fn zero(ctx: &Arc<PadicContext>) -> Self {
        PadicScalar {
            ctx: ctx.clone(),
            val: None,
            unit: ctx.ring.zero(),
            prec: EXACT,
        }
    }

    pub fn zero_to(ctx: &Arc<PadicContext>, prec: i64) -> Self {
        PadicScalar {
            ctx: ctx.clone(),
            val: None,
            unit: ctx.ring.zero(),
            prec,
        }
    }

    /// Normalizes `p^base · raw`, where `raw` is meaningful modulo p^(prec − base).
    fn make(ctx: &Arc<PadicContext>, raw: Vec<BigInt>, base: i64, prec: i64) -> Self {
        let j = prec.saturating_sub(base);
        if j <= 0 {
            return Self::zero_to(ctx, prec);
        }
        let j = j.min(ctx.n as i64) as u32;
        let ring = &ctx.ring;
        let raw = ring.reduce(raw, j);
        match ring.valuation(&raw) {
            None => Self::zero_to(ctx, base + j as i64),
            Some(vr) => {
                let unit = ring.shift_down(&raw, vr);
                PadicScalar {
                    ctx: ctx.clone(),
                    val: Some(base + vr),
                    unit,
                    prec: base + j as i64,
                }
            }
        }
    }

    /// `p^v · unit` with the context's default relative precision.
    pub fn from_parts(ctx: &Arc<PadicContext>, v: i64, unit: Vec<BigInt>) -> Self {
        Self::make(ctx, unit, v, v + ctx.n as i64)
    }

    pub fn from_int(ctx: &Arc<PadicContext>, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(ctx);
        }
        let (v, u) = split_p(n, ctx.p);
        Self::from_parts(ctx, v, ctx.ring.from_int(&u, ctx.n))
    }

    pub fn from_i64(ctx: &Arc<PadicContext>, n: i64) -> Self {
        Self::from_int(ctx, &BigInt::from(n))
    }

    /// Lifts a residue-field element with the coefficientwise lift (not Teichmüller).
    pub fn lift_residue(ctx: &Arc<PadicContext>, a: &Fq) -> Self {
        if a.vanishes() {
            return Self::zero(ctx);
        }
        Self::from_parts(ctx, 0, ctx.ring.lift_residue(a))
    }

    /// The image of θ, a root of the context modulus.
    pub fn generator(ctx: &Arc<PadicContext>) -> Self {
        let c = ctx.ring.reduce(vec![BigInt::zero(), BigInt::one()], ctx.n);
        Self::make(ctx, c, 0, ctx.n as i64)
    }

    pub fn valuation(&self) -> Valuation {
        Valuation::from_opt(self.val)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.val.is_none() && self.prec == EXACT
    }

    /// A zero that is only known to finite precision.
    pub fn precision_exhausted(&self) -> bool {
        self.val.is_none() && self.prec != EXACT
    }

    pub fn rel_prec(&self) -> i64 {
        match self.val {
            Some(v) => self.prec - v,
            None => 0,
        }
    }

    /// Reduction mod p of an integral scalar.
    pub fn residue(&self) -> Fq {
        match self.val {
            Some(0) => self.ctx.ring.residue_of(&self.unit),
            Some(v) if v > 0 => self.ctx.ring.residue_of(&self.ctx.ring.zero()),
            None => self.ctx.ring.residue_of(&self.ctx.ring.zero()),
            Some(_) => panic!("residue of a non-integral scalar"),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.val.map_or(true, |v| v >= 0)
    }

    pub fn is_unit(&self) -> bool {
        self.val == Some(0)
    }

    /// Representative of an integral scalar in W(F_q)/p^j (requires j ≤ prec).
    pub fn to_ring(&self, j: u32) -> Vec<BigInt> {
        let ring = &self.ctx.ring;
        match self.val {
            None => ring.zero(),
            Some(v) => {
                assert!(v >= 0, "non-integral scalar has no ring representative");
                let j = j.min(ring.k);
                ring.scale(&self.unit, &pow_big(self.ctx.p, v as u32), j)
            }
        }
    }

    pub fn to_record(&self) -> ScalarRecord {
        ScalarRecord {
            p: self.ctx.p,
            n: self.ctx.n,
            f_deg: self.ctx.f_deg,
            v: self.val,
            unit: self.unit.iter().map(|c| c.to_string()).collect(),
        }
    }

    /// Integer value in the symmetric-free range [0, p^prec) for integral scalars of
    /// the prime field; used by reconstruction.
    pub fn to_integer_mod(&self, j: u32) -> BigInt {
        let r = self.to_ring(j);
        r[0].clone()
    }

    pub fn teichmueller(&self) -> Result<Self> {
        if self.val != Some(0) {
            return Err(Error::NotAUnit);
        }
        let j = self.rel_prec() as u32;
        let w = self.ctx.ring.teichmueller(&self.unit, j);
        Ok(Self::make(&self.ctx, w, 0, j as i64))
    }

    pub fn frobenius(&self) -> Self {
        match self.val {
            None => self.clone(),
            Some(v) => {
                let j = (self.prec - v) as u32;
                let u = self.ctx.ring.sigma(&self.unit, j);
                Self::make(&self.ctx, u, v, self.prec)
            }
        }
    }

    /// The p-adic logarithm of a unit: log(u / ω(u)) by the series on the disc ]1[.
    pub fn log_unit(&self) -> Result<Self> {
        if self.val != Some(0) {
            return Err(Error::NotAUnit);
        }
        let ring = &self.ctx.ring;
        let p = self.ctx.p;
        let r = self.rel_prec() as u32;
        let w = ring.teichmueller(&self.unit, r);
        let winv = ring.inv(&w, r).expect("Teichmüller lift of a unit is a unit");
        let one = ring.one();
        let z = ring.sub(&ring.mul(&self.unit, &winv, r), &one, r);
        let pb = BigInt::from(p);
        let t: Vec<BigInt> = z.iter().map(|c| c / &pb).collect();
        let m = r as u64 + ilog(p, r as u64) as u64 + 2;
        let mut sum = ring.zero();
        let mut t_pow = one.clone();
        for i in 1..=m {
            t_pow = ring.mul(&t_pow, &t, r);
            let (vi, ui) = split_p(&BigInt::from(i), p);
            let shift = i as i64 - vi;
            if shift >= r as i64 {
                continue;
            }
            let inv_u = crate::num_util::inv_mod(&ui, ring.pk(r)).unwrap();
            let coef = pow_big(p, shift as u32) * inv_u;
            let term = ring.scale(&t_pow, &coef, r);
            sum = if i % 2 == 1 {
                ring.add(&sum, &term, r)
            } else {
                ring.sub(&sum, &term, r)
            };
        }
        Ok(Self::make(&self.ctx, sum, 0, r as i64))
    }

    fn aligned_sum(&self, o: &Self, negate_other: bool) -> Self {
        let ctx = &self.ctx;
        let prec = self.prec.min(o.prec);
        match (self.val, o.val) {
            (None, None) => Self::zero_to(ctx, prec),
            (Some(v), None) => Self::make(ctx, self.unit.clone(), v, prec),
            (None, Some(v)) => {
                let u = if negate_other {
                    ctx.ring.neg(&o.unit, ctx.n)
                } else {
                    o.unit.clone()
                };
                Self::make(ctx, u, v, prec)
            }
            (Some(va), Some(vb)) => {
                let base = va.min(vb);
                let j = prec - base;
                if j <= 0 {
                    return Self::zero_to(ctx, prec);
                }
                let j = (j.min(ctx.n as i64)) as u32;
                let ring = &ctx.ring;
                let lift = |u: &[BigInt], v: i64| -> Vec<BigInt> {
                    let d = v - base;
                    if d >= j as i64 {
                        ring.zero()
                    } else {
                        ring.scale(u, &pow_big(ctx.p, d as u32), j)
                    }
                };
                let a = lift(&self.unit, va);
                let b = lift(&o.unit, vb);
                let s = if negate_other {
                    ring.sub(&a, &b, j)
                } else {
                    ring.add(&a, &b, j)
                };
                Self::make(ctx, s, base, prec)
            }
        }
    }
}

/// Embeds a rational number: v = v_p(a) − v_p(b), unit at the default precision.
pub fn scalar_from_rational(q: &BigRational, ctx: &Arc<PadicContext>) -> Result<PadicScalar> {
    if q.denom().is_zero() {
        return Err(Error::DivisionByZero);
    }
    scalar_from_fraction(q.numer(), q.denom(), ctx)
}

pub fn scalar_from_fraction(a: &BigInt, b: &BigInt, ctx: &Arc<PadicContext>) -> Result<PadicScalar> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if a.is_zero() {
        return Ok(PadicScalar::zero(ctx));
    }
    let (va, ua) = split_p(a, ctx.p);
    let (vb, ub) = split_p(b, ctx.p);
    let m = ctx.ring.pk(ctx.n);
    let inv = crate::num_util::inv_mod(&ub, m).expect("unit part is prime to p");
    let u = (ua * inv).mod_floor(m);
    Ok(PadicScalar::from_parts(ctx, va - vb, ctx.ring.from_int(&u, ctx.n)))
}

impl PartialEq for PadicScalar {
    fn eq(&self, o: &Self) -> bool {
        self.minus(o).vanishes()
    }
}

impl Scalar for PadicScalar {
    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        Self::from_parts(&self.ctx, 0, self.ctx.ring.one())
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        Self::from_int(&self.ctx, n)
    }
    fn vanishes(&self) -> bool {
        self.val.is_none()
    }
    fn plus(&self, o: &Self) -> Self {
        self.aligned_sum(o, false)
    }
    fn minus(&self, o: &Self) -> Self {
        self.aligned_sum(o, true)
    }
    fn times(&self, o: &Self) -> Self {
        let ctx = &self.ctx;
        match (self.val, o.val) {
            (None, _) | (_, None) => {
                if self.is_exact_zero() || o.is_exact_zero() {
                    return Self::zero(ctx);
                }
                let low_a = self.val.unwrap_or(self.prec);
                let low_b = o.val.unwrap_or(o.prec);
                Self::zero_to(ctx, (self.prec + low_b).min(o.prec + low_a))
            }
            (Some(va), Some(vb)) => {
                let rel = (self.prec - va).min(o.prec - vb);
                let u = ctx.ring.mul(&self.unit, &o.unit, rel as u32);
                PadicScalar {
                    ctx: ctx.clone(),
                    val: Some(va + vb),
                    unit: u,
                    prec: va + vb + rel,
                }
            }
        }
    }
    fn negate(&self) -> Self {
        match self.val {
            None => self.clone(),
            Some(v) => {
                let j = (self.prec - v) as u32;
                PadicScalar {
                    ctx: self.ctx.clone(),
                    val: Some(v),
                    unit: self.ctx.ring.neg(&self.unit, j),
                    prec: self.prec,
                }
            }
        }
    }
    fn recip(&self) -> Option<Self> {
        let v = self.val?;
        let rel = self.prec - v;
        let u = self.ctx.ring.inv(&self.unit, rel as u32)?;
        Some(PadicScalar {
            ctx: self.ctx.clone(),
            val: Some(-v),
            unit: u,
            prec: -v + rel,
        })
    }
    fn val_at(&self, _p: u64) -> Option<i64> {
        self.val
    }
    fn log_constant(&self) -> Option<Self> {
        self.log_unit().ok()
    }
    fn precision_floor(&self) -> Option<i64> {
        if self.precision_exhausted() {
            Some(self.prec)
        } else {
            None
        }
    }
}

/// Exact p-adic valuation of an integer-coefficient value, for oracles.
pub fn int_valuation(n: &BigInt, p: u64) -> Valuation {
    Valuation::from_opt(val_p(n, p))
}

/// Symmetric integer representative of a prime-field scalar known to `j` digits
/// of absolute precision (j ≤ prec).
pub fn symmetric_int(x: &PadicScalar, j: u32) -> BigInt {
    let m = x.ctx.ring.pk(j).clone();
    let r = x.to_integer_mod(j);
    if (&r * 2) > m {
        r - m
    } else if r.is_negative() {
        r + m
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num_util::rat;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn contexts() {
        assert!(make_context(5, 3, 1, None).is_ok());
        assert!(make_context(7, 2, 2, Some(&big(&[3, 6, 1]))).is_ok());
        assert_eq!(make_context(4, 3, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(
            make_context(7, 2, 2, Some(&big(&[6, 0, 1]))).unwrap_err(),
            Error::ReducibleModulus
        );
    }

    #[test]
    fn rationals() {
        let ctx = make_context(5, 3, 1, None).unwrap();
        let a = scalar_from_rational(&rat(3, 4), &ctx).unwrap();
        assert_eq!((a.val, a.unit[0].clone()), (Some(0), BigInt::from(32)));
        let b = scalar_from_rational(&rat(1, 5), &ctx).unwrap();
        assert_eq!((b.val, b.unit[0].clone()), (Some(-1), BigInt::from(1)));
        let c = scalar_from_rational(&rat(3, 25), &ctx).unwrap();
        assert_eq!(c.valuation(), Valuation::int(-2));
        assert_eq!(PadicScalar::from_i64(&ctx, 75).valuation(), Valuation::int(2));
        assert_eq!(PadicScalar::zero(&ctx).valuation(), Valuation::Infinite);
    }

    #[test]
    fn cancellation_exhausts_precision() {
        let ctx = make_context(5, 3, 1, None).unwrap();
        let a = PadicScalar::from_i64(&ctx, 1);
        let b = PadicScalar::from_i64(&ctx, 126);
        let d = b.minus(&a);
        assert!(d.precision_exhausted());
        assert_eq!(d.prec, 3);
    }

    #[test]
    fn log_of_six() {
        let ctx = make_context(5, 3, 1, None).unwrap();
        let l = PadicScalar::from_i64(&ctx, 6).log_unit().unwrap();
        assert_eq!(l.val, Some(1));
        assert_eq!(l.unit, big(&[11]));
        assert_eq!(l.to_integer_mod(3), BigInt::from(55));
    }

    #[test]
    fn teichmueller_of_two() {
        let ctx = make_context(7, 2, 1, None).unwrap();
        let w = PadicScalar::from_i64(&ctx, 2).teichmueller().unwrap();
        assert_eq!(w.to_integer_mod(2), BigInt::from(30));
        assert!(w.log_unit().unwrap().vanishes());
    }
}
