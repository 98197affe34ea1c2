//! Plane-curve models h(x, y) = 0, rational functions on them, local branches
//! through residue discs, and logarithmic differentials.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::fq::{Fq, FqField};
use crate::newton::ValuedSeries;
use crate::padic::{PadicContext, PadicScalar};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct PlaneCurve {
    pub h: BiPoly<BigInt>,
    pub genus: u32,
    pub boundary_degree: u32,
    pub ctx: Arc<PadicContext>,
}

impl PlaneCurve {
    pub fn new(h: BiPoly<BigInt>, genus: u32, boundary_degree: u32, ctx: Arc<PadicContext>) -> Result<Self> {
        let p = BigInt::from(ctx.p);
        if h.terms.values().all(|c| (c % &p).is_zero()) {
            return Err(Error::InvalidInput("curve equation vanishes mod p".into()));
        }
        Ok(PlaneCurve {
            h,
            genus,
            boundary_degree,
            ctx,
        })
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn h_padic(&self) -> BiPoly<PadicScalar> {
        let ctx = self.ctx.clone();
        self.h.map(move |c| PadicScalar::from_int(&ctx, c))
    }
}

/// num/den with integer bivariate polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub num: BiPoly<BigInt>,
    pub den: BiPoly<BigInt>,
}

impl RationalFunction {
    pub fn new(num: BiPoly<BigInt>, den: BiPoly<BigInt>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn poly(num: BiPoly<BigInt>) -> Self {
        RationalFunction {
            num,
            den: BiPoly::constant(BigInt::from(1)),
        }
    }

    pub fn x() -> Self {
        Self::poly(BiPoly::x(&BigInt::from(1)))
    }

    pub fn y() -> Self {
        Self::poly(BiPoly::y(&BigInt::from(1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFunction {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    pub fn pow(&self, e: i32) -> Self {
        if e >= 0 {
            RationalFunction {
                num: self.num.pow(e as u32),
                den: self.den.pow(e as u32),
            }
        } else {
            RationalFunction {
                num: self.den.pow((-e) as u32),
                den: self.num.pow((-e) as u32),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axis {
    /// T = x − x0.
    X,
    /// T = y − y0.
    Y,
}

#[derive(Clone, Debug)]
pub struct DiscPoint {
    pub x0: PadicScalar,
    pub y0: PadicScalar,
    pub axis: Axis,
}

fn is_unit<C: Scalar>(c: &C, p: u64) -> bool {
    c.val_at(p) == Some(0)
}

impl DiscPoint {
    /// Chooses T = x − x0 when h_y is a unit at the point, else T = y − y0.
    pub fn new(c: &PlaneCurve, x0: PadicScalar, y0: PadicScalar) -> Result<Self> {
        let h = c.h_padic();
        let hy = h.partial_y().eval(&x0, &y0);
        let hx = h.partial_x().eval(&x0, &y0);
        let axis = if is_unit(&hy, c.p()) {
            Axis::X
        } else if is_unit(&hx, c.p()) {
            Axis::Y
        } else {
            return Err(Error::SingularPoint);
        };
        Ok(DiscPoint { x0, y0, axis })
    }

    pub fn with_axis(c: &PlaneCurve, x0: PadicScalar, y0: PadicScalar, axis: Axis) -> Result<Self> {
        let mut d = Self::new(c, x0, y0)?;
        d.axis = axis;
        Ok(d)
    }

    pub fn from_ints(c: &PlaneCurve, x0: i64, y0: i64) -> Result<Self> {
        Self::new(c, PadicScalar::from_i64(&c.ctx, x0), PadicScalar::from_i64(&c.ctx, y0))
    }
}

/// Evaluates `h` at series arguments, with coefficients mapped by `f`.
pub fn eval_series<C: Scalar, D: Scalar>(
    h: &BiPoly<D>,
    x: &ValuedSeries<C>,
    y: &ValuedSeries<C>,
    f: impl Fn(&D) -> C,
) -> Result<ValuedSeries<C>> {
    let m = x.trunc().min(y.trunc());
    let x = x.to_order(m);
    let y = y.to_order(m);
    let mut xp = vec![ValuedSeries::polynomial(vec![x.proto().one_like()], x.p).to_order(m)];
    for i in 0..h.deg_x().max(0) as usize {
        xp.push(xp[i].mul(&x)?);
    }
    let mut yp = vec![ValuedSeries::polynomial(vec![x.proto().one_like()], x.p).to_order(m)];
    for j in 0..h.deg_y().max(0) as usize {
        yp.push(yp[j].mul(&y)?);
    }
    let mut acc = ValuedSeries::truncated(vec![x.proto().zero_like(); m + 1], x.p);
    for (k, c) in &h.terms {
        let t = xp[k.0 as usize].mul(&yp[k.1 as usize])?.scale(&f(c));
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

/// Newton iteration solving h(x0 + T, y(T)) = 0 (or the swapped chart) over any
/// coefficient domain. Returns the two coordinate series.
pub fn branch_series<C: Scalar>(
    h: &BiPoly<C>,
    x0: &C,
    y0: &C,
    axis: Axis,
    order: usize,
    p: u64,
) -> Result<(ValuedSeries<C>, ValuedSeries<C>)> {
    let (g, a0, b0) = match axis {
        Axis::X => (h.clone(), x0.clone(), y0.clone()),
        Axis::Y => (h.swap_xy(), y0.clone(), x0.clone()),
    };
    let gb = g.partial_y();
    let ga = g.partial_x();
    let d0 = gb.eval(&a0, &b0);
    if !is_unit(&d0, p) {
        if !is_unit(&ga.eval(&a0, &b0), p) {
            return Err(Error::SingularPoint);
        }
        return Err(Error::InvalidInput("branch parameter is not a local coordinate here".into()));
    }
    let r0 = g.eval(&a0, &b0);
    if !r0.vanishes() && r0.val_at(p).is_some_and(|v| v < 1) {
        return Err(Error::PointNotOnCurve);
    }
    // refine the constant term
    let mut b = b0;
    for _ in 0..64 {
        let r = g.eval(&a0, &b);
        if r.vanishes() {
            break;
        }
        let d = gb.eval(&a0, &b);
        let nb = b.minus(&r.times(&d.recip().ok_or(Error::SingularPoint)?));
        if nb.minus(&b).vanishes() {
            b = nb;
            break;
        }
        b = nb;
    }
    let a_ser = ValuedSeries::polynomial(vec![a0.clone(), a0.one_like()], p).to_order(order);
    let mut cur = 1usize;
    let mut b_ser = ValuedSeries::truncated(vec![b], p);
    while cur < order + 1 {
        cur = (2 * cur).min(order + 1);
        let bs = pad(&b_ser, cur - 1);
        let aa = a_ser.to_order(cur - 1);
        let num = eval_series(&g, &aa, &bs, |c| c.clone())?;
        let den = eval_series(&gb, &aa, &bs, |c| c.clone())?;
        let step = num.mul(&den.inverse()?)?;
        b_ser = bs.sub(&step)?;
    }
    let b_ser = b_ser.to_order(order);
    Ok(match axis {
        Axis::X => (a_ser, b_ser),
        Axis::Y => (b_ser, a_ser),
    })
}

fn pad<C: Scalar>(s: &ValuedSeries<C>, m: usize) -> ValuedSeries<C> {
    let mut c = s.coeffs.clone();
    c.resize(m + 1, s.proto().zero_like());
    ValuedSeries::truncated(c, s.p)
}

/// Both coordinate series of the branch through `z0`.
pub fn branch(c: &PlaneCurve, z0: &DiscPoint, order: usize) -> Result<(ValuedSeries<PadicScalar>, ValuedSeries<PadicScalar>)> {
    branch_series(&c.h_padic(), &z0.x0, &z0.y0, z0.axis, order, c.p())
}

/// The non-parameter coordinate as a series in T.
pub fn hensel_branch(c: &PlaneCurve, z0: &DiscPoint, order: usize) -> Result<ValuedSeries<PadicScalar>> {
    let (x, y) = branch(c, z0, order)?;
    Ok(match z0.axis {
        Axis::X => y,
        Axis::Y => x,
    })
}

/// f(x(T), y(T)) along the disc of `z0`.
pub fn eval_function_series(
    c: &PlaneCurve,
    f: &RationalFunction,
    z0: &DiscPoint,
    order: usize,
) -> Result<ValuedSeries<PadicScalar>> {
    let (x, y) = branch(c, z0, order)?;
    function_on_branch(c, f, &x, &y)
}

pub fn function_on_branch(
    c: &PlaneCurve,
    f: &RationalFunction,
    x: &ValuedSeries<PadicScalar>,
    y: &ValuedSeries<PadicScalar>,
) -> Result<ValuedSeries<PadicScalar>> {
    let ctx = c.ctx.clone();
    let lift = move |v: &BigInt| PadicScalar::from_int(&ctx, v);
    let num = eval_series(&f.num, x, y, &lift)?;
    let den = eval_series(&f.den, x, y, &lift)?;
    if den.coeffs[0].vanishes() || den.coeffs[0].val_at(c.p()).is_some_and(|v| v > 0) {
        return Err(Error::PoleOnDisc);
    }
    num.mul(&den.inverse()?)
}

fn dlog_part(h: &BiPoly<BigInt>, g: &BiPoly<BigInt>) -> BiPoly<BigInt> {
    g.partial_x().mul(&h.partial_y()).sub(&g.partial_y().mul(&h.partial_x()))
}

/// The unreduced numerator A with df/f = A / (num·den·h_y) dx.
pub fn dlog_numerator_raw(h: &BiPoly<BigInt>, f: &RationalFunction) -> BiPoly<BigInt> {
    dlog_part(h, &f.num)
        .mul(&f.den)
        .sub(&dlog_part(h, &f.den).mul(&f.num))
}

/// A = D(num)·den − D(den)·num with D(F) = F_x h_y − F_y h_x, reduced modulo h
/// when h has a constant leading coefficient in y (then the class is correct up
/// to a nonzero constant factor).
pub fn dlog_numerator(c: &PlaneCurve, f: &RationalFunction) -> Result<BiPoly<BigInt>> {
    let num_red = reduce_if_monicish(&f.num, &c.h);
    if num_red.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let a = dlog_numerator_raw(&c.h, f);
    Ok(reduce_if_monicish(&a, &c.h))
}

fn reduce_if_monicish(a: &BiPoly<BigInt>, h: &BiPoly<BigInt>) -> BiPoly<BigInt> {
    let dy = h.deg_y();
    if dy > 0 {
        if h.y_coeffs()[dy as usize].degree() == Some(0) {
            return a.prem_y(h);
        }
    } else if h.deg_x() > 0 {
        return a.prem_x(h);
    }
    a.clone()
}

/// A point of the reduction over a finite extension F_{p^m}.
#[derive(Clone, Debug)]
pub struct ResiduePoint {
    pub x: Fq,
    pub y: Fq,
}

pub fn reduce_poly(a: &BiPoly<BigInt>, field: &Arc<FqField>) -> BiPoly<Fq> {
    let proto = Fq::from_int(field, 0);
    a.map(|c| proto.from_int_like(c))
}

/// Order of vanishing of `a` at the smooth residue point `pt` of h mod p, along the
/// mod-p branch. `None` if `a` vanishes identically on the branch (to the
/// intersection-number bound).
pub fn ord_at(c: &PlaneCurve, a: &BiPoly<BigInt>, pt: &ResiduePoint) -> Result<Option<usize>> {
    let field = pt.x.field.clone();
    let h = reduce_poly(&c.h, &field);
    let ar = reduce_poly(a, &field);
    if !h.eval(&pt.x, &pt.y).vanishes() {
        return Err(Error::PointNotOnCurve);
    }
    let hy = h.partial_y().eval(&pt.x, &pt.y);
    let hx = h.partial_x().eval(&pt.x, &pt.y);
    let axis = if !hy.vanishes() {
        Axis::X
    } else if !hx.vanishes() {
        Axis::Y
    } else {
        return Err(Error::SingularPoint);
    };
    if ar.is_zero() {
        return Ok(None);
    }
    let bound = ((ar.total_degree().max(0) + 1) * (c.h.total_degree().max(1))) as usize + 1;
    let (xs, ys) = branch_series(&h, &pt.x, &pt.y, axis, bound, c.p())?;
    let s = eval_series(&ar, &xs, &ys, |v| v.clone())?;
    Ok(s.coeffs.iter().position(|v| !v.vanishes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num_util::rat;
    use crate::padic::{make_context, scalar_from_rational};

    fn curve(t: &[((u32, u32), i64)], p: u64, n: u32) -> PlaneCurve {
        PlaneCurve::new(BiPoly::from_int_terms(t), 0, 0, make_context(p, n, 1, None).unwrap()).unwrap()
    }

    #[test]
    fn parabola_branch_is_exact() {
        let c = curve(&[((0, 1), 1), ((2, 0), -1)], 5, 6);
        let z = DiscPoint::from_ints(&c, 1, 1).unwrap();
        let y = hensel_branch(&c, &z, 5).unwrap();
        let want: Vec<PadicScalar> = [1, 2, 1, 0, 0, 0].iter().map(|&v| PadicScalar::from_i64(&c.ctx, v)).collect();
        assert_eq!(y.coeffs, want);
    }

    #[test]
    fn elliptic_branch_matches_binomial_series() {
        let c = curve(&[((0, 2), 1), ((3, 0), -1), ((0, 0), -1)], 5, 8);
        let z = DiscPoint::from_ints(&c, 0, 1).unwrap();
        let y = hensel_branch(&c, &z, 9).unwrap();
        // (1 + u)^{1/2} = 1 + u/2 − u²/8 + u³/16, u = T³
        let want = [(0, rat(1, 1)), (3, rat(1, 2)), (6, rat(-1, 8)), (9, rat(1, 16))];
        for (i, q) in want {
            assert_eq!(y.coeffs[i], scalar_from_rational(&q, &c.ctx).unwrap());
        }
        assert!(y.coeffs[1].vanishes() && y.coeffs[4].vanishes());
    }

    #[test]
    fn dlog_numerators() {
        let c = curve(&[((0, 1), 1), ((2, 0), -1)], 5, 4);
        assert_eq!(dlog_numerator(&c, &RationalFunction::x()).unwrap(), BiPoly::from_int_terms(&[((0, 0), 1)]));
        assert_eq!(dlog_numerator(&c, &RationalFunction::y()).unwrap(), BiPoly::from_int_terms(&[((1, 0), 2)]));
        let line = curve(&[((1, 0), 1), ((0, 1), 1), ((0, 0), -1)], 7, 4);
        let f = RationalFunction::poly(BiPoly::from_int_terms(&[((0, 0), 1), ((1, 0), -1)]));
        assert_eq!(dlog_numerator(&line, &f).unwrap(), BiPoly::from_int_terms(&[((0, 0), -1)]));
    }

    #[test]
    fn order_at_critical_point() {
        let p = 7;
        let line = curve(&[((1, 0), 1), ((0, 1), 1), ((0, 0), -1)], p, 4);
        let f = RationalFunction::poly(BiPoly::from_int_terms(&[((1, 0), 1), ((2, 0), -1)]));
        let a = dlog_numerator(&line, &f).unwrap();
        let field = FqField::new(p, &[0, 1]).unwrap();
        let half = Fq::from_int(&field, 4);
        let pt = ResiduePoint {
            x: half.clone(),
            y: Fq::from_int(&field, 1).minus(&half),
        };
        assert_eq!(ord_at(&line, &a, &pt).unwrap(), Some(1));
        let one = BiPoly::from_int_terms(&[((0, 0), 1)]);
        assert_eq!(ord_at(&line, &one, &pt).unwrap(), Some(0));
        // (x − 2)^2 on y = x
        let diag = curve(&[((0, 1), 1), ((1, 0), -1)], p, 4);
        let sq = BiPoly::from_int_terms(&[((2, 0), 1), ((1, 0), -4), ((0, 0), 4)]);
        let two = Fq::from_int(&field, 2);
        assert_eq!(
            ord_at(&diag, &sq, &ResiduePoint { x: two.clone(), y: two }).unwrap(),
            Some(2)
        );
    }
}
