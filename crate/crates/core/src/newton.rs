//! Truncated power series with valued coefficients and their Newton polygons.

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Valuation};

/// A power series known modulo T^(trunc+1), or an exact polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ValuedSeries<C> {
    pub coeffs: Vec<C>,
    pub p: u64,
    /// True when the coefficient list is the whole (polynomial) series.
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Compose,
}

impl<C: Scalar> ValuedSeries<C> {
    pub fn truncated(coeffs: Vec<C>, p: u64) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        ValuedSeries { coeffs, p, exact: false }
    }

    pub fn polynomial(coeffs: Vec<C>, p: u64) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        ValuedSeries { coeffs, p, exact: true }
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> C {
        match self.coeffs.get(i) {
            Some(c) => c.clone(),
            None => self.coeffs[0].zero_like(),
        }
    }

    pub fn proto(&self) -> &C {
        &self.coeffs[0]
    }

    /// Views the series modulo T^(m+1); exact polynomials are padded.
    pub fn to_order(&self, m: usize) -> Self {
        let mut c: Vec<C> = self.coeffs.iter().take(m + 1).cloned().collect();
        if self.exact {
            let z = self.proto().zero_like();
            c.resize(m + 1, z);
        } else {
            assert!(m <= self.trunc(), "cannot extend a truncated series");
        }
        ValuedSeries { coeffs: c, p: self.p, exact: false }
    }

    fn join_order(&self, o: &Self) -> Result<(usize, bool)> {
        if self.p != o.p {
            return Err(Error::DomainMismatch);
        }
        Ok(match (self.exact, o.exact) {
            (true, true) => (self.trunc().max(o.trunc()), true),
            (true, false) => (o.trunc(), false),
            (false, true) => (self.trunc(), false),
            (false, false) => (self.trunc().min(o.trunc()), false),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let (m, exact) = self.join_order(o)?;
        let coeffs = (0..=m).map(|i| self.coeff(i).plus(&o.coeff(i))).collect();
        Ok(ValuedSeries { coeffs, p: self.p, exact })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        ValuedSeries {
            coeffs: self.coeffs.iter().map(|c| c.negate()).collect(),
            p: self.p,
            exact: self.exact,
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        ValuedSeries {
            coeffs: self.coeffs.iter().map(|c| c.times(s)).collect(),
            p: self.p,
            exact: self.exact,
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let (m, exact) = self.join_order(o)?;
        let m = if exact { self.trunc() + o.trunc() } else { m };
        let z = self.proto().zero_like();
        let mut out = vec![z; m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.vanishes() && a.precision_floor().is_none() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(m + 1 - i) {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Ok(ValuedSeries { coeffs: out, p: self.p, exact })
    }

    /// a(b(T)); requires b(0) = 0.
    pub fn compose(&self, b: &Self) -> Result<Self> {
        if self.p != b.p {
            return Err(Error::DomainMismatch);
        }
        if !b.coeffs[0].vanishes() {
            return Err(Error::ComposeNonzeroConstant);
        }
        let (m, exact) = match (self.exact, b.exact) {
            (true, true) => (self.trunc() * b.trunc().max(1), true),
            (true, false) => (b.trunc(), false),
            (false, true) => (self.trunc(), false),
            (false, false) => (self.trunc().min(b.trunc()), false),
        };
        let b = if exact { b.clone() } else { b.resized(m) };
        // Horner in the series ring
        let mut acc = ValuedSeries {
            coeffs: vec![self.proto().zero_like(); m + 1],
            p: self.p,
            exact,
        };
        for c in self.coeffs.iter().take(if exact { self.coeffs.len() } else { m + 1 }).rev() {
            acc = acc.mul(&b)?.resized(m);
            acc.coeffs[0] = acc.coeffs[0].plus(c);
        }
        Ok(acc)
    }

    fn resized(&self, m: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(m + 1, self.proto().zero_like());
        ValuedSeries { coeffs: c, p: self.p, exact: self.exact }
    }

    /// Multiplicative inverse when the constant term is invertible.
    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].recip().ok_or(Error::DivisionByZero)?;
        let m = self.trunc();
        let mut out: Vec<C> = Vec::with_capacity(m + 1);
        out.push(inv0.clone());
        for n in 1..=m {
            let mut s = self.proto().zero_like();
            for k in 1..=n {
                if let Some(a) = self.coeffs.get(k) {
                    s = s.plus(&a.times(&out[n - k]));
                }
            }
            out.push(s.negate().times(&inv0));
        }
        Ok(ValuedSeries { coeffs: out, p: self.p, exact: false })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let m = self.trunc().min(o.trunc());
        let a = if self.exact { self.to_order(m) } else { self.clone() };
        let b = if o.exact { o.to_order(m) } else { o.clone() };
        a.mul(&b.inverse()?)
    }

    pub fn derivative(&self) -> Self {
        let mut c: Vec<C> = (1..self.coeffs.len())
            .map(|i| self.coeffs[i].times(&self.proto().from_i64_like(i as i64)))
            .collect();
        if c.is_empty() {
            c.push(self.proto().zero_like());
        }
        ValuedSeries { coeffs: c, p: self.p, exact: self.exact }
    }

    /// ∫ with constant term `c0`; fails if some index is not invertible in C.
    pub fn integral(&self, c0: C) -> Result<Self> {
        let mut c = vec![c0];
        for (i, a) in self.coeffs.iter().enumerate() {
            c.push(a.div_int(i as i64 + 1).ok_or(Error::DivisionByZero)?);
        }
        Ok(ValuedSeries { coeffs: c, p: self.p, exact: self.exact })
    }

    pub fn valuations(&self) -> Vec<Valuation> {
        self.coeffs.iter().map(|c| Valuation::from_opt(c.val_at(self.p))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.vanishes())
    }
}

pub fn series_arith<C: Scalar>(a: &ValuedSeries<C>, b: &ValuedSeries<C>, kind: SeriesOp) -> Result<ValuedSeries<C>> {
    match kind {
        SeriesOp::Add => a.add(b),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Compose => a.compose(b),
    }
}

/// log s = log s(0) + ∫ s'/s.
pub fn formal_log<C: Scalar>(s: &ValuedSeries<C>) -> Result<ValuedSeries<C>> {
    let c0 = &s.coeffs[0];
    let constant = if c0.is_one_s() {
        c0.zero_like()
    } else {
        if c0.recip().is_none() {
            return Err(Error::ConstantTermNotUnit);
        }
        c0.log_constant().ok_or(Error::ConstantTermNotUnit)?
    };
    let s = if s.exact { s.to_order(s.trunc()) } else { s.clone() };
    let m = s.trunc();
    let d = s.derivative();
    let q = d.to_order_lossy(m.saturating_sub(1)).mul(&s.inverse()?.to_order_lossy(m.saturating_sub(1)))?;
    let mut out = q.integral(constant)?;
    out.coeffs.truncate(m + 1);
    out.exact = false;
    Ok(out)
}

impl<C: Scalar> ValuedSeries<C> {
    fn to_order_lossy(&self, m: usize) -> Self {
        let mut c: Vec<C> = self.coeffs.iter().take(m + 1).cloned().collect();
        c.resize(m + 1, self.proto().zero_like());
        ValuedSeries { coeffs: c, p: self.p, exact: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub n: usize,
    pub v: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    /// Minus the gradient of the segment.
    pub lambda: Rational64,
    pub length: usize,
    pub provisional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    /// Certified vertices.
    pub vertices: Vec<Vertex>,
    /// Vertices of the truncated hull that may move once more terms are known.
    pub provisional_vertices: Vec<Vertex>,
    pub slopes: Vec<Segment>,
    /// Indices whose coefficient vanished only to finite precision.
    pub uncertified: Vec<usize>,
    pub trunc: usize,
    pub exact: bool,
}

fn cross(o: Vertex, a: Vertex, b: Vertex) -> i128 {
    let (ax, ay) = (a.n as i128 - o.n as i128, a.v as i128 - o.v as i128);
    let (bx, by) = (b.n as i128 - o.n as i128, b.v as i128 - o.v as i128);
    ax * by - ay * bx
}

/// Lower convex hull of the points (n, val a_n).
///
/// For a truncated series every segment to the right of the first vertex of
/// minimal valuation is provisional, since later coefficients may undercut it;
/// the final index is never reported as a certified vertex. A coefficient that
/// vanished only to precision p^P is excluded from the support, and any segment
/// whose line passes above (n, P) is marked provisional as well.
pub fn newton_polygon<C: Scalar>(s: &ValuedSeries<C>) -> Result<NewtonPolygon> {
    let mut pts = Vec::new();
    let mut floors = Vec::new();
    for (n, c) in s.coeffs.iter().enumerate() {
        if let Some(fl) = c.precision_floor() {
            floors.push((n, fl));
        } else if let Some(v) = c.val_at(s.p) {
            pts.push(Vertex { n, v });
        }
    }
    if pts.is_empty() {
        return Err(Error::ZeroSeries);
    }
    let mut hull: Vec<Vertex> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let trunc = s.trunc();
    // index into `hull` after which everything is provisional
    let certified_upto = if s.exact {
        hull.len() - 1
    } else {
        let min_v = hull.iter().map(|v| v.v).min().unwrap();
        let first_min = hull.iter().position(|v| v.v == min_v).unwrap();
        if hull[first_min].n == trunc {
            first_min.saturating_sub(1).min(hull.len() - 1)
        } else {
            first_min
        }
    };
    let mut slopes = Vec::new();
    for w in 0..hull.len().saturating_sub(1) {
        let (a, b) = (hull[w], hull[w + 1]);
        let len = b.n - a.n;
        let lambda = Rational64::new(-(b.v - a.v), len as i64);
        let undercut = floors.iter().any(|&(n, fl)| {
            n > a.n && n < b.n && {
                // line value at n: a.v + (b.v − a.v)(n − a.n)/len
                let lhs = fl as i128 * len as i128;
                let rhs = a.v as i128 * len as i128 + (b.v - a.v) as i128 * (n - a.n) as i128;
                lhs < rhs
            }
        });
        slopes.push(Segment {
            start: a.n,
            end: b.n,
            lambda,
            length: len,
            provisional: w >= certified_upto || undercut,
        });
    }
    // a vertex is certified when it is not beyond the cutoff and every segment
    // touching it is certified
    let mut vertices = Vec::new();
    let mut provisional_vertices = Vec::new();
    for (i, v) in hull.iter().enumerate() {
        let left_ok = i == 0 || !slopes[i - 1].provisional;
        let ok = i <= certified_upto && left_ok && (s.exact || v.n != trunc);
        if ok {
            vertices.push(*v);
        } else {
            provisional_vertices.push(*v);
        }
    }
    Ok(NewtonPolygon {
        vertices,
        provisional_vertices,
        slopes,
        uncertified: floors.iter().map(|&(n, _)| n).collect(),
        trunc,
        exact: s.exact,
    })
}

/// Certified segments with λ > 0, as (λ, length); each counts zeroes of valuation λ.
pub fn negative_slopes(np: &NewtonPolygon) -> Vec<(Rational64, usize)> {
    np.slopes
        .iter()
        .filter(|s| !s.provisional && s.lambda > Rational64::from_integer(0))
        .map(|s| (s.lambda, s.length))
        .collect()
}

/// Number of zeroes with valuation in [lo, hi], from certified segments.
pub fn zero_count(np: &NewtonPolygon, lo: Rational64, hi: Rational64) -> usize {
    negative_slopes(np)
        .into_iter()
        .filter(|(l, _)| *l >= lo && *l <= hi)
        .map(|(_, n)| n)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num_util::{rat, rat_int};
    use num_rational::BigRational;

    fn ser(c: &[i64]) -> ValuedSeries<BigRational> {
        ValuedSeries::polynomial(c.iter().map(|&x| rat_int(x)).collect(), 5)
    }

    #[test]
    fn products_and_composition() {
        let a = ser(&[1, 1]);
        let b = ser(&[1, -1]);
        assert_eq!(a.mul(&b).unwrap().coeffs, ser(&[1, 0, -1]).coeffs);
        let t = ser(&[0, 1]);
        let f = ser(&[0, 1, 1]);
        assert_eq!(f.compose(&t).unwrap().coeffs[..3], f.coeffs[..]);
        assert_eq!(f.compose(&ser(&[1, 1])).unwrap_err(), Error::ComposeNonzeroConstant);
    }

    #[test]
    fn exponential_series_cancel() {
        let m = 20;
        let mut e = Vec::new();
        let mut f = BigRational::from_integer(1.into());
        for i in 0..=m {
            if i > 0 {
                f /= rat_int(i as i64);
            }
            e.push(f.clone());
        }
        let a = ValuedSeries::truncated(e.clone(), 5);
        let b = ValuedSeries::truncated(
            e.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect(),
            5,
        );
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.trunc(), m);
        assert!(prod.coeffs[0].is_one_s());
        assert!(prod.coeffs[1..].iter().all(|c| c.vanishes()));
    }

    #[test]
    fn log_of_one_plus_t() {
        let l = formal_log(&ser(&[1, 1]).to_order(6)).unwrap();
        let want = [0, 1, -2, 3, -4, 5, -6];
        for (i, &d) in want.iter().enumerate().skip(1) {
            assert_eq!(l.coeffs[i], rat(1, d));
        }
        let sq = formal_log(&ser(&[1, 2, 1]).to_order(6)).unwrap();
        assert_eq!(sq.coeffs, l.scale(&rat_int(2)).coeffs);
    }

    #[test]
    fn polygon_of_two_roots() {
        let np = newton_polygon(&ser(&[125, -30, 1])).unwrap();
        let vs: Vec<(usize, i64)> = np.vertices.iter().map(|v| (v.n, v.v)).collect();
        assert_eq!(vs, vec![(0, 3), (1, 1), (2, 0)]);
        assert_eq!(
            negative_slopes(&np),
            vec![(Rational64::from_integer(2), 1), (Rational64::from_integer(1), 1)]
        );
        let c = newton_polygon(&ser(&[25])).unwrap();
        assert_eq!(c.vertices, vec![Vertex { n: 0, v: 2 }]);
        assert!(c.slopes.is_empty());
    }
}
