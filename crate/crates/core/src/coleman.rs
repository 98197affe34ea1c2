//! Logarithms of functions on residue discs and the slope structure of their
//! Newton polygons, with the associated bounds.

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::curve::{
    branch, dlog_numerator, eval_series, function_on_branch, ord_at, DiscPoint, PlaneCurve, RationalFunction,
    ResiduePoint,
};
use crate::error::{Error, Result};
use crate::newton::{formal_log, negative_slopes, newton_polygon, NewtonPolygon, ValuedSeries, Vertex};
use crate::padic::PadicScalar;
use crate::scalar::{Scalar, Valuation};

/// log f(z) = log f(z0) + Σ (−1)^{m+1} (f(z) − f(z0))^m / (m f(z0)^m) along the disc.
pub fn log_f_disc_series(
    c: &PlaneCurve,
    f: &RationalFunction,
    z0: &DiscPoint,
    order: usize,
) -> Result<ValuedSeries<PadicScalar>> {
    let (x, y) = branch(c, z0, order)?;
    let s = function_on_branch(c, f, &x, &y)?;
    if !s.coeffs[0].is_unit() {
        return Err(Error::NotAUnit);
    }
    formal_log(&s)
}

/// df/f expanded in the disc parameter: A/(num·den·h_y) · dx/dT.
pub fn dlog_disc_series(
    c: &PlaneCurve,
    f: &RationalFunction,
    z0: &DiscPoint,
    order: usize,
) -> Result<ValuedSeries<PadicScalar>> {
    let (x, y) = branch(c, z0, order + 1)?;
    let ctx = c.ctx.clone();
    let lift = move |v: &BigInt| PadicScalar::from_int(&ctx, v);
    let a = crate::curve::dlog_numerator_raw(&c.h, f);
    let av = eval_series(&a, &x, &y, &lift)?;
    let nd = eval_series(&f.num.mul(&f.den), &x, &y, &lift)?;
    let hy = eval_series(&c.h.partial_y(), &x, &y, &lift)?;
    let dx = x.derivative();
    let q = av.to_order(order).mul(&nd.to_order(order).mul(&hy.to_order(order))?.inverse()?)?;
    q.mul(&dx.to_order(order))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SlopeCase {
    /// v > 0 or v = ∞: end vertices (k p^n, −n).
    PositiveValuation,
    /// v ≤ 0: vertices (0,0) and (k p^n, −n) for n > v.
    NonPositiveValuation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopePrediction {
    pub k: u64,
    pub v: Valuation,
    pub p: u64,
    pub predicted_vertices: Vec<Vertex>,
    pub predicted_slopes: Vec<(Rational64, usize)>,
    pub case_tag: SlopeCase,
}

/// Predicted polygon of log f on a disc where df/f has order k − 1, up to `max_index`.
pub fn predict_slopes(k: u64, v: Valuation, p: u64, max_index: usize) -> Result<SlopePrediction> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    if k >= p {
        return Err(Error::HypothesisViolated(format!("k = {k} is not below p = {p}")));
    }
    let positive = match v {
        Valuation::Infinite => true,
        Valuation::Finite(r) => r > Rational64::zero(),
    };
    let mut vertices = Vec::new();
    let mut slopes = Vec::new();
    let kp = |n: u32| -> Option<usize> {
        (p as u128).checked_pow(n).map(|q| q * k as u128).filter(|&x| x <= max_index as u128).map(|x| x as usize)
    };
    if positive {
        let mut n = 0u32;
        while let Some(idx) = kp(n) {
            vertices.push(Vertex { n: idx, v: -(n as i64) });
            if n >= 1 {
                let len = idx - kp(n - 1).unwrap();
                slopes.push((Rational64::new(1, len as i64), len));
            }
            n += 1;
        }
        Ok(SlopePrediction {
            k,
            v,
            p,
            predicted_vertices: vertices,
            predicted_slopes: slopes,
            case_tag: SlopeCase::PositiveValuation,
        })
    } else {
        let vi = v.finite().unwrap().to_integer();
        vertices.push(Vertex { n: 0, v: 0 });
        let n0 = (vi + 1).max(0) as u32;
        let mut n = n0;
        while let Some(idx) = kp(n) {
            vertices.push(Vertex { n: idx, v: -(n as i64) });
            if n == n0 {
                // first slope as stated: 1/(k p^{v+1})
                let e = vi + 1;
                let lam = if e >= 0 {
                    Rational64::new(1, k as i64 * (p as i64).pow(e as u32))
                } else {
                    Rational64::new((p as i64).pow((-e) as u32), k as i64)
                };
                slopes.push((lam, idx));
            } else {
                let prev = kp(n - 1).unwrap();
                let len = idx - prev;
                slopes.push((Rational64::new(1, len as i64), len));
            }
            n += 1;
        }
        Ok(SlopePrediction {
            k,
            v,
            p,
            predicted_vertices: vertices,
            predicted_slopes: slopes,
            case_tag: SlopeCase::NonPositiveValuation,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "details", rename_all = "snake_case")]
pub enum SlopeVerdict {
    Match,
    Mismatch(String),
    OutOfHypothesis(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeReport {
    pub k: Option<u64>,
    pub v: Valuation,
    pub predicted: Option<SlopePrediction>,
    pub computed: NewtonPolygon,
    /// Vertices of the computed polygon that were compared.
    pub compared: Vec<Vertex>,
    pub verdict: SlopeVerdict,
    pub notes: Vec<String>,
}

/// Reduction of an integral disc point.
pub fn residue_point(z0: &DiscPoint) -> Result<ResiduePoint> {
    if !z0.x0.is_integral() || !z0.y0.is_integral() {
        return Err(Error::BadReduction);
    }
    Ok(ResiduePoint {
        x: z0.x0.residue(),
        y: z0.y0.residue(),
    })
}

/// Computes k from the order of df/f at the reduction, v from log f(z0), and
/// compares the polygon of log f on the disc with the prediction.
pub fn verify_slopes(c: &PlaneCurve, f: &RationalFunction, z0: &DiscPoint, order: usize) -> Result<SlopeReport> {
    let series = log_f_disc_series(c, f, z0, order)?;
    let computed = newton_polygon(&series)?;
    let mut notes = Vec::new();
    let l0 = &series.coeffs[0];
    let v = if l0.vanishes() {
        if l0.precision_exhausted() {
            notes.push(format!(
                "log f(z0) vanishes to the working precision p^{}; treated as v = ∞",
                l0.prec
            ));
        }
        Valuation::Infinite
    } else {
        l0.valuation()
    };
    let a = dlog_numerator(c, f)?;
    let pt = residue_point(z0)?;
    let ord = ord_at(c, &a, &pt)?;
    let Some(ord) = ord else {
        return Ok(SlopeReport {
            k: None,
            v,
            predicted: None,
            computed,
            compared: Vec::new(),
            verdict: SlopeVerdict::OutOfHypothesis("df/f vanishes identically mod p".into()),
            notes,
        });
    };
    let k = ord as u64 + 1;
    let pred = match predict_slopes(k, v, c.p(), order) {
        Ok(pr) => pr,
        Err(Error::HypothesisViolated(msg)) => {
            return Ok(SlopeReport {
                k: Some(k),
                v,
                predicted: None,
                computed,
                compared: Vec::new(),
                verdict: SlopeVerdict::OutOfHypothesis(msg),
                notes,
            })
        }
        Err(e) => return Err(e),
    };
    let last_certified = computed.vertices.last().map(|v| v.n).unwrap_or(0);
    let lo = match pred.case_tag {
        SlopeCase::PositiveValuation => k as usize,
        SlopeCase::NonPositiveValuation => 0,
    };
    let want: Vec<Vertex> = pred
        .predicted_vertices
        .iter()
        .copied()
        .filter(|w| w.n >= lo && w.n <= last_certified)
        .collect();
    let got: Vec<Vertex> = computed
        .vertices
        .iter()
        .copied()
        .filter(|w| w.n >= lo && w.n <= last_certified)
        .collect();
    if want.len() < 2 {
        notes.push("truncation order certifies fewer than two predicted vertices".into());
    }
    let verdict = if want.len() >= 2 && want == got {
        SlopeVerdict::Match
    } else if want == got {
        SlopeVerdict::Mismatch("insufficient order to compare two vertices".into())
    } else {
        SlopeVerdict::Mismatch(format!("predicted {:?}, computed {:?}", fmt_v(&want), fmt_v(&got)))
    };
    Ok(SlopeReport {
        k: Some(k),
        v,
        predicted: Some(pred),
        computed,
        compared: got,
        verdict,
        notes,
    })
}

fn fmt_v(v: &[Vertex]) -> Vec<(usize, i64)> {
    v.iter().map(|w| (w.n, w.v)).collect()
}

/// True iff the computed polygon has a certified non-integral negative slope
/// strictly above 1/(p − 1).
pub fn ramified_slope_flag(np: &NewtonPolygon, p: u64) -> bool {
    let cut = Rational64::new(1, p as i64 - 1);
    negative_slopes(np)
        .iter()
        .any(|(l, _)| !l.is_integer() && *l > cut)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationBound {
    pub bound: u64,
    /// Whether p ≥ 2g + d, the range in which the bound is asserted.
    pub valid: bool,
}

pub fn ramification_bound(g: u64, d: u64, p: u64) -> RamificationBound {
    let bound = 2 * g + d;
    RamificationBound { bound, valid: p >= bound }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaMap {
    pub column: usize,
    pub pivot_row: usize,
    /// (n − 1) × n exponent matrix; row i gives the monomial z^row.
    pub exponents: Vec<Vec<i64>>,
}

/// For each column j of the n × k matrix `a`, the map 𝔾_m^n → 𝔾_m^{n−1} with
/// coordinates z_i^{a_ℓj} z_ℓ^{−a_ij} (i ≠ ℓ), ℓ the first row with a_ℓj ≠ 0.
pub fn theta_maps(a: &[Vec<i64>]) -> Result<Vec<ThetaMap>> {
    let n = a.len();
    let k = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for j in 0..k {
        let l = (0..n).find(|&i| a[i][j] != 0).ok_or(Error::ZeroColumn(j))?;
        let mut rows = Vec::new();
        for i in (0..n).filter(|&i| i != l) {
            let mut e = vec![0i64; n];
            e[i] = a[l][j];
            e[l] = -a[i][j];
            rows.push(e);
        }
        out.push(ThetaMap {
            column: j,
            pivot_row: l,
            exponents: rows,
        });
    }
    Ok(out)
}

/// p^{4g} 3^g [p(2g − 2) + 6g] g!, for g > 1 and p odd.
pub fn buium_bound(g: u64, p: u64) -> Result<BigInt> {
    if g <= 1 {
        return Err(Error::HypothesisViolated(format!("genus {g} is not above 1")));
    }
    if p % 2 == 0 {
        return Err(Error::HypothesisViolated(format!("p = {p} is not odd")));
    }
    let pb = BigInt::from(p);
    let mut fact = BigInt::one();
    for i in 2..=g {
        fact *= i;
    }
    let bracket = &pb * BigInt::from(2 * g - 2) + BigInt::from(6 * g);
    Ok(num_traits::pow(pb, 4 * g as usize) * num_traits::pow(BigInt::from(3), g as usize) * bracket * fact)
}

/// A truncated series in two disc parameters: coeffs[a][b] multiplies T1^a T2^b.
#[derive(Clone, Debug)]
pub struct BiSeries {
    pub coeffs: Vec<Vec<PadicScalar>>,
    pub trunc: usize,
}

impl BiSeries {
    /// All coefficients vanish to the working precision.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.vanishes())
    }

    pub fn neg(&self) -> Self {
        BiSeries {
            coeffs: self.coeffs.iter().map(|r| r.iter().map(|c| c.negate()).collect()).collect(),
            trunc: self.trunc,
        }
    }
}

/// log f_i(z1) log f_j(z2) − log f_j(z1) log f_i(z2) on the product of two discs.
pub fn pair_minor_series(
    c: &PlaneCurve,
    fi: &RationalFunction,
    fj: &RationalFunction,
    z1: &DiscPoint,
    z2: &DiscPoint,
    order: usize,
) -> Result<BiSeries> {
    let li1 = log_f_disc_series(c, fi, z1, order)?;
    let lj1 = log_f_disc_series(c, fj, z1, order)?;
    let li2 = log_f_disc_series(c, fi, z2, order)?;
    let lj2 = log_f_disc_series(c, fj, z2, order)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    for a in 0..=order {
        let mut row = Vec::with_capacity(order + 1 - a);
        for b in 0..=order - a {
            let t = li1.coeffs[a].times(&lj2.coeffs[b]).minus(&lj1.coeffs[a].times(&li2.coeffs[b]));
            row.push(t);
        }
        coeffs.push(row);
    }
    Ok(BiSeries { coeffs, trunc: order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::BiPoly;
    use crate::padic::make_context;

    #[test]
    fn bounds() {
        assert_eq!(ramification_bound(0, 4, 5), RamificationBound { bound: 4, valid: true });
        assert!(!ramification_bound(0, 4, 3).valid);
        assert_eq!(ramification_bound(2, 6, 11).bound, 10);
        assert_eq!(buium_bound(2, 5).unwrap(), BigInt::from(154_687_500u64));
        assert_eq!(buium_bound(2, 3).unwrap(), BigInt::from(2_125_764u64));
        assert!(matches!(buium_bound(1, 5), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn theta_examples() {
        let m = theta_maps(&[vec![1], vec![2], vec![0]]).unwrap();
        assert_eq!(m[0].exponents, vec![vec![-2, 1, 0], vec![0, 0, 1]]);
        let pr = theta_maps(&[vec![1], vec![0], vec![0]]).unwrap();
        assert_eq!(pr[0].exponents, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(theta_maps(&[vec![0], vec![0], vec![0]]).unwrap_err(), Error::ZeroColumn(0));
    }

    #[test]
    fn predictions() {
        let pr = predict_slopes(2, Valuation::int(1), 5, 300).unwrap();
        assert_eq!(pr.predicted_vertices[..3], [Vertex { n: 2, v: 0 }, Vertex { n: 10, v: -1 }, Vertex { n: 50, v: -2 }]);
        assert_eq!(pr.predicted_slopes[0], (Rational64::new(1, 8), 8));
        assert!(matches!(predict_slopes(5, Valuation::int(1), 5, 10), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn torus_and_critical_point_conformance() {
        let ctx = make_context(5, 6, 1, None).unwrap();
        let gm = PlaneCurve::new(BiPoly::from_int_terms(&[((0, 1), 1), ((1, 0), -1)]), 0, 2, ctx).unwrap();
        let z = DiscPoint::from_ints(&gm, 1, 1).unwrap();
        let r = verify_slopes(&gm, &RationalFunction::x(), &z, 130).unwrap();
        assert_eq!(r.verdict, SlopeVerdict::Match, "{:?}", r.compared);
        assert_eq!(r.compared.last(), Some(&Vertex { n: 125, v: -3 }));

        let ctx = make_context(7, 6, 1, None).unwrap();
        let line = PlaneCurve::new(BiPoly::from_int_terms(&[((1, 0), 1), ((0, 1), 1), ((0, 0), -1)]), 0, 3, ctx.clone()).unwrap();
        let f = RationalFunction::poly(BiPoly::from_int_terms(&[((1, 0), 1), ((2, 0), -1)]));
        let half = crate::padic::scalar_from_rational(&crate::num_util::rat(1, 2), &ctx).unwrap();
        let z = DiscPoint::new(&line, half.clone(), half).unwrap();
        let r = verify_slopes(&line, &f, &z, 120).unwrap();
        assert_eq!(r.k, Some(2));
        assert_eq!(r.verdict, SlopeVerdict::Match, "{:?}", r.compared);
        assert_eq!(r.predicted.unwrap().predicted_slopes[0].0, Rational64::new(1, 12));
    }

    #[test]
    fn log_on_torus_disc_at_two() {
        let ctx = make_context(7, 6, 1, None).unwrap();
        let c = PlaneCurve::new(BiPoly::from_int_terms(&[((0, 1), 1), ((1, 0), -1)]), 0, 2, ctx.clone()).unwrap();
        let z = DiscPoint::from_ints(&c, 2, 2).unwrap();
        let l = log_f_disc_series(&c, &RationalFunction::x(), &z, 6).unwrap();
        assert_eq!(l.coeffs[0], PadicScalar::from_i64(&ctx, 2).log_unit().unwrap());
        for m in 1..=6i64 {
            let sign = if m % 2 == 1 { 1 } else { -1 };
            let want = crate::padic::scalar_from_rational(
                &crate::num_util::rat(sign, m * 2i64.pow(m as u32)),
                &ctx,
            )
            .unwrap();
            assert_eq!(l.coeffs[m as usize], want);
        }
    }
}
