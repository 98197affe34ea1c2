//! p-adic checks on algebraic points of a rationally parametrized curve: the
//! log-rank filter and the ramification type of the point at p.
//!
//! A point is given by the minimal polynomial φ of its t-coordinate. Each root
//! of φ whose reduction is a simple root of φ mod p is Hensel-lifted into
//! W(F_q) with q the size of the residue field of that root; roots at infinity
//! are reached through s = 1/t.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::coleman::{ramification_bound, theta_maps, RamificationBound};
use crate::error::{Error, Result};
use crate::fp::Fp;
use crate::hunt::Relation;
use crate::newton::{negative_slopes, newton_polygon, ValuedSeries};
use crate::num_util::{pow_big, rational_reconstruct};
use crate::padic::{make_context, PadicContext, PadicScalar, ScalarRecord};
use crate::scalar::Scalar;
use crate::spec::UniRational;
use crate::upoly::UPoly;
use crate::zpoly::{self, ZPoly};

/// A p-adic root of φ.
#[derive(Clone)]
pub struct LiftedRoot {
    /// Residue of the root (of 1/t when `at_infinity`) as a monic polynomial over F_p.
    pub residue_factor: Vec<u64>,
    pub at_infinity: bool,
    pub t: PadicScalar,
}

fn residue_factors(f: &ZPoly, p: u64) -> Vec<(UPoly<Fp>, u32)> {
    let r = zpoly::reduce(f, p);
    if r.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    r.factor()
}

fn lift_root(f: &ZPoly, g: &UPoly<Fp>, p: u64, n: u32) -> Result<PadicScalar> {
    let modulus: Vec<BigInt> = g.coeffs.iter().map(|c| BigInt::from(c.v)).collect();
    let ctx = make_context(p, n, modulus.len() as u32 - 1, Some(&modulus))?;
    let emb = |c: &BigInt| PadicScalar::from_int(&ctx, c);
    let df = f.derivative();
    let mut t = PadicScalar::generator(&ctx);
    let mut steps = 0;
    while (1u64 << steps) < 2 * n as u64 + 2 {
        let d = df.eval_with(&t, emb).recip().ok_or(Error::SingularPoint)?;
        t = t.minus(&f.eval_with(&t, emb).times(&d));
        steps += 1;
    }
    Ok(t)
}

/// All roots of φ that reduce to simple roots mod p (of φ, or of its reversal
/// at s = 0), plus the number of roots that could not be reached.
pub fn lift_roots(phi: &ZPoly, p: u64, n: u32) -> Result<(Vec<LiftedRoot>, usize)> {
    let deg = phi.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::InvalidInput("constant minimal polynomial".into()));
    }
    let mut out = Vec::new();
    let mut reached = 0;
    for (g, k) in residue_factors(phi, p) {
        if k == 1 {
            let t = lift_root(phi, &g, p, n)?;
            reached += g.degree().unwrap();
            out.push(LiftedRoot {
                residue_factor: g.coeffs.iter().map(|c| c.v).collect(),
                at_infinity: false,
                t,
            });
        }
    }
    let rev = UPoly::new(phi.coeffs.iter().rev().cloned().collect());
    for (g, k) in residue_factors(&rev, p) {
        if k == 1 && g.degree() == Some(1) && g.coeffs[0].v == 0 {
            let s = lift_root(&rev, &g, p, n)?;
            reached += 1;
            out.push(LiftedRoot {
                residue_factor: vec![0, 1],
                at_infinity: true,
                t: s.recip().ok_or(Error::PrecisionExhausted("root at infinity".into()))?,
            });
        }
    }
    Ok((out, deg - reached))
}

fn eval_function(f: &UniRational, t: &PadicScalar) -> Result<PadicScalar> {
    let ctx = t.ctx.clone();
    let emb = |c: &BigInt| PadicScalar::from_int(&ctx, c);
    let num = f.num.eval_with(t, emb);
    let den = f.den.eval_with(t, emb);
    if num.val.is_none() || den.val.is_none() {
        return Err(Error::PrecisionExhausted("function value indistinguishable from 0".into()));
    }
    Ok(num.times(&den.recip().unwrap()))
}

fn monomial(vals: &[PadicScalar], e: &[i64]) -> PadicScalar {
    let mut acc = vals[0].one_like();
    for (x, &k) in vals.iter().zip(e) {
        let b = if k < 0 { x.recip().unwrap() } else { x.clone() };
        acc = acc.times(&b.pow_u(k.unsigned_abs()));
    }
    acc
}

fn vanishes(x: &PadicScalar) -> bool {
    x.val.is_none()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FilterVerdict {
    /// The log-vector lies on `direction` to the working precision; `None` when
    /// it vanishes outright.
    Pass { direction: Option<Vec<BigInt>> },
    Fail { reason: String },
}

impl FilterVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, FilterVerdict::Pass { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingFilter {
    pub residue_factor: Vec<u64>,
    pub at_infinity: bool,
    pub valuations: Vec<i64>,
    /// Exponent rows of the unit monomials used when some value is not a unit.
    pub theta_rows: Option<Vec<Vec<i64>>>,
    pub log_vector: Vec<ScalarRecord>,
    /// Valuations of the 2×2 minors of (L | direction); `None` is zero to precision.
    pub minor_valuations: Vec<Option<i64>>,
    pub verdict: FilterVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct FilterReport {
    pub p: u64,
    pub precision: u32,
    pub embeddings: Vec<EmbeddingFilter>,
    pub unreached_roots: usize,
    pub verdict: FilterVerdict,
}

/// What the log-vector is tested against.
#[derive(Clone, Copy, Debug)]
pub enum FilterTarget<'a> {
    /// The direction n × m forced by two independent relations.
    Relations(&'a [Relation; 2]),
    /// An unknown direction, reconstructed with entries of height at most the bound.
    Height(&'a BigInt),
}

fn cross(a: &[i64], b: &[i64]) -> Vec<BigInt> {
    let c = |i: usize, j: usize| BigInt::from(a[i]) * b[j] - BigInt::from(a[j]) * b[i];
    vec![c(1, 2), c(2, 0), c(0, 1)]
}

fn apply(rows: &[Vec<i64>], d: &[BigInt]) -> Vec<BigInt> {
    rows.iter()
        .map(|r| r.iter().zip(d).map(|(&a, x)| BigInt::from(a) * x).sum())
        .collect()
}

fn minors(l: &[PadicScalar], d: &[BigInt]) -> Vec<Option<i64>> {
    let ctx = &l[0].ctx;
    let mut out = Vec::new();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            let m = l[i]
                .times(&PadicScalar::from_int(ctx, &d[j]))
                .minus(&l[j].times(&PadicScalar::from_int(ctx, &d[i])));
            out.push(m.val);
        }
    }
    out
}

fn reconstruct(l: &[PadicScalar], bound: &BigInt) -> Result<std::result::Result<Vec<BigInt>, String>> {
    let ctx = &l[0].ctx;
    let p = ctx.p;
    let two_h2 = bound * bound * 2u32;
    let enough = |k: i64| k >= 1 && pow_big(p, k as u32) > two_h2;
    let exhausted = |k: i64| {
        Error::PrecisionExhausted(format!(
            "log ratios known mod {p}^{k}, reconstruction of height {bound} needs more than {two_h2}"
        ))
    };
    let live: Vec<usize> = (0..l.len()).filter(|&i| !vanishes(&l[i])).collect();
    let Some(&j) = live.iter().min_by_key(|&&i| l[i].val.unwrap()) else {
        let k = l.iter().map(|x| x.prec).min().unwrap().min(ctx.n as i64);
        if !enough(k) {
            return Err(exhausted(k));
        }
        return Ok(Ok(vec![BigInt::zero(); l.len()]));
    };
    let inv = l[j].recip().unwrap();
    let ratios: Vec<PadicScalar> = l.iter().map(|x| x.times(&inv)).collect();
    let k = ratios.iter().map(|r| r.prec).min().unwrap().min(ctx.n as i64);
    if !enough(k) {
        return Err(exhausted(k));
    }
    let pk = pow_big(p, k as u32);
    let mut fracs = Vec::new();
    for r in &ratios {
        let rep = r.to_ring(k as u32);
        if rep.iter().skip(1).any(|c| !c.is_zero()) {
            return Ok(Err("log ratio is not in Q_p".into()));
        }
        match rational_reconstruct(&rep[0], &pk, bound) {
            Some((a, b)) => fracs.push(if b.is_negative() { (-a, -b) } else { (a, b) }),
            None => return Ok(Err(format!("no direction of height at most {bound}"))),
        }
    }
    let den = fracs.iter().fold(BigInt::one(), |acc, (_, b)| acc.lcm(b));
    let d: Vec<BigInt> = fracs.iter().map(|(a, b)| a * (&den / b)).collect();
    let g = d.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Ok(Ok(d.iter().map(|x| x / &g).collect()))
}

fn filter_embedding(root: &LiftedRoot, fs: &[UniRational], target: FilterTarget) -> Result<EmbeddingFilter> {
    let vals: Vec<PadicScalar> = fs.iter().map(|f| eval_function(f, &root.t)).collect::<Result<_>>()?;
    let v: Vec<i64> = vals.iter().map(|x| x.val.unwrap()).collect();
    let rows: Vec<Vec<i64>> = if v.iter().all(|&x| x == 0) {
        (0..fs.len()).map(|i| (0..fs.len()).map(|j| (i == j) as i64).collect()).collect()
    } else {
        let col: Vec<Vec<i64>> = v.iter().map(|&x| vec![x]).collect();
        theta_maps(&col)?.remove(0).exponents
    };
    let mut l = Vec::new();
    for r in &rows {
        let u = monomial(&vals, r);
        if !u.is_unit() {
            return Err(Error::NonUnitValue);
        }
        l.push(u.log_unit()?);
    }
    let identity = v.iter().all(|&x| x == 0);
    let (direction, verdict) = match target {
        FilterTarget::Relations(rels) => {
            let d = apply(&rows, &cross(&rels[0].exponents, &rels[1].exponents));
            (Some(d), None)
        }
        FilterTarget::Height(h) => {
            let scale: i64 = rows.iter().map(|r| r.iter().map(|x| x.abs()).sum::<i64>()).max().unwrap_or(1);
            match reconstruct(&l, &(h * scale))? {
                Ok(d) => (Some(d), None),
                Err(reason) => (None, Some(FilterVerdict::Fail { reason })),
            }
        }
    };
    let minor_valuations = direction.as_ref().map(|d| minors(&l, d)).unwrap_or_default();
    let verdict = verdict.unwrap_or_else(|| {
        let d = direction.clone().unwrap();
        if d.iter().all(|x| x.is_zero()) {
            if l.iter().all(vanishes) {
                FilterVerdict::Pass { direction: None }
            } else {
                FilterVerdict::Fail {
                    reason: "log-vector is nonzero but the direction is trivial".into(),
                }
            }
        } else if minor_valuations.iter().all(|m| m.is_none()) {
            FilterVerdict::Pass { direction: Some(d) }
        } else {
            FilterVerdict::Fail {
                reason: "a minor of (L | direction) is nonzero".into(),
            }
        }
    });
    Ok(EmbeddingFilter {
        residue_factor: root.residue_factor.clone(),
        at_infinity: root.at_infinity,
        valuations: v,
        theta_rows: (!identity).then_some(rows),
        log_vector: l.iter().map(|x| x.to_record()).collect(),
        minor_valuations,
        verdict,
    })
}

/// Tests whether the log-vector (log f_1, log f_2, log f_3) at every reachable
/// embedding of the point is proportional to an integer direction.
pub fn padic_rank_filter(
    phi: &ZPoly,
    fs: &[UniRational],
    target: FilterTarget,
    p: u64,
    n: u32,
) -> Result<FilterReport> {
    let (roots, unreached) = lift_roots(phi, p, n)?;
    if roots.is_empty() {
        return Err(Error::HypothesisViolated(format!(
            "no root of the point reduces to a simple root mod {p}"
        )));
    }
    let embeddings = roots
        .iter()
        .map(|r| filter_embedding(r, fs, target))
        .collect::<Result<Vec<_>>>()?;
    let verdict = match embeddings.iter().find(|e| !e.verdict.passed()) {
        Some(e) => e.verdict.clone(),
        None => embeddings[0].verdict.clone(),
    };
    Ok(FilterReport {
        p,
        precision: n,
        embeddings,
        unreached_roots: unreached,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Ramification {
    Unramified,
    /// Slope denominators; each is a lower bound for a ramification index.
    Ramified { denominators: Vec<i64> },
    Undetermined { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscRamification {
    pub residue_factor: Vec<u64>,
    pub multiplicity: u32,
    /// (λ, length) of the certified segments with λ > 0, λ written as "a/b".
    pub slopes: Vec<(String, usize)>,
    pub class: Ramification,
}

#[derive(Clone, Debug, Serialize)]
pub struct RamificationReport {
    pub p: u64,
    pub discs: Vec<DiscRamification>,
    pub class: Ramification,
    pub max_denominator: i64,
    pub bound: RamificationBound,
    pub within_bound: bool,
}

fn disc_class(f: &ZPoly, g: &UPoly<Fp>, k: u32, ctx: &Arc<PadicContext>) -> Result<DiscRamification> {
    let p = ctx.p;
    let theta = PadicScalar::generator(ctx);
    let one = theta.one_like();
    let shifted = f
        .map(|c| PadicScalar::from_int(ctx, c))
        .compose(&UPoly::new(vec![theta.clone(), one]));
    let np = newton_polygon(&ValuedSeries::polynomial(shifted.coeffs.clone(), p))?;
    let slopes: Vec<(Rational64, usize)> = negative_slopes(&np);
    let total: usize = slopes.iter().map(|s| s.1).sum();
    let dens: Vec<i64> = slopes.iter().map(|s| *s.0.denom()).filter(|&d| d > 1).collect();
    let class = if k == 1 {
        Ramification::Unramified
    } else if !dens.is_empty() {
        Ramification::Ramified { denominators: dens }
    } else if total != k as usize {
        Ramification::Undetermined {
            reason: format!("only {total} of {k} roots in the disc are certified at this precision"),
        }
    } else if slopes.iter().all(|s| s.1 == 1) {
        Ramification::Unramified
    } else {
        Ramification::Undetermined {
            reason: "integral slope of length above 1".into(),
        }
    };
    Ok(DiscRamification {
        residue_factor: g.coeffs.iter().map(|c| c.v).collect(),
        multiplicity: k,
        slopes: slopes
            .iter()
            .map(|(l, n)| (format!("{}/{}", l.numer(), l.denom()), *n))
            .collect(),
        class,
    })
}

/// The ramification type at p of the point with minimal polynomial φ, from the
/// Newton polygon of φ(T + θ̃) on each residue disc θ̃ of a root.
pub fn classify_ramification(phi: &ZPoly, p: u64, n: u32, genus: u64, boundary_degree: u64) -> Result<RamificationReport> {
    let deg = phi.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::InvalidInput("constant minimal polynomial".into()));
    }
    if zpoly::reduce(phi, p).degree() != Some(deg) {
        return Err(Error::BadReduction);
    }
    let mut discs = Vec::new();
    for (g, k) in residue_factors(phi, p) {
        let modulus: Vec<BigInt> = g.coeffs.iter().map(|c| BigInt::from(c.v)).collect();
        let ctx = make_context(p, n, modulus.len() as u32 - 1, Some(&modulus))?;
        discs.push(disc_class(phi, &g, k, &ctx)?);
    }
    let max_denominator = discs
        .iter()
        .filter_map(|d| match &d.class {
            Ramification::Ramified { denominators } => denominators.iter().max().copied(),
            _ => None,
        })
        .max()
        .unwrap_or(1);
    let class = if max_denominator > 1 {
        let mut all: Vec<i64> = discs
            .iter()
            .flat_map(|d| match &d.class {
                Ramification::Ramified { denominators } => denominators.clone(),
                _ => Vec::new(),
            })
            .collect();
        all.sort();
        all.dedup();
        Ramification::Ramified { denominators: all }
    } else if let Some(u) = discs.iter().find(|d| matches!(d.class, Ramification::Undetermined { .. })) {
        u.class.clone()
    } else {
        Ramification::Unramified
    };
    let bound = ramification_bound(genus, boundary_degree, p);
    Ok(RamificationReport {
        p,
        within_bound: max_denominator.to_u64().unwrap() <= bound.bound,
        discs,
        class,
        max_denominator,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpoly::zpoly;

    fn line_family() -> Vec<UniRational> {
        vec![
            UniRational::poly(zpoly(&[0, 1])),
            UniRational::poly(zpoly(&[1, -1])),
            UniRational::poly(zpoly(&[1, 1])),
        ]
    }

    #[test]
    fn sixth_root_point_passes_along_third_axis() {
        let h = BigInt::from(72);
        let r = padic_rank_filter(&zpoly(&[1, -1, 1]), &line_family(), FilterTarget::Height(&h), 7, 10).unwrap();
        assert_eq!(r.embeddings.len(), 2);
        for e in &r.embeddings {
            assert_eq!(e.log_vector[0].v, None);
            assert_eq!(e.log_vector[1].v, None);
            let d: Vec<BigInt> = [0, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
            assert_eq!(e.verdict, FilterVerdict::Pass { direction: Some(d) });
        }
    }

    #[test]
    fn two_fails_and_low_precision_is_flagged() {
        let h = BigInt::from(72);
        let r = padic_rank_filter(&zpoly(&[-2, 1]), &line_family(), FilterTarget::Height(&h), 7, 10).unwrap();
        assert!(!r.verdict.passed());
        let e = padic_rank_filter(&zpoly(&[-2, 1]), &line_family(), FilterTarget::Height(&h), 7, 1);
        assert!(matches!(e, Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn certificate_direction_at_low_precision() {
        let rels = [
            Relation { exponents: vec![1, 1, 0], order: 1 },
            Relation { exponents: vec![6, 0, 0], order: 1 },
        ];
        for n in 3..8 {
            let r = padic_rank_filter(&zpoly(&[1, -1, 1]), &line_family(), FilterTarget::Relations(&rels), 7, n).unwrap();
            assert!(r.verdict.passed(), "N = {n}");
        }
    }

    #[test]
    fn non_unit_values_route_through_theta() {
        // t = 7: f1 has valuation 1
        let rels = [
            Relation { exponents: vec![1, 0, 0], order: 1 },
            Relation { exponents: vec![0, 1, 0], order: 1 },
        ];
        let fs = line_family();
        let r = padic_rank_filter(&zpoly(&[-7, 1]), &fs, FilterTarget::Relations(&rels), 7, 8).unwrap();
        let e = &r.embeddings[0];
        assert_eq!(e.valuations, vec![1, 0, 0]);
        assert!(e.theta_rows.is_some());
        assert!(!r.verdict.passed());
    }

    #[test]
    fn ramification_examples() {
        let r = classify_ramification(&zpoly(&[1, -1, 1]), 7, 10, 0, 4).unwrap();
        assert_eq!(r.class, Ramification::Unramified);
        assert_eq!(r.discs.len(), 2);
        let r = classify_ramification(&zpoly(&[-5, 0, 1]), 5, 10, 0, 4).unwrap();
        assert_eq!(r.class, Ramification::Ramified { denominators: vec![2] });
        assert_eq!(r.discs[0].slopes, vec![("1/2".to_string(), 2)]);
        let r = classify_ramification(&zpoly(&[-3, 1]), 7, 10, 0, 4).unwrap();
        assert_eq!(r.class, Ramification::Unramified);
        assert_eq!(classify_ramification(&zpoly(&[1, 7]), 7, 5, 0, 4).unwrap_err(), Error::BadReduction);
    }

    #[test]
    fn hunted_certificates_pass_at_low_precision() {
        let fs = line_family();
        let res = crate::hunt::relation_solve(&fs, 1, 6).unwrap();
        assert!(!res.certificates.is_empty());
        for c in &res.certificates {
            for n in [3, 5] {
                let r = padic_rank_filter(&c.minimal_polynomial(), &fs, FilterTarget::Relations(&c.relations), 7, n)
                    .unwrap();
                assert!(r.verdict.passed(), "{:?} at N = {n}", c.minimal_polynomial);
            }
        }
    }
}
