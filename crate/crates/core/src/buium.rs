//! Frobenius lifts on length-2 Witt vectors and the divisibility test that
//! bounds points of a plane curve whose coordinates are both p-th powers
//! (up to roots of unity) modulo p^2.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::bipoly::BiPoly;
use crate::curve::{dlog_numerator_raw, PlaneCurve, RationalFunction};
use crate::error::{Error, Result};
use crate::fp::FiniteField;
use crate::fq::{Fq, FqField};
use crate::galois_ring::{GaloisRing, GrElem};
use crate::scalar::Scalar;
use crate::upoly::UPoly;

/// H with coefficients in W(F_q)/p^2.
#[derive(Clone, Debug)]
pub struct Witt2Polynomial {
    pub h: BiPoly<GrElem>,
    pub ring: Arc<GaloisRing>,
}

impl Witt2Polynomial {
    /// Integer coefficients read mod p^2 over the residue degree `f_deg`.
    pub fn from_integer(h: &BiPoly<BigInt>, p: u64, f_deg: u32) -> Result<Self> {
        let ring = GaloisRing::with_degree(p, 2, f_deg)?;
        let proto = GrElem::from_int(&ring, 0);
        Ok(Witt2Polynomial {
            h: h.map(|c| proto.from_int_like(c)),
            ring,
        })
    }

    pub fn new(h: BiPoly<GrElem>, ring: Arc<GaloisRing>) -> Result<Self> {
        if ring.k != 2 {
            return Err(Error::InvalidInput("coefficients must live in W(F_q)/p^2".into()));
        }
        Ok(Witt2Polynomial { h, ring })
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    pub fn residue_field(&self) -> Arc<FqField> {
        self.ring.residue.clone()
    }

    /// h = H mod p over F_q.
    pub fn reduction(&self) -> BiPoly<Fq> {
        self.h.map(|c| c.residue())
    }
}

/// G = ((H^σ(x^p, y^p) − H(x, y)^p) / p) mod p.
pub fn voloch_g(w: &Witt2Polynomial) -> Result<BiPoly<Fq>> {
    let p = w.p() as u32;
    if w.reduction().is_zero() {
        return Err(Error::InvalidInput("H vanishes mod p".into()));
    }
    let hs = w.h.map(|c| c.sigma()).inflate(p);
    let hp = w.h.pow(p);
    let diff = hs.sub(&hp);
    Ok(diff.map(|c| c.div_p().residue()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Unknown,
}

/// Content of h as a polynomial in y over F_q[x].
fn y_content(h: &BiPoly<Fq>) -> UPoly<Fq> {
    let mut g = UPoly::zero();
    for c in h.y_coeffs() {
        g = if g.is_zero() { c.monic() } else { g.gcd(&c) };
    }
    g
}

fn irreducible_in_y(h: &BiPoly<Fq>) -> Irreducibility {
    let dy = h.deg_y();
    if y_content(h).degree().unwrap_or(0) > 0 {
        return Irreducibility::Reducible;
    }
    if dy <= 1 {
        return Irreducibility::Irreducible;
    }
    let cs = h.y_coeffs();
    let lc = &cs[dy as usize];
    let proto = h.proto().unwrap();
    for c in proto.elements() {
        if lc.eval(&c).vanishes() {
            continue;
        }
        let s = h.at_x(&c);
        if s.is_irreducible() {
            return Irreducibility::Irreducible;
        }
    }
    Irreducibility::Unknown
}

/// Irreducibility of h over F_q: exact for polynomials of degree ≤ 1 in a
/// variable, for nontrivial content, and when some specialization of one
/// variable (keeping the degree in the other) is irreducible.
pub fn irreducibility(h: &BiPoly<Fq>) -> Irreducibility {
    if h.total_degree() <= 0 {
        return Irreducibility::Reducible;
    }
    if h.deg_y() == 0 {
        return if h.at_y(&h.proto().unwrap().zero_like()).is_irreducible() {
            Irreducibility::Irreducible
        } else {
            Irreducibility::Reducible
        };
    }
    if h.deg_x() == 0 {
        return if h.at_x(&h.proto().unwrap().zero_like()).is_irreducible() {
            Irreducibility::Irreducible
        } else {
            Irreducibility::Reducible
        };
    }
    match irreducible_in_y(h) {
        Irreducibility::Unknown => irreducible_in_y(&h.swap_xy()),
        r => r,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityResult {
    pub divides: bool,
    /// Pseudo-remainder of G modulo h (y-direction unless h is free of y).
    #[serde(skip)]
    pub remainder: BiPoly<Fq>,
    pub h_irreducible: Irreducibility,
    pub warning: Option<String>,
}

/// Whether h divides G in F_q[x, y]. The verdict assumes h irreducible; when that
/// cannot be confirmed the result carries a warning.
pub fn divides_mod_h(g: &BiPoly<Fq>, h: &BiPoly<Fq>) -> Result<DivisibilityResult> {
    if h.total_degree() <= 0 {
        return Err(Error::InvalidInput("h must be nonconstant".into()));
    }
    let irr = irreducibility(h);
    let remainder = if g.is_zero() { BiPoly::zero() } else { g.reduce_mod(h) };
    let warning = match irr {
        Irreducibility::Irreducible => None,
        Irreducibility::Reducible => Some("h is reducible over F_q; the divisibility verdict is unreliable".into()),
        Irreducibility::Unknown => Some("irreducibility of h over F_q could not be certified".into()),
    };
    Ok(DivisibilityResult {
        divides: remainder.is_zero(),
        remainder,
        h_irreducible: irr,
        warning,
    })
}

fn frobenius_coeffs(a: &BiPoly<Fq>) -> BiPoly<Fq> {
    a.map(|c| c.frobenius())
}

/// Checks x^{p−1} h_x^σ(x^p, y^p) h_y = y^{p−1} h_y^σ(x^p, y^p) h_x on h = 0.
pub fn dg_criterion(h: &BiPoly<Fq>) -> Result<bool> {
    let proto = h.proto().ok_or(Error::ZeroFunction)?.clone();
    let p = proto.characteristic() as u32;
    let hx = h.partial_x();
    let hy = h.partial_y();
    let vanishes = |a: &BiPoly<Fq>| a.is_zero() || a.reduce_mod(h).is_zero();
    if vanishes(&hx) || vanishes(&hy) {
        return Err(Error::DegenerateDerivatives);
    }
    let one = proto.one_like();
    let xm = BiPoly::from_terms([((p - 1, 0), one.clone())]);
    let ym = BiPoly::from_terms([((0, p - 1), one)]);
    let lhs = xm.mul(&frobenius_coeffs(&hx).inflate(p)).mul(&hy);
    let rhs = ym.mul(&frobenius_coeffs(&hy).inflate(p)).mul(&hx);
    Ok(lhs.sub(&rhs).reduce_mod(h).is_zero())
}

/// Solves x h_x + a y h_y + b h = 0 identically; free parameters are set to 0.
pub fn euler_relation_check(h: &BiPoly<Fq>) -> Option<(Fq, Fq)> {
    let proto = h.proto()?.clone();
    let x = BiPoly::x(&proto);
    let y = BiPoly::y(&proto);
    let u = x.mul(&h.partial_x());
    let v = y.mul(&h.partial_y());
    // rows: [v_m, h_m | −u_m]
    let mut keys: Vec<(u32, u32)> = u.terms.keys().chain(v.terms.keys()).chain(h.terms.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let z = proto.zero_like();
    let get = |p: &BiPoly<Fq>, k: &(u32, u32)| p.terms.get(k).cloned().unwrap_or_else(|| z.clone());
    let mut rows: Vec<[Fq; 3]> = keys.iter().map(|k| [get(&v, k), get(h, k), get(&u, k).negate()]).collect();
    // Gaussian elimination on two unknowns
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..2 {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].vanishes()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].recip().unwrap();
        for c in 0..3 {
            rows[r][c] = rows[r][c].times(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].vanishes() {
                let f = rows[i][col].clone();
                for c in 0..3 {
                    let t = rows[r][c].times(&f);
                    rows[i][c] = rows[i][c].minus(&t);
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[2].vanishes()) {
        return None;
    }
    let mut sol = [z.clone(), z];
    for (row, col) in pivots {
        sol[col] = rows[row][2].clone();
    }
    let [a, b] = sol;
    Some((a, b))
}

pub fn reduce_bipoly(a: &BiPoly<BigInt>, field: &Arc<FqField>) -> BiPoly<Fq> {
    crate::curve::reduce_poly(a, field)
}

/// True iff dg/g − a·df/f ≢ 0 mod (p, h) for every constant a: the reduced
/// classes of A_f·N_g and A_g·N_f (N = num·den) are not proportional.
pub fn dlog_independent(c: &PlaneCurve, f: &RationalFunction, g: &RationalFunction) -> Result<bool> {
    let field = c.ctx.ring.residue.clone();
    let h = reduce_bipoly(&c.h, &field);
    let nf = reduce_bipoly(&f.num.mul(&f.den), &field);
    let ng = reduce_bipoly(&g.num.mul(&g.den), &field);
    for n in [&nf, &ng] {
        if n.is_zero() || n.reduce_mod(&h).is_zero() {
            return Err(Error::ZeroFunction);
        }
    }
    let af = reduce_bipoly(&dlog_numerator_raw(&c.h, f), &field);
    let ag = reduce_bipoly(&dlog_numerator_raw(&c.h, g), &field);
    let u = af.mul(&ng);
    let v = ag.mul(&nf);
    let e = reduction_exponent(&[&u, &v], &h);
    let ru = u.reduce_fixed(&h, e);
    let rv = v.reduce_fixed(&h, e);
    Ok(!proportional(&ru, &rv))
}

/// A common pseudo-division exponent for reducing every polynomial in `ps` mod h.
pub fn reduction_exponent<C: Scalar>(ps: &[&BiPoly<C>], h: &BiPoly<C>) -> u32 {
    let by_y = h.deg_y() > 0;
    let dh = if by_y { h.deg_y() } else { h.deg_x() };
    ps.iter()
        .map(|a| {
            let d = if by_y { a.deg_y() } else { a.deg_x() };
            (d - dh + 1).max(0) as u32
        })
        .max()
        .unwrap_or(0)
}

/// All 2×2 minors of the coefficient vectors vanish.
pub fn proportional<C: Scalar>(a: &BiPoly<C>, b: &BiPoly<C>) -> bool {
    let keys: Vec<(u32, u32)> = a.terms.keys().chain(b.terms.keys()).copied().collect();
    let z = match a.proto().or(b.proto()) {
        Some(c) => c.zero_like(),
        None => return true,
    };
    let get = |p: &BiPoly<C>, k: &(u32, u32)| p.terms.get(k).cloned().unwrap_or_else(|| z.clone());
    for (i, ki) in keys.iter().enumerate() {
        for kj in &keys[i + 1..] {
            let m = get(a, ki).times(&get(b, kj)).minus(&get(a, kj).times(&get(b, ki)));
            if !m.vanishes() {
                return false;
            }
        }
    }
    true
}

/// Canonical primitive representative of the F_p-projective class of n, after
/// removing the largest common power of p.
pub fn exponent_normalize(n: &[i64], p: u64) -> Result<Vec<u64>> {
    if n.iter().all(|&x| x == 0) {
        return Err(Error::ZeroVector);
    }
    let pi = p as i64;
    let mut v: Vec<i64> = n.to_vec();
    while v.iter().all(|&x| x % pi == 0) {
        for x in v.iter_mut() {
            *x /= pi;
        }
    }
    let r: Vec<u64> = v.iter().map(|&x| x.rem_euclid(pi) as u64).collect();
    let lead = *r.iter().find(|&&x| x != 0).unwrap();
    let inv = crate::num_util::inv_mod_u64(lead, p).unwrap();
    Ok(r.iter().map(|&x| crate::num_util::mul_mod(x, inv, p)).collect())
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FinitenessVerdict {
    /// h does not divide G: finitely many points with both coordinates in D.
    Finite {
        h_irreducible: Irreducibility,
        warning: Option<String>,
    },
    /// h divides G; the degeneracy chain of the argument is reported.
    Degenerate {
        h_irreducible: Irreducibility,
        dg_identity: Option<bool>,
        dg_error: Option<String>,
        euler_relation: Option<(Vec<u64>, Vec<u64>)>,
        chain: Vec<String>,
    },
}

pub fn finiteness_verdict(w: &Witt2Polynomial) -> Result<FinitenessVerdict> {
    let h = w.reduction();
    if h.is_zero() {
        return Err(Error::InvalidInput("H vanishes mod p".into()));
    }
    let g = voloch_g(w)?;
    let d = divides_mod_h(&g, &h)?;
    if !d.divides {
        return Ok(FinitenessVerdict::Finite {
            h_irreducible: d.h_irreducible,
            warning: d.warning,
        });
    }
    let mut chain = vec!["h divides G".to_string()];
    let (dg_identity, dg_error) = match dg_criterion(&h) {
        Ok(b) => {
            chain.push(format!("dG identity on h = 0: {b}"));
            (Some(b), None)
        }
        Err(e) => {
            chain.push(format!("dG identity not applicable: {e}"));
            (None, Some(e.to_string()))
        }
    };
    let euler = euler_relation_check(&h);
    match &euler {
        Some((a, b)) => chain.push(format!("Euler-type relation x h_x + a y h_y + b h = 0 with a = {a:?}, b = {b:?}")),
        None => chain.push("no Euler-type relation".into()),
    }
    Ok(FinitenessVerdict::Degenerate {
        h_irreducible: d.h_irreducible,
        dg_identity,
        dg_error,
        euler_relation: euler.map(|(a, b)| (a.c, b.c)),
        chain,
    })
}

/// Integer content and sign normalization of an integer bivariate polynomial.
pub fn primitive_int(a: &BiPoly<BigInt>) -> BiPoly<BigInt> {
    let mut g = BigInt::from(0);
    for c in a.terms.values() {
        g = g.gcd(c);
    }
    if g == BigInt::from(0) {
        return a.clone();
    }
    let lead_neg = a.terms.iter().next_back().map(|(_, c)| c < &BigInt::from(0)).unwrap_or(false);
    if lead_neg {
        g = -g;
    }
    a.map(|c| c / &g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq_poly(t: &[((u32, u32), i64)], field: &Arc<FqField>) -> BiPoly<Fq> {
        BiPoly::from_terms(t.iter().map(|&(k, c)| (k, Fq::from_int(field, c))))
    }

    #[test]
    fn g_for_simple_inputs() {
        let w = Witt2Polynomial::from_integer(&BiPoly::from_int_terms(&[((1, 0), 1)]), 5, 1).unwrap();
        assert!(voloch_g(&w).unwrap().is_zero());

        let line = BiPoly::from_int_terms(&[((1, 0), 1), ((0, 1), 1), ((0, 0), -1)]);
        let w = Witt2Polynomial::from_integer(&line, 3, 1).unwrap();
        let g = voloch_g(&w).unwrap();
        let f3 = w.residue_field();
        let want = fq_poly(
            &[((2, 1), 1), ((1, 2), 1), ((2, 0), -1), ((0, 2), -1), ((1, 0), 1), ((0, 1), 1), ((1, 1), -2)],
            &f3,
        )
        .neg();
        assert_eq!(g, want);
        let d = divides_mod_h(&g, &w.reduction()).unwrap();
        assert!(!d.divides);
        assert_eq!(d.h_irreducible, Irreducibility::Irreducible);
        assert!(proportional(&d.remainder, &fq_poly(&[((1, 0), 1), ((2, 0), -1)], &f3)));
        assert!(matches!(finiteness_verdict(&w).unwrap(), FinitenessVerdict::Finite { .. }));
    }

    #[test]
    fn derivative_criterion() {
        let f3 = FqField::new(3, &[0, 1]).unwrap();
        let line = fq_poly(&[((1, 0), 1), ((0, 1), 1), ((0, 0), -1)], &f3);
        assert!(!dg_criterion(&line).unwrap());
        let diag = fq_poly(&[((1, 0), 1), ((0, 1), -1)], &f3);
        assert!(dg_criterion(&diag).unwrap());
        assert_eq!(dg_criterion(&fq_poly(&[((1, 0), 1)], &f3)).unwrap_err(), Error::DegenerateDerivatives);
    }

    #[test]
    fn euler_relations() {
        let f5 = FqField::new(5, &[0, 1]).unwrap();
        let (a, b) = euler_relation_check(&fq_poly(&[((1, 1), 1), ((0, 0), -1)], &f5)).unwrap();
        assert_eq!((a.c[0], b.c[0]), (4, 0));
        assert!(euler_relation_check(&fq_poly(&[((1, 0), 1), ((0, 1), 1), ((0, 0), -1)], &f5)).is_none());
        let (a, b) = euler_relation_check(&fq_poly(&[((1, 0), 1)], &f5)).unwrap();
        assert_eq!((a.c[0], b.c[0]), (0, 4));
    }

    #[test]
    fn normalization() {
        assert_eq!(exponent_normalize(&[6, 0, 0], 5).unwrap(), vec![1, 0, 0]);
        assert_eq!(exponent_normalize(&[2, 4, 6], 5).unwrap(), vec![1, 2, 3]);
        assert_eq!(exponent_normalize(&[5, 25, 0], 5).unwrap(), vec![1, 0, 0]);
        assert_eq!(exponent_normalize(&[0, 0], 5).unwrap_err(), Error::ZeroVector);
    }
}
