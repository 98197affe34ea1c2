//! Residue discs where an F_p-combination of the dlog f_i vanishes.
//!
//! For a class n the form Σ n_i df_i/f_i equals B_n/(Π N_j · h_y) dx with
//! N_j = num_j·den_j and B_n = Σ n_i A_i Π_{j≠i} N_j, and dx/h_y has neither
//! zeros nor poles at smooth affine points. The zeros are found by eliminating y
//! with a resultant, factoring over F_p and splitting each fibre over the
//! residue extension. Points are reported as Frobenius orbits.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipoly::{resultant_y, BiPoly};
use crate::buium::{irreducibility, Irreducibility};
use crate::curve::{dlog_numerator_raw, reduce_poly, PlaneCurve, RationalFunction};
use crate::error::{Error, Result};
use crate::fp::Fp;
use crate::fq::{Fq, FqField};
use crate::num_util::pow_big;
use crate::upoly::UPoly;

/// A Galois orbit of geometric points: x is a root of `x_minpoly` (monic, over
/// F_p, constant term first) and, writing K = F_p[x]/(x_minpoly), y is a root of
/// the monic irreducible `y_factor` ∈ K[y]. Coefficients of `y_factor` are
/// elements of K as coefficient vectors in the class of x.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PointOrbit {
    pub x_minpoly: Vec<u64>,
    pub y_factor: Vec<Vec<u64>>,
    /// Number of geometric points in the orbit.
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassPoints {
    pub class: Vec<u64>,
    pub orbits: Vec<PointOrbit>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnomalousReport {
    pub p: u64,
    pub functions: usize,
    /// True when x and y were exchanged because h does not involve y.
    pub swapped_axes: bool,
    pub h_irreducible: Irreducibility,
    pub classes: Vec<ClassPoints>,
    /// Distinct orbits over all classes.
    pub points: Vec<PointOrbit>,
    /// Number of distinct geometric points.
    pub total: u64,
    pub bound: BigInt,
    pub within_bound: bool,
}

/// (p^n − 1)/(p − 1)·(2g − 2 + d − 1).
pub fn remark_bound(p: u64, n: u32, g: u32, d: u32) -> BigInt {
    let classes = (pow_big(p, n) - 1u32) / BigInt::from(p - 1);
    classes * (2 * g as i64 + d as i64 - 3)
}

/// Canonical representatives of P^{n−1}(F_p): first nonzero entry 1, in
/// lexicographic order.
pub fn projective_classes(p: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let count = p.pow(free as u32);
        for idx in 0..count {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            let mut r = idx;
            for j in (lead + 1..n).rev() {
                v[j] = r % p;
                r /= p;
            }
            out.push(v);
        }
    }
    out
}

struct Reduced {
    h: BiPoly<Fp>,
    hx: BiPoly<Fp>,
    hy: BiPoly<Fp>,
    a: Vec<BiPoly<Fp>>,
    n: Vec<BiPoly<Fp>>,
}

fn to_fp(a: &BiPoly<BigInt>, p: u64) -> BiPoly<Fp> {
    a.map(|c| Fp::from_big(c, p))
}

fn to_field(a: &BiPoly<Fp>, k: &Arc<FqField>) -> BiPoly<Fq> {
    a.map(|c| Fq::from_int(k, c.v as i64))
}

/// B_n for the class `n`.
fn combination(r: &Reduced, n: &[u64], p: u64) -> BiPoly<Fp> {
    let mut b = BiPoly::zero();
    for (i, &ni) in n.iter().enumerate() {
        if ni == 0 {
            continue;
        }
        let mut t = r.a[i].scale(&Fp::from_u64(ni, p));
        for (j, nj) in r.n.iter().enumerate() {
            if j != i {
                t = t.mul(nj);
            }
        }
        b = b.add(&t);
    }
    b
}

fn excluded(r: &Reduced, alpha: &Fq, q: &UPoly<Fq>, k: &Arc<FqField>) -> bool {
    let vanishes = |a: &BiPoly<Fp>| to_field(a, k).at_x(alpha).rem(q).is_zero();
    (vanishes(&r.hx) && vanishes(&r.hy)) || r.n.iter().any(|n| vanishes(n))
}

fn class_orbits(r: &Reduced, class: &[u64], p: u64) -> Result<Vec<PointOrbit>> {
    let one = Fp::new(1, p);
    let b = combination(r, class, p);
    if b.is_zero() || b.reduce_mod(&r.h).is_zero() {
        return Err(Error::NonradicalSystem(class.to_vec()));
    }
    let res = resultant_y(&r.h, &b, &one);
    if res.is_zero() {
        return Err(Error::NonradicalSystem(class.to_vec()));
    }
    let mut out = Vec::new();
    for (px, _) in res.monic().factor() {
        let modulus: Vec<u64> = px.coeffs.iter().map(|c| c.v).collect();
        let e = modulus.len() - 1;
        let k = FqField::new(p, &modulus)?;
        let alpha = Fq::generator(&k);
        let hk = to_field(&r.h, &k).at_x(&alpha);
        let bk = to_field(&b, &k).at_x(&alpha);
        let g = hk.gcd(&bk);
        if g.is_zero() {
            return Err(Error::NonradicalSystem(class.to_vec()));
        }
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (q, _) in g.factor() {
            if excluded(r, &alpha, &q, &k) {
                continue;
            }
            let dq = q.degree().unwrap();
            out.push(PointOrbit {
                x_minpoly: modulus.clone(),
                y_factor: q.coeffs.iter().map(|c| c.c.clone()).collect(),
                size: e * dq,
            });
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Enumerates, for every class in P^{n−1}(F_p), the smooth affine points of
/// h mod p (away from zeros and poles of the f_i) where Σ n_i df_i/f_i vanishes.
pub fn anomalous_discs(c: &PlaneCurve, fs: &[RationalFunction]) -> Result<AnomalousReport> {
    if fs.is_empty() {
        return Err(Error::InvalidInput("no functions".into()));
    }
    let p = c.p();
    let swapped = c.h.deg_y() <= 0;
    let sw = |a: &BiPoly<BigInt>| if swapped { a.swap_xy() } else { a.clone() };
    let h_int = sw(&c.h);
    let h = to_fp(&h_int, p);
    if h.is_zero() || h.deg_y() <= 0 {
        return Err(Error::InvalidInput("curve reduces to a constant".into()));
    }
    let mut a = Vec::new();
    let mut n = Vec::new();
    for f in fs {
        let g = RationalFunction::new(sw(&f.num), sw(&f.den))?;
        let nf = to_fp(&g.num.mul(&g.den), p);
        if nf.is_zero() || nf.reduce_mod(&h).is_zero() {
            return Err(Error::ZeroFunction);
        }
        a.push(to_fp(&dlog_numerator_raw(&h_int, &g), p));
        n.push(nf);
    }
    let r = Reduced {
        hx: h.partial_x(),
        hy: h.partial_y(),
        h,
        a,
        n,
    };
    let field = FqField::with_degree(p, 1)?;
    let h_irreducible = irreducibility(&reduce_poly(&h_int, &field));

    let classes = projective_classes(p, fs.len());
    let results: Vec<Result<Vec<PointOrbit>>> = classes.par_iter().map(|cl| class_orbits(&r, cl, p)).collect();
    let mut per_class = Vec::new();
    let mut all = BTreeMap::new();
    for (cl, res) in classes.into_iter().zip(results) {
        let orbits = res?;
        for o in &orbits {
            all.insert(o.clone(), ());
        }
        per_class.push(ClassPoints { class: cl, orbits });
    }
    let points: Vec<PointOrbit> = all.into_keys().collect();
    let total = points.iter().map(|o| o.size as u64).sum::<u64>();
    let bound = remark_bound(p, fs.len() as u32, c.genus, c.boundary_degree);
    Ok(AnomalousReport {
        p,
        functions: fs.len(),
        swapped_axes: swapped,
        h_irreducible,
        within_bound: BigInt::from(total) <= bound,
        classes: per_class,
        points,
        total,
        bound,
    })
}
