//! Search for points of a rational curve t ↦ (f₁(t), f₂(t), f₃(t)) in 𝔾_m³ that
//! satisfy two independent multiplicative relations Π f_i^{n_i} = ζ with ζ a root
//! of unity.
//!
//! Candidates come from a fingerprint modulo an auxiliary prime ℓ ≡ 1 mod
//! lcm(1..M), in which every root of unity of order ≤ M exists: for each exponent
//! vector n and each ζ the polynomial P_n − ζQ_n (f^n = P_n/Q_n) is factored mod
//! ℓ, and irreducible factors shared by two exponent vectors are collected. A
//! point t with minimal polynomial φ satisfies f(t)^n = ζ of order m exactly
//! when φ divides the norm Φ_m(P_n, Q_n) (homogenized cyclotomic polynomial),
//! so each shared factor is confirmed by an exact gcd of two norms over ℤ,
//! factored over ℚ, and every relation is re-checked in ℚ[t]/(φ).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::Fp;
use crate::linalg::rank_int;
use crate::modpoly::Fl;
use crate::num_util::{is_prime, pow_mod, prime_factors};
use crate::numfield::NumberField;
use crate::spec::UniRational;
use crate::upoly::UPoly;
use crate::zpoly::{self, cyclotomic, homogenize, ZPoly};

/// Π f_i^{n_i} = ζ with ζ of exact order `order`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Relation {
    pub exponents: Vec<i64>,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minor {
    pub rows: (usize, usize),
    pub value: i64,
}

/// A point of the curve lying in a rank-one subgroup.
#[derive(Clone, Debug, Serialize)]
pub struct UnlikelyCertificate {
    /// Minimal polynomial of t over ℚ, constant term first, primitive in ℤ[t].
    pub minimal_polynomial: Vec<String>,
    pub degree: usize,
    /// Which of the `degree` conjugate roots this certificate refers to.
    pub root_label: usize,
    pub relations: [Relation; 2],
    pub witness: Minor,
    /// Every relation in the searched region that holds at the point.
    pub all_relations: Vec<Relation>,
}

impl UnlikelyCertificate {
    pub fn minimal_polynomial(&self) -> ZPoly {
        UPoly::new(self.minimal_polynomial.iter().map(|s| s.parse().unwrap()).collect())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchRegion {
    #[serde(rename = "B")]
    pub b: u32,
    #[serde(rename = "M")]
    pub m: u32,
    pub exponent_vectors: usize,
    pub roots_of_unity: usize,
    pub fingerprint_prime: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HuntResult {
    pub region: SearchRegion,
    pub certificates: Vec<UnlikelyCertificate>,
    pub notes: Vec<String>,
}

/// Primitive vectors in [−B, B]^k with first nonzero entry positive.
pub fn exponent_vectors(k: usize, b: u32) -> Vec<Vec<i64>> {
    let b = b as i64;
    let side = (2 * b + 1) as usize;
    let mut out = Vec::new();
    for idx in 0..side.pow(k as u32) {
        let mut r = idx;
        let mut v = vec![0i64; k];
        for x in v.iter_mut() {
            *x = (r % side) as i64 - b;
            r /= side;
        }
        let Some(first) = v.iter().find(|&&x| x != 0) else {
            continue;
        };
        if *first < 0 {
            continue;
        }
        if v.iter().fold(0i64, |g, &x| g.gcd(&x)) != 1 {
            continue;
        }
        out.push(v);
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    out
}

fn lcm_upto(m: u32) -> Result<u64> {
    let mut l = 1u64;
    for i in 1..=m as u64 {
        l = l
            .checked_div(l.gcd(&i))
            .and_then(|x| x.checked_mul(i))
            .ok_or_else(|| Error::InvalidInput(format!("M = {m} is too large")))?;
    }
    Ok(l)
}

/// The least prime ℓ ≡ 1 mod lcm(1..M) above 2^31.
pub fn fingerprint_prime(m: u32) -> Result<u64> {
    let l = lcm_upto(m)?;
    let mut k = (1u64 << 31) / l + 1;
    loop {
        let cand = k
            .checked_mul(l)
            .and_then(|x| x.checked_add(1))
            .filter(|&x| x < 1 << 62)
            .ok_or_else(|| Error::InvalidInput(format!("M = {m} is too large")))?;
        if is_prime(cand) {
            return Ok(cand);
        }
        k += 1;
    }
}

fn primitive_root(l: u64) -> u64 {
    let fs = prime_factors(l - 1);
    (2..l).find(|&g| fs.iter().all(|&q| pow_mod(g, (l - 1) / q, l) != 1)).unwrap()
}

/// (order, ζ) for every root of unity of order ≤ M in F_ℓ.
fn roots_of_unity(l: u64, m: u32) -> Vec<(u64, u64)> {
    let g = primitive_root(l);
    let mut out = Vec::new();
    for order in 1..=m as u64 {
        let base = pow_mod(g, (l - 1) / order, l);
        for j in 1..=order {
            if j.gcd(&order) == 1 {
                out.push((order, pow_mod(base, j, l)));
            }
        }
    }
    out
}

/// P_n and Q_n with f^n = P_n/Q_n.
pub fn split_monomial(fs: &[UniRational], n: &[i64]) -> (ZPoly, ZPoly) {
    let one = zpoly::zpoly(&[1]);
    let (mut p, mut q) = (one.clone(), one);
    for (f, &k) in fs.iter().zip(n) {
        if k > 0 {
            p = p.mul(&f.num.pow(k as u32));
            q = q.mul(&f.den.pow(k as u32));
        } else if k < 0 {
            p = p.mul(&f.den.pow((-k) as u32));
            q = q.mul(&f.num.pow((-k) as u32));
        }
    }
    (p, q)
}

/// Vanishing locus of Φ_m(f^n): the numerator Φ_m(P_n, Q_n).
pub fn relation_norm(fs: &[UniRational], n: &[i64], m: u64) -> ZPoly {
    let (p, q) = split_monomial(fs, n);
    homogenize(&cyclotomic(m), &p, &q)
}

/// Exact check that f(t)^n is a root of unity of order exactly m in ℚ[t]/(φ).
pub fn relation_holds(k: &NumberField, fs: &[(ZPoly, ZPoly)], n: &[i64], m: u64) -> Result<bool> {
    let u = k.monomial(fs, n)?;
    Ok(k.eval(&cyclotomic(m), &u).is_zero())
}

/// Exact dependence test modulo constants: the exponent matrix of the f_i over
/// their irreducible factors must have full row rank.
pub fn multiplicative_rank(fs: &[UniRational]) -> usize {
    let mut index: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
    let mut rows: Vec<BTreeMap<usize, i64>> = Vec::new();
    for f in fs {
        let mut row = BTreeMap::new();
        for (part, sign) in [(&f.num, 1i64), (&f.den, -1i64)] {
            for (g, e) in zpoly::factor(part) {
                let next = index.len();
                let i = *index.entry(g.coeffs.clone()).or_insert(next);
                *row.entry(i).or_insert(0) += sign * e as i64;
            }
        }
        rows.push(row);
    }
    let m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| (0..index.len()).map(|i| *r.get(&i).unwrap_or(&0)).collect())
        .collect();
    if index.is_empty() {
        return 0;
    }
    rank_int(&m)
}

fn key(f: &UPoly<Fp>) -> Vec<u64> {
    f.coeffs.iter().map(|c| c.v).collect()
}

fn to_fl(f: &ZPoly, l: u64) -> UPoly<Fp> {
    zpoly::reduce(f, l)
}

struct Search<'a> {
    fs: &'a [UniRational],
    vectors: Vec<Vec<i64>>,
    norms: HashMap<(usize, u64), ZPoly>,
}

impl Search<'_> {
    fn norm(&mut self, e: (usize, u64)) -> ZPoly {
        if let Some(n) = self.norms.get(&e) {
            return n.clone();
        }
        let n = relation_norm(self.fs, &self.vectors[e.0], e.1);
        self.norms.insert(e, n.clone());
        n
    }
}

fn minor(a: &[i64], b: &[i64]) -> Option<Minor> {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let v = a[i] * b[j] - a[j] * b[i];
            if v != 0 {
                return Some(Minor { rows: (i, j), value: v });
            }
        }
    }
    None
}

/// The independent pair of least total height (then least orders).
fn choose_pair(rels: &[Relation]) -> Option<(Relation, Relation, Minor)> {
    let h = |r: &Relation| r.exponents.iter().map(|x| x.abs()).sum::<i64>();
    let mut best: Option<((i64, u64, usize, usize), Relation, Relation, Minor)> = None;
    for (i, a) in rels.iter().enumerate() {
        for (j, b) in rels.iter().enumerate().skip(i + 1) {
            if let Some(mn) = minor(&a.exponents, &b.exponents) {
                let score = (h(a) + h(b), a.order.max(b.order), i, j);
                if best.as_ref().map_or(true, |(s, ..)| score < *s) {
                    best = Some((score, a.clone(), b.clone(), mn));
                }
            }
        }
    }
    best.map(|(_, a, b, m)| (a, b, m))
}

/// Searches the region |n_i| ≤ B, ord ζ ≤ M for points in two independent
/// relations and returns one certificate per conjugate root.
pub fn relation_solve(fs: &[UniRational], b: u32, m: u32) -> Result<HuntResult> {
    if fs.len() != 3 {
        return Err(Error::InvalidInput(format!("expected 3 functions, got {}", fs.len())));
    }
    if multiplicative_rank(fs) < fs.len() {
        return Err(Error::DependentFunctions(
            "the functions are multiplicatively dependent modulo constants".into(),
        ));
    }
    let l = fingerprint_prime(m)?;
    let zetas = roots_of_unity(l, m);
    let vectors = exponent_vectors(fs.len(), b);

    let k = Fl::new(l);
    let max_e = b as usize;
    let pw = |f: &ZPoly| {
        let base = key(&to_fl(f, l));
        let mut v = vec![vec![1u64]];
        for _ in 0..max_e {
            let last = k.mul(v.last().unwrap(), &base);
            v.push(last);
        }
        v
    };
    let num_pows: Vec<Vec<Vec<u64>>> = fs.iter().map(|f| pw(&f.num)).collect();
    let den_pows: Vec<Vec<Vec<u64>>> = fs.iter().map(|f| pw(&f.den)).collect();

    let mut groups: HashMap<Vec<u64>, BTreeSet<(usize, u64)>> = HashMap::new();
    for (vi, n) in vectors.iter().enumerate() {
        let (mut p, mut q) = (vec![1u64], vec![1u64]);
        for (i, &e) in n.iter().enumerate() {
            let a = e.unsigned_abs() as usize;
            if e > 0 {
                p = k.mul(&p, &num_pows[i][a]);
                q = k.mul(&q, &den_pows[i][a]);
            } else if e < 0 {
                p = k.mul(&p, &den_pows[i][a]);
                q = k.mul(&q, &num_pows[i][a]);
            }
        }
        for &(order, z) in &zetas {
            let f = k.sub(&p, &k.scale(&q, z));
            if f.len() < 2 {
                continue;
            }
            for g in k.irreducible_factors(&f) {
                groups.entry(g).or_default().insert((vi, order));
            }
        }
    }

    let mut search = Search {
        fs,
        vectors,
        norms: HashMap::new(),
    };
    let exact: Vec<(ZPoly, ZPoly)> = fs.iter().map(|f| (f.num.clone(), f.den.clone())).collect();
    let mut keys: Vec<&Vec<u64>> = groups
        .iter()
        .filter(|(_, es)| es.iter().map(|e| e.0).collect::<BTreeSet<_>>().len() >= 2)
        .map(|(k, _)| k)
        .collect();
    keys.sort();

    let mut points: BTreeMap<Vec<BigInt>, BTreeSet<Relation>> = BTreeMap::new();
    for k in keys {
        let fac = UPoly::new(k.iter().map(|&c| Fp::from_u64(c, l)).collect());
        if points
            .keys()
            .any(|phi| to_fl(&UPoly::new(phi.clone()), l).rem(&fac).is_zero())
        {
            continue;
        }
        let entries: Vec<(usize, u64)> = groups[k].iter().copied().collect();
        let mut found: Option<ZPoly> = None;
        'pairs: for (i, &e1) in entries.iter().enumerate() {
            for &e2 in &entries[i + 1..] {
                if e1.0 == e2.0 {
                    continue;
                }
                let g = zpoly::gcd(&search.norm(e1), &search.norm(e2));
                if g.degree().unwrap_or(0) == 0 {
                    continue;
                }
                for (phi, _) in zpoly::factor(&g) {
                    if to_fl(&phi, l).rem(&fac).is_zero() {
                        found = Some(phi);
                        break 'pairs;
                    }
                }
            }
        }
        let Some(phi) = found else { continue };
        if exact
            .iter()
            .any(|(a, b)| a.rem_exact_zero(&phi) || b.rem_exact_zero(&phi))
        {
            continue;
        }
        let kf = NumberField::new(&phi)?;
        let mut rels = BTreeSet::new();
        for &(vi, order) in &entries {
            let n = &search.vectors[vi];
            if relation_holds(&kf, &exact, n, order)? {
                rels.insert(Relation {
                    exponents: n.clone(),
                    order,
                });
            }
        }
        points.insert(phi.coeffs.clone(), rels);
    }

    let mut certificates = Vec::new();
    for (phi, rels) in &points {
        let rels: Vec<Relation> = rels.iter().cloned().collect();
        let Some((r1, r2, witness)) = choose_pair(&rels) else {
            continue;
        };
        let deg = phi.len() - 1;
        for label in 0..deg {
            certificates.push(UnlikelyCertificate {
                minimal_polynomial: phi.iter().map(|c| c.to_string()).collect(),
                degree: deg,
                root_label: label,
                relations: [r1.clone(), r2.clone()],
                witness: witness.clone(),
                all_relations: rels.clone(),
            });
        }
    }
    let mut notes = Vec::new();
    if certificates.is_empty() {
        notes.push(format!("no point with two independent relations for B = {b}, M = {m}"));
    }
    notes.push("exhaustive only within the stated region".into());
    Ok(HuntResult {
        region: SearchRegion {
            b,
            m,
            exponent_vectors: search.vectors.len(),
            roots_of_unity: zetas.len(),
            fingerprint_prime: l,
        },
        certificates,
        notes,
    })
}

trait ExactRem {
    fn rem_exact_zero(&self, phi: &ZPoly) -> bool;
}

impl ExactRem for ZPoly {
    /// φ divides self in ℚ[t].
    fn rem_exact_zero(&self, phi: &ZPoly) -> bool {
        let q = crate::numfield::to_q(self);
        q.rem(&crate::numfield::to_q(phi)).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpoly::zpoly;

    fn fam(third: &[i64]) -> Vec<UniRational> {
        vec![
            UniRational::poly(zpoly(&[0, 1])),
            UniRational::poly(zpoly(&[1, -1])),
            UniRational::poly(zpoly(third)),
        ]
    }

    #[test]
    fn region_sizes() {
        assert_eq!(exponent_vectors(3, 1).len(), 13);
        let l = fingerprint_prime(12).unwrap();
        assert_eq!((l - 1) % 27720, 0);
        assert_eq!(roots_of_unity(l, 12).len(), 46);
    }

    #[test]
    fn dependence_detected() {
        let fs = vec![
            UniRational::poly(zpoly(&[0, 1])),
            UniRational::poly(zpoly(&[0, 0, 1])),
            UniRational::poly(zpoly(&[1, 1])),
        ];
        assert_eq!(multiplicative_rank(&fs), 2);
        assert!(matches!(relation_solve(&fs, 2, 2), Err(Error::DependentFunctions(_))));
    }

    fn minpolys(r: &HuntResult) -> BTreeMap<Vec<i64>, usize> {
        let mut out = BTreeMap::new();
        for c in &r.certificates {
            let k: Vec<i64> = c.minimal_polynomial.iter().map(|s| s.parse().unwrap()).collect();
            *out.entry(k).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn small_region_points_of_the_line_family() {
        // t = ζ₆, ζ₃, i, ζ₁₂ and both golden-ratio points
        let r = relation_solve(&fam(&[1, 1]), 1, 6).unwrap();
        let want: BTreeMap<Vec<i64>, usize> = [
            (vec![-1, -1, 1], 2),
            (vec![-1, 1, 1], 2),
            (vec![1, -1, 1], 2),
            (vec![1, 0, -1, 0, 1], 4),
            (vec![1, 0, 1], 2),
            (vec![1, 1, 1], 2),
        ]
        .into_iter()
        .collect();
        assert_eq!(minpolys(&r), want);
        let c = r.certificates.iter().find(|c| c.minimal_polynomial() == zpoly(&[1, -1, 1])).unwrap();
        assert!(c.all_relations.contains(&Relation { exponents: vec![1, 1, 0], order: 1 }));
    }

    #[test]
    fn shifted_family_has_three_quadratic_points() {
        // t² = t + 1 gives t(1−t) = −1 and t(t−2)/(1−t) = 1, and similarly for the others
        let r = relation_solve(&fam(&[-2, 1]), 1, 2).unwrap();
        let want: BTreeMap<Vec<i64>, usize> =
            [(vec![-1, -1, 1], 2), (vec![1, -3, 1], 2), (vec![2, -2, 1], 2)].into_iter().collect();
        assert_eq!(minpolys(&r), want);
        assert!(relation_solve(&fam(&[-2, 1]), 1, 1).unwrap().certificates.len() < 6);
    }
}
