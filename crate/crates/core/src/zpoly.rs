//! Polynomials over ℤ: content, multimodular gcd, square-free decomposition,
//! factorization over ℚ (Hensel lifting plus factor recombination) and
//! cyclotomic polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::fp::Fp;
use crate::num_util::{is_prime, symmetric};
use crate::upoly::UPoly;

pub type ZPoly = UPoly<BigInt>;

pub fn zpoly(c: &[i64]) -> ZPoly {
    UPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
}

pub fn content(f: &ZPoly) -> BigInt {
    f.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// f / content(f), normalized to a positive leading coefficient.
pub fn primitive_part(f: &ZPoly) -> ZPoly {
    if f.is_zero() {
        return UPoly::zero();
    }
    let mut c = content(f);
    if f.lc().unwrap().is_negative() {
        c = -c;
    }
    UPoly::new(f.coeffs.iter().map(|a| a / &c).collect())
}

pub fn reduce(f: &ZPoly, q: u64) -> UPoly<Fp> {
    f.map(|c| Fp::from_big(c, q))
}

fn lift(f: &UPoly<Fp>) -> ZPoly {
    UPoly::new(f.coeffs.iter().map(|c| BigInt::from(c.v)).collect())
}

fn sym_poly(f: &ZPoly, m: &BigInt) -> ZPoly {
    UPoly::new(f.coeffs.iter().map(|c| symmetric(c, m)).collect())
}

/// Primes just below 2^31, descending.
fn big_primes() -> impl Iterator<Item = u64> {
    (1u64..(1 << 31)).rev().filter(|&n| is_prime(n))
}

fn max_abs(f: &ZPoly) -> BigInt {
    f.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
}

/// gcd in ℤ[t] (positive leading coefficient), by Chinese remaindering of
/// modular gcds and exact trial division.
pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return primitive_part(b).scale(&content(b));
    }
    if b.is_zero() {
        return primitive_part(a).scale(&content(a));
    }
    let c = content(a).gcd(&content(b));
    let (pa, pb) = (primitive_part(a), primitive_part(b));
    if pa.degree() == Some(0) || pb.degree() == Some(0) {
        return UPoly::constant(c);
    }
    let gamma = pa.lc().unwrap().gcd(pb.lc().unwrap());
    let mut acc: Option<(ZPoly, BigInt, usize)> = None;
    for q in big_primes() {
        if (&gamma % q).is_zero() {
            continue;
        }
        let gq = reduce(&pa, q).gcd(&reduce(&pb, q));
        let dq = gq.degree().unwrap();
        if dq == 0 {
            return UPoly::constant(c);
        }
        let gq = lift(&gq.scale(&Fp::from_big(&gamma, q)));
        let qb = BigInt::from(q);
        acc = match acc {
            Some((g, m, d)) if d == dq => {
                let (s, t) = crt_coeffs(&m, &qb);
                let mm = &m * &qb;
                let len = g.coeffs.len().max(gq.coeffs.len());
                let z = BigInt::zero();
                let comb: Vec<BigInt> = (0..len)
                    .map(|i| {
                        let x = g.coeffs.get(i).unwrap_or(&z);
                        let y = gq.coeffs.get(i).unwrap_or(&z);
                        (x * &t * &qb + y * &s * &m).mod_floor(&mm)
                    })
                    .collect();
                Some((UPoly::new(comb), mm, d))
            }
            Some((g, m, d)) if d < dq => Some((g, m, d)),
            _ => Some((gq, qb, dq)),
        };
        let (g, m, _) = acc.as_ref().unwrap();
        let cand = primitive_part(&sym_poly(g, m));
        if pa.div_exact_domain(&cand).is_some() && pb.div_exact_domain(&cand).is_some() {
            return cand.scale(&c);
        }
    }
    unreachable!("prime supply exhausted")
}

/// (s, t) with s·m + t·q = 1 for coprime moduli.
fn crt_coeffs(m: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    let e = m.extended_gcd(q);
    (e.x, e.y)
}

/// Yun's square-free decomposition of a primitive polynomial: pairs (g, k)
/// with f = ±Π g^k.
pub fn squarefree(f: &ZPoly) -> Vec<(ZPoly, u32)> {
    let f = primitive_part(f);
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let d = f.derivative();
    let a0 = gcd(&f, &d);
    let mut b = f.div_exact_domain(&a0).unwrap();
    let mut c = d.div_exact_domain(&a0).unwrap();
    let mut k = 1;
    loop {
        let db = b.derivative();
        let e = c.sub(&db);
        if b.degree() == Some(0) {
            break;
        }
        let a = primitive_part(&gcd(&b, &e));
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), k));
        }
        b = b.div_exact_domain(&a).unwrap();
        c = e.div_exact_domain(&a).unwrap();
        k += 1;
    }
    out
}

/// Lifts f ≡ g·h (mod q), g monic, gcd(g, h) = 1, to a factorization modulo q^k.
fn hensel_pair(f: &ZPoly, g0: &UPoly<Fp>, h0: &UPoly<Fp>, q: u64, k: u32) -> (ZPoly, ZPoly) {
    let (_, s, _) = h0.ext_gcd(g0);
    let mut g = lift(g0);
    let mut h = lift(h0);
    let qb = BigInt::from(q);
    let mut qj = qb.clone();
    for _ in 1..k {
        let diff = f.sub(&g.mul(&h));
        let e = reduce(&UPoly::new(diff.coeffs.iter().map(|c| c / &qj).collect()), q);
        let sigma = s.mul(&e).rem(g0);
        let tau = e.sub(&sigma.mul(h0)).div_exact(g0);
        g = g.add(&lift(&sigma).scale(&qj));
        h = h.add(&lift(&tau).scale(&qj));
        qj *= &qb;
        g = UPoly::new(g.coeffs.iter().map(|c| c.mod_floor(&qj)).collect());
        h = UPoly::new(h.coeffs.iter().map(|c| c.mod_floor(&qj)).collect());
    }
    (g, h)
}

fn choose_prime(f: &ZPoly) -> (u64, Vec<UPoly<Fp>>) {
    let lc = f.lc().unwrap().clone();
    let mut best: Option<(u64, Vec<UPoly<Fp>>)> = None;
    let mut tried = 0;
    for q in (3u64..).filter(|&n| is_prime(n)) {
        if (&lc % q).is_zero() {
            continue;
        }
        let fq = reduce(f, q);
        if fq.degree() != f.degree() || !fq.gcd(&fq.derivative()).is_one() {
            continue;
        }
        let facs: Vec<UPoly<Fp>> = fq.factor().into_iter().map(|(g, _)| g).collect();
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((q, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    best.unwrap()
}

/// Irreducible factors over ℚ of a primitive square-free polynomial of degree ≥ 1.
fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.degree().unwrap();
    if n == 1 {
        return vec![f.clone()];
    }
    let (q, mods) = choose_prime(f);
    if mods.len() == 1 {
        return vec![f.clone()];
    }
    // any factor has coefficients below 2^n·(n+1)·‖f‖∞ times the leading coefficient
    let bound = (BigInt::one() << n) * BigInt::from(n + 1) * max_abs(f) * f.lc().unwrap().abs() * 2;
    let mut k = 1u32;
    let mut qk = BigInt::from(q);
    while qk <= bound {
        qk *= q;
        k += 1;
    }
    let lc_f = Fp::from_big(f.lc().unwrap(), q);
    let mut lifted = Vec::new();
    let mut rest = f.clone();
    for i in 0..mods.len() - 1 {
        let mut cof = UPoly::constant(lc_f);
        for m in &mods[i + 1..] {
            cof = cof.mul(m);
        }
        let (g, h) = hensel_pair(&rest, &mods[i], &cof, q, k);
        lifted.push(g);
        rest = h;
    }
    lifted.push(monic_mod(&rest, &qk));

    let mut out = Vec::new();
    let mut f = f.clone();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), s) {
            let lc = f.lc().unwrap().clone();
            let mut prod = UPoly::constant(lc.clone());
            for &i in &subset {
                prod = prod.mul(&lifted[i]);
            }
            let cand = primitive_part(&sym_poly(&mod_poly(&prod, &qk), &qk));
            if let Some(quo) = f.div_exact_domain(&cand) {
                out.push(cand);
                f = primitive_part(&quo);
                let mut keep = Vec::new();
                for (i, g) in lifted.iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g.clone());
                    }
                }
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    out.push(f);
    out
}

fn mod_poly(f: &ZPoly, m: &BigInt) -> ZPoly {
    UPoly::new(f.coeffs.iter().map(|c| c.mod_floor(m)).collect())
}

fn monic_mod(f: &ZPoly, m: &BigInt) -> ZPoly {
    let inv = crate::num_util::inv_mod(f.lc().unwrap(), m).expect("leading coefficient not a unit");
    mod_poly(&f.scale(&inv), m)
}

fn subsets(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    rec(0, n, s, &mut cur, &mut out);
    out
}

/// Factorization over ℚ into primitive irreducible factors of ℤ[t] with
/// multiplicities, sorted by degree then coefficients. Constants are dropped.
pub fn factor(f: &ZPoly) -> Vec<(ZPoly, u32)> {
    let mut out = Vec::new();
    for (g, k) in squarefree(f) {
        for h in factor_squarefree(&g) {
            out.push((h, k));
        }
    }
    out.sort_by(|a, b| a.0.deg_i().cmp(&b.0.deg_i()).then_with(|| a.0.coeffs.cmp(&b.0.coeffs)));
    out
}

/// The m-th cyclotomic polynomial.
pub fn cyclotomic(m: u64) -> ZPoly {
    let mut f = zpoly(&[-1]).add(&UPoly::monomial(BigInt::one(), m as usize));
    for d in 1..m {
        if m % d == 0 {
            f = f.div_exact_domain(&cyclotomic(d)).unwrap();
        }
    }
    f
}

/// Σ c_k P^k Q^{n−k} for c of degree n: the numerator of c(P/Q)·Q^n.
pub fn homogenize(c: &ZPoly, p: &ZPoly, q: &ZPoly) -> ZPoly {
    let n = c.degree().unwrap_or(0);
    let mut out = UPoly::zero();
    let mut pk = zpoly(&[1]);
    let qpows: Vec<ZPoly> = (0..=n).map(|e| q.pow(e as u32)).collect();
    for k in 0..=n {
        if !c.coeffs[k].is_zero() {
            out = out.add(&pk.mul(&qpows[n - k]).scale(&c.coeffs[k]));
        }
        pk = pk.mul(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), zpoly(&[-1, 1]));
        assert_eq!(cyclotomic(6), zpoly(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), zpoly(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(11).degree(), Some(10));
    }

    #[test]
    fn gcd_of_products() {
        let a = zpoly(&[1, -1, 1]).mul(&zpoly(&[3, 2]));
        let b = zpoly(&[1, -1, 1]).mul(&zpoly(&[-5, 0, 7])).scale(&BigInt::from(4));
        assert_eq!(gcd(&a, &b), zpoly(&[1, -1, 1]));
        assert_eq!(gcd(&zpoly(&[1, 1]), &zpoly(&[-1, 1])), zpoly(&[1]));
    }

    #[test]
    fn factors_swinnerton_dyer_style() {
        // x^4 − 10x^2 + 1 is irreducible but splits modulo every prime
        let f = zpoly(&[1, 0, -10, 0, 1]);
        assert_eq!(factor(&f), vec![(f.clone(), 1)]);
        let g = zpoly(&[-2, 0, 1]).mul(&zpoly(&[1, -1, 1])).mul(&zpoly(&[1, 3])).mul(&zpoly(&[1, 3]));
        let fs = factor(&g.scale(&BigInt::from(-6)));
        assert_eq!(
            fs,
            vec![(zpoly(&[1, 3]), 2), (zpoly(&[-2, 0, 1]), 1), (zpoly(&[1, -1, 1]), 1)]
        );
    }

    #[test]
    fn homogenized_cyclotomic_is_norm() {
        // Φ_6(t/(1−t))·(1−t)^2 = t² − t(1−t) + (1−t)² = 3t² − 3t + 1
        let n = homogenize(&cyclotomic(6), &zpoly(&[0, 1]), &zpoly(&[1, -1]));
        assert_eq!(n, zpoly(&[1, -3, 3]));
    }
}
