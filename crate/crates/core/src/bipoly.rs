//! Sparse bivariate polynomials in x, y and elimination by resultants.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::scalar::Scalar;
use crate::upoly::UPoly;

/// Σ c_ij x^i y^j, keyed by (i, j); zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<C> {
    pub terms: BTreeMap<(u32, u32), C>,
}

impl<C: Scalar> BiPoly<C> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), C)>) -> Self {
        let mut p = BiPoly::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: (u32, u32), c: C) {
        let v = match self.terms.remove(&k) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !v.vanishes() {
            self.terms.insert(k, v);
        }
    }

    pub fn constant(c: C) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn x(proto: &C) -> Self {
        Self::from_terms([((1, 0), proto.one_like())])
    }

    pub fn y(proto: &C) -> Self {
        Self::from_terms([((0, 1), proto.one_like())])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn proto(&self) -> Option<&C> {
        self.terms.values().next()
    }

    pub fn deg_x(&self) -> i64 {
        self.terms.keys().map(|k| k.0 as i64).max().unwrap_or(-1)
    }

    pub fn deg_y(&self) -> i64 {
        self.terms.keys().map(|k| k.1 as i64).max().unwrap_or(-1)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|k| (k.0 + k.1) as i64).max().unwrap_or(-1)
    }

    pub fn coeff(&self, i: u32, j: u32) -> Option<&C> {
        self.terms.get(&(i, j))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c.negate())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (*k, c.times(s))))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = BiPoly::zero();
        for (ka, a) in &self.terms {
            for (kb, b) in &o.terms {
                r.add_term((ka.0 + kb.0, ka.1 + kb.1), a.times(b));
            }
        }
        r
    }

    pub fn mul_monomial(&self, i: u32, j: u32) -> Self {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| ((k.0 + i, k.1 + j), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let proto = match self.proto() {
            Some(c) => c.clone(),
            None => return if e == 0 { panic!("0^0") } else { BiPoly::zero() },
        };
        let mut acc = BiPoly::constant(proto.one_like());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 > 0)
                .map(|(k, c)| ((k.0 - 1, k.1), c.times(&c.from_i64_like(k.0 as i64)))),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.1 > 0)
                .map(|(k, c)| ((k.0, k.1 - 1), c.times(&c.from_i64_like(k.1 as i64)))),
        )
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> BiPoly<D> {
        BiPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, f(c))))
    }

    /// Substitutes x ↦ x^e, y ↦ y^e.
    pub fn inflate(&self, e: u32) -> Self {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| ((k.0 * e, k.1 * e), c.clone())).collect(),
        }
    }

    pub fn swap_xy(&self) -> Self {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| ((k.1, k.0), c.clone())).collect(),
        }
    }

    /// Evaluation at (x, y) in another domain, mapping coefficients with `f`.
    pub fn eval_with<D: Scalar>(&self, x: &D, y: &D, f: impl Fn(&C) -> D) -> D {
        let dx = self.deg_x().max(0) as usize;
        let dy = self.deg_y().max(0) as usize;
        let mut xp = vec![x.one_like()];
        for i in 0..dx {
            xp.push(xp[i].times(x));
        }
        let mut yp = vec![y.one_like()];
        for j in 0..dy {
            yp.push(yp[j].times(y));
        }
        let mut acc = x.zero_like();
        for (k, c) in &self.terms {
            acc = acc.plus(&f(c).times(&xp[k.0 as usize]).times(&yp[k.1 as usize]));
        }
        acc
    }

    pub fn eval(&self, x: &C, y: &C) -> C {
        self.eval_with(x, y, |c| c.clone())
    }

    /// Coefficients as a polynomial in y over C[x]: entry j is the x-polynomial of y^j.
    pub fn y_coeffs(&self) -> Vec<UPoly<C>> {
        let dy = self.deg_y();
        if dy < 0 {
            return Vec::new();
        }
        let proto = self.proto().unwrap();
        let mut rows: Vec<Vec<C>> = vec![Vec::new(); dy as usize + 1];
        for (k, c) in &self.terms {
            let row = &mut rows[k.1 as usize];
            if row.len() <= k.0 as usize {
                row.resize(k.0 as usize + 1, proto.zero_like());
            }
            row[k.0 as usize] = c.clone();
        }
        rows.into_iter().map(UPoly::new).collect()
    }

    pub fn from_y_coeffs(cs: &[UPoly<C>]) -> Self {
        let mut p = BiPoly::zero();
        for (j, u) in cs.iter().enumerate() {
            for (i, c) in u.coeffs.iter().enumerate() {
                p.add_term((i as u32, j as u32), c.clone());
            }
        }
        p
    }

    /// lc_y(h)^e · self − q · h with deg_y below deg_y(h) (pseudo-remainder in y).
    pub fn prem_y(&self, h: &Self) -> Self {
        self.prem_y_count(h).0
    }

    /// Pseudo-remainder together with the power e of lc_y(h) that was applied.
    pub fn prem_y_count(&self, h: &Self) -> (Self, u32) {
        let dh = h.deg_y();
        assert!(dh >= 0, "pseudo-division by zero");
        let hc = h.y_coeffs();
        let lh = BiPoly::from_y_coeffs(&[hc[dh as usize].clone()]);
        let mut r = self.clone();
        let mut e = 0;
        while r.deg_y() >= dh && !r.is_zero() {
            let dr = r.deg_y();
            let rc = r.y_coeffs();
            let lr = BiPoly::from_y_coeffs(&[rc[dr as usize].clone()]);
            r = r.mul(&lh).sub(&lr.mul(h).mul_monomial(0, (dr - dh) as u32));
            e += 1;
        }
        (r, e)
    }

    /// lc^e · self reduced modulo h for a prescribed e at least the number of
    /// reduction steps needed, so that the map is linear in `self`. Uses the
    /// y-direction unless h is free of y.
    pub fn reduce_fixed(&self, h: &Self, e: u32) -> Self {
        let swap = h.deg_y() <= 0;
        let (a, hh) = if swap { (self.swap_xy(), h.swap_xy()) } else { (self.clone(), h.clone()) };
        let (r, used) = a.prem_y_count(&hh);
        assert!(used <= e, "reduction exponent too small");
        let dh = hh.deg_y();
        let lc = BiPoly::from_y_coeffs(&[hh.y_coeffs()[dh as usize].clone()]);
        let r = if used < e { r.mul(&lc.pow(e - used)) } else { r };
        if swap {
            r.swap_xy()
        } else {
            r
        }
    }

    /// Pseudo-remainder in x (for divisors free of y).
    pub fn prem_x(&self, h: &Self) -> Self {
        self.swap_xy().prem_y(&h.swap_xy()).swap_xy()
    }

    /// Reduction modulo `h`: by y if h involves y, otherwise by x.
    pub fn reduce_mod(&self, h: &Self) -> Self {
        if h.deg_y() > 0 {
            self.prem_y(h)
        } else {
            self.prem_x(h)
        }
    }

    /// Specializes x to a constant, returning a univariate polynomial in y.
    pub fn at_x(&self, x: &C) -> UPoly<C> {
        let cs = self.y_coeffs();
        UPoly::new(cs.iter().map(|u| u.eval(x)).collect())
    }

    /// Specializes y to a constant, returning a univariate polynomial in x.
    pub fn at_y(&self, y: &C) -> UPoly<C> {
        self.swap_xy().at_x(y)
    }
}

impl BiPoly<BigInt> {
    pub fn from_int_terms(t: &[((u32, u32), i64)]) -> Self {
        BiPoly::from_terms(t.iter().map(|&(k, c)| (k, BigInt::from(c))))
    }
}

/// Determinant of a square matrix over D[x] by fraction-free (Bareiss) elimination;
/// D must support exact division of coefficients.
pub fn bareiss_det<C: Scalar>(mut m: Vec<Vec<UPoly<C>>>, one: &C) -> UPoly<C> {
    let n = m.len();
    if n == 0 {
        return UPoly::constant(one.clone());
    }
    let mut sign = false;
    let mut prev = UPoly::constant(one.clone());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact_domain(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
        for row in m.iter_mut().skip(k + 1) {
            row[k] = UPoly::zero();
        }
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// Res_y(a, b) as a polynomial in x, via the Sylvester matrix.
pub fn resultant_y<C: Scalar>(a: &BiPoly<C>, b: &BiPoly<C>, one: &C) -> UPoly<C> {
    let (ac, bc) = (a.y_coeffs(), b.y_coeffs());
    let (m, n) = (ac.len().saturating_sub(1), bc.len().saturating_sub(1));
    if ac.is_empty() || bc.is_empty() {
        return UPoly::zero();
    }
    if m == 0 {
        return ac[0].pow(n as u32);
    }
    if n == 0 {
        return bc[0].pow(m as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![UPoly::zero(); size]; size];
    for r in 0..n {
        for (j, c) in ac.iter().enumerate() {
            mat[r][r + m - j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in bc.iter().enumerate() {
            mat[n + r][r + n - j] = c.clone();
        }
    }
    bareiss_det(mat, one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Fp;

    fn fp_poly(t: &[((u32, u32), i64)], p: u64) -> BiPoly<Fp> {
        BiPoly::from_terms(t.iter().map(|&(k, c)| (k, Fp::new(c, p))))
    }

    #[test]
    fn partials_and_eval() {
        let h = BiPoly::from_int_terms(&[((0, 2), 1), ((3, 0), -1), ((0, 0), -1)]);
        assert_eq!(h.partial_x(), BiPoly::from_int_terms(&[((2, 0), -3)]));
        assert_eq!(h.partial_y(), BiPoly::from_int_terms(&[((0, 1), 2)]));
        assert_eq!(h.eval(&BigInt::from(2), &BigInt::from(3)), BigInt::from(0));
    }

    #[test]
    fn resultant_eliminates_y() {
        // Res_y(y - x^2, y - 1) = 1 - x^2 up to sign
        let p = 7;
        let a = fp_poly(&[((0, 1), 1), ((2, 0), -1)], p);
        let b = fp_poly(&[((0, 1), 1), ((0, 0), -1)], p);
        let r = resultant_y(&a, &b, &Fp::new(1, p));
        let want = UPoly::new(vec![Fp::new(1, p), Fp::new(0, p), Fp::new(-1, p)]);
        assert!(r == want || r == want.neg());
        // integer version
        let ai = BiPoly::from_int_terms(&[((0, 2), 1), ((2, 0), 1), ((0, 0), -5)]);
        let bi = BiPoly::from_int_terms(&[((0, 1), 1), ((1, 0), -2)]);
        let ri = resultant_y(&ai, &bi, &BigInt::from(1));
        assert_eq!(ri, UPoly::new(vec![BigInt::from(-5), BigInt::from(0), BigInt::from(5)]));
    }

    #[test]
    fn pseudo_remainder_substitutes() {
        let p = 3;
        let h = fp_poly(&[((1, 0), 1), ((0, 1), 1), ((0, 0), -1)], p);
        let g = fp_poly(&[((0, 2), 1), ((1, 0), 1)], p);
        // y = 1 − x: (1−x)^2 + x = 1 − x + x^2
        let r = g.prem_y(&h);
        assert_eq!(r, fp_poly(&[((0, 0), 1), ((1, 0), -1), ((2, 0), 1)], p));
    }
}
