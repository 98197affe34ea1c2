//! Human-readable renderings of integer polynomials.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bipoly::BiPoly;
use crate::zpoly::ZPoly;

fn term(c: &BigInt, mono: &str, first: bool) -> String {
    let neg = c.is_negative();
    let a = c.abs();
    let body = if mono.is_empty() {
        a.to_string()
    } else if a.is_one() {
        mono.to_string()
    } else {
        format!("{a}*{mono}")
    };
    match (first, neg) {
        (true, false) => body,
        (true, true) => format!("-{body}"),
        (false, false) => format!(" + {body}"),
        (false, true) => format!(" - {body}"),
    }
}

fn power(var: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

/// Highest degree first, e.g. `t^2 - t + 1`.
pub fn upoly(f: &ZPoly, var: &str) -> String {
    let mut s = String::new();
    for (i, c) in f.coeffs.iter().enumerate().rev() {
        if !c.is_zero() {
            s += &term(c, &power(var, i as u32), s.is_empty());
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// Terms by decreasing total degree, e.g. `x*y - 2`.
pub fn bipoly(h: &BiPoly<BigInt>, x: &str, y: &str) -> String {
    let mut ts: Vec<(&(u32, u32), &BigInt)> = h.terms.iter().filter(|(_, c)| !c.is_zero()).collect();
    ts.sort_by_key(|(k, _)| (std::cmp::Reverse(k.0 + k.1), std::cmp::Reverse(k.0)));
    let mut s = String::new();
    for (&(i, j), c) in ts {
        let mono = [power(x, i), power(y, j)].into_iter().filter(|m| !m.is_empty()).collect::<Vec<_>>().join("*");
        s += &term(c, &mono, s.is_empty());
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}
