//! Dense polynomials over F_ℓ for a prime ℓ < 2^32, tuned for factoring many
//! small polynomials. Coefficients are little-endian `u64`s in [0, ℓ).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::num_util::inv_mod_u64;

#[derive(Clone, Copy, Debug)]
pub struct Fl {
    pub l: u64,
}

type P = Vec<u64>;

fn trim(mut a: P) -> P {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

impl Fl {
    pub fn new(l: u64) -> Self {
        assert!(l < 1 << 32);
        Fl { l }
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> P {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let l = self.l as u128;
        let mut acc = vec![0u128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += (x * y) as u128;
            }
        }
        trim(acc.into_iter().map(|v| (v % l) as u64).collect())
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> P {
        let n = a.len().max(b.len());
        let l = self.l;
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + l - y) % l
                })
                .collect(),
        )
    }

    pub fn scale(&self, a: &[u64], s: u64) -> P {
        trim(a.iter().map(|&x| x * s % self.l).collect())
    }

    pub fn monic(&self, a: &[u64]) -> P {
        match a.last() {
            None => Vec::new(),
            Some(&c) => self.scale(a, inv_mod_u64(c, self.l).unwrap()),
        }
    }

    /// Remainder modulo a monic f.
    pub fn rem(&self, a: &[u64], f: &[u64]) -> P {
        let df = f.len() - 1;
        if a.len() <= df {
            return trim(a.to_vec());
        }
        let l = self.l;
        let mut r = a.to_vec();
        for i in (df..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            for j in 0..df {
                r[i - df + j] = (r[i - df + j] + (l - c) * f[j]) % l;
            }
            r[i] = 0;
        }
        r.truncate(df);
        trim(r)
    }

    fn divrem(&self, a: &[u64], f: &[u64]) -> (P, P) {
        let f = self.monic(f);
        let df = f.len() - 1;
        if a.len() <= df {
            return (Vec::new(), trim(a.to_vec()));
        }
        let l = self.l;
        let mut r = a.to_vec();
        let mut q = vec![0; r.len() - df];
        for i in (df..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            q[i - df] = c;
            for j in 0..=df {
                r[i - df + j] = (r[i - df + j] + (l - c) * f[j]) % l;
            }
        }
        r.truncate(df);
        (trim(q), trim(r))
    }

    pub fn mulmod(&self, a: &[u64], b: &[u64], f: &[u64]) -> P {
        self.rem(&self.mul(a, b), f)
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> P {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.divrem(&a, &b).1;
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn div_exact(&self, a: &[u64], b: &[u64]) -> P {
        let lc = *b.last().unwrap();
        let (q, _) = self.divrem(a, b);
        self.scale(&q, inv_mod_u64(lc, self.l).unwrap())
    }

    fn derivative(&self, a: &[u64]) -> P {
        trim(a.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % self.l) % self.l).collect())
    }

    /// x^e mod a monic f.
    fn pow_x(&self, e: u64, f: &[u64]) -> P {
        let mut acc = vec![1u64];
        for i in (0..64 - e.leading_zeros()).rev() {
            acc = self.mulmod(&acc, &acc, f);
            if (e >> i) & 1 == 1 {
                let mut s = vec![0u64];
                s.extend_from_slice(&acc);
                acc = self.rem(&s, f);
            }
        }
        self.rem(&acc, f)
    }

    fn pow(&self, a: &[u64], mut e: u64, f: &[u64]) -> P {
        let mut acc = vec![1u64];
        let mut b = self.rem(a, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &b, f);
            }
            b = self.mulmod(&b, &b, f);
            e >>= 1;
        }
        self.rem(&acc, f)
    }

    /// Rows x^{iℓ} mod f, i < deg f.
    fn frobenius_matrix(&self, f: &[u64]) -> Vec<P> {
        let d = f.len() - 1;
        let xl = self.pow_x(self.l, f);
        let mut rows = vec![vec![1u64]];
        for _ in 1..d {
            let next = self.mulmod(rows.last().unwrap(), &xl, f);
            rows.push(next);
        }
        rows
    }

    /// a(x)^ℓ = a(x^ℓ) mod f.
    fn apply_frobenius(&self, a: &[u64], rows: &[P]) -> P {
        let l = self.l as u128;
        let d = rows.len();
        let mut acc = vec![0u128; d];
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, &r) in rows[i].iter().enumerate() {
                acc[j] += (c * r) as u128;
            }
        }
        trim(acc.into_iter().map(|v| (v % l) as u64).collect())
    }

    /// Distinct monic irreducible factors of a nonconstant polynomial of degree < ℓ.
    pub fn irreducible_factors(&self, a: &[u64]) -> Vec<P> {
        let f = self.monic(&trim(a.to_vec()));
        if f.len() < 2 {
            return Vec::new();
        }
        let g = self.gcd(&f, &self.derivative(&f));
        let mut rad = self.div_exact(&f, &g);
        let mut out = Vec::new();
        if rad.len() == 2 {
            out.push(rad);
            return out;
        }
        let rows = self.frobenius_matrix(&rad);
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let mut d = 1;
        let mut rng = ChaCha8Rng::seed_from_u64(0x1a7);
        while rad.len() - 1 >= 2 * d {
            h = self.rem(&self.apply_frobenius(&h, &rows), &rad);
            let comp = self.gcd(&self.sub(&h, &x), &rad);
            if comp.len() > 1 {
                rad = self.div_exact(&rad, &comp);
                h = self.rem(&h, &rad);
                self.equal_degree(&comp, d, &rows, &mut rng, &mut out);
            }
            d += 1;
        }
        if rad.len() > 1 {
            out.push(rad);
        }
        out
    }

    fn equal_degree(&self, f: &[u64], d: usize, rows: &[P], rng: &mut ChaCha8Rng, out: &mut Vec<P>) {
        let n = f.len() - 1;
        if n == d {
            out.push(f.to_vec());
            return;
        }
        let l = self.l;
        loop {
            let a: P = trim((0..n).map(|_| rng.gen_range(0..l)).collect());
            if a.len() < 2 {
                continue;
            }
            // a^{(ℓ^d − 1)/2} = (a·a^ℓ·…·a^{ℓ^{d−1}})^{(ℓ−1)/2}
            let mut norm = self.rem(&a, f);
            let mut conj = norm.clone();
            for _ in 1..d {
                conj = self.rem(&self.apply_frobenius(&conj, rows), f);
                norm = self.mulmod(&norm, &conj, f);
            }
            let b = self.pow(&norm, (l - 1) / 2, f);
            let g = self.gcd(&self.sub(&b, &[1]), f);
            if g.len() > 1 && g.len() < f.len() {
                let other = self.div_exact(f, &g);
                self.equal_degree(&g, d, rows, rng, out);
                self.equal_degree(&other, d, rows, rng, out);
                return;
            }
        }
    }
}
