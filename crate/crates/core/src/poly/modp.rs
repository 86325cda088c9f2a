//! Polynomials over a prime field `F_p` with `p < 2^32`.
//!
//! Coefficient vectors are ascending and kept trimmed (no trailing zeros);
//! the zero polynomial is the empty vector.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::IntPolynomial;

pub(crate) type Poly = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Field {
    pub p: u64,
}

fn trim(mut v: Poly) -> Poly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub(crate) fn deg(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

impl Field {
    pub fn new(p: u64) -> Self {
        debug_assert!(p < 1 << 32);
        Field { p }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero mod p");
        self.pow(a, self.p - 2)
    }

    pub fn reduce_int(&self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    pub fn reduce(&self, f: &IntPolynomial) -> Poly {
        trim(f.coeffs().iter().map(|c| self.reduce_int(c)).collect())
    }

    pub fn poly_add(&self, a: &[u64], b: &[u64]) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    pub fn poly_sub(&self, a: &[u64], b: &[u64]) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    pub fn poly_scale(&self, a: &[u64], k: u64) -> Poly {
        trim(a.iter().map(|&c| self.mul(c, k)).collect())
    }

    pub fn poly_mul(&self, a: &[u64], b: &[u64]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                v[i + j] = (v[i + j] + x * y) % self.p;
            }
        }
        trim(v)
    }

    pub fn poly_divrem(&self, a: &[u64], b: &[u64]) -> (Poly, Poly) {
        let db = deg(b).expect("division by zero polynomial mod p");
        let mut r = a.to_vec();
        if r.len() <= db {
            return (Vec::new(), trim(r));
        }
        let inv = self.inv(b[db]);
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let t = self.mul(r[k + db], inv);
            q[k] = t;
            if t == 0 {
                continue;
            }
            for (j, &bc) in b.iter().enumerate() {
                r[k + j] = self.sub(r[k + j], self.mul(t, bc));
            }
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn poly_rem(&self, a: &[u64], b: &[u64]) -> Poly {
        self.poly_divrem(a, b).1
    }

    pub fn monic(&self, a: &[u64]) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.poly_scale(a, self.inv(lc)),
        }
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> Poly {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Monic `g = gcd(a, b)` with `s a + t b = g`.
    pub fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            let s = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = self.inv(*r0.last().expect("ext_gcd of two zero polynomials"));
        (self.poly_scale(&r0, inv), self.poly_scale(&s0, inv), self.poly_scale(&t0, inv))
    }

    pub fn derivative(&self, a: &[u64]) -> Poly {
        trim(a.iter().enumerate().skip(1).map(|(i, &c)| self.mul(c, i as u64 % self.p)).collect())
    }

    pub fn powmod(&self, base: &[u64], exp: &BigUint, m: &[u64]) -> Poly {
        let mut acc = vec![1u64];
        let base = self.poly_rem(base, m);
        for i in (0..exp.bits()).rev() {
            acc = self.poly_rem(&self.poly_mul(&acc, &acc), m);
            if exp.bit(i) {
                acc = self.poly_rem(&self.poly_mul(&acc, &base), m);
            }
        }
        self.poly_rem(&acc, m)
    }

    pub fn is_squarefree(&self, f: &[u64]) -> bool {
        let d = self.derivative(f);
        !d.is_empty() && deg(&self.gcd(f, &d)) == Some(0)
    }

    /// Distinct-degree factorization of a monic squarefree `f`: pairs
    /// `(g, d)` where `g` is the product of all irreducible factors of degree `d`.
    pub fn distinct_degree(&self, f: &[u64]) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut rest = f.to_vec();
        let x = vec![0u64, 1];
        let p = BigUint::from(self.p);
        let mut h = x.clone();
        let mut d = 1;
        while deg(&rest).unwrap_or(0) >= 2 * d {
            h = self.powmod(&h, &p, &rest);
            let g = self.gcd(&self.poly_sub(&h, &x), &rest);
            if deg(&g).unwrap_or(0) > 0 {
                rest = self.poly_divrem(&rest, &g).0;
                h = self.poly_rem(&h, &rest);
                out.push((g, d));
            }
            d += 1;
        }
        if let Some(r) = deg(&rest).filter(|&r| r > 0) {
            out.push((rest, r));
        }
        out
    }

    /// Splits a monic product of irreducibles all of degree `d` (odd `p`).
    pub fn equal_degree<R: Rng>(&self, f: &[u64], d: usize, rng: &mut R) -> Vec<Poly> {
        let n = deg(f).unwrap_or(0);
        if n <= d {
            return vec![f.to_vec()];
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a = trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if deg(&a).unwrap_or(0) == 0 {
                continue;
            }
            let mut g = self.gcd(&a, f);
            if deg(&g) == Some(0) {
                let b = self.poly_sub(&self.powmod(&a, &e, f), &[1]);
                g = self.gcd(&b, f);
            }
            let dg = deg(&g).unwrap_or(0);
            if dg > 0 && dg < n {
                let h = self.poly_divrem(f, &g).0;
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&h, d, rng));
                return out;
            }
        }
    }
}
