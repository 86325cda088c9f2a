//! Dense polynomials with arbitrary-precision integer coefficients.
//!
//! Besides ring arithmetic this module provides normalization, gcd,
//! squarefree decomposition, factorization over the rationals
//! ([`factor`]), resultants ([`resultant`]) and certified root isolation
//! ([`real_roots`], [`complex_roots`]).

mod complex_roots;
mod factor;
mod modp;
mod real_roots;
mod resultant;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arb::{ComplexBall, RealBall};
use crate::error::{Error, Result};

pub use complex_roots::complex_roots;
pub use factor::factor;
pub use real_roots::{count_real_roots, real_roots};
pub use resultant::{resultant, resultant_univariate, BivariatePolynomial, Variable};

/// A root of a polynomial together with a region that isolates it.
///
/// `region` is a [`RationalInterval`](crate::arb::RationalInterval) for real
/// roots and a [`ComplexBall`] for complex ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot<R> {
    pub region: R,
    pub multiplicity: u32,
    pub parent: IntPolynomial,
}

/// `c_0 + c_1 x + ... + c_n x^n`, stored in ascending order with `c_n != 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPolynomial::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        IntPolynomial::monomial(BigInt::one(), 1)
    }

    /// `c x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        IntPolynomial::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Non-negative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Largest absolute value of a coefficient.
    pub fn max_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// The associate of `self` with content 1 and positive leading coefficient.
    pub fn primitive_normalize(&self) -> Result<Self> {
        let lc = self.leading().ok_or(Error::ZeroPolynomial)?;
        let mut g = self.content();
        if lc.is_negative() {
            g = -g;
        }
        Ok(self.div_scalar_exact(&g))
    }

    /// Primitive part, or zero for the zero polynomial.
    pub(crate) fn primitive(&self) -> Self {
        self.primitive_normalize().unwrap_or_default()
    }

    pub fn is_primitive_normalized(&self) -> bool {
        self.leading().is_some_and(Signed::is_positive) && self.content().is_one()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return IntPolynomial::zero();
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Divides every coefficient by `k`, which must divide all of them.
    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        IntPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % k).is_zero());
                    c / k
                })
                .collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        IntPolynomial::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = IntPolynomial::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Sign of `self(x)` computed without fractions: the value of
    /// `den^n * self(num/den)` has the same sign because `den > 0`.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let Some(n) = self.degree() else { return 0 };
        let (a, b) = (x.numer(), x.denom());
        let mut acc = self.coeffs[n].clone();
        let mut bpow = BigInt::one();
        for i in (0..n).rev() {
            bpow *= b;
            acc = acc * a + &self.coeffs[i] * &bpow;
        }
        sign(&acc)
    }

    pub fn eval_ball(&self, x: &RealBall) -> RealBall {
        let prec = x.prec();
        self.coeffs.iter().rev().fold(RealBall::zero(prec), |acc, c| {
            &(&acc * x) + &RealBall::from_int(c.clone(), prec)
        })
    }

    pub fn eval_complex(&self, z: &ComplexBall) -> ComplexBall {
        let prec = z.prec();
        self.coeffs.iter().rev().fold(ComplexBall::zero(prec), |acc, c| {
            &(&acc * z) + &ComplexBall::from_int(c.clone(), prec)
        })
    }

    /// `x^n f(1/x)`.
    pub fn reverse(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPolynomial::new(v)
    }

    /// `f(-x)`.
    pub fn negate_var(&self) -> Self {
        IntPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// `f(x^k)`.
    pub fn inflate(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut v = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        IntPolynomial { coeffs: v }
    }

    /// `x^k f(x)`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs: v }
    }

    /// Largest `k` with `x^k | f`, together with `f / x^k`.
    pub fn split_x_power(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, IntPolynomial { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Pseudo-division: returns `(q, r)` with `lc(d)^(deg f - deg d + 1) f = q d + r`.
    pub fn pseudo_divrem(&self, d: &IntPolynomial) -> (Self, Self) {
        let dd = d.degree().expect("pseudo-division by zero polynomial");
        let Some(df) = self.degree() else {
            return (IntPolynomial::zero(), IntPolynomial::zero());
        };
        if df < dd {
            return (IntPolynomial::zero(), self.clone());
        }
        let lc = &d.coeffs[dd];
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); df - dd + 1];
        for k in (0..=df - dd).rev() {
            let t = r[k + dd].clone();
            for c in q.iter_mut() {
                *c *= lc;
            }
            q[k] += &t;
            for c in r.iter_mut() {
                *c *= lc;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &t * dc;
            }
        }
        r.truncate(dd);
        (IntPolynomial::new(q), IntPolynomial::new(r))
    }

    pub fn pseudo_rem(&self, d: &IntPolynomial) -> Self {
        self.pseudo_divrem(d).1
    }

    /// `self / d` if the quotient exists in `Z[x]`.
    pub fn div_exact(&self, d: &IntPolynomial) -> Option<Self> {
        let dd = d.degree().expect("division by zero polynomial");
        let Some(df) = self.degree() else { return Some(IntPolynomial::zero()) };
        if df < dd {
            return None;
        }
        let lc = &d.coeffs[dd];
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); df - dd + 1];
        for k in (0..=df - dd).rev() {
            let (t, rem) = r[k + dd].div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &t * dc;
            }
            q[k] = t;
        }
        r.iter().all(Zero::is_zero).then(|| IntPolynomial::new(q))
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, d: &IntPolynomial) -> Self {
        assert!(d.is_monic());
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let t = r.pop().unwrap();
            if t.is_zero() {
                continue;
            }
            let k = r.len() - dd;
            for (j, dc) in d.coeffs[..dd].iter().enumerate() {
                r[k + j] -= &t * dc;
            }
        }
        IntPolynomial::new(r)
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    /// Content is ignored; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPolynomial) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// `f / gcd(f, f')`, normalized: same distinct roots, all simple.
    pub fn squarefree_part(&self) -> Result<Self> {
        let f = self.primitive_normalize()?;
        let g = f.gcd(&f.derivative());
        if g.is_constant() {
            return Ok(f);
        }
        Ok(f.div_exact(&g).expect("gcd divides f").primitive())
    }

    /// Yun's decomposition of the primitive part: pairs `(g_i, i)` with
    /// squarefree, pairwise coprime `g_i` of positive degree such that
    /// `prod g_i^i = primitive_normalize(f)`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, u32)>> {
        let f = self.primitive_normalize()?;
        let mut out = Vec::new();
        if f.is_constant() {
            return Ok(out);
        }
        let df = f.derivative();
        let c = f.gcd(&df);
        let mut w = f.div_exact(&c).expect("gcd divides f");
        let mut y = df.div_exact(&c).expect("gcd divides f'");
        let mut i = 1u32;
        loop {
            let z = &y - &w.derivative();
            if w.is_constant() {
                break;
            }
            let g = w.gcd(&z);
            if !g.is_constant() {
                out.push((g.clone(), i));
            }
            w = w.div_exact(&g).expect("gcd divides w");
            y = z.div_exact(&g).expect("gcd divides z");
            i += 1;
        }
        Ok(out)
    }
}

pub(crate) fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn add_coeffs(a: &[BigInt], b: &[BigInt], negate_b: bool) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            match b.get(i) {
                Some(y) if negate_b => x - y,
                Some(y) => x + y,
                None => x,
            }
        })
        .collect()
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::new(add_coeffs(&self.coeffs, &rhs.coeffs, false))
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::new(add_coeffs(&self.coeffs, &rhs.coeffs, true))
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPolynomial::new(v)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Ascending, space-separated decimal coefficients; `"0"` for zero.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split_whitespace()
            .map(|t| {
                // BigInt would also accept '_' separators and a leading '+'
                let digits = t.strip_prefix('-').unwrap_or(t);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::PolyParse(format!("bad coefficient {t:?}")));
                }
                t.parse::<BigInt>().map_err(|_| Error::PolyParse(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::PolyParse("empty coefficient list".into()));
        }
        Ok(IntPolynomial::new(coeffs))
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn normalization() {
        assert_eq!(p(&[-4, 2]).primitive_normalize().unwrap(), p(&[-2, 1]));
        assert_eq!(p(&[6, 0, -3]).primitive_normalize().unwrap(), p(&[-2, 0, 1]));
        assert_eq!(p(&[-1, -1, 1]).primitive_normalize().unwrap(), p(&[-1, -1, 1]));
        assert_eq!(IntPolynomial::zero().primitive_normalize(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn squarefree() {
        assert_eq!(p(&[1, -2, 1]).squarefree_part().unwrap(), p(&[-1, 1]));
        assert_eq!(p(&[0, 0, 0, 20, 0, -4]).squarefree_part().unwrap(), p(&[0, -5, 0, 1]));
        assert_eq!(p(&[1, 0, 1]).squarefree_part().unwrap(), p(&[1, 0, 1]));
    }

    #[test]
    fn yun_reassembles() {
        // (x-1)(x+2)^2 x^3 (x^2+1)^3, scaled
        let f = &(&(&p(&[-1, 1]) * &p(&[2, 1]).pow(2)) * &p(&[0, 1]).pow(3)) * &p(&[1, 0, 1]).pow(3);
        let f6 = f.scale(&BigInt::from(-6));
        let dec = f6.squarefree_decomposition().unwrap();
        let mut prod = IntPolynomial::one();
        for (g, i) in &dec {
            prod = &prod * &g.pow(*i);
        }
        assert_eq!(prod, f);
        let mults: Vec<u32> = dec.iter().map(|(_, i)| *i).collect();
        assert_eq!(mults, vec![1, 2, 3]);
    }

    #[test]
    fn division() {
        let a = p(&[-1, 0, 0, 0, 1]);
        let b = p(&[1, 0, 1]);
        assert_eq!(a.div_exact(&b), Some(p(&[-1, 0, 1])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
        let (q, r) = p(&[1, 2, 3]).pseudo_divrem(&p(&[1, 2]));
        // 4 (3x^2 + 2x + 1) = (6x + 1)(2x + 1) + 3
        assert_eq!(q, p(&[1, 6]));
        assert_eq!(r, p(&[3]));
        assert_eq!(p(&[5, 0, 0, 1]).rem_monic(&p(&[1, 0, 1])), p(&[5, -1]));
    }

    #[test]
    fn gcd_of_products() {
        let a = &p(&[-1, 1]) * &p(&[1, 1, 1]);
        let b = &p(&[-1, 1]) * &p(&[3, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(a.gcd(&IntPolynomial::zero()), a.primitive());
    }

    #[test]
    fn sign_at_rationals() {
        let f = p(&[-5, 0, 1]);
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(f.sign_at(&q(9, 4)), 1);
        assert_eq!(f.sign_at(&q(-11, 5)), -1);
        assert_eq!(p(&[-1, 3]).sign_at(&q(1, 3)), 0);
    }

    #[test]
    fn text_round_trip() {
        for s in ["3 0 4 0 3", "-5 0 1", "0", "12345678901234567890123 -1"] {
            let f: IntPolynomial = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("1 x".parse::<IntPolynomial>().is_err());
        assert!("".parse::<IntPolynomial>().is_err());
        assert!("+1 2".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn transforms() {
        let f = p(&[1, 2, 3]);
        assert_eq!(f.reverse(), p(&[3, 2, 1]));
        assert_eq!(f.negate_var(), p(&[1, -2, 3]));
        assert_eq!(f.inflate(2), p(&[1, 0, 2, 0, 3]));
        assert_eq!(f.shift_up(1).split_x_power(), (1, f.clone()));
    }
}
