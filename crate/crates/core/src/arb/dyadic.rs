//! Exact dyadic rationals `mant * 2^exp`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact number of the form `mant * 2^exp`.
///
/// Kept normalized: the mantissa is odd, or zero with `exp == 0`. Two equal
/// values therefore always have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// Rounding direction used when a dyadic is shortened.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
    Nearest,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(m) * sign, e))
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Smallest `e` with `|x| < 2^e`; `None` for zero.
    pub fn mag_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 + self.exp)
        }
    }

    pub fn mul_2exp(&self, e: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + e }
    }

    /// `floor(self * 2^shift)` as an integer.
    pub fn floor_scaled(&self, shift: i64) -> BigInt {
        let e = self.exp + shift;
        if e >= 0 {
            &self.mant << (e as usize)
        } else {
            // arithmetic shift right floors toward -inf for BigInt
            floor_shr(&self.mant, (-e) as u64)
        }
    }

    pub fn floor(&self) -> BigInt {
        self.floor_scaled(0)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Whether the value is an integer.
    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.is_zero()
    }

    /// Shortens the mantissa to at most `prec` bits using `mode`.
    /// Returns the rounded value and whether it differs from `self`.
    pub fn round(&self, prec: u32, mode: Round) -> (Dyadic, bool) {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return (self.clone(), false);
        }
        let shift = bits - prec as u64;
        let m = match mode {
            Round::Floor => floor_shr(&self.mant, shift),
            Round::Ceil => -floor_shr(&-&self.mant, shift),
            Round::Nearest => {
                let half = BigInt::one() << (shift - 1) as usize;
                floor_shr(&(&self.mant + half), shift)
            }
        };
        (Dyadic::new(m, self.exp + shift as i64), true)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as usize))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    /// Exact conversion if the denominator of `q` is a power of two.
    pub fn from_rational(q: &BigRational) -> Option<Self> {
        let den = q.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz as usize).is_one() {
            Some(Dyadic::new(q.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    /// Rounds the rational `q` to a dyadic with `prec` significant bits.
    pub fn round_rational(q: &BigRational, prec: u32, mode: Round) -> (Dyadic, bool) {
        if let Some(d) = Dyadic::from_rational(q) {
            return d.round(prec, mode);
        }
        let num = q.numer();
        let den = q.denom();
        // scale so that the integer quotient carries prec + 2 bits
        let shift = prec as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let scaled = if shift >= 0 {
            num << (shift as usize)
        } else {
            floor_shr(num, (-shift) as u64)
        };
        let (quot, rem) = scaled.div_mod_floor(den);
        // the value lies strictly inside (quot, quot + 1) * 2^-shift unless exact
        let inexact_div = !rem.is_zero() || shift < 0;
        let base = Dyadic::new(quot.clone(), -shift);
        if !inexact_div {
            return base.round(prec, mode);
        }
        let (lo, _) = base.round(prec, Round::Floor);
        let (hi, _) = Dyadic::new(quot + 1, -shift).round(prec, Round::Ceil);
        let out = match mode {
            Round::Floor => lo,
            Round::Ceil => hi,
            Round::Nearest => {
                let q_lo = q - lo.to_rational();
                let q_hi = hi.to_rational() - q;
                if q_lo <= q_hi {
                    lo
                } else {
                    hi
                }
            }
        };
        (out, true)
    }

    /// Approximate conversion, for display and seeding numerical iterations only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 60).max(0);
        let m = floor_shr(&self.mant, drop as u64).to_f64().unwrap_or(0.0);
        let e = self.exp + drop;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// Exact decimal expansion. Every dyadic has a terminating one.
    pub fn to_decimal_string(&self) -> String {
        if self.exp >= 0 {
            return (&self.mant << (self.exp as usize)).to_string();
        }
        let k = (-self.exp) as usize;
        let digits = (self.mant.abs() * num_traits::pow(BigInt::from(5u8), k)).to_string();
        let neg = self.is_negative();
        let (int_part, frac_part) = if digits.len() > k {
            let (a, b) = digits.split_at(digits.len() - k);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat(k - digits.len()), digits))
        };
        let frac_part = frac_part.trim_end_matches('0');
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&int_part);
        if !frac_part.is_empty() {
            s.push('.');
            s.push_str(frac_part);
        }
        s
    }
}

impl Dyadic {
    /// `d.ddd…e±k` with `digits` significant digits, rounded to nearest, or
    /// away from zero when `up` is set.
    pub fn to_scientific(&self, digits: usize, up: bool) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return format!("{:.*e}", digits - 1, 0.0);
        }
        let x = self.to_rational().abs();
        let ten = BigInt::from(10u8);
        let scale = |k: i64| {
            let p = BigRational::from_integer(num_traits::pow(ten.clone(), k.unsigned_abs() as usize));
            if k >= 0 { p } else { p.recip() }
        };
        let log10 = (self.bits() as f64 + self.exp as f64) * std::f64::consts::LOG10_2;
        let mut e10 = log10.floor() as i64;
        let lo = num_traits::pow(ten.clone(), digits - 1);
        let hi = &lo * &ten;
        let m = loop {
            let y = &x * scale(digits as i64 - 1 - e10);
            let m = if up { y.ceil() } else { (&y + BigRational::new(1.into(), 2.into())).floor() }.to_integer();
            if m < lo {
                e10 -= 1;
            } else if m >= hi {
                if m == hi && y < BigRational::from_integer(hi.clone()) {
                    e10 += 1;
                    break lo.clone();
                }
                e10 += 1;
            } else {
                break m;
            }
        };
        let m = m.to_string();
        let (a, b) = m.split_at(1);
        let sign = if self.is_negative() { "-" } else { "" };
        if b.is_empty() { format!("{sign}{a}e{e10}") } else { format!("{sign}{a}.{b}e{e10}") }
    }
}

/// Parses a plain decimal literal (`-12.5e-3` style) into an exact rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (body, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match body.as_bytes().first()? {
        b'-' => (true, &body[1..]),
        b'+' => (false, &body[1..]),
        _ => (false, body),
    };
    let (int_s, frac_s) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    if int_s.is_empty() && frac_s.is_empty() {
        return None;
    }
    if !int_s.bytes().chain(frac_s.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_s}{frac_s}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp10 - frac_s.len() as i64;
    let ten = BigInt::from(10u8);
    let q = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(q)
}

fn floor_shr(x: &BigInt, shift: u64) -> BigInt {
    // BigInt's >> rounds toward negative infinity
    x >> shift as usize
}

fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
    let e = a.exp.min(b.exp);
    let ma = &a.mant << (a.exp - e) as usize;
    let mb = &b.mant << (b.exp - e) as usize;
    (ma, mb, e)
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = align(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = align(self, rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd, already normalized
        Dyadic { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        // same nonzero sign: compare magnitudes cheaply first
        let (ma, mb) = (self.mag_exp().unwrap(), other.mag_exp().unwrap());
        if ma != mb {
            let ord = ma.cmp(&mb);
            return if sa > 0 { ord } else { ord.reverse() };
        }
        let (a, b, _) = align(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Serialized as its exact decimal expansion.
impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> serde::Deserialize<'de> for Dyadic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_decimal(&s)
            .and_then(|q| Dyadic::from_rational(&q))
            .ok_or_else(|| serde::de::Error::custom("not a dyadic decimal"))
    }
}
