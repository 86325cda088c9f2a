use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::dyadic::Dyadic;
use super::elementary::const_pi;
use super::mag::Mag;
use super::real::RealBall;
use crate::error::{Error, Result};

/// Rectangular enclosure `re x im` of a complex number.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn new(re: RealBall, im: RealBall) -> Self {
        ComplexBall { re, im }
    }

    pub fn from_real(re: RealBall) -> Self {
        let prec = re.prec();
        ComplexBall { re, im: RealBall::zero(prec) }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBall::from_real(RealBall::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        ComplexBall::from_real(RealBall::one(prec))
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Self {
        ComplexBall::from_real(RealBall::from_int(v, prec))
    }

    /// Parses `"a"`, `"a+bi"`, `"a-bi"`, `"bi"`. A real or imaginary part may
    /// carry its own `+/- r`.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidInput(format!("not a complex number: {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not an exponent sign or the leading sign
            let bytes = body.as_bytes();
            let mut split = None;
            for i in (1..bytes.len()).rev() {
                let c = bytes[i];
                let in_pm = bytes.get(i + 1) == Some(&b'/') || bytes[i - 1] == b'/';
                if (c == b'+' || c == b'-') && !in_pm && !matches!(bytes[i - 1], b'e' | b'E') {
                    split = Some(i);
                    break;
                }
            }
            let (re_s, im_s) = match split {
                Some(i) => (&body[..i], &body[i..]),
                None => ("0", body),
            };
            let im_s = match im_s {
                "" | "+" => "1",
                "-" => "-1",
                x => x,
            };
            let im_s = im_s.strip_prefix('+').unwrap_or(im_s);
            let re = RealBall::parse(re_s, prec).map_err(|_| bad())?;
            let im = RealBall::parse(im_s, prec).map_err(|_| bad())?;
            Ok(ComplexBall { re, im })
        } else {
            Ok(ComplexBall::from_real(RealBall::parse(&t, prec).map_err(|_| bad())?))
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        ComplexBall { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn mid(&self) -> Self {
        ComplexBall { re: self.re.mid_ball(), im: self.im.mid_ball() }
    }

    pub fn is_exact(&self) -> bool {
        self.re.is_exact() && self.im.is_exact()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_exact() && self.im.mid().is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexBall { re: self.re.clone(), im: -&self.im }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_point(&self, re: &Dyadic, im: &Dyadic) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains(&self, other: &ComplexBall) -> bool {
        self.re.contains_ball(&other.re) && self.im.contains_ball(&other.im)
    }

    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    /// Largest of the two radii.
    pub fn rad(&self) -> Mag {
        self.re.rad().max(self.im.rad())
    }

    pub fn add_error(&self, r: Mag) -> Self {
        ComplexBall { re: self.re.add_error(r), im: self.im.add_error(r) }
    }

    pub fn abs_sq(&self) -> RealBall {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn abs(&self) -> RealBall {
        if self.im.is_exact() && self.im.mid().is_zero() {
            return self.re.abs();
        }
        self.abs_sq().sqrt_nonneg()
    }

    /// Upper bound for the modulus over the box.
    pub fn mag_upper(&self) -> Mag {
        let a = self.re.mag_upper();
        let b = self.im.mag_upper();
        // |z| <= |re| + |im|
        a.add(&b)
    }

    pub fn mul_real(&self, x: &RealBall) -> Self {
        ComplexBall { re: &self.re * x, im: &self.im * x }
    }

    pub fn mul_int<T: Into<BigInt> + Clone>(&self, k: T) -> Self {
        ComplexBall { re: self.re.mul_int(k.clone()), im: self.im.mul_int(k) }
    }

    pub fn mul_i(&self) -> Self {
        ComplexBall { re: -&self.im, im: self.re.clone() }
    }

    pub fn mul_2exp(&self, e: i64) -> Self {
        ComplexBall { re: self.re.mul_2exp(e), im: self.im.mul_2exp(e) }
    }

    pub fn sqr(&self) -> Self {
        let re = &self.re.sqr() - &self.im.sqr();
        let im = (&self.re * &self.im).mul_2exp(1);
        ComplexBall { re, im }
    }

    pub fn div(&self, rhs: &ComplexBall) -> Result<Self> {
        if rhs.is_real() {
            return Ok(ComplexBall { re: self.re.div(&rhs.re)?, im: self.im.div(&rhs.re)? });
        }
        let den = rhs.abs_sq();
        let num = self * &rhs.conj();
        Ok(ComplexBall { re: num.re.div(&den)?, im: num.im.div(&den)? })
    }

    pub fn inv(&self) -> Result<Self> {
        ComplexBall::one(self.prec()).div(self)
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexBall::one(self.prec());
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self) -> Result<RealBall> {
        let prec = self.prec();
        if self.contains_zero() {
            return Err(Error::Domain("complex logarithm"));
        }
        if self.is_real() {
            return Ok(if self.re.is_positive() { RealBall::zero(prec) } else { const_pi(prec) });
        }
        if self.re.is_positive() {
            return Ok(self.im.div(&self.re)?.atan());
        }
        let half_pi = const_pi(prec).mul_2exp(-1);
        if self.im.is_positive() {
            return Ok(&half_pi - &self.re.div(&self.im)?.atan());
        }
        if self.im.is_negative() {
            return Ok(-&half_pi - self.re.div(&self.im)?.atan());
        }
        Err(Error::BranchCut)
    }

    /// Principal logarithm `ln|z| + i Arg z`.
    pub fn log(&self) -> Result<Self> {
        let arg = self.arg()?;
        let re = if self.is_real() {
            self.re.abs().ln()?
        } else {
            self.abs_sq().ln()?.mul_2exp(-1)
        };
        Ok(ComplexBall { re, im: arg })
    }

    pub fn display(&self, digits: usize) -> String {
        format!("({}) + ({})i", self.re.display(digits), self.im.display(digits))
    }
}

/// Principal complex logarithm.
pub fn complex_log(z: &ComplexBall) -> Result<ComplexBall> {
    z.log()
}

impl Add for &ComplexBall {
    type Output = ComplexBall;
    fn add(self, rhs: &ComplexBall) -> ComplexBall {
        ComplexBall { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &ComplexBall {
    type Output = ComplexBall;
    fn sub(self, rhs: &ComplexBall) -> ComplexBall {
        ComplexBall { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &ComplexBall {
    type Output = ComplexBall;
    fn mul(self, rhs: &ComplexBall) -> ComplexBall {
        if rhs.is_real() {
            return self.mul_real(&rhs.re);
        }
        if self.is_real() {
            return rhs.mul_real(&self.re);
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        ComplexBall { re, im }
    }
}

impl Neg for &ComplexBall {
    type Output = ComplexBall;
    fn neg(self) -> ComplexBall {
        ComplexBall { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}i", self.re, self.im)
    }
}
