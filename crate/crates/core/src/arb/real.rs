use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dyadic::{parse_decimal, Dyadic, Round};
use super::mag::Mag;
use crate::error::{Error, Result};

/// Midpoint-radius enclosure `[mid - rad, mid + rad]` of a real number.
///
/// `prec` is the number of significant bits kept in the midpoint of
/// results; rounding errors are pushed into the radius, so every operation
/// returns a ball containing the exact image of its operand balls.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RealBall {
    mid: Dyadic,
    rad: Mag,
    prec: u32,
}

impl RealBall {
    pub fn new(mid: Dyadic, rad: Mag, prec: u32) -> Self {
        RealBall::finish(mid, rad, prec)
    }

    /// Rounds `mid` to `prec` bits and accounts for the rounding in `rad`.
    fn finish(mid: Dyadic, rad: Mag, prec: u32) -> Self {
        let prec = prec.max(2);
        let (m, inexact) = mid.round(prec, Round::Nearest);
        let rad = if inexact {
            let e = mid.mag_exp().unwrap_or(0);
            rad.add(&Mag::pow2(e - prec as i64))
        } else {
            rad
        };
        RealBall { mid: m, rad, prec }
    }

    pub fn zero(prec: u32) -> Self {
        RealBall { mid: Dyadic::zero(), rad: Mag::ZERO, prec }
    }

    pub fn one(prec: u32) -> Self {
        RealBall { mid: Dyadic::one(), rad: Mag::ZERO, prec }
    }

    pub fn exact(x: Dyadic, prec: u32) -> Self {
        RealBall::finish(x, Mag::ZERO, prec)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Self {
        RealBall::finish(Dyadic::from_int(v), Mag::ZERO, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        if let Some(d) = Dyadic::from_rational(q) {
            return RealBall::exact(d, prec);
        }
        let (lo, _) = Dyadic::round_rational(q, prec + 2, Round::Floor);
        let (hi, _) = Dyadic::round_rational(q, prec + 2, Round::Ceil);
        RealBall::from_endpoints(&lo, &hi, prec)
    }

    /// Smallest ball (up to rounding) containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        let mid = (lo + hi).mul_2exp(-1);
        let half = (hi - lo).mul_2exp(-1);
        RealBall::finish(mid, Mag::from_dyadic_upper(&half), prec)
    }

    /// Parses `"mid"` or `"mid +/- rad"` decimal literals. Non-dyadic
    /// decimals are enclosed rigorously.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("not a real number: {s:?}"));
        let (m, r) = match s.split_once("+/-").or_else(|| s.split_once('±')) {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s.trim(), None),
        };
        let mq = parse_decimal(m).ok_or_else(bad)?;
        let mut ball = RealBall::from_rational(&mq, prec);
        if let Some(r) = r {
            let rq = parse_decimal(r).ok_or_else(bad)?;
            if rq.is_negative() {
                return Err(bad());
            }
            let (rd, _) = Dyadic::round_rational(&rq, 40, Round::Ceil);
            ball.rad = ball.rad.add(&Mag::from_dyadic_upper(&rd));
        }
        Ok(ball)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        RealBall::finish(self.mid.clone(), self.rad, prec)
    }

    /// Same midpoint, radius widened by `r`.
    pub fn add_error(&self, r: Mag) -> Self {
        RealBall { mid: self.mid.clone(), rad: self.rad.add(&r), prec: self.prec }
    }

    /// Midpoint with the radius discarded.
    pub fn mid_ball(&self) -> Self {
        RealBall { mid: self.mid.clone(), rad: Mag::ZERO, prec: self.prec }
    }

    pub fn lower(&self) -> Dyadic {
        &self.mid - &self.rad.to_dyadic()
    }

    pub fn upper(&self) -> Dyadic {
        &self.mid + &self.rad.to_dyadic()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lower().to_rational() <= *q && *q <= self.upper().to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains_ball(&self, other: &RealBall) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &RealBall) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.lower().is_negative()
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &RealBall) -> bool {
        self.upper() < other.lower()
    }

    /// Certified `self > other`.
    pub fn gt(&self, other: &RealBall) -> bool {
        other.lt(self)
    }

    /// Upper bound for `|x|` over the ball.
    pub fn mag_upper(&self) -> Mag {
        Mag::from_dyadic_upper(&self.mid).add(&self.rad)
    }

    /// Lower bound for `|x|` over the ball (zero if it contains zero).
    pub fn mag_lower(&self) -> Mag {
        let m = self.mid.abs();
        let r = self.rad.to_dyadic();
        if m <= r {
            Mag::ZERO
        } else {
            Mag::from_dyadic_lower(&(&m - &r))
        }
    }

    /// Upper bound on the radius relative to the midpoint, as `log2`.
    /// `None` when the ball is exact.
    pub fn rel_accuracy_bits(&self) -> Option<i64> {
        let r = self.rad.log2_ceil()?;
        let m = self.mid.mag_exp().unwrap_or(i64::MIN / 2);
        Some(m - r)
    }

    pub fn abs(&self) -> Self {
        if self.contains_zero() {
            let hi = self.mid.abs().add_mag(&self.rad);
            RealBall::from_endpoints(&Dyadic::zero(), &hi, self.prec)
        } else if self.mid.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn sqr(&self) -> Self {
        let m = &self.mid * &self.mid;
        let am = Mag::from_dyadic_upper(&self.mid);
        let rad = am.mul(&self.rad).mul_2exp(1).add(&self.rad.mul(&self.rad));
        let out = RealBall::finish(m, rad, self.prec);
        if out.lower().is_negative() {
            // a square is non-negative
            let hi = out.upper();
            return RealBall::from_endpoints(&Dyadic::zero(), &hi, self.prec);
        }
        out
    }

    pub fn mul_int<T: Into<BigInt>>(&self, k: T) -> Self {
        let k: BigInt = k.into();
        let kd = Dyadic::from_int(k);
        let rad = self.rad.mul(&Mag::from_dyadic_upper(&kd));
        RealBall::finish(&self.mid * &kd, rad, self.prec)
    }

    pub fn mul_2exp(&self, e: i64) -> Self {
        RealBall { mid: self.mid.mul_2exp(e), rad: self.rad.mul_2exp(e), prec: self.prec }
    }

    /// Checked division; fails when `rhs` contains zero.
    pub fn div(&self, rhs: &RealBall) -> Result<Self> {
        let prec = self.prec.max(rhs.prec);
        let den_low = rhs.mag_lower();
        if den_low.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, qerr) = div_dyadic(&self.mid, &rhs.mid, prec + 4);
        let my_up = Mag::from_dyadic_upper(&rhs.mid);
        let my_low = Mag::from_dyadic_lower(&rhs.mid);
        let mx_up = Mag::from_dyadic_upper(&self.mid);
        let num = mx_up.mul(&rhs.rad).add(&my_up.mul(&self.rad));
        let rad = if num.is_zero() { Mag::ZERO } else { num.div(&my_low.mul(&den_low)) };
        Ok(RealBall::finish(q, rad.add(&qerr), prec))
    }

    pub fn inv(&self) -> Result<Self> {
        RealBall::one(self.prec).div(self)
    }

    pub fn div_int<T: Into<BigInt>>(&self, k: T) -> Result<Self> {
        self.div(&RealBall::from_int(k, self.prec))
    }

    /// Interval maximum.
    pub fn max(&self, other: &RealBall) -> Self {
        let lo = self.lower().max(other.lower());
        let hi = self.upper().max(other.upper());
        RealBall::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    /// Interval minimum.
    pub fn min(&self, other: &RealBall) -> Self {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().min(other.upper());
        RealBall::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    /// Smallest ball containing both.
    pub fn union(&self, other: &RealBall) -> Self {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        RealBall::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    /// The integer `n` with `floor(x) = n` for every `x` in the ball, if unique.
    pub fn unique_floor(&self) -> Option<BigInt> {
        let a = self.lower().floor();
        let b = self.upper().floor();
        (a == b).then_some(a)
    }

    /// The integer nearest to every point of the ball, if unique and no
    /// half-integer lies inside.
    pub fn unique_nearest_integer(&self) -> Option<BigInt> {
        let half = Dyadic::pow2(-1);
        let lo = &self.lower() + &half;
        let hi = &self.upper() + &half;
        let a = lo.floor();
        if a != hi.floor() {
            return None;
        }
        // a half-integer sitting exactly on the lower end would be a tie
        if lo.is_integer() {
            return None;
        }
        Some(a)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Decimal midpoint and radius, both exact.
    pub fn to_decimal_parts(&self) -> (String, String) {
        (self.mid.to_decimal_string(), self.rad.to_dyadic().to_decimal_string())
    }

    /// Short human-readable rendering with about `digits` significant digits.
    pub fn display(&self, digits: usize) -> String {
        format!("{} +/- {}", self.mid.to_scientific(digits, false), self.rad.to_dyadic().to_scientific(2, true))
    }
}

trait AddMag {
    fn add_mag(&self, m: &Mag) -> Dyadic;
}

impl AddMag for Dyadic {
    fn add_mag(&self, m: &Mag) -> Dyadic {
        self + &m.to_dyadic()
    }
}

/// `a / b` to about `prec` bits, with an upper bound on the error.
fn div_dyadic(a: &Dyadic, b: &Dyadic, prec: u32) -> (Dyadic, Mag) {
    if a.is_zero() {
        return (Dyadic::zero(), Mag::ZERO);
    }
    let shift = prec as i64 + b.bits() as i64 - a.bits() as i64 + 1;
    let shift = shift.max(0);
    let num = a.mantissa() << shift as usize;
    let (q, r) = num.div_rem(b.mantissa());
    let e = a.exponent() - b.exponent() - shift;
    let err = if r.is_zero() { Mag::ZERO } else { Mag::pow2(e) };
    (Dyadic::new(q, e), err)
}

impl Add for &RealBall {
    type Output = RealBall;
    fn add(self, rhs: &RealBall) -> RealBall {
        RealBall::finish(&self.mid + &rhs.mid, self.rad.add(&rhs.rad), self.prec.max(rhs.prec))
    }
}

impl Sub for &RealBall {
    type Output = RealBall;
    fn sub(self, rhs: &RealBall) -> RealBall {
        RealBall::finish(&self.mid - &rhs.mid, self.rad.add(&rhs.rad), self.prec.max(rhs.prec))
    }
}

impl Mul for &RealBall {
    type Output = RealBall;
    fn mul(self, rhs: &RealBall) -> RealBall {
        let ma = Mag::from_dyadic_upper(&self.mid);
        let mb = Mag::from_dyadic_upper(&rhs.mid);
        let rad = ma.mul(&rhs.rad).add(&mb.mul(&self.rad)).add(&self.rad.mul(&rhs.rad));
        RealBall::finish(&self.mid * &rhs.mid, rad, self.prec.max(rhs.prec))
    }
}

impl Neg for &RealBall {
    type Output = RealBall;
    fn neg(self) -> RealBall {
        RealBall { mid: -&self.mid, rad: self.rad, prec: self.prec }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RealBall {
            type Output = RealBall;
            fn $m(self, rhs: RealBall) -> RealBall {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RealBall> for RealBall {
            type Output = RealBall;
            fn $m(self, rhs: &RealBall) -> RealBall {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RealBall {
    type Output = RealBall;
    fn neg(self) -> RealBall {
        -&self
    }
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {:?}]", self.mid, self.rad)
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(17))
    }
}

/// Serialized form: exact decimal midpoint and radius.
#[derive(Serialize, Deserialize)]
struct RealBallRepr {
    mid: String,
    rad: String,
    prec: u32,
}

impl Serialize for RealBall {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (mid, rad) = self.to_decimal_parts();
        RealBallRepr { mid, rad, prec: self.prec }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealBall {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = RealBallRepr::deserialize(d)?;
        let mid = parse_decimal(&r.mid)
            .and_then(|q| Dyadic::from_rational(&q))
            .ok_or_else(|| D::Error::custom("midpoint is not a dyadic decimal"))?;
        let rad = parse_decimal(&r.rad)
            .and_then(|q| Dyadic::from_rational(&q))
            .filter(|d| !d.is_negative())
            .ok_or_else(|| D::Error::custom("radius is not a non-negative dyadic decimal"))?;
        let rad_mag = Mag::from_dyadic_upper(&rad);
        if rad_mag.to_dyadic() != rad {
            return Err(D::Error::custom("radius has too many significant bits"));
        }
        Ok(RealBall { mid, rad: rad_mag, prec: r.prec })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_enclosure() {
        let b = RealBall::from_rational(&q(1, 3), 64);
        assert!(b.contains_rational(&q(1, 3)));
        assert!(b.rad().to_f64() < 1e-19);
        let e = RealBall::from_rational(&q(3, 8), 64);
        assert!(e.is_exact());
    }

    #[test]
    fn division_by_ball_with_zero_fails() {
        let a = RealBall::one(64);
        let z = RealBall::parse("0 +/- 0.1", 64).unwrap();
        assert_eq!(a.div(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn nearest_integer_needs_clear_side() {
        let b = RealBall::parse("2.5 +/- 0.001", 64).unwrap();
        assert_eq!(b.unique_nearest_integer(), None);
        let c = RealBall::parse("2.4 +/- 0.001", 64).unwrap();
        assert_eq!(c.unique_nearest_integer(), Some(BigInt::from(2)));
        let exact_half = RealBall::parse("-0.5", 64).unwrap();
        assert_eq!(exact_half.unique_nearest_integer(), None);
        let neg = RealBall::parse("-2.6 +/- 0.001", 64).unwrap();
        assert_eq!(neg.unique_nearest_integer(), Some(BigInt::from(-3)));
    }

    #[test]
    fn serde_round_trip_is_bit_exact() {
        let b = RealBall::from_rational(&q(-22, 7), 128).mul_2exp(-3);
        let s = serde_json::to_string(&b).unwrap();
        let back: RealBall = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    fn rat_in(lo: i64, hi: i64) -> impl Strategy<Value = BigRational> {
        (lo..hi, 1i64..1000).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn inclusion_of_arithmetic(a in rat_in(-5000, 5000), b in rat_in(-5000, 5000),
                                   ra in 0u32..20, rb in 0u32..20, prec in 8u32..80) {
            let wa = RealBall::from_rational(&a, prec).add_error(Mag::pow2(-(ra as i64)));
            let wb = RealBall::from_rational(&b, prec).add_error(Mag::pow2(-(rb as i64)));
            // sample points inside the balls: endpoints and midpoints
            for x in [wa.lower(), wa.mid().clone(), wa.upper()] {
                for y in [wb.lower(), wb.mid().clone(), wb.upper()] {
                    prop_assert!((&wa + &wb).contains(&(&x + &y)));
                    prop_assert!((&wa - &wb).contains(&(&x - &y)));
                    prop_assert!((&wa * &wb).contains(&(&x * &y)));
                    if let Ok(qb) = wa.div(&wb) {
                        prop_assert!(qb.contains_rational(&(x.to_rational() / y.to_rational())));
                    }
                    prop_assert!(wa.sqr().contains(&(&x * &x)));
                }
            }
        }
    }
}
