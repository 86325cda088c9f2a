//! Certified π, square root, logarithm, arctangent and exponential.
//!
//! Point evaluations work in fixed point: an integer `v` standing for
//! `v * 2^-w` together with an error count `err` in units of `2^-w`. Every
//! truncation adds at most one unit; the per-routine comments state the
//! resulting bound. Ball arguments are handled through monotonicity by
//! evaluating both endpoints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::Mutex;

use super::dyadic::Dyadic;
use super::mag::Mag;
use super::real::RealBall;
use crate::error::{Error, Result};

/// Fixed-point approximation `val * 2^-w` with absolute error `err * 2^-w`.
#[derive(Clone)]
struct Fixed {
    val: BigInt,
    err: u64,
    w: u32,
}

impl Fixed {
    /// The same value on a coarser grid: the floor shift loses under one
    /// unit and the old error rounds up to at most one more.
    fn truncate(&self, w: u32) -> Fixed {
        debug_assert!(w <= self.w);
        let shift = self.w - w;
        Fixed { val: &self.val >> shift as usize, err: (self.err >> shift.min(63)) + 2, w }
    }

    fn into_ball(self, prec: u32) -> RealBall {
        let mid = Dyadic::new(self.val, -(self.w as i64));
        let rad = Mag::from_u64(self.err).mul_2exp(-(self.w as i64));
        RealBall::new(mid, rad, prec)
    }
}

fn guard_bits(prec: u32) -> u32 {
    prec + 32 + (32 - prec.leading_zeros())
}

/// `floor(x * 2^w)` together with the exactness flag.
fn to_fixed(x: &Dyadic, w: u32) -> (BigInt, bool) {
    let v = x.floor_scaled(w as i64);
    let exact = x.exponent() + w as i64 >= 0 || x.is_zero();
    (v, exact)
}

/// `arctan(1/k) * 2^w` for an integer `k >= 2`.
fn atan_recip_fixed(k: u64, w: u32) -> Fixed {
    let k2 = BigInt::from(k) * BigInt::from(k);
    // p_j = floor(2^w / k^(2j+1)), each step loses < 1 unit, and the
    // inherited error is divided by k^2 >= 4, so err(p_j) <= 4/3.
    let mut p = (BigInt::one() << w as usize) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        let term = &p / BigInt::from(2 * j + 1);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        p /= &k2;
        j += 1;
    }
    // per term: 4/3 + 1; the alternating tail after p hits zero is < 2 units
    Fixed { val: sum, err: 3 * j + 3, w }
}

/// Machin: π = 16 arctan(1/5) − 4 arctan(1/239).
fn pi_fixed(w: u32) -> Fixed {
    let a = atan_recip_fixed(5, w);
    let b = atan_recip_fixed(239, w);
    Fixed { val: a.val * 16 - b.val * 4, err: 16 * a.err + 4 * b.err, w }
}

/// Størmer: π = 48 arctan(1/18) + 32 arctan(1/57) − 20 arctan(1/239).
fn pi_fixed_stormer(w: u32) -> Fixed {
    let a = atan_recip_fixed(18, w);
    let b = atan_recip_fixed(57, w);
    let c = atan_recip_fixed(239, w);
    Fixed {
        val: a.val * 48 + b.val * 32 - c.val * 20,
        err: 48 * a.err + 32 * b.err + 20 * c.err,
        w,
    }
}

/// Keeps the most precise value computed so far and serves coarser
/// requests by truncation.
fn cached(cache: &Mutex<Option<Fixed>>, w: u32, compute: fn(u32) -> Fixed) -> Fixed {
    let mut slot = cache.lock().unwrap_or_else(|e| e.into_inner());
    if slot.as_ref().is_none_or(|c| c.w < w) {
        *slot = Some(compute(w.max(512)));
    }
    slot.as_ref().unwrap().truncate(w)
}

static PI_CACHE: Mutex<Option<Fixed>> = Mutex::new(None);
static LN2_CACHE: Mutex<Option<Fixed>> = Mutex::new(None);

fn pi_cached(w: u32) -> Fixed {
    cached(&PI_CACHE, w, pi_fixed)
}

fn ln2_cached(w: u32) -> Fixed {
    cached(&LN2_CACHE, w, ln2_fixed)
}

/// Enclosure of π with radius at most `2^(1-prec) * π`.
pub fn const_pi(prec: u32) -> RealBall {
    let prec = prec.max(2);
    pi_cached(guard_bits(prec)).into_ball(prec)
}

/// π from a second, independent Machin-type formula (self-test).
pub fn const_pi_alt(prec: u32) -> RealBall {
    let prec = prec.max(2);
    pi_fixed_stormer(guard_bits(prec)).into_ball(prec)
}

/// `2 atanh(U * 2^-w)` for `|U| * 2^-w <= 1/3`, given `err_u` units on U.
fn two_atanh_fixed(u: BigInt, err_u: u64, w: u32) -> Fixed {
    if u.is_negative() {
        // odd function; shifting negative values would floor toward -1
        let f = two_atanh_fixed(-u, err_u, w);
        return Fixed { val: -f.val, ..f };
    }
    let u2 = (&u * &u) >> w as usize;
    // |u| <= 1/3: err(u2) <= 2/3 err_u + 1, err(p_j) stays below
    // (err_u + 2) / (1 - 1/9); every term adds one more unit.
    let mut p = u;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        sum += &p / BigInt::from(2 * j + 1);
        p = (&p * &u2) >> w as usize;
        j += 1;
        debug_assert!(j < 4 * w as u64 + 16);
    }
    let per_term = (err_u + 2) * 9 / 8 + 2;
    // tail after the cutoff is below 2 units; the sum is doubled
    Fixed { val: sum << 1, err: 2 * (per_term * (j + 1) + 2), w }
}

fn ln2_fixed(w: u32) -> Fixed {
    let u = (BigInt::one() << w as usize) / BigInt::from(3);
    two_atanh_fixed(u, 1, w)
}

/// `ln x` for a positive dyadic `x`.
fn ln_point(x: &Dyadic, prec: u32) -> Result<RealBall> {
    if !x.is_positive() {
        return Err(Error::Domain("ln"));
    }
    if *x == Dyadic::one() {
        return Ok(RealBall::zero(prec));
    }
    // x = m 2^e with m in [0.75, 1.5)
    let mut e = x.mag_exp().unwrap() - 1;
    let mut m = x.mul_2exp(-e);
    if m >= Dyadic::new(BigInt::from(3), -1) {
        m = m.mul_2exp(-1);
        e += 1;
    }
    let w = guard_bits(prec) + (64 - e.unsigned_abs().leading_zeros());
    // u = (m - 1) / (m + 1), |u| <= 1/5
    let num = &m - &Dyadic::one();
    let den = &m + &Dyadic::one();
    let shift = w as i64 + num.exponent() - den.exponent();
    let scaled = if shift >= 0 {
        num.mantissa() << shift as usize
    } else {
        num.mantissa() >> (-shift) as usize
    };
    let u = scaled.div_floor(den.mantissa());
    let lnm = two_atanh_fixed(u, 2, w);
    if e == 0 {
        return Ok(lnm.into_ball(prec));
    }
    let l2 = ln2_cached(w);
    let ek = BigInt::from(e);
    Ok(Fixed {
        val: lnm.val + l2.val * &ek,
        err: lnm.err + l2.err * e.unsigned_abs(),
        w,
    }
    .into_ball(prec))
}

/// `arctan x` for a dyadic `x`.
fn atan_point(x: &Dyadic, prec: u32) -> RealBall {
    if x.is_zero() {
        return RealBall::zero(prec);
    }
    const HALVINGS: u32 = 8;
    let w = guard_bits(prec) + HALVINGS;
    let neg = x.is_negative();
    let ax = x.abs();
    let one = BigInt::one() << w as usize;
    let big = ax > Dyadic::one();
    // y in [0, 1] in fixed point, err <= 1
    let (mut y, mut err_y) = if big {
        // 1/|x|
        let (n, d) = (Dyadic::pow2(w as i64), ax.clone());
        let shift = n.exponent() - d.exponent();
        let num = if shift >= 0 {
            n.mantissa() << shift as usize
        } else {
            n.mantissa() >> (-shift) as usize
        };
        (num / d.mantissa(), 1u64)
    } else {
        let (v, exact) = to_fixed(&ax, w);
        (v, if exact { 0 } else { 1 })
    };
    // y <- y / (1 + sqrt(1 + y^2)): arctan y halves each time. The map has
    // derivative <= 1/2 on [0, 1], and the three truncations (square, root,
    // quotient) add at most 3 units.
    for _ in 0..HALVINGS {
        let y2 = (&y * &y) >> w as usize;
        let s = ((&one + &y2) << w as usize).sqrt();
        let den = &one + &s;
        y = (&y << w as usize) / den;
        err_y = err_y / 2 + 4;
    }
    let y2 = (&y * &y) >> w as usize;
    let mut p = y;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        let term = &p / BigInt::from(2 * j + 1);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        p = (&p * &y2) >> w as usize;
        j += 1;
    }
    // y <= tan(pi/1024): powers carry at most err_y + 2 units each
    let series_err = (err_y + 3) * (j + 1) + 2;
    let mut val = sum << HALVINGS as usize;
    let mut err = series_err << HALVINGS;
    if big {
        let pi = pi_cached(w);
        val = (pi.val >> 1usize) - val;
        err += pi.err / 2 + 1;
    }
    if neg {
        val = -val;
    }
    Fixed { val, err, w }.into_ball(prec)
}

/// `exp x` for a dyadic `x`.
fn exp_point(x: &Dyadic, prec: u32) -> Result<RealBall> {
    if x.is_zero() {
        return Ok(RealBall::one(prec));
    }
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > 1e15 {
        return Err(Error::Domain("exp"));
    }
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let w = guard_bits(prec) + kbits;
    let l2 = ln2_cached(w);
    let (xv, exact) = to_fixed(x, w);
    // r = x - k ln 2, |r| < 0.35 + tiny
    let r = xv - &l2.val * BigInt::from(k);
    let err_r = if exact { 0 } else { 1 } + l2.err * k.unsigned_abs();
    let one = BigInt::one() << w as usize;
    let mut term = one.clone();
    let mut sum = one;
    let mut j: u64 = 1;
    while !term.is_zero() {
        term = (&term * &r) >> w as usize;
        term /= BigInt::from(j);
        sum += &term;
        j += 1;
        debug_assert!(j < 4 * w as u64 + 16);
    }
    // each term: inherited error shrinks (|r|/j < 1/2) plus 2 truncations;
    // the propagated error of r is amplified by e^|r| < 1.5
    let err = 3 * (j + 2) + 2 * err_r + 2;
    let ball = Fixed { val: sum, err, w }.into_ball(prec + 8);
    Ok(ball.mul_2exp(k).with_prec(prec))
}

/// `sqrt x` for a non-negative dyadic `x`.
fn sqrt_point(x: &Dyadic, prec: u32) -> RealBall {
    if x.is_zero() {
        return RealBall::zero(prec);
    }
    let half_mag = x.mag_exp().unwrap() / 2;
    let w = (prec as i64 + 8 - half_mag).max(0) as u32;
    let (n, _) = to_fixed(x, 2 * w);
    let s = n.sqrt();
    // sqrt(x) 2^w lies in [s, s + 2)
    Fixed { val: s + BigInt::one(), err: 1, w }.into_ball(prec)
}

/// Applies an increasing point function to the ball endpoints.
fn monotone<F>(x: &RealBall, prec: u32, f: F) -> Result<RealBall>
where
    F: Fn(&Dyadic, u32) -> Result<RealBall>,
{
    if x.is_exact() {
        return f(x.mid(), prec);
    }
    let lo = f(&x.lower(), prec)?;
    let hi = f(&x.upper(), prec)?;
    Ok(RealBall::from_endpoints(&lo.lower(), &hi.upper(), prec))
}

/// Which elementary function to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    Ln,
    Arctan,
    Exp,
}

/// Evaluates `f(x)` as a ball containing the exact image of `x`.
pub fn eval_elementary(f: Elementary, x: &RealBall, prec: u32) -> Result<RealBall> {
    if prec > super::max_precision() {
        return Err(Error::PrecisionExhausted(format!(
            "{prec} bits requested, maximum is {}",
            super::max_precision()
        )));
    }
    match f {
        Elementary::Ln => x.ln_prec(prec),
        Elementary::Arctan => Ok(x.atan_prec(prec)),
        Elementary::Exp => x.exp_prec(prec),
    }
}

impl RealBall {
    pub fn ln(&self) -> Result<RealBall> {
        self.ln_prec(self.prec())
    }

    pub fn ln_prec(&self, prec: u32) -> Result<RealBall> {
        if !self.is_positive() {
            return Err(Error::Domain("ln"));
        }
        if self.is_exact() {
            return ln_point(self.mid(), prec);
        }
        // |ln' | <= 1 / lower on the ball
        let lower = Mag::from_dyadic_lower(&self.lower());
        Ok(ln_point(self.mid(), prec)?.add_error(self.rad().div(&lower)))
    }

    pub fn atan(&self) -> RealBall {
        self.atan_prec(self.prec())
    }

    pub fn atan_prec(&self, prec: u32) -> RealBall {
        // |arctan'| <= 1
        atan_point(self.mid(), prec).add_error(self.rad())
    }

    pub fn exp(&self) -> Result<RealBall> {
        self.exp_prec(self.prec())
    }

    pub fn exp_prec(&self, prec: u32) -> Result<RealBall> {
        monotone(self, prec, exp_point)
    }

    /// Square root of the non-negative part of the ball. The caller
    /// guarantees the exact value is non-negative (e.g. a sum of squares).
    pub fn sqrt_nonneg(&self) -> RealBall {
        let prec = self.prec();
        if self.is_exact() && !self.mid().is_negative() {
            return sqrt_point(self.mid(), prec);
        }
        let lo = self.lower().max(Dyadic::zero());
        let hi = self.upper().max(Dyadic::zero());
        let a = sqrt_point(&lo, prec);
        let b = sqrt_point(&hi, prec);
        RealBall::from_endpoints(&a.lower().max(Dyadic::zero()), &b.upper(), prec)
    }

    pub fn sqrt(&self) -> Result<RealBall> {
        if self.upper().is_negative() {
            return Err(Error::Domain("sqrt"));
        }
        Ok(self.sqrt_nonneg())
    }
}

/// `ln n` for a positive integer.
pub fn ln_int(n: &BigInt, prec: u32) -> Result<RealBall> {
    ln_point(&Dyadic::from_int(n.clone()), prec)
}
