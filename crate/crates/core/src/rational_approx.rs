//! Continued fractions of real balls and certified checks of
//! `|θ - p/q| >= c / q^τ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algnum::bigint_string;
use crate::arb::{ln_int, max_precision, RationalInterval, RealBall};
use crate::error::{Error, Result};
use crate::linforms::BoundCertificate;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    #[serde(with = "bigint_string")]
    pub p: BigInt,
    #[serde(with = "bigint_string")]
    pub q: BigInt,
}

impl Convergent {
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFractionExpansion {
    #[serde(with = "bigint_vec")]
    pub quotients: Vec<BigInt>,
    pub convergents: Vec<Convergent>,
    pub certified_terms: usize,
    /// The expansion ended because the ball was an exact rational.
    pub terminated: bool,
    /// Precision of the ball the quotients were certified on.
    pub precision: u32,
}

impl ContinuedFractionExpansion {
    fn from_quotients(quotients: Vec<BigInt>, terminated: bool, precision: u32) -> Self {
        let mut convergents = Vec::with_capacity(quotients.len());
        let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
        let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
        for a in &quotients {
            let p = a * &p1 + &p0;
            let q = a * &q1 + &q0;
            p0 = std::mem::replace(&mut p1, p.clone());
            q0 = std::mem::replace(&mut q1, q.clone());
            convergents.push(Convergent { p, q });
        }
        ContinuedFractionExpansion { certified_terms: quotients.len(), quotients, convergents, terminated, precision }
    }
}

/// Euclid's algorithm run on both endpoints at once; returns the common
/// prefix and whether the expansion of an exact rational finished.
fn expand_interval(iv: &RationalInterval, max_terms: usize) -> (Vec<BigInt>, bool) {
    let mut out = Vec::new();
    let (mut lo, mut hi) = (iv.lo.clone(), iv.hi.clone());
    while out.len() < max_terms {
        let a = lo.floor();
        if hi.floor() != a {
            break;
        }
        let a = a.to_integer();
        let flo = &lo - BigRational::from_integer(a.clone());
        let fhi = &hi - BigRational::from_integer(a.clone());
        out.push(a);
        if flo.is_zero() {
            return (out, fhi.is_zero());
        }
        (lo, hi) = (fhi.recip(), flo.recip());
    }
    (out, false)
}

/// Continued fraction of an exact rational; always terminates.
pub fn cf_of_rational(q: &BigRational) -> ContinuedFractionExpansion {
    let (quotients, _) = expand_interval(&RationalInterval::point(q.clone()), usize::MAX);
    ContinuedFractionExpansion::from_quotients(quotients, true, 0)
}

/// Certified continued fraction of the number enclosed by `theta`.
///
/// Only quotients on which every point of the ball agrees are emitted.
/// When fewer than `max_terms` are certified, `refine(prec)` is asked for
/// a tighter ball at doubled precision; the expansion stops early once the
/// precision limit is reached or refinement stops helping.
pub fn cf_expand<F>(theta: &RealBall, max_terms: usize, mut refine: F) -> Result<ContinuedFractionExpansion>
where
    F: FnMut(u32) -> Result<RealBall>,
{
    let mut ball = theta.clone();
    let mut prec = theta.prec().max(32);
    let mut best: Option<ContinuedFractionExpansion> = None;
    loop {
        let (quotients, terminated) = expand_interval(&RationalInterval::from_ball(&ball), max_terms);
        if let Some(b) = &best {
            debug_assert!(quotients.starts_with(&b.quotients), "refinement changed a certified quotient");
        }
        let done = terminated || quotients.len() >= max_terms;
        best = Some(ContinuedFractionExpansion::from_quotients(quotients, terminated, prec));
        if done || prec >= max_precision() {
            break;
        }
        prec = (prec * 2).min(max_precision());
        let next = match refine(prec) {
            Ok(b) => b,
            Err(Error::PrecisionExhausted(_)) => break,
            Err(e) => return Err(e),
        };
        if next.rad() >= ball.rad() && !ball.rad().is_zero() {
            break;
        }
        ball = next;
    }
    let cf = best.unwrap();
    if cf.certified_terms == 0 {
        return Err(Error::PrecisionExhausted("no continued fraction quotient could be certified".into()));
    }
    Ok(cf)
}

/// A refinement callback for balls that cannot be refined.
pub fn no_refinement(_: u32) -> Result<RealBall> {
    Err(Error::PrecisionExhausted("fixed ball".into()))
}

/// `μ_k = -ln|θ - p_k/q_k| / ln q_k` for the convergents with `q_k > 1`,
/// stopping at the first one the ball cannot separate from `θ`.
pub fn empirical_mu(theta: &RealBall, cf: &ContinuedFractionExpansion) -> Vec<RealBall> {
    let prec = theta.prec();
    let mut out = Vec::new();
    for c in cf.convergents.iter().skip(1) {
        if c.q <= BigInt::one() {
            continue;
        }
        let diff = (theta - &RealBall::from_rational(&c.to_rational(), prec + 16)).abs();
        if diff.contains_zero() {
            break;
        }
        let (Ok(num), Ok(den)) = (diff.ln(), ln_int(&c.q, prec)) else { break };
        match (-num).div(&den) {
            Ok(mu) => out.push(mu),
            Err(_) => break,
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Replace `θ` by `θ - round(θ)`, which lies in `[-1/2, 1/2]`.
    pub fold: bool,
    /// Convergents with `qmax < q_k <= convergent_factor * qmax` are checked too.
    pub convergent_factor: u64,
    /// Number of quotients used for convergents and `μ` estimates.
    pub cf_terms: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { fold: false, convergent_factor: 10, cf_terms: 60 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theta: RealBall,
    pub qmax: u64,
    /// `min_q ln(|θ - p'/q| q^τ / c)` over every tested `q`; `None` when
    /// some `p'/q` equals `θ` exactly.
    pub worst_ratio: Option<RealBall>,
    #[serde(with = "bigint_string")]
    pub worst_q: BigInt,
    pub passed: bool,
    /// `|p'| < (q+1)/2` and `max{q, 2|p'|, e} < 3q` for every tested `q`.
    pub side_conditions_hold: bool,
    #[serde(with = "bigint_vec")]
    pub side_condition_failures: Vec<BigInt>,
    pub exact_hit: Option<Convergent>,
    pub tested: u64,
    pub convergents_checked: usize,
    pub mu_estimates: Vec<RealBall>,
}

struct Outcome {
    q: BigInt,
    log_ratio: Option<RealBall>,
    p: BigInt,
    side_ok: bool,
}

/// Constants of the inequality, rounded outward as exact balls.
struct Bound {
    ln_c: RealBall,
    tau_minus_one: RealBall,
}

/// Checks `|θ - p'/q| >= c/q^τ` in logarithms for `q = 1..=qmax`, `p'` the
/// integer nearest `qθ`, and for the longer convergents of `θ`.
///
/// `theta(prec)` must return balls around one fixed real number; it is
/// called again at higher precision whenever a nearest integer or a sign
/// is not yet certain.
pub fn verify_diophantine<F>(
    theta: &F,
    cert: &BoundCertificate,
    qmax: u64,
    opts: &VerifyOptions,
) -> Result<VerificationReport>
where
    F: Fn(u32) -> Result<RealBall> + Sync,
{
    if qmax == 0 {
        return Err(Error::InvalidInput("qmax must be at least 1".into()));
    }
    let top = qmax.saturating_mul(opts.convergent_factor.max(1));
    let scan_prec = 96 + 2 * (64 - top.leading_zeros());
    let shift = if opts.fold { fold_shift(theta, scan_prec)? } else { BigInt::zero() };
    let source = |prec: u32| -> Result<RealBall> {
        let t = theta(prec)?;
        Ok(&t - &RealBall::from_int(shift.clone(), prec))
    };
    let theta_scan = source(scan_prec)?;
    let bound = Bound {
        ln_c: RealBall::exact(cert.ln_c_lower.clone(), scan_prec),
        tau_minus_one: &RealBall::exact(cert.tau_upper.clone(), scan_prec) - &RealBall::one(scan_prec),
    };

    const CHUNK: u64 = 2048;
    let chunks: Vec<Vec<Outcome>> = (0..qmax.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(qmax);
            (lo..=hi)
                .map(|q| check_q(&BigInt::from(q), &theta_scan, &source, &bound))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut outcomes: Vec<Outcome> = chunks.into_iter().flatten().collect();

    let theta_cf = source(scan_prec.max(256))?;
    let cf = cf_expand(&theta_cf, opts.cf_terms, &source)?;
    let mut convergents_checked = 0;
    for c in &cf.convergents {
        if c.q > BigInt::from(qmax) && c.q <= BigInt::from(top) {
            outcomes.push(check_q(&c.q, &theta_scan, &source, &bound)?);
            convergents_checked += 1;
        }
    }

    let tested = outcomes.len() as u64;
    let side_condition_failures: Vec<BigInt> =
        outcomes.iter().filter(|o| !o.side_ok).map(|o| o.q.clone()).take(32).collect();
    let exact_hit = outcomes
        .iter()
        .find(|o| o.log_ratio.is_none())
        .map(|o| Convergent { p: o.p.clone(), q: o.q.clone() });
    let worst = outcomes
        .iter()
        .filter_map(|o| o.log_ratio.as_ref().map(|r| (r, &o.q)))
        .min_by(|a, b| a.0.mid().cmp(b.0.mid()).then_with(|| a.1.cmp(b.1)));
    let (worst_ratio, worst_q) = match (&exact_hit, worst) {
        (Some(hit), _) => (None, hit.q.clone()),
        (None, Some((r, q))) => (Some(r.clone()), q.clone()),
        (None, None) => unreachable!("qmax >= 1"),
    };
    let passed = worst_ratio.as_ref().is_some_and(|r| r.is_nonnegative());
    let mu_estimates = empirical_mu(&theta_cf, &cf);
    Ok(VerificationReport {
        theta: theta_cf,
        qmax,
        worst_ratio,
        worst_q,
        passed,
        side_conditions_hold: side_condition_failures.is_empty(),
        side_condition_failures,
        exact_hit,
        tested,
        convergents_checked,
        mu_estimates,
    })
}

/// The integer nearest `θ`.
fn fold_shift<F: Fn(u32) -> Result<RealBall>>(theta: &F, mut prec: u32) -> Result<BigInt> {
    loop {
        if let Some(n) = theta(prec)?.unique_nearest_integer() {
            return Ok(n);
        }
        if prec >= max_precision() {
            return Err(Error::PrecisionExhausted("θ is too close to a half-integer to fold".into()));
        }
        prec = (prec * 2).min(max_precision());
    }
}

fn check_q<F>(q: &BigInt, theta: &RealBall, source: &F, bound: &Bound) -> Result<Outcome>
where
    F: Fn(u32) -> Result<RealBall>,
{
    let mut t = theta.clone();
    loop {
        let x = t.mul_int(q.clone());
        // an exact half-integer has two nearest integers at the same distance
        let nearest = x.unique_nearest_integer().or_else(|| {
            x.is_exact().then(|| (x.mid() + &crate::arb::Dyadic::pow2(-1)).floor())
        });
        if let Some(p) = nearest {
            let diff = (&x - &RealBall::from_int(p.clone(), t.prec())).abs();
            let two_p = p.abs() * 2;
            let side_ok = &two_p <= q && &two_p < &(q * 3);
            if diff.is_exact() && diff.mid().is_zero() {
                return Ok(Outcome { q: q.clone(), log_ratio: None, p, side_ok });
            }
            if !diff.contains_zero() {
                let ln_q = ln_int(q, t.prec())?;
                let r = &(&diff.ln()? + &(&bound.tau_minus_one * &ln_q)) - &bound.ln_c;
                return Ok(Outcome { q: q.clone(), log_ratio: Some(r), p, side_ok });
            }
        }
        let prec = t.prec();
        if prec >= max_precision() {
            return Err(Error::PrecisionExhausted(format!("nearest integer to qθ is ambiguous at q = {q}")));
        }
        t = source((prec * 2).min(max_precision()))?;
    }
}

/// Shorthand for `(c, τ)` given directly, e.g. `c = 1/10, τ = 2`.
pub fn explicit_certificate(c: &BigRational, tau: &BigRational, prec: u32) -> Result<BoundCertificate> {
    if !c.is_positive() {
        return Err(Error::InvalidInput("c must be positive".into()));
    }
    let ln_c = &ln_int(c.numer(), prec)? - &ln_int(c.denom(), prec)?;
    Ok(BoundCertificate::explicit(ln_c, RealBall::from_rational(tau, prec)))
}

/// Reduced `p/q` check used by tests and callers that build fractions.
pub fn is_reduced(c: &Convergent) -> bool {
    c.p.gcd(&c.q).is_one()
}

pub(crate) mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|n| n.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rational_cf() {
        let cf = cf_of_rational(&BigRational::new(7.into(), 3.into()));
        assert_eq!(cf.quotients, ints(&[2, 3]));
        assert!(cf.terminated);
        assert_eq!(cf.convergents[1], Convergent { p: 7.into(), q: 3.into() });
        let half = RealBall::from_rational(&BigRational::new(1.into(), 2.into()), 64);
        let cf = cf_expand(&half, 10, no_refinement).unwrap();
        assert_eq!(cf.quotients, ints(&[0, 2]));
        assert!(empirical_mu(&half, &cf).is_empty());
    }

    #[test]
    fn golden_ratio() {
        let phi = |prec: u32| -> Result<RealBall> {
            let s5 = RealBall::from_int(5, prec).sqrt()?;
            (&s5 + &RealBall::one(prec)).div_int(2)
        };
        let cf = cf_expand(&phi(64).unwrap(), 50, phi).unwrap();
        assert_eq!(cf.certified_terms, 50);
        assert!(cf.quotients.iter().all(|a| a.is_one()));
        assert!(cf.convergents.iter().all(is_reduced));
        let mu = empirical_mu(&phi(512).unwrap(), &cf);
        // μ_k is about 2 + ln(√5) / ln q_k
        for m in &mu[10..] {
            assert!(m.to_f64() > 1.8 && m.to_f64() < 2.2);
        }
    }

    #[test]
    fn negative_and_fixed_balls() {
        let t = RealBall::parse("-2.75", 64).unwrap();
        let cf = cf_expand(&t, 10, no_refinement).unwrap();
        assert_eq!(cf.quotients, ints(&[-3, 4]));
        let wide = RealBall::parse("0.5 +/- 0.6", 64).unwrap();
        assert!(matches!(cf_expand(&wide, 5, no_refinement), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn hurwitz_bound_for_golden_ratio() {
        let theta = |prec: u32| -> Result<RealBall> {
            let s5 = RealBall::from_int(5, prec).sqrt()?;
            (&s5 - &RealBall::one(prec)).div_int(2)
        };
        let cert =
            explicit_certificate(&BigRational::new(1.into(), 10.into()), &BigRational::from_integer(2.into()), 128)
                .unwrap();
        let r = verify_diophantine(&theta, &cert, 10_000, &VerifyOptions::default()).unwrap();
        assert!(r.passed);
        assert_eq!(r.tested, 10_000 + r.convergents_checked as u64);
        // θ = 0.618... is not in (-1/2, 1/2]; folding repairs the side conditions
        assert!(!r.side_conditions_hold);
        let opts = VerifyOptions { fold: true, ..VerifyOptions::default() };
        let r = verify_diophantine(&theta, &cert, 1000, &opts).unwrap();
        assert!(r.passed && r.side_conditions_hold);
    }

    #[test]
    fn rational_theta_fails() {
        let cert =
            explicit_certificate(&BigRational::new(1.into(), 10.into()), &BigRational::from_integer(2.into()), 64)
                .unwrap();
        let dyadic = |prec: u32| Ok(RealBall::from_rational(&BigRational::new(3.into(), 8.into()), prec));
        let r = verify_diophantine(&dyadic, &cert, 100, &VerifyOptions::default()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.exact_hit, Some(Convergent { p: 3.into(), q: 8.into() }));
        // 3/7 has no exact ball, so the gap at q = 7 never separates from zero
        let sevenths = |prec: u32| Ok(RealBall::from_rational(&BigRational::new(3.into(), 7.into()), prec));
        let r = verify_diophantine(&sevenths, &cert, 100, &VerifyOptions::default());
        assert!(matches!(r, Err(Error::PrecisionExhausted(_))));
    }
}
