//! Linear forms in two logarithms: `Λ(q, p) = q Log β - 2p Log(-1)`, the
//! Baker–Wüstholz constant, and the Diophantine pair `(c, τ)` it yields.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algnum::{AlgebraicNumber, HprimeMinusOne, RootOfUnity};
use crate::arb::{const_pi, ln_int, ComplexBall, Dyadic, RealBall};
use crate::error::{Error, Result};

/// An explicit value for the constant `C(m, d)` in
/// `ln |Λ| > -C(m, d) h'(α_1) ... h'(α_m) h'(L)`.
pub trait BwConstant: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, m: u32, d: u32, prec: u32) -> Result<RealBall>;
}

/// `C(m, d) = 18 (m+1)! m^(m+1) (32 d)^(m+2) ln(2 m d)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BakerWustholz;

impl BwConstant for BakerWustholz {
    fn name(&self) -> &'static str {
        "baker-wustholz-1993"
    }

    fn evaluate(&self, m: u32, d: u32, prec: u32) -> Result<RealBall> {
        if m == 0 || d == 0 {
            return Err(Error::InvalidInput("C(m, d) needs m >= 1 and d >= 1".into()));
        }
        let fact: BigInt = (1..=m as u64 + 1).map(BigInt::from).product();
        let k = BigInt::from(18) * fact * BigInt::from(m).pow(m + 1) * BigInt::from(32 * d as u64).pow(m + 2);
        let ln = ln_int(&BigInt::from(2 * m as u64 * d as u64), prec)?;
        Ok(ln.mul_int(k))
    }
}

pub fn bw_constant(m: u32, d: u32, prec: u32) -> Result<RealBall> {
    BakerWustholz.evaluate(m, d, prec)
}

/// `h'(L) = max{ln max |b_i|, 1}` for `L = b_1 z_1 + ... + b_m z_m`.
pub fn linear_form_height(coeffs: &[BigInt], prec: u32) -> Result<RealBall> {
    let m = coeffs.iter().map(|b| b.abs()).max().unwrap_or_default();
    if m.is_zero() {
        return Err(Error::AllZeroCoefficients);
    }
    // ln m >= 1 exactly when m >= 3
    if m < BigInt::from(3) {
        Ok(RealBall::one(prec))
    } else {
        ln_int(&m, prec)
    }
}

/// `Arg β` for `|β| = 1`, so that `Log β = i Arg β`.
pub fn unit_arg(beta: &AlgebraicNumber, prec: u32) -> Result<RealBall> {
    beta.arg(prec)
}

/// `Λ(q, p) = i (q α - 2 π p)` from a precomputed `α = Arg β`.
pub fn lambda_from_arg(q: &BigInt, p: &BigInt, alpha: &RealBall) -> ComplexBall {
    let prec = alpha.prec();
    let im = &alpha.mul_int(q.clone()) - &const_pi(prec).mul_int(p * 2);
    ComplexBall::new(RealBall::zero(prec), im)
}

/// `Λ(q, p) = q Log β - 2 p Log(-1)` for `β` on the unit circle.
pub fn lambda(q: &BigInt, p: &BigInt, beta: &AlgebraicNumber, prec: u32) -> Result<ComplexBall> {
    if !q.is_positive() {
        return Err(Error::InvalidInput("q must be positive".into()));
    }
    if !beta.is_unit_modulus()? {
        return Err(Error::NotUnitModulus);
    }
    let extra = q.bits().max(p.bits()) as u32 + 8;
    let alpha = unit_arg(beta, prec + extra)?;
    Ok(lambda_from_arg(q, p, &alpha))
}

/// The constants `C_0 = C(2, d) h'(β) h'(-1)`, `τ = C_0 + 1` and
/// `ln c = -ln(2π) - C_0 ln 3`, with `c` rounded down and `τ` rounded up
/// in `ln_c_lower` and `tau_upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub m: u32,
    pub d: u32,
    pub hprimes: Vec<RealBall>,
    pub c_md: RealBall,
    pub c0: RealBall,
    pub ln_c: RealBall,
    pub tau: RealBall,
    pub ln_c_lower: Dyadic,
    pub tau_upper: Dyadic,
    pub hprime_minus_one: HprimeMinusOne,
    pub constant: String,
}

impl BoundCertificate {
    /// A certificate for an arbitrary pair `(c, τ)` given as `ln c` and `τ`.
    pub fn explicit(ln_c: RealBall, tau: RealBall) -> Self {
        let prec = ln_c.prec();
        BoundCertificate {
            m: 0,
            d: 0,
            hprimes: Vec::new(),
            c_md: RealBall::zero(prec),
            c0: &tau - &RealBall::one(prec),
            ln_c_lower: ln_c.lower(),
            tau_upper: tau.upper(),
            ln_c,
            tau,
            hprime_minus_one: HprimeMinusOne::default(),
            constant: "explicit".into(),
        }
    }
}

/// The Diophantine pair for `θ = Arg(β) / 2π` from the lower bound for
/// `Λ = q Log β - 2p Log(-1)`.
pub fn diophantine_pair(
    beta: &AlgebraicNumber,
    prec: u32,
    convention: HprimeMinusOne,
) -> Result<BoundCertificate> {
    diophantine_pair_with(&BakerWustholz, beta, prec, convention)
}

pub fn diophantine_pair_with(
    constant: &dyn BwConstant,
    beta: &AlgebraicNumber,
    prec: u32,
    convention: HprimeMinusOne,
) -> Result<BoundCertificate> {
    if !beta.is_unit_modulus()? {
        return Err(Error::NotUnitModulus);
    }
    if let RootOfUnity::Yes { order } = beta.is_root_of_unity() {
        return Err(Error::RootOfUnity(order));
    }
    // C_0 is near 10^12, so carry 40 more bits to keep prec relative bits in ln c
    let wp = prec + 48;
    let d = beta.degree() as u32;
    let h_beta = beta.modified_height(wp, convention)?.with_prec(wp);
    let h_minus_one = convention.value(wp);
    let c_md = constant.evaluate(2, d, wp)?;
    let c0 = &(&c_md * &h_beta) * &h_minus_one;
    let tau = &c0 + &RealBall::one(wp);
    let two_pi = const_pi(wp).mul_2exp(1);
    let ln_c = &(-&two_pi.ln()?) - &(&c0 * &ln_int(&BigInt::from(3), wp)?);
    Ok(BoundCertificate {
        m: 2,
        d,
        hprimes: vec![h_beta, h_minus_one],
        c_md,
        ln_c_lower: ln_c.lower(),
        tau_upper: tau.upper(),
        c0,
        ln_c,
        tau,
        hprime_minus_one: convention,
        constant: constant.name().into(),
    })
}
