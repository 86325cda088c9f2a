//! Solutions of `n tan α = tan(nα)` with `α ∈ (0, π/2)` and what the
//! Diophantine machinery says about them.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algnum::{AlgebraicNumber, HeightReport, HprimeMinusOne, RootOfUnity};
use crate::arb::{const_pi, ComplexBall, RealBall};
use crate::error::{Error, Result};
use crate::linforms::{diophantine_pair, BoundCertificate};
use crate::poly::{factor, real_roots, IntPolynomial};
use crate::rational_approx::{cf_expand, verify_diophantine, ContinuedFractionExpansion, VerificationReport, VerifyOptions};

/// `tan(nα) = P_n(t) / Q_n(t)` with `t = tan α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TanPair {
    pub n: u32,
    pub p: IntPolynomial,
    pub q: IntPolynomial,
}

/// `P_1 = t, Q_1 = 1, P_{k+1} = P_k + t Q_k, Q_{k+1} = Q_k - t P_k`.
pub fn tan_multiple(n: u32) -> TanPair {
    assert!(n >= 1, "tan_multiple needs n >= 1");
    let t = IntPolynomial::x();
    let mut p = t.clone();
    let mut q = IntPolynomial::one();
    for _ in 1..n {
        let next_p = &p + &(&t * &q);
        q = &q - &(&t * &p);
        p = next_p;
    }
    TanPair { n, p, q }
}

/// `W_n = P_n - n t Q_n`, which vanishes at `t = tan α` for every solution.
pub fn witness(n: u32) -> IntPolynomial {
    let TanPair { p, q, .. } = tan_multiple(n);
    &p - &(&IntPolynomial::x() * &q).scale(&BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GutkinSolution {
    pub n: u32,
    pub t: AlgebraicNumber,
    pub multiplicity: u32,
    pub alpha: RealBall,
    pub beta: AlgebraicNumber,
    pub theta: RealBall,
}

impl GutkinSolution {
    pub fn alpha_at(&self, prec: u32) -> Result<RealBall> {
        Ok(self.t.real_enclosure(prec + 8)?.atan_prec(prec))
    }

    /// `θ = α / 2π` at the requested precision.
    pub fn theta_at(&self, prec: u32) -> Result<RealBall> {
        let wp = prec + 8;
        let alpha = self.alpha_at(wp)?;
        Ok(alpha.div(&const_pi(wp).mul_2exp(1))?.with_prec(prec))
    }
}

/// A positive root of `W_n` that was dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedRoot {
    pub minpoly: IntPolynomial,
    pub approx: RealBall,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solutions {
    pub n: u32,
    pub witness: IntPolynomial,
    pub solutions: Vec<GutkinSolution>,
    pub excluded: Vec<ExcludedRoot>,
}

/// All solutions, sorted by increasing `t`.
pub fn solve(n: u32, prec: u32) -> Result<Vec<GutkinSolution>> {
    Ok(solve_with_diagnostics(n, prec)?.solutions)
}

pub fn solve_with_diagnostics(n: u32, prec: u32) -> Result<Solutions> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    let w = witness(n);
    let TanPair { q: qn, .. } = tan_multiple(n);
    let mut solutions = Vec::new();
    let mut excluded = Vec::new();
    for (g, multiplicity) in factor(&w)? {
        if g.coeff(0).is_zero() {
            continue; // the factor t
        }
        for mut root in real_roots(&g)? {
            // g(0) != 0, so refining eventually moves the interval off zero
            let mut bits = 8;
            while !root.region.lo.is_positive() && root.region.hi.is_positive() {
                bits *= 2;
                root.refine(bits);
            }
            if !root.region.lo.is_positive() {
                continue;
            }
            let t = AlgebraicNumber::designate(&g, |p| Ok(ComplexBall::from_real(root.to_ball(p))))?;
            if qn.pseudo_rem(&g).is_zero() {
                excluded.push(ExcludedRoot {
                    minpoly: g.clone(),
                    approx: t.real_enclosure(prec)?,
                    reason: "Q_n(t) = 0, so tan(nα) is undefined".into(),
                });
                continue;
            }
            let alpha = t.real_enclosure(prec + 16)?.atan_prec(prec + 8);
            let beta = beta_from_t(&t, &alpha)?;
            let theta = alpha.div(&const_pi(prec + 8).mul_2exp(1))?.with_prec(prec);
            solutions.push(GutkinSolution { n, t, multiplicity, alpha: alpha.with_prec(prec), beta, theta });
        }
    }
    solutions.sort_by(|a, b| a.alpha.mid().cmp(b.alpha.mid()));
    Ok(Solutions { n, witness: w, solutions, excluded })
}

/// `Σ_j m_j (-i(B-1))^j (B+1)^(k-j)` split into real and imaginary parts:
/// `m(t)` with `t = -i(B-1)/(B+1)` cleared of denominators.
fn gaussian_substitution(m: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
    let k = m.deg();
    let b_minus = IntPolynomial::from_i64s(&[-1, 1]);
    let b_plus = IntPolynomial::from_i64s(&[1, 1]);
    let mut re = IntPolynomial::zero();
    let mut im = IntPolynomial::zero();
    for (j, c) in m.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = (&b_minus.pow(j as u32) * &b_plus.pow((k - j) as u32)).scale(c);
        // (-i)^j cycles through 1, -i, -1, i
        match j % 4 {
            0 => re = &re + &term,
            1 => im = &im - &term,
            2 => re = &re - &term,
            _ => im = &im + &term,
        }
    }
    (re, im)
}

/// `β = e^{iα} = (1 + it) / sqrt(1 + t^2)` for real `t = tan α`.
///
/// `β^2 = (1 + it)/(1 - it)`, so with `B = β^2` the number `t` equals
/// `-i(B-1)/(B+1)`. Substituting into the minimal polynomial of `t` gives a
/// polynomial `G = R + iI` over the Gaussian integers; `R^2 + I^2` has
/// integer coefficients and vanishes at `B`, so `R(x^2)^2 + I(x^2)^2`
/// vanishes at `β`.
pub fn beta_from_t(t: &AlgebraicNumber, alpha: &RealBall) -> Result<AlgebraicNumber> {
    if !t.is_real() {
        return Err(Error::InvalidInput("t must be real".into()));
    }
    let check = t.real_enclosure(alpha.prec() + 8)?.atan_prec(alpha.prec());
    if !check.overlaps(alpha) {
        return Err(Error::InconsistentHint);
    }
    let (re, im) = gaussian_substitution(t.minpoly());
    let norm = &(&re * &re) + &(&im * &im);
    let f = norm.inflate(2);
    AlgebraicNumber::designate(&f, |prec| {
        let wp = prec + 16;
        let te = t.real_enclosure(wp)?;
        let s = (&RealBall::one(wp) + &te.sqr()).sqrt()?;
        Ok(ComplexBall::new(s.inv()?, te.div(&s)?))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub prec: u32,
    pub qmax: u64,
    pub terms: usize,
    pub convention: HprimeMinusOne,
    pub fold: bool,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { prec: 256, qmax: 100_000, terms: 60, convention: HprimeMinusOne::One, fold: false }
    }
}

/// The hypotheses on `β` that are checked by computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Premises {
    pub beta_algebraic: bool,
    pub unit_modulus: bool,
    pub root_of_unity: RootOfUnity,
}

/// A conclusion recorded with the theorem it rests on. Its status is always
/// `cited`: only the premises are computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deduction {
    pub claim: String,
    pub theorem: String,
    pub premises: Vec<String>,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub solution: GutkinSolution,
    pub height: HeightReport,
    pub premises: Premises,
    pub cert: BoundCertificate,
    pub cf: ContinuedFractionExpansion,
    pub verification: VerificationReport,
    pub deductions: Vec<Deduction>,
}

fn deductions() -> Vec<Deduction> {
    let d = |claim: &str, theorem: &str, premises: &[&str]| Deduction {
        claim: claim.into(),
        theorem: theorem.into(),
        premises: premises.iter().map(|s| s.to_string()).collect(),
        status: "cited".into(),
    };
    vec![
        d(
            "θ = α/2π is a Diophantine number",
            "Baker–Wüstholz lower bound for linear forms in two logarithms, applied to q Log β - 2p Log(-1)",
            &["β is algebraic", "|β| = 1", "β is not a root of unity"],
        ),
        d(
            "θ = α/2π is transcendental",
            "Gelfond–Schneider theorem: (-1)^(2θ) = β is algebraic, so 2θ is rational or transcendental",
            &["β is algebraic", "β is not a root of unity, so θ is irrational"],
        ),
        d(
            "α is transcendental",
            "Hermite–Lindemann theorem: e^(iα) is transcendental for algebraic α ≠ 0",
            &["e^(iα) = β is algebraic", "α ≠ 0"],
        ),
    ]
}

/// Runs the full analysis of solution `index` of `n tan α = tan(nα)`.
pub fn classify(n: u32, index: usize, config: &ClassifyConfig) -> Result<ClassificationReport> {
    let mut all = solve(n, config.prec)?;
    if index >= all.len() {
        return Err(Error::NoSuchSolution { index, count: all.len() });
    }
    let solution = all.swap_remove(index);
    let beta = &solution.beta;
    let premises = Premises {
        beta_algebraic: true,
        unit_modulus: beta.is_unit_modulus()?,
        root_of_unity: beta.is_root_of_unity(),
    };
    let theta = |prec: u32| solution.theta_at(prec);
    let (hc, cf) = rayon::join(
        || -> Result<_> {
            Ok((beta.weil_height(config.prec)?, diophantine_pair(beta, config.prec, config.convention)?))
        },
        || cf_expand(&solution.theta, config.terms, theta),
    );
    let (height, cert) = hc?;
    let cf = cf?;
    let opts = VerifyOptions { fold: config.fold, cf_terms: config.terms, ..VerifyOptions::default() };
    let verification = verify_diophantine(&theta, &cert, config.qmax, &opts)?;
    Ok(ClassificationReport { solution, height, premises, cert, cf, verification, deductions: deductions() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn recurrence_values() {
        assert_eq!(tan_multiple(2), TanPair { n: 2, p: p(&[0, 2]), q: p(&[1, 0, -1]) });
        assert_eq!(tan_multiple(3).p, p(&[0, 3, 0, -1]));
        assert_eq!(tan_multiple(4).q, p(&[1, 0, -6, 0, 1]));
        assert_eq!(witness(2), p(&[0, 0, 0, 2]));
        assert_eq!(witness(4), p(&[0, 0, 0, 20, 0, -4]));
        assert_eq!(witness(5), p(&[0, 0, 0, 40, 0, -24]));
    }

    #[test]
    fn betas() {
        let t0 = AlgebraicNumber::from_int(0);
        assert_eq!(beta_from_t(&t0, &RealBall::zero(64)).unwrap().minpoly(), &p(&[-1, 1]));
        let t1 = AlgebraicNumber::from_int(1);
        let a1 = const_pi(64).mul_2exp(-2);
        assert_eq!(beta_from_t(&t1, &a1).unwrap().minpoly(), &p(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn small_n() {
        assert!(solve(2, 64).unwrap().is_empty());
        assert!(solve(3, 64).unwrap().is_empty());
        let s4 = solve(4, 64).unwrap();
        assert_eq!(s4.len(), 1);
        assert_eq!(s4[0].t.minpoly(), &p(&[-5, 0, 1]));
        assert_eq!(s4[0].beta.minpoly(), &p(&[3, 0, 4, 0, 3]));
        assert!(matches!(solve(1, 64), Err(Error::InvalidInput(_))));
    }
}
