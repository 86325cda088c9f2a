//! Acceptance gate. Runs every criterion in sequence and prints one
//! PASS/FAIL line each; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dioph::algnum::{AlgebraicNumber, HprimeMinusOne, RootOfUnity};
use dioph::arb::{const_pi, ln_int, ComplexBall, RealBall};
use dioph::gutkin::{classify, solve, tan_multiple, witness, ClassifyConfig};
use dioph::linforms::{diophantine_pair, lambda, lambda_from_arg, unit_arg};
use dioph::poly::{complex_roots, factor, IntPolynomial};
use dioph::rational_approx::{cf_expand, no_refinement, verify_diophantine, ContinuedFractionExpansion, VerifyOptions};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

trait Fail<T> {
    fn ctx(self, what: &str) -> Result<T, String>;
}

impl<T, E: std::fmt::Display> Fail<T> for Result<T, E> {
    fn ctx(self, what: &str) -> Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

const PREC: u32 = 256;

// Reference values computed with mpmath at 60 digits.
const ALPHA4: &str = "1.15026199151093149134305917572653606874754530686763";
const THETA4: &str = "0.183069881799692497";
const LN3_OVER_4: &str = "0.274653072167027422848811309230631426";
const LN2_OVER_4: &str = "0.173286795139986327354308030364544142";
const LN_C_ONE: &str = "-812606506736.293336091323";
const C0_ONE: &str = "739666318241.906669269711";

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c)
}

fn ball(s: &str) -> RealBall {
    RealBall::parse(s, PREC).unwrap()
}

/// `|b - c| <= tol` for every point of `b`.
fn within(b: &RealBall, c: &RealBall, tol: f64) -> bool {
    (b - c).mag_upper().to_f64() <= tol
}

fn width(b: &RealBall) -> f64 {
    2.0 * b.rad().to_f64()
}

fn cyclotomic(k: usize) -> IntPolynomial {
    let mut f = &IntPolynomial::monomial(BigInt::one(), k) - &IntPolynomial::one();
    for d in (1..k).filter(|d| k % d == 0) {
        f = f.div_exact(&cyclotomic(d)).expect("Φ_d divides x^k - 1");
    }
    f
}

fn roots_of(f: &IntPolynomial) -> Result<Vec<AlgebraicNumber>, String> {
    complex_roots(f, 64)
        .ctx("complex roots")?
        .into_iter()
        .map(|r| AlgebraicNumber::make(f, &r.region).ctx("make"))
        .collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let r = classify(4, 0, &ClassifyConfig::default()).ctx("classify(4, 0)")?;
    let elapsed = start.elapsed();
    ensure!(r.solution.t.minpoly() == &p(&[-5, 0, 1]), "t minpoly {}", r.solution.t.minpoly());
    ensure!(within(&r.solution.alpha, &ball("1.150261992"), 1e-8), "α = {}", r.solution.alpha.display(20));
    ensure!(within(&r.solution.alpha, &ball(ALPHA4), 1e-40), "α off the reference value");
    ensure!(r.solution.beta.minpoly() == &p(&[3, 0, 4, 0, 3]), "β minpoly {}", r.solution.beta.minpoly());
    ensure!(r.height.degree == 4 && r.cert.d == 4, "degree {}", r.height.degree);

    let ln3_4 = ln_int(&BigInt::from(3), PREC).unwrap().mul_2exp(-2);
    ensure!(within(&r.height.h, &ln3_4, 1e-30), "h(β) = {} is not (ln 3)/4", r.height.h.display(20));
    ensure!(within(&r.height.h, &ball(LN3_OVER_4), 1e-30), "h(β) off the reference value");

    let hp = r.solution.beta.modified_height(PREC, HprimeMinusOne::One).ctx("h'(β)")?;
    ensure!(hp.overlaps(&r.solution.alpha) && within(&hp, &r.solution.alpha, 1e-60), "h'(β) != α");

    // ln c = -ln(2π) - C0 ln 3 evaluated directly in floating point
    let c24 = 18.0 * 6.0 * 2f64.powi(3) * 128f64.powi(4) * 16f64.ln();
    let c0 = c24 * 1.150_261_991_510_931_5;
    let ln_c = -(2.0 * std::f64::consts::PI).ln() - c0 * 3f64.ln();
    let rel = (r.cert.ln_c.to_f64() - ln_c).abs() / ln_c.abs();
    ensure!(rel < 1e-10, "ln c = {} vs direct {ln_c:e} (rel {rel:e})", r.cert.ln_c.display(15));
    ensure!(within(&r.cert.ln_c, &ball(LN_C_ONE), 1e-9), "ln c off the reference value");
    ensure!(within(&(&r.cert.tau - &RealBall::one(PREC)), &ball(C0_ONE), 1e-9), "τ - 1 != C0");
    ensure!(r.verification.passed, "verification did not pass");
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("h(β) = (ln 3)/4, ln c = {:.12e}, {} q checked in {elapsed:.2?}", r.cert.ln_c.to_f64(), r.verification.tested))
}

fn criterion_2() -> Check {
    let r = classify(5, 0, &ClassifyConfig::default()).ctx("classify(5, 0)")?;
    ensure!(r.solution.t.minpoly() == &p(&[-5, 0, 3]), "t minpoly {}", r.solution.t.minpoly());
    ensure!(r.solution.beta.minpoly() == &p(&[2, 0, 1, 0, 2]), "β minpoly {}", r.solution.beta.minpoly());
    let ln2_4 = ln_int(&BigInt::from(2), PREC).unwrap().mul_2exp(-2);
    ensure!(within(&r.height.h, &ln2_4, 1e-30), "h(β) = {} is not (ln 2)/4", r.height.h.display(20));
    ensure!(within(&r.height.h, &ball(LN2_OVER_4), 1e-30), "h(β) off the reference value");
    ensure!(r.verification.passed, "verification did not pass");
    Ok("β minpoly 2x⁴ + x² + 2, h(β) = (ln 2)/4".into())
}

fn criterion_3() -> Check {
    ensure!(witness(2) == p(&[0, 0, 0, 2]), "W₂ = {}", witness(2));
    ensure!(witness(3) == p(&[0, 0, 0, 8]), "W₃ = {}", witness(3));
    for n in [2, 3] {
        let s = solve(n, PREC).ctx("solve")?;
        ensure!(s.is_empty(), "n = {n} has {} solutions", s.len());
    }
    Ok("W₂ = 2t³, W₃ = 8t³, no solutions".into())
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);

    let mut fractions = 0;
    while fractions < 50 {
        let a: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let b: i64 = rng.gen_range(1..=1_000_000);
        if a == 0 || a.gcd(&b) != 1 {
            continue;
        }
        let z = AlgebraicNumber::from_rational(&BigRational::new(a.into(), b.into()));
        let h = z.weil_height(PREC).ctx("height of p/q")?.h;
        let expect = ln_int(&BigInt::from(a.abs().max(b)), PREC).unwrap();
        ensure!(within(&h, &expect, 1e-70), "h({a}/{b}) = {}", h.display(20));
        fractions += 1;
    }

    let mut cyclo = 0;
    for k in 1..=60 {
        let f = cyclotomic(k);
        if f.deg() > 16 {
            continue;
        }
        for z in roots_of(&f)? {
            let h = z.weil_height(PREC).ctx("height of ζ")?.h;
            ensure!(h.contains_zero() && width(&h) < 1e-20, "h(ζ) = {} for k = {k}", h.display(10));
            cyclo += 1;
        }
    }

    let mut powers = 0;
    let mut samples = 0;
    while samples < 20 {
        let deg = if samples % 2 == 0 { 2 } else { 4 };
        let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
        if c[0] == 0 || c[deg] == 0 {
            continue;
        }
        c[deg] = c[deg].abs();
        let f = p(&c);
        let fs = factor(&f).ctx("factor")?;
        if fs.len() != 1 || fs[0].1 != 1 || fs[0].0.deg() != deg {
            continue;
        }
        let roots = roots_of(&fs[0].0)?;
        let z = &roots[rng.gen_range(0..roots.len())];
        let hz = z.weil_height(PREC).ctx("h(z)")?.h;
        for n in [-3i64, -2, -1, 1, 2, 3] {
            let zn = z.power(n).ctx("power")?;
            let hzn = zn.weil_height(PREC).ctx("h(z^n)")?.h;
            let scaled = hz.mul_int(n.abs());
            ensure!(hzn.overlaps(&scaled), "h(z^{n}) = {} vs {} for root of {f}", hzn.display(20), scaled.display(20));
            ensure!(width(&hzn) < 1e-20 && width(&scaled) < 1e-20, "ball too wide for root of {f}");
            powers += 1;
        }
        samples += 1;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{fractions} fractions, {cyclo} roots of unity, {powers} powers in {elapsed:.2?}"))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let sol = solve(4, PREC).ctx("solve(4)")?.remove(0);
    let alpha = unit_arg(&sol.beta, PREC).ctx("Arg β")?;
    let theta = sol.theta_at(PREC).ctx("θ")?;
    let two_pi = const_pi(PREC).mul_2exp(1);
    let mut pairs = 0u64;
    for q in 1..=1000i64 {
        let qb = BigInt::from(q);
        let qtheta = theta.mul_int(q);
        for pp in 0..=q {
            let pb = BigInt::from(pp);
            let l = if q <= 10 {
                lambda(&qb, &pb, &sol.beta, PREC).ctx("Λ")?
            } else {
                lambda_from_arg(&qb, &pb, &alpha)
            };
            let lam = l.abs();
            let other = (&qtheta - &RealBall::from_int(pp, PREC)).abs() * two_pi.clone();
            ensure!(!lam.contains_zero(), "Λ({q}, {pp}) contains 0");
            ensure!(lam.overlaps(&other), "|Λ({q}, {pp})| and 2πq|θ - p/q| disjoint");
            let lo = lam.mag_lower().to_f64();
            ensure!(width(&lam) / lo < 1e-20 && width(&other) / lo < 1e-20, "wide balls at ({q}, {pp})");
            pairs += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("{pairs} pairs (q, p') in {elapsed:.2?}"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let sol = solve(4, PREC).ctx("solve(4)")?.remove(0);
    let cert = diophantine_pair(&sol.beta, PREC, HprimeMinusOne::One).ctx("certificate")?;
    let theta = |prec: u32| sol.theta_at(prec);
    let report = verify_diophantine(&theta, &cert, 100_000, &VerifyOptions::default()).ctx("verify")?;
    ensure!(report.passed, "verification failed, worst q = {}", report.worst_q);
    ensure!(report.side_conditions_hold, "side conditions fail at {:?}", report.side_condition_failures);

    // recheck the side conditions with integer arithmetic
    let t = sol.theta_at(PREC).ctx("θ")?;
    for q in 1..=100_000i64 {
        let pq = t.mul_int(q).unique_nearest_integer().ok_or(format!("no nearest integer at q = {q}"))?;
        let two_p = pq.abs() * 2;
        ensure!(two_p < BigInt::from(q + 1), "|p'| >= (q+1)/2 at q = {q}");
        ensure!(two_p < BigInt::from(3 * q), "2|p'| >= 3q at q = {q}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{} q, side conditions hold, passed in {elapsed:.2?}", report.tested))
}

/// `|θ - p_k/q_k| < 1/(q_k q_{k+1})`, checked as `|q_k θ - p_k| q_{k+1} < 1`.
fn convergent_bounds(theta: &RealBall, cf: &ContinuedFractionExpansion) -> Result<usize, String> {
    let one = RealBall::one(theta.prec());
    let usable = cf.certified_terms.min(cf.convergents.len());
    let mut checked = 0;
    for k in 0..usable.saturating_sub(1) {
        let (c, next) = (&cf.convergents[k], &cf.convergents[k + 1]);
        let err = (&theta.mul_int(c.q.clone()) - &RealBall::from_int(c.p.clone(), theta.prec())).abs();
        ensure!(err.mul_int(next.q.clone()).lt(&one), "bound fails at k = {k}");
        checked += 1;
    }
    Ok(checked)
}

fn criterion_7() -> Check {
    let phi = AlgebraicNumber::make(&p(&[-1, -1, 1]), &ComplexBall::parse("1.6 +/- 0.1", 64).unwrap()).ctx("φ")?;
    let gold = |prec: u32| phi.real_enclosure(prec);
    let cf = cf_expand(&gold(PREC).ctx("φ")?, 50, gold).ctx("cf(φ)")?;
    ensure!(cf.certified_terms >= 50, "only {} terms of φ", cf.certified_terms);
    ensure!(cf.quotients.iter().take(50).all(|a| a.is_one()), "φ has a quotient other than 1");
    let mut bounds = convergent_bounds(&gold(1024).ctx("φ")?, &cf)?;

    let sol = solve(4, PREC).ctx("solve(4)")?.remove(0);
    let theta = |prec: u32| sol.theta_at(prec);
    let cf4 = cf_expand(&theta(PREC).ctx("θ")?, 60, theta).ctx("cf(θ)")?;
    bounds += convergent_bounds(&theta(2048).ctx("θ")?, &cf4)?;
    let head: Vec<i64> = cf4.quotients.iter().take(8).map(|a| a.try_into().unwrap()).collect();
    ensure!(head == [0, 5, 2, 6, 6, 1, 3, 13], "θ₄ quotients {head:?}");
    ensure!(within(&theta(PREC).ctx("θ")?, &ball(THETA4), 1e-17), "θ₄ off the reference value");

    // precision doubling only extends the certified list
    let mut prev: Option<ContinuedFractionExpansion> = None;
    for prec in [128, 256, 512, 1024] {
        let c = cf_expand(&theta(prec).ctx("θ")?, 400, no_refinement).ctx("cf")?;
        if let Some(prev) = &prev {
            let n = prev.certified_terms;
            ensure!(c.certified_terms >= n, "fewer terms at {prec} bits");
            ensure!(c.quotients[..n] == prev.quotients[..n], "quotients changed at {prec} bits");
        }
        prev = Some(c);
    }

    // brute-force nearest p and best approximations against the convergents
    let t = theta(512).ctx("θ")?;
    let exact = t.mid().to_rational();
    let mut record: Option<BigRational> = None;
    let mut record_qs = Vec::new();
    for q in 1..=1000i64 {
        let qt = &exact * BigRational::from_integer(q.into());
        let best = (0..=q)
            .map(|pp| ((&qt - BigRational::from_integer(pp.into())).abs(), pp))
            .min()
            .unwrap();
        let nearest = t.mul_int(q).unique_nearest_integer().ok_or(format!("no nearest integer at q = {q}"))?;
        ensure!(nearest == BigInt::from(best.1), "nearest p at q = {q}: {nearest} vs {}", best.1);
        if record.as_ref().is_none_or(|r| best.0 < *r) {
            record = Some(best.0);
            record_qs.push(BigInt::from(q));
        }
    }
    let conv_qs: Vec<BigInt> = cf4
        .convergents
        .iter()
        .map(|c| c.q.clone())
        .filter(|q| *q <= BigInt::from(1000))
        .collect();
    ensure!(record_qs == conv_qs, "best approximations {record_qs:?} vs convergents {conv_qs:?}");
    Ok(format!("φ = [1; 1, ...] to 50 terms, {bounds} convergent bounds, nearest p for q ≤ 1000"))
}

/// `tan(nα)` at `tan α = t` by repeated halving, as a projective pair.
fn tan_by_halves(n: u32, t: &BigRational) -> (BigRational, BigRational) {
    if n == 1 {
        return (t.clone(), BigRational::one());
    }
    let (a, b) = tan_by_halves(n / 2, t);
    let (c, d) = tan_by_halves(n - n / 2, t);
    (&a * &d + &c * &b, &b * &d - &a * &c)
}

fn criterion_8() -> Check {
    let one_plus = p(&[1, 0, 1]);
    for n in 2..=64 {
        let tp = tan_multiple(n);
        ensure!(&(&tp.p * &tp.p) + &(&tp.q * &tp.q) == one_plus.pow(n), "P² + Q² != (1 + t²)^{n}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checks = 0;
    for _ in 0..20 {
        let t = BigRational::new(rng.gen_range(-40i64..=40).into(), rng.gen_range(1i64..=40).into());
        for n in 1..=12 {
            let tp = tan_multiple(n);
            let (pn, qn) = (tp.p.eval_rational(&t), tp.q.eval_rational(&t));
            let (a, b) = tan_by_halves(n, &t);
            ensure!(!(a.is_zero() && b.is_zero()), "degenerate oracle at n = {n}");
            ensure!(&pn * &b == &qn * &a, "P_{n}/Q_{n} disagrees with the addition formula at t = {t}");
            checks += 1;
        }
    }
    Ok(format!("identity for n ≤ 64, {checks} rational evaluations"))
}

/// Random irreducible of degree `deg`: Eisenstein at a small prime, or linear.
fn random_irreducible(rng: &mut ChaCha8Rng, deg: usize) -> IntPolynomial {
    loop {
        let f = if deg == 1 {
            let a: i64 = rng.gen_range(1..=50);
            let b: i64 = rng.gen_range(-50..=50);
            p(&[b, a])
        } else {
            let pr = [2i64, 3, 5, 7][rng.gen_range(0..4)];
            let mut c = vec![0i64; deg + 1];
            c[deg] = loop {
                let a = rng.gen_range(1..=50);
                if a % pr != 0 {
                    break a;
                }
            };
            for ci in c.iter_mut().take(deg).skip(1) {
                *ci = pr * rng.gen_range(-(50 / pr)..=50 / pr);
            }
            c[0] = loop {
                let k = rng.gen_range(-(50 / pr)..=50 / pr);
                if k % pr != 0 {
                    break pr * k;
                }
            };
            p(&c)
        };
        if let Ok(g) = f.primitive_normalize() {
            return g;
        }
    }
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..100 {
        let mut expected: BTreeMap<String, u32> = BTreeMap::new();
        let mut product = IntPolynomial::one();
        let mut pool: Vec<IntPolynomial> = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            let g = if !pool.is_empty() && rng.gen_bool(0.25) {
                pool[rng.gen_range(0..pool.len())].clone()
            } else {
                let deg = rng.gen_range(1..=6);
                random_irreducible(&mut rng, deg)
            };
            product = &product * &g;
            *expected.entry(g.to_string()).or_default() += 1;
            pool.push(g);
        }
        let scale: i64 = [-6, -3, -1, 1, 2, 5][rng.gen_range(0..6)];
        let f = product.scale(&BigInt::from(scale));
        let got = factor(&f).ctx("factor")?;
        let found: BTreeMap<String, u32> = got.iter().map(|(g, m)| (g.to_string(), *m)).collect();
        ensure!(found == expected, "trial {trial}: {found:?} vs {expected:?}");
        let back = got.iter().fold(IntPolynomial::one(), |acc, (g, m)| &acc * &g.pow(*m));
        ensure!(back == product, "trial {trial}: expansion differs");
        ensure!(back == f.primitive_normalize().unwrap(), "trial {trial}: not the primitive part");
    }
    Ok("100 products factored and re-expanded exactly".into())
}

fn criterion_10() -> Check {
    let mut found = 0;
    for k in 1..=30usize {
        for z in roots_of(&cyclotomic(k))? {
            let got = z.is_root_of_unity();
            ensure!(got == RootOfUnity::Yes { order: k as u64 }, "order-{k} root reported as {got:?}");
            found += 1;
        }
    }
    for n in [4, 5] {
        let beta = solve(n, PREC).ctx("solve")?.remove(0).beta;
        ensure!(beta.is_root_of_unity() == RootOfUnity::No, "β for n = {n} reported as a root of unity");
    }
    Ok(format!("{found} primitive roots with k ≤ 30, β₄ and β₅ rejected"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("n = 4 end to end", criterion_1),
        ("n = 5 end to end", criterion_2),
        ("n = 2, 3 have no solutions", criterion_3),
        ("height identities", criterion_4),
        ("linear form identity", criterion_5),
        ("side conditions and verification", criterion_6),
        ("continued fractions", criterion_7),
        ("tangent recurrence", criterion_8),
        ("factorization", criterion_9),
        ("roots of unity", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {secs:7.2}s  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL {secs:7.2}s  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
