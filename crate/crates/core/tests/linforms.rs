use num_bigint::BigInt;
use proptest::prelude::*;

use dioph::algnum::{AlgebraicNumber, HprimeMinusOne};
use dioph::arb::{const_pi, ln_int, ComplexBall, RealBall};
use dioph::linforms::{bw_constant, diophantine_pair, lambda, lambda_from_arg, linear_form_height, unit_arg};
use dioph::poly::IntPolynomial;
use dioph::Error;

const PREC: u32 = 256;

fn num(c: &[i64], h: &str) -> AlgebraicNumber {
    AlgebraicNumber::make(&IntPolynomial::from_i64s(c), &ComplexBall::parse(h, 64).unwrap()).unwrap()
}

fn beta4() -> AlgebraicNumber {
    num(&[3, 0, 4, 0, 3], "0.408 +/- 0.01 + 0.913 +/- 0.01i")
}

fn beta5() -> AlgebraicNumber {
    num(&[2, 0, 1, 0, 2], "0.61 +/- 0.05 + 0.79 +/- 0.05i")
}

fn within(b: &RealBall, s: &str, tol: f64) -> bool {
    (b - &RealBall::parse(s, PREC).unwrap()).mag_upper().to_f64() <= tol
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn form_height_examples() {
    assert_eq!(linear_form_height(&ints(&[1, -1]), PREC).unwrap(), RealBall::one(PREC));
    let h = linear_form_height(&ints(&[3, -8]), PREC).unwrap();
    assert!(within(&h, "2.0794415416798359282516963643745297", 1e-30));
    assert_eq!(linear_form_height(&ints(&[0, 0]), PREC), Err(Error::AllZeroCoefficients));
}

#[test]
fn constant_examples() {
    let c21 = bw_constant(2, 1, PREC).unwrap();
    let c24 = bw_constant(2, 4, PREC).unwrap();
    assert!(within(&c21, "1255940636.548881967662", 1e-10));
    assert!(within(&c24, "643041605913.027567443052", 1e-10));
    assert!(c24.gt(&c21) && c21.is_positive());
}

#[test]
fn lambda_examples() {
    let b = beta4();
    let alpha = RealBall::from_int(5, PREC).sqrt().unwrap().atan();
    let l = lambda(&BigInt::from(1), &BigInt::from(0), &b, PREC).unwrap();
    assert_eq!(l.re, RealBall::zero(l.re.prec()));
    assert!(l.im.overlaps(&alpha));
    let l = lambda(&BigInt::from(5), &BigInt::from(1), &b, PREC).unwrap();
    assert!(within(&l.im, "-0.531875349624929020", 1e-17));
    assert!(!l.im.contains_zero());
    assert!(lambda(&BigInt::from(0), &BigInt::from(1), &b, PREC).is_err());
    assert_eq!(
        lambda(&BigInt::from(1), &BigInt::from(0), &AlgebraicNumber::from_int(2), PREC),
        Err(Error::NotUnitModulus)
    );
}

#[test]
fn certificate_examples() {
    let cert = diophantine_pair(&beta4(), PREC, HprimeMinusOne::One).unwrap();
    assert_eq!((cert.m, cert.d), (2, 4));
    assert!(within(&cert.c0, "739666318241.906669269711", 1e-9));
    assert!(within(&(&cert.tau - &cert.c0), "1", 1e-60));
    assert!(within(&cert.ln_c, "-812606506736.293336091323", 1e-9));
    // ln c = -ln(2π) - C0 ln 3 recomputed here
    let direct = &(-&const_pi(PREC).mul_2exp(1).ln().unwrap()) - &(&cert.c0 * &ln_int(&BigInt::from(3), PREC).unwrap());
    assert!(direct.overlaps(&cert.ln_c));
    assert!(cert.ln_c.contains(&cert.ln_c_lower) || cert.ln_c.lower() >= cert.ln_c_lower);
    assert!(cert.tau_upper >= cert.tau.upper());

    let pi = diophantine_pair(&beta4(), PREC, HprimeMinusOne::Pi).unwrap();
    assert!(within(&pi.c0, "2323730271496.584062107", 1e-8));

    let c5 = diophantine_pair(&beta5(), PREC, HprimeMinusOne::One).unwrap();
    assert_eq!(c5.d, 4);

    let i = num(&[1, 0, 1], "0 +/- 0.1 + 1 +/- 0.1i");
    assert_eq!(diophantine_pair(&i, PREC, HprimeMinusOne::One), Err(Error::RootOfUnity(4)));
    assert_eq!(diophantine_pair(&AlgebraicNumber::from_int(2), PREC, HprimeMinusOne::One), Err(Error::NotUnitModulus));
}

#[test]
fn certificates_nest_as_precision_grows() {
    let lo = diophantine_pair(&beta4(), 128, HprimeMinusOne::One).unwrap();
    let hi = diophantine_pair(&beta4(), 512, HprimeMinusOne::One).unwrap();
    assert!(lo.ln_c.contains_ball(&hi.ln_c) && hi.ln_c.rad() < lo.ln_c.rad());
    assert!(lo.tau.contains_ball(&hi.tau) && hi.tau.rad() < lo.tau.rad());
}

#[test]
fn lower_bound_holds_in_logs() {
    let b = beta4();
    let cert = diophantine_pair(&b, PREC, HprimeMinusOne::One).unwrap();
    let alpha = unit_arg(&b, PREC).unwrap();
    let theta = alpha.div(&const_pi(PREC).mul_2exp(1)).unwrap();
    let e = RealBall::one(PREC).exp().unwrap();
    for q in 1..=2000i64 {
        let pq = theta.mul_int(q).unique_nearest_integer().unwrap();
        let l = lambda_from_arg(&BigInt::from(q), &pq, &alpha).abs();
        let two_p = RealBall::from_int(pq * 2, PREC).abs();
        let m = RealBall::from_int(q, PREC).max(&two_p).max(&e);
        let rhs = -&(&cert.c0 * &m.ln().unwrap());
        assert!(l.ln().unwrap().gt(&rhs), "bound fails at q = {q}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn form_height_is_ln_max(q in 1i64..1_000_000, p in -1_000_000i64..1_000_000) {
        let h = linear_form_height(&ints(&[q, -2 * p]), PREC).unwrap();
        let m = q.max((2 * p).abs());
        let expect = RealBall::from_int(m, PREC).ln().unwrap().max(&RealBall::one(PREC));
        prop_assert!(h.overlaps(&expect));
    }

    #[test]
    fn lambda_matches_theta_and_is_nonzero(q in 1i64..1_000_000, dp in -2i64..=2) {
        let b = beta4();
        let alpha = unit_arg(&b, PREC).unwrap();
        let theta = alpha.div(&const_pi(PREC).mul_2exp(1)).unwrap();
        let qt = theta.mul_int(q);
        let pp = qt.unique_nearest_integer().unwrap() + dp;
        let l = lambda_from_arg(&BigInt::from(q), &pp, &alpha).abs();
        let other = (&qt - &RealBall::from_int(pp, PREC)).abs() * const_pi(PREC).mul_2exp(1);
        prop_assert!(!l.contains_zero());
        prop_assert!(l.overlaps(&other));
    }
}
