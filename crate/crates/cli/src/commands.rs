use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use dioph::algnum::{AlgebraicNumber, HprimeMinusOne};
use dioph::arb::{const_pi, max_precision, ComplexBall, Mag, RealBall};
use dioph::gutkin::{self, ClassifyConfig};
use dioph::poly::IntPolynomial;
use dioph::rational_approx::{cf_expand, cf_of_rational, empirical_mu, ContinuedFractionExpansion};
use dioph::{Error, Result};

use crate::cache;
use crate::report::{exit, Outcome, ReportEnvelope, VERSION};
use crate::{Command, Convention, GlobalOpts};

struct Request {
    name: &'static str,
    inputs: Value,
    convention: Convention,
}

fn describe(cmd: &Command, g: &GlobalOpts) -> Request {
    let (name, inputs, default) = match cmd {
        Command::Solve { n } => ("solve", json!({ "n": n }), Convention::One),
        Command::Analyze { n, index, qmax, terms, fold } => (
            "analyze",
            json!({ "n": n, "index": index, "qmax": qmax, "terms": terms, "fold": fold }),
            Convention::One,
        ),
        Command::Height { poly, hint } => ("height", json!({ "poly": poly, "hint": hint }), Convention::Pi),
        Command::Cf { gutkin, poly, hint, terms } => (
            "cf",
            json!({ "gutkin": gutkin, "poly": poly, "hint": hint, "terms": terms }),
            Convention::One,
        ),
    };
    Request { name, inputs, convention: g.hprime_minus_one.unwrap_or(default) }
}

fn convention_label(c: Convention) -> &'static str {
    match c {
        Convention::One => "1",
        Convention::Pi => "pi",
    }
}

pub fn cache_key(cmd: &Command, g: &GlobalOpts) -> String {
    let r = describe(cmd, g);
    let canonical = json!({
        "command": r.name,
        "inputs": r.inputs,
        "precision_bits": g.prec_bits,
        "max_precision": max_precision(),
        "hprime_convention": convention_label(r.convention),
        "version": VERSION,
    });
    cache::key_digest(&canonical.to_string())
}

pub fn run(cmd: &Command, g: &GlobalOpts) -> Result<Outcome> {
    let req = describe(cmd, g);
    let prec = g.prec_bits;
    let conv: HprimeMinusOne = req.convention.into();
    let (payload, summary, code) = match cmd {
        Command::Solve { n } => solve(*n, prec)?,
        Command::Analyze { n, index, qmax, terms, fold } => {
            let config = ClassifyConfig { prec, qmax: *qmax, terms: *terms, convention: conv, fold: *fold };
            analyze(*n, *index, &config)?
        }
        Command::Height { poly, hint } => height(poly, hint, prec, conv)?,
        Command::Cf { gutkin, poly, hint, terms } => match (gutkin, poly, hint) {
            (Some(pair), _, _) => {
                let (n, index) = parse_pair(pair)?;
                cf_gutkin(n, index, *terms, prec)?
            }
            (None, Some(poly), Some(hint)) => cf_point(poly, hint, *terms, prec)?,
            _ => return Err(Error::InvalidInput("cf needs --gutkin or both --poly and --hint".into())),
        },
    };
    let envelope = ReportEnvelope {
        command: req.name.into(),
        inputs: req.inputs,
        precision_bits: prec,
        hprime_convention: convention_label(req.convention).into(),
        version: VERSION.into(),
        payload,
        summary,
    };
    Ok(Outcome { envelope, code })
}

type Produced = (Value, String, u8);

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn degree_n(n: i64) -> Result<u32> {
    u32::try_from(n)
        .ok()
        .filter(|&n| n >= 2)
        .ok_or_else(|| Error::InvalidInput(format!("n must be an integer >= 2, got {n}")))
}

fn parse_pair(s: &str) -> Result<(u32, usize)> {
    let bad = || Error::InvalidInput(format!("expected N,INDEX, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let n: i64 = a.trim().parse().map_err(|_| bad())?;
    let index = b.trim().parse().map_err(|_| bad())?;
    Ok((degree_n(n)?, index))
}

fn parse_poly(s: &str) -> Result<IntPolynomial> {
    let f: IntPolynomial = s.parse()?;
    if f.degree().unwrap_or(0) < 1 {
        return Err(Error::InvalidInput(format!("polynomial {s:?} has no roots")));
    }
    Ok(f)
}

/// Parses a hint. Without an explicit `+/- r`, each part gets a radius of
/// one unit in the finest decimal place written.
pub fn parse_hint(s: &str, prec: u32) -> Result<ComplexBall> {
    let ball = ComplexBall::parse(s, prec)?;
    if s.contains("+/-") || s.contains('±') {
        return Ok(ball);
    }
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    let places = mantissa
        .split(|c: char| !(c.is_ascii_digit() || c == '.'))
        .filter_map(|tok| tok.split_once('.').map(|(_, frac)| frac.len()))
        .max()
        .unwrap_or(0);
    let unit = BigRational::new(BigInt::from(1), BigInt::from(10).pow(places as u32));
    let r = Mag::from_dyadic_upper(&RealBall::from_rational(&unit, 64).upper());
    Ok(ComplexBall::new(ball.re.add_error(r), ball.im.add_error(r)))
}

fn fmt(b: &RealBall) -> String {
    b.display(18)
}

fn fmt_c(z: &ComplexBall) -> String {
    z.display(18)
}

fn solve(n: i64, prec: u32) -> Result<Produced> {
    let n = degree_n(n)?;
    let sols = gutkin::solve_with_diagnostics(n, prec)?;
    let mut s = format!("n = {n}: {} solution(s) in (0, π/2)\n", sols.solutions.len());
    for (i, sol) in sols.solutions.iter().enumerate() {
        s += &format!(
            "  [{i}] t minpoly {}  t ≈ {}\n      α ≈ {}\n      β minpoly {}  β ≈ {}\n      θ ≈ {}\n",
            sol.t.minpoly(),
            fmt(&sol.t.real_enclosure(prec)?),
            fmt(&sol.alpha),
            sol.beta.minpoly(),
            fmt_c(sol.beta.region()),
            fmt(&sol.theta),
        );
    }
    for e in &sols.excluded {
        s += &format!("  excluded root of {} near {}: {}\n", e.minpoly, fmt(&e.approx), e.reason);
    }
    let code = if sols.solutions.is_empty() { exit::NO_SOLUTIONS } else { exit::OK };
    Ok((to_value(&sols), s, code))
}

fn analyze(n: i64, index: usize, config: &ClassifyConfig) -> Result<Produced> {
    let n = degree_n(n)?;
    let r = gutkin::classify(n, index, config)?;
    let v = &r.verification;
    let mut s = format!("n = {n}, solution {index}\n");
    s += &format!("  t minpoly    {}\n", r.solution.t.minpoly());
    s += &format!("  α            {}\n", fmt(&r.solution.alpha));
    s += &format!("  θ = α/2π     {}\n", fmt(&r.solution.theta));
    s += &format!("  β minpoly    {}  (degree {})\n", r.solution.beta.minpoly(), r.height.degree);
    s += &format!("  h(β)         {}\n", fmt(&r.height.h));
    s += &format!("  unit modulus {}, root of unity: {:?}\n", r.premises.unit_modulus, r.premises.root_of_unity);
    s += &format!("  C(2,{})       {}\n", r.cert.d, fmt(&r.cert.c_md));
    s += &format!("  ln c         {}\n", fmt(&r.cert.ln_c));
    s += &format!("  τ            {}\n", fmt(&r.cert.tau));
    s += &format!("  CF           {}\n", render_cf(&r.cf, 24));
    s += &format!(
        "  check q ≤ {} (+{} convergents): {}\n",
        v.qmax,
        v.convergents_checked,
        if v.passed { "passed" } else { "FAILED" }
    );
    if let Some(w) = &v.worst_ratio {
        s += &format!("  worst ln ratio {} at q = {}\n", fmt(w), v.worst_q);
    }
    if !v.side_conditions_hold {
        s += &format!("  side conditions fail at q = {:?}\n", v.side_condition_failures);
    }
    for d in &r.deductions {
        s += &format!("  {} [{}]\n", d.claim, d.theorem);
    }
    let code = if v.passed { exit::OK } else { exit::NOT_VERIFIED };
    Ok((to_value(&r), s, code))
}

fn height(poly: &str, hint: &str, prec: u32, conv: HprimeMinusOne) -> Result<Produced> {
    let f = parse_poly(poly)?;
    let z = AlgebraicNumber::make(&f, &parse_hint(hint, prec)?)?;
    let mut report = z.weil_height(prec)?;
    if conv != HprimeMinusOne::Pi {
        report.h_mod = z.modified_height(prec, conv)?;
    }
    let s = format!(
        "root of {} near {}\n  degree {}, leading {}\n  h  = {}\n  h' = {}\n",
        z.minpoly(),
        fmt_c(z.region()),
        report.degree,
        report.leading,
        fmt(&report.h),
        fmt(&report.h_mod),
    );
    let payload = json!({ "number": to_value(&z), "height": to_value(&report) });
    Ok((payload, s, exit::OK))
}

fn cf_gutkin(n: u32, index: usize, terms: usize, prec: u32) -> Result<Produced> {
    let mut all = gutkin::solve(n, prec)?;
    if index >= all.len() {
        return Err(Error::NoSuchSolution { index, count: all.len() });
    }
    let sol = all.swap_remove(index);
    let theta = |p: u32| sol.theta_at(p);
    let cf = cf_expand(&sol.theta, terms, theta)?;
    let label = format!("θ = α/2π for n = {n}, solution {index}");
    cf_report(&sol.theta, cf, label)
}

fn cf_point(poly: &str, hint: &str, terms: usize, prec: u32) -> Result<Produced> {
    let f = parse_poly(poly)?;
    let z = AlgebraicNumber::make(&f, &parse_hint(hint, prec)?)?;
    if z.is_zero() {
        return Err(Error::InvalidInput("Arg(0) is undefined".into()));
    }
    let label = format!("θ = Arg(z)/2π for the root of {} near {}", z.minpoly(), fmt_c(z.region()));
    if z.is_real() {
        let half = if z.real_enclosure(prec)?.is_negative() { (1, 2) } else { (0, 1) };
        let q = BigRational::new(BigInt::from(half.0), BigInt::from(half.1));
        let cf = truncate(cf_of_rational(&q), terms);
        return cf_report(&RealBall::from_rational(&q, prec), cf, label);
    }
    let theta = |p: u32| -> Result<RealBall> { z.arg(p)?.div(&const_pi(p).mul_2exp(1)) };
    let start = theta(prec)?;
    let cf = cf_expand(&start, terms, theta)?;
    cf_report(&start, cf, label)
}

fn truncate(mut cf: ContinuedFractionExpansion, terms: usize) -> ContinuedFractionExpansion {
    if cf.quotients.len() > terms {
        cf.quotients.truncate(terms);
        cf.convergents.truncate(terms);
        cf.certified_terms = terms;
        cf.terminated = false;
    }
    cf
}

fn cf_report(theta: &RealBall, cf: ContinuedFractionExpansion, label: String) -> Result<Produced> {
    let mu = empirical_mu(theta, &cf);
    let mut s = format!("{label}\n  θ ≈ {}\n", fmt(theta));
    s += &format!("  {} certified term(s){}\n", cf.certified_terms, if cf.terminated { ", terminates" } else { "" });
    s += &format!("  {}\n", render_cf(&cf, cf.quotients.len()));
    if let Some(last) = cf.convergents.last() {
        s += &format!("  last convergent {}/{}\n", last.p, last.q);
    }
    let payload = json!({ "theta": to_value(theta), "cf": to_value(&cf), "mu_estimates": to_value(&mu) });
    Ok((payload, s, exit::OK))
}

fn render_cf(cf: &ContinuedFractionExpansion, limit: usize) -> String {
    let q = &cf.quotients;
    if q.is_empty() {
        return "[]".into();
    }
    let rest: Vec<String> = q[1..q.len().min(limit)].iter().map(|a| a.to_string()).collect();
    let more = if q.len() > limit { ", ..." } else { "" };
    format!("[{}; {}{more}]", q[0], rest.join(", "))
}
