//! Algebraic numbers as a minimal polynomial plus an isolating box.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arb::{const_pi, ln_int, max_precision, ComplexBall, Dyadic, RealBall};
use crate::error::{Error, Result};
use crate::poly::{complex_roots, factor, resultant, BivariatePolynomial, IntPolynomial, IsolatedRoot, Variable};

const START_PREC: u32 = 64;

/// A root of an irreducible integer polynomial, singled out by a box that
/// contains no other root of that polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    region: ComplexBall,
}

/// Which value the modified height assigns to `-1`.
///
/// `max{h, |Log z|, 1}` evaluated at `-1` is `π`; some computations instead
/// take `h'(-1) = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HprimeMinusOne {
    #[default]
    Pi,
    One,
}

impl HprimeMinusOne {
    pub fn value(self, prec: u32) -> RealBall {
        match self {
            HprimeMinusOne::Pi => const_pi(prec),
            HprimeMinusOne::One => RealBall::one(prec),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightReport {
    pub h: RealBall,
    pub h_mod: RealBall,
    pub degree: usize,
    #[serde(with = "bigint_string")]
    pub leading: BigInt,
    pub conjugate_moduli: Vec<RealBall>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "root_of_unity", rename_all = "lowercase")]
pub enum RootOfUnity {
    No,
    Yes { order: u64 },
}

/// A box symmetric about the real axis isolates a root equal to its own
/// conjugate, so only its real part has to fit in `hint`.
fn contains_root(hint: &ComplexBall, root_box: &ComplexBall) -> bool {
    if hint.contains(root_box) {
        return true;
    }
    root_box.im.mid().is_zero() && hint.im.contains_zero() && hint.re.contains_ball(&root_box.re)
}

fn doubled(prec: u32, what: &str) -> Result<u32> {
    if prec >= max_precision() {
        return Err(Error::PrecisionExhausted(what.to_string()));
    }
    Ok((prec * 2).min(max_precision()))
}

impl AlgebraicNumber {
    /// The root of `f` lying inside `hint`.
    ///
    /// Exactly one root of `f` (over all irreducible factors) may lie in
    /// `hint`. Root boxes are refined until each one is certainly inside or
    /// certainly outside the hint.
    pub fn make(f: &IntPolynomial, hint: &ComplexBall) -> Result<Self> {
        let factors = factor(f)?;
        if factors.is_empty() {
            return Err(Error::NoRootInHint);
        }
        let cap = max_precision().min(4096);
        let mut prec = START_PREC;
        loop {
            let mut inside = Vec::new();
            let mut undecided = false;
            for (g, _) in &factors {
                for r in complex_roots(g, prec)? {
                    if contains_root(hint, &r.region) {
                        inside.push((g, r.region));
                    } else if hint.overlaps(&r.region) {
                        undecided = true;
                    }
                }
            }
            if inside.len() > 1 {
                return Err(Error::AmbiguousHint);
            }
            if !undecided {
                return match inside.pop() {
                    Some((g, region)) => Ok(AlgebraicNumber { minpoly: g.clone(), region }),
                    None => Err(Error::NoRootInHint),
                };
            }
            if prec >= cap {
                return Err(Error::AmbiguousHint);
            }
            prec = (prec * 2).min(cap);
        }
    }

    /// The root of `f` that `approx(prec)` encloses for every `prec`.
    ///
    /// `approx` must return balls that contain the same root of `f`; the
    /// root whose box is the only one meeting the ball is selected.
    pub fn designate<F>(f: &IntPolynomial, mut approx: F) -> Result<Self>
    where
        F: FnMut(u32) -> Result<ComplexBall>,
    {
        let factors = factor(f)?;
        let mut prec = START_PREC;
        loop {
            let e = approx(prec)?;
            let mut hits = Vec::new();
            for (g, _) in &factors {
                for r in complex_roots(g, prec)? {
                    if r.region.overlaps(&e) {
                        hits.push((g, r.region));
                    }
                }
            }
            match hits.len() {
                0 => return Err(Error::InconsistentHint),
                1 => {
                    let (g, region) = hits.pop().unwrap();
                    return Ok(AlgebraicNumber { minpoly: g.clone(), region });
                }
                _ => prec = doubled(prec, "root designation")?,
            }
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let minpoly = IntPolynomial::new(vec![-q.numer().clone(), q.denom().clone()]);
        let region = ComplexBall::from_real(RealBall::from_rational(q, START_PREC));
        AlgebraicNumber { minpoly, region }
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicNumber::from_rational(&BigRational::from_integer(n.into()))
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn region(&self) -> &ComplexBall {
        &self.region
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 1 && self.minpoly.coeff(0).is_zero()
    }

    /// Boxes of real roots are symmetric about the axis; boxes of non-real
    /// roots never meet it.
    pub fn is_real(&self) -> bool {
        self.region.im.mid().is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        (self.degree() == 1).then(|| BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
    }

    fn isolated(&self) -> IsolatedRoot<ComplexBall> {
        IsolatedRoot { region: self.region.clone(), multiplicity: 1, parent: self.minpoly.clone() }
    }

    /// The same number with its box shrunk to about `2^-prec * max(1, |z|)`.
    pub fn refined(&self, prec: u32) -> Result<Self> {
        if let Some(q) = self.as_rational() {
            let re = RealBall::from_rational(&q, prec + 8);
            return Ok(AlgebraicNumber { minpoly: self.minpoly.clone(), region: ComplexBall::from_real(re) });
        }
        let region = self.isolated().refine(prec)?.region;
        Ok(AlgebraicNumber { minpoly: self.minpoly.clone(), region })
    }

    /// A box around the number with radius about `2^-prec * max(1, |z|)`.
    pub fn enclosure(&self, prec: u32) -> Result<ComplexBall> {
        Ok(self.refined(prec)?.region)
    }

    /// A real ball around a real number.
    pub fn real_enclosure(&self, prec: u32) -> Result<RealBall> {
        if !self.is_real() {
            return Err(Error::Domain("real part of a non-real number"));
        }
        Ok(self.enclosure(prec)?.re)
    }

    /// Boxes around all conjugates, this number's among them.
    pub fn conjugates(&self, prec: u32) -> Result<Vec<ComplexBall>> {
        Ok(complex_roots(&self.minpoly, prec)?.into_iter().map(|r| r.region).collect())
    }

    /// Logarithmic Weil height together with the modified height (with
    /// `h'(-1) = π`) and the conjugate moduli.
    pub fn weil_height(&self, prec: u32) -> Result<HeightReport> {
        let wp = prec + 16;
        let leading = self.minpoly.leading().unwrap().clone();
        let d = self.degree();
        let (h, moduli) = match self.as_rational() {
            Some(q) => {
                let m = q.numer().abs().max(q.denom().clone());
                let h = if m.is_one() { RealBall::zero(wp) } else { ln_int(&m, wp)? };
                (h, vec![RealBall::from_rational(&q.abs(), wp)])
            }
            None => {
                let moduli: Vec<RealBall> =
                    self.conjugates(wp)?.iter().map(|z| z.abs().with_prec(wp)).collect();
                let mut sum = ln_int(&leading, wp)?;
                for m in &moduli {
                    sum = &sum + &ln_max_one(m)?;
                }
                (sum.div_int(d as u64)?, moduli)
            }
        };
        let h_mod = if self.is_zero() { h.max(&RealBall::one(wp)) } else { self.modified_from(&h, wp)? };
        Ok(HeightReport { h, h_mod, degree: d, leading, conjugate_moduli: moduli })
    }

    /// `max{h(z), |Log z|, 1}`, except that `-1` gets the value chosen by
    /// `convention`.
    pub fn modified_height(&self, prec: u32, convention: HprimeMinusOne) -> Result<RealBall> {
        if self.is_zero() {
            return Err(Error::Domain("modified height of zero"));
        }
        if self.minpoly == IntPolynomial::from_i64s(&[1, 1]) {
            return Ok(convention.value(prec + 16));
        }
        let h = self.weil_height(prec)?.h;
        self.modified_from(&h, prec + 16)
    }

    fn modified_from(&self, h: &RealBall, wp: u32) -> Result<RealBall> {
        let log_abs = self.abs_log(wp)?;
        Ok(h.max(&log_abs).max(&RealBall::one(wp)))
    }

    /// `|Log z|` for nonzero `z`.
    pub fn abs_log(&self, prec: u32) -> Result<RealBall> {
        let e = self.enclosure(prec + 8)?;
        if self.is_real() {
            let x = e.re.with_prec(prec);
            let ln = x.abs().ln()?;
            return Ok(if x.is_negative() {
                (&ln.sqr() + &const_pi(prec).sqr()).sqrt_nonneg()
            } else {
                ln.abs()
            });
        }
        Ok(e.with_prec(prec).log()?.abs())
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self, prec: u32) -> Result<RealBall> {
        if self.is_zero() {
            return Err(Error::Domain("argument of zero"));
        }
        if self.is_real() {
            let e = self.enclosure(prec)?;
            return Ok(if e.re.is_negative() { const_pi(prec) } else { RealBall::zero(prec) });
        }
        self.enclosure(prec + 8)?.with_prec(prec).arg()
    }

    /// `z^n` as an algebraic number.
    ///
    /// The polynomial `prod (Y - z_j^n)` is built by one resultant for the
    /// odd part of `|n|` followed by Graeffe root squaring, then factored.
    pub fn power(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(AlgebraicNumber::from_int(1));
        }
        if self.is_zero() {
            return if n < 0 { Err(Error::ZeroToNegativePower) } else { Ok(self.clone()) };
        }
        if n == 1 {
            return Ok(self.clone());
        }
        if let Some(q) = self.as_rational() {
            let m = n.unsigned_abs() as u32;
            let p = BigRational::new(q.numer().pow(m), q.denom().pow(m));
            return Ok(AlgebraicNumber::from_rational(&if n < 0 { p.recip() } else { p }));
        }
        let m = n.unsigned_abs();
        let mut f = if n < 0 { self.minpoly.reverse() } else { self.minpoly.clone() };
        let twos = m.trailing_zeros();
        let odd = m >> twos;
        if odd > 1 {
            let y_minus_xk = BivariatePolynomial::from_terms(&[(0, 1, 1), (odd as usize, 0, -1)]);
            f = resultant(&BivariatePolynomial::from_x(&f), &y_minus_xk, Variable::X)?;
        }
        for _ in 0..twos {
            f = graeffe(&f);
        }
        let base = self.clone();
        AlgebraicNumber::designate(&f, |prec| {
            let e = base.enclosure(prec + 2 * (64 - m.leading_zeros()) + 8)?;
            let e = if n < 0 { e.inv()? } else { e };
            Ok(e.pow(m))
        })
    }

    /// Exact test via the cyclotomic polynomials of degree `deg z`.
    pub fn is_root_of_unity(&self) -> RootOfUnity {
        let f = &self.minpoly;
        if !f.is_monic() {
            return RootOfUnity::No;
        }
        let d = self.degree() as u64;
        // phi(k) >= sqrt(k / 2)
        let limit = (2 * d * d).max(6);
        for k in 1..=limit {
            if totient(k) == d && divides_x_pow_minus_one(f, k) {
                return RootOfUnity::Yes { order: k };
            }
        }
        RootOfUnity::No
    }

    /// Exact test for `|z| = 1`.
    ///
    /// `|z| = 1` means `1/z = conj(z)`. Both are roots of the minimal
    /// polynomial only if it is self-reciprocal; then the box of `1/z` is
    /// compared with the mirrored isolating box, which holds exactly one root.
    pub fn is_unit_modulus(&self) -> Result<bool> {
        if let Some(q) = self.as_rational() {
            return Ok(q.abs().is_one());
        }
        if self.is_real() {
            return Ok(false);
        }
        let rev = self.minpoly.reverse();
        if rev != self.minpoly && -&rev != self.minpoly {
            return Ok(false);
        }
        let mirror = self.region.conj();
        let mut prec = START_PREC;
        loop {
            let e = self.enclosure(prec)?;
            let inv = e.inv()?;
            if mirror.contains(&inv) {
                return Ok(true);
            }
            if !inv.overlaps(&e.conj()) {
                return Ok(false);
            }
            prec = doubled(prec, "unit modulus test")?;
        }
    }
}

/// `ln max{1, m}` over a ball of moduli.
fn ln_max_one(m: &RealBall) -> Result<RealBall> {
    let one = Dyadic::one();
    let prec = m.prec();
    if m.upper() <= one {
        return Ok(RealBall::zero(prec));
    }
    if m.lower() > one {
        return m.ln();
    }
    let top = RealBall::exact(m.upper(), prec).ln()?;
    Ok(RealBall::from_endpoints(&Dyadic::zero(), &top.upper(), prec))
}

/// `g` with `g(x^2) = ± f(x) f(-x)`: its roots are the squares of those of `f`.
fn graeffe(f: &IntPolynomial) -> IntPolynomial {
    let prod = f * &f.negate_var();
    let half: Vec<BigInt> = prod.coeffs().iter().step_by(2).cloned().collect();
    let g = IntPolynomial::new(half);
    if f.deg() % 2 == 1 {
        -&g
    } else {
        g
    }
}

fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Whether the monic `f` divides `x^k - 1`, via `x^k mod f`.
fn divides_x_pow_minus_one(f: &IntPolynomial, k: u64) -> bool {
    let mut acc = IntPolynomial::one();
    let x = IntPolynomial::x();
    for i in (0..64 - k.leading_zeros()).rev() {
        acc = (&acc * &acc).rem_monic(f);
        if (k >> i) & 1 == 1 {
            acc = (&acc * &x).rem_monic(f);
        }
    }
    acc.rem_monic(f) == IntPolynomial::one().rem_monic(f)
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        write!(f, "root of [{}] near {}", self.minpoly, self.region.display(12))
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraicRepr {
    minpoly: IntPolynomial,
    region: ComplexBall,
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraicRepr { minpoly: self.minpoly.clone(), region: self.region.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = AlgebraicRepr::deserialize(d)?;
        let z = AlgebraicNumber::make(&r.minpoly, &r.region).map_err(D::Error::custom)?;
        if z.minpoly != r.minpoly {
            return Err(D::Error::custom("minpoly is not irreducible and normalized"));
        }
        Ok(AlgebraicNumber { minpoly: z.minpoly, region: r.region })
    }
}

pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
