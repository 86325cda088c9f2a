//! Real root isolation by Sturm sequences over exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{sign, IntPolynomial, IsolatedRoot};
use crate::arb::{RationalInterval, RealBall};
use crate::error::Result;

/// Sturm sequence of a squarefree polynomial, each member made primitive.
#[derive(Clone, Debug)]
pub(crate) struct Sturm {
    seq: Vec<IntPolynomial>,
}

impl Sturm {
    pub fn new(g: &IntPolynomial) -> Self {
        let mut seq = vec![g.clone(), g.derivative()];
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.is_constant() {
                break;
            }
            // prem multiplies by lc(b)^(da - db + 1); undo its sign
            let mut r = a.pseudo_rem(b);
            let lc = b.leading().unwrap();
            let odd = (a.deg() - b.deg() + 1) % 2 == 1;
            if !(lc.is_negative() && odd) {
                r = -&r;
            }
            if r.is_zero() {
                break;
            }
            let c = r.content();
            seq.push(r.div_scalar_exact(&c));
        }
        Sturm { seq }
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Sturm::variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_infinity(&self, negative: bool) -> usize {
        Sturm::variations(self.seq.iter().map(|p| {
            let s = sign(p.leading().unwrap());
            if negative && p.deg() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(true) - self.variations_at_infinity(false)
    }
}

/// Number of distinct real roots of `f`.
pub fn count_real_roots(f: &IntPolynomial) -> Result<usize> {
    let g = f.squarefree_part()?;
    if g.is_constant() {
        return Ok(0);
    }
    Ok(Sturm::new(&g).count_all())
}

/// A power of two strictly larger than the modulus of every root.
pub(crate) fn root_bound_log2(f: &IntPolynomial) -> i64 {
    let lc = f.leading().unwrap().abs();
    let max = f.coeffs()[..f.deg()].iter().map(|c| c.abs()).max().unwrap_or_default();
    // Cauchy: |x| < 1 + max |c_i| / |lc|
    (max.bits() as i64 - lc.bits() as i64 + 2).max(1)
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

/// All distinct real roots of `f`, in increasing order.
///
/// Each region is either an exact point or an interval whose endpoints are
/// not roots of `f`; the closed regions are pairwise disjoint. Multiplicities come from the
/// squarefree decomposition.
pub fn real_roots(f: &IntPolynomial) -> Result<Vec<IsolatedRoot<RationalInterval>>> {
    let parts = f.squarefree_decomposition()?;
    let g = f.squarefree_part()?;
    if g.is_constant() {
        return Ok(Vec::new());
    }
    let sturm = Sturm::new(&g);
    let b = BigRational::from_integer(BigInt::one() << root_bound_log2(&g) as usize);
    let mut stack = vec![(-b.clone(), b, sturm.count_all())];
    let mut found = Vec::new();
    while let Some((lo, hi, n)) = stack.pop() {
        match n {
            0 => {}
            1 => found.push(shrink_lower_end(&g, &sturm, lo, hi)),
            _ => {
                let mid = (&lo + &hi) / two();
                let left = sturm.count(&lo, &mid);
                stack.push((mid.clone(), hi, n - left));
                stack.push((lo, mid, left));
            }
        }
    }
    found.sort_by(|a, b| a.lo.cmp(&b.lo));
    // neighbours from one bisection share an endpoint; pull them apart
    for i in 1..found.len() {
        while found[i - 1].hi >= found[i].lo {
            let next = bisect_once(&g, &found[i - 1]);
            found[i - 1] = next;
        }
    }
    let sturms: Vec<(Sturm, &IntPolynomial, u32)> =
        parts.iter().map(|(h, m)| (Sturm::new(h), h, *m)).collect();
    Ok(found
        .into_iter()
        .map(|region| {
            let multiplicity = sturms
                .iter()
                .find(|(s, h, _)| {
                    if region.is_point() {
                        h.sign_at(&region.lo) == 0
                    } else {
                        s.count(&region.lo, &region.hi) == 1
                    }
                })
                .map(|(_, _, m)| *m)
                .expect("each root belongs to one squarefree factor");
            IsolatedRoot { region, multiplicity, parent: f.clone() }
        })
        .collect())
}

/// Halves an open isolating interval with a sign change of `g`.
fn bisect_once(g: &IntPolynomial, iv: &RationalInterval) -> RationalInterval {
    let mid = iv.midpoint();
    match g.sign_at(&mid) {
        0 => RationalInterval::point(mid),
        s if s == g.sign_at(&iv.lo) => RationalInterval::new(mid, iv.hi.clone()),
        _ => RationalInterval::new(iv.lo.clone(), mid),
    }
}

/// Turns an interval `(lo, hi]` holding exactly one root of `g` into an
/// exact point (when `hi` is the root) or an open interval whose endpoints
/// are not roots.
fn shrink_lower_end(g: &IntPolynomial, sturm: &Sturm, mut lo: BigRational, hi: BigRational) -> RationalInterval {
    if g.sign_at(&hi) == 0 {
        return RationalInterval::point(hi);
    }
    let mut hi = hi;
    while g.sign_at(&lo) == 0 {
        let mid = (&lo + &hi) / two();
        if sturm.count(&lo, &mid) == 0 {
            lo = mid;
        } else if g.sign_at(&mid) == 0 {
            return RationalInterval::point(mid);
        } else {
            hi = mid;
        }
    }
    RationalInterval::new(lo, hi)
}

impl IsolatedRoot<RationalInterval> {
    /// Squarefree polynomial with the root as a simple zero.
    fn simple_poly(&self) -> IntPolynomial {
        self.parent.squarefree_part().expect("parent is nonzero")
    }

    /// Shrinks the isolating interval to width at most `2^-bits`.
    ///
    /// Uses bisection, accelerated by Newton steps whose result is accepted
    /// only after a sign change certifies it.
    pub fn refine(&mut self, bits: u32) {
        if self.region.is_point() {
            return;
        }
        let g = self.simple_poly();
        let dg = g.derivative();
        let target = -(bits as i64);
        let mut lo = self.region.lo.clone();
        let mut hi = self.region.hi.clone();
        let s_lo = g.sign_at(&lo);
        debug_assert!(s_lo != 0 && s_lo == -g.sign_at(&hi));
        loop {
            let iv = RationalInterval::new(lo.clone(), hi.clone());
            let w = iv.width_log2().unwrap();
            if w <= target {
                break;
            }
            if let Some((a, b)) = newton_step(&g, &dg, &lo, &hi, s_lo, w) {
                lo = a;
                hi = b;
                continue;
            }
            let mid = iv.midpoint();
            let s = g.sign_at(&mid);
            if s == 0 {
                self.region = RationalInterval::point(mid);
                return;
            }
            if s == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.region = RationalInterval::new(lo, hi);
    }

    /// Ball enclosure with radius at most about `2^-prec`.
    pub fn to_ball(&mut self, prec: u32) -> RealBall {
        self.refine(prec + 1);
        self.region.to_ball(prec + 8)
    }
}

/// One Newton step from the midpoint, snapped to a dyadic grid of spacing
/// `2^(2w - 2)`, verified by a sign change on the grid cell around it.
fn newton_step(
    g: &IntPolynomial,
    dg: &IntPolynomial,
    lo: &BigRational,
    hi: &BigRational,
    s_lo: i32,
    w: i64,
) -> Option<(BigRational, BigRational)> {
    if w > -4 {
        return None;
    }
    let x = (lo + hi) / two();
    let d = dg.eval_rational(&x);
    if d.is_zero() {
        return None;
    }
    let x1 = &x - g.eval_rational(&x) / d;
    let e = (2 * w - 2).max(-(1 << 24));
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize);
    let c = (&x1 / &eps).round() * &eps;
    let a = &c - &eps;
    let b = &c + &eps;
    if &a <= lo || &b >= hi {
        return None;
    }
    let sa = g.sign_at(&a);
    let sb = g.sign_at(&b);
    (sa == s_lo && sb == -s_lo).then_some((a, b))
}
