//! Factorization over the rationals (Zassenhaus).
//!
//! A squarefree primitive polynomial is factored modulo a small prime by
//! distinct-degree and equal-degree splitting, the modular factors are
//! Hensel-lifted past a Mignotte-type coefficient bound, and true factors
//! are recovered by trying products of subsets of the lifted factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{self, Field};
use super::IntPolynomial;
use crate::error::{Error, Result};

/// Number of admissible primes tried before the one giving the fewest
/// modular factors is kept.
const PRIME_CANDIDATES: usize = 6;

/// Factors `f` into irreducibles over the rationals.
///
/// Returns `(factor, multiplicity)` pairs whose product equals
/// `primitive_normalize(f)` exactly. Factors are primitive with positive
/// leading coefficient and sorted by degree, then by their ascending
/// coefficient lists. Constants (degree 0) yield an empty list.
pub fn factor(f: &IntPolynomial) -> Result<Vec<(IntPolynomial, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (g, mult) in f.squarefree_decomposition()? {
        let (k, rest) = g.split_x_power();
        if k > 0 {
            out.push((IntPolynomial::x(), mult));
        }
        if rest.deg() > 0 {
            out.extend(factor_squarefree(&rest).into_iter().map(|h| (h, mult)));
        }
    }
    out.sort_by(|(a, _), (b, _)| cmp_poly(a, b));
    Ok(out)
}

/// Degree first, then ascending coefficient lists compared lexicographically.
pub(crate) fn cmp_poly(a: &IntPolynomial, b: &IntPolynomial) -> std::cmp::Ordering {
    a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs()))
}

/// Irreducible factors of a squarefree primitive `f` with positive leading
/// coefficient and `f(0) != 0`.
fn factor_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let n = f.deg();
    if n <= 1 {
        return vec![f.clone()];
    }
    let (field, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let p = BigInt::from(field.p);
    let bound = coefficient_bound(f);
    let mut k = 1u32;
    let mut m = p.clone();
    while m <= &bound * 2 {
        m *= &p;
        k += 1;
    }
    let lifted = hensel_multi(f, &modular, field, k);
    recombine(f, lifted, &m)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Odd primes not dividing the leading coefficient and keeping `f`
/// squarefree are admissible; among the first few, the one with the fewest
/// modular factors wins (ties go to the smaller prime).
fn choose_prime(f: &IntPolynomial) -> (Field, Vec<modp::Poly>) {
    let lc = f.leading().unwrap();
    let mut best: Option<(Field, Vec<modp::Poly>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < PRIME_CANDIDATES {
        p += 1;
        if !is_prime(p) || (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let field = Field::new(p);
        let fp = field.reduce(f);
        if !field.is_squarefree(&fp) {
            continue;
        }
        tried += 1;
        let monic = field.monic(&fp);
        let ddf = field.distinct_degree(&monic);
        let count: usize = ddf.iter().map(|(g, d)| modp::deg(g).unwrap() / d).sum();
        if best.as_ref().is_some_and(|(_, b)| b.len() <= count) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ p);
        let mut factors = Vec::with_capacity(count);
        for (g, d) in ddf {
            factors.extend(field.equal_degree(&g, d, &mut rng));
        }
        factors.sort();
        let irreducible = factors.len() == 1;
        best = Some((field, factors));
        if irreducible {
            break;
        }
    }
    best.expect("some prime is admissible")
}

/// `|lc| * 2^n * ||f||_2`, which bounds the coefficients of `lc(f)/lc(h) * h`
/// for every factor `h` of `f`.
fn coefficient_bound(f: &IntPolynomial) -> BigInt {
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    f.leading().unwrap().abs() * (BigInt::one() << f.deg()) * norm
}

fn lift_mod(a: &[u64]) -> IntPolynomial {
    IntPolynomial::new(a.iter().map(|&c| BigInt::from(c)).collect())
}

fn reduce_mod(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    IntPolynomial::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

/// Lifts `lc(g) * a0 * b0 = g (mod p)` with monic coprime `a0`, `b0` to
/// monic `A`, `B` satisfying `lc(g) * A * B = g (mod p^k)`.
fn hensel_lift2(
    g: &IntPolynomial,
    a0: &[u64],
    b0: &[u64],
    field: Field,
    k: u32,
) -> (IntPolynomial, IntPolynomial) {
    let (one, s, t) = field.ext_gcd(a0, b0);
    debug_assert_eq!(one, vec![1]);
    let lc = g.leading().unwrap().clone();
    let lc_inv = field.inv(field.reduce_int(&lc));
    let p = BigInt::from(field.p);
    let mut a = lift_mod(a0);
    let mut b = lift_mod(b0);
    let mut pj = p.clone();
    for _ in 1..k {
        let err = g - &(&a * &b).scale(&lc);
        let e: Vec<BigInt> = err
            .coeffs()
            .iter()
            .map(|c| {
                debug_assert!((c % &pj).is_zero());
                c / &pj
            })
            .collect();
        let e = field.poly_scale(&field.reduce(&IntPolynomial::new(e)), lc_inv);
        let (q, da) = field.poly_divrem(&field.poly_mul(&t, &e), a0);
        let db = field.poly_add(&field.poly_mul(&s, &e), &field.poly_mul(&q, b0));
        a = &a + &lift_mod(&da).scale(&pj);
        b = &b + &lift_mod(&db).scale(&pj);
        pj *= &p;
    }
    (a, b)
}

/// Lifts the full modular factorization of `g` to monic factors mod `p^k`.
fn hensel_multi(g: &IntPolynomial, factors: &[modp::Poly], field: Field, k: u32) -> Vec<IntPolynomial> {
    if factors.len() == 1 {
        let m = BigInt::from(field.p).pow(k);
        let inv = g.leading().unwrap().extended_gcd(&m).x;
        return vec![reduce_mod(&g.scale(&inv), &m)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let prod = |fs: &[modp::Poly]| fs.iter().fold(vec![1u64], |acc, h| field.poly_mul(&acc, h));
    let (a, b) = hensel_lift2(g, &prod(left), &prod(right), field, k);
    let mut out = hensel_multi(&a, left, field, k);
    out.extend(hensel_multi(&b, right, field, k));
    out
}

/// Symmetric residue of every coefficient modulo `m`.
fn centered(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    let half = m / 2;
    IntPolynomial::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn recombine(f: &IntPolynomial, mut lifted: Vec<IntPolynomial>, m: &BigInt) -> Vec<IntPolynomial> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let lc = g.leading().unwrap().clone();
        let target0 = &lc * g.coeff(0);
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            // constant-term test avoids most full trial divisions
            let c0 = subset.iter().fold(lc.clone(), |acc, &i| (acc * lifted[i].coeff(0)).mod_floor(m));
            let c0 = centered(&IntPolynomial::constant(c0), m).coeff(0);
            if !c0.is_zero() && (&target0 % &c0).is_zero() {
                let cand = subset
                    .iter()
                    .fold(IntPolynomial::constant(lc.clone()), |acc, &i| reduce_mod(&(&acc * &lifted[i]), m));
                let h = centered(&cand, m).primitive();
                if let Some(q) = g.div_exact(&h) {
                    out.push(h);
                    g = q;
                    for &i in subset.iter().rev() {
                        lifted.remove(i);
                    }
                    continue 'outer;
                }
            }
            if !next_subset(&mut subset, lifted.len()) {
                break;
            }
        }
        size += 1;
    }
    if g.deg() > 0 {
        out.push(g.primitive());
    }
    out
}

/// Advances to the next `k`-subset of `0..n` in lexicographic order.
fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
