//! Certified isolation of all complex roots of a squarefree polynomial.
//!
//! Candidates come from Aberth–Ehrlich simultaneous iteration. They are
//! certified a posteriori: with Weierstrass corrections
//! `W_i = f(z_i) / (lc * prod_{j != i} (z_i - z_j))`, Gershgorin's theorem
//! applied to the Weierstrass matrix puts every root in the union of the
//! disks `|z - z_i| <= n |W_i|`, and a connected union of `k` disks holds
//! exactly `k` roots. Pairwise disjoint boxes around those disks therefore
//! isolate the roots one by one.

use num_bigint::BigInt;
use num_traits::Signed;

use super::real_roots::count_real_roots;
use super::{IntPolynomial, IsolatedRoot};
use crate::arb::{check_precision, max_precision, ComplexBall, Dyadic, Mag, RealBall};
use crate::error::{Error, Result};

const COARSE_PREC: u32 = 64;

/// All `deg f` roots of the squarefree `f`, each in its own box of radius
/// at most about `2^-prec * max(1, |z|)`.
///
/// The boxes are pairwise disjoint and the list is closed under complex
/// conjugation; boxes of real roots are symmetric about the real axis.
/// Sorted by real part, then imaginary part.
pub fn complex_roots(f: &IntPolynomial, prec: u32) -> Result<Vec<IsolatedRoot<ComplexBall>>> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let real_count = count_real_roots(f)?;
    let df = f.derivative();
    let mut z = initial_points(f, COARSE_PREC);
    aberth(f, &df, &mut z, COARSE_PREC);
    let mut wp = (prec + 32 + 2 * n as u32).max(COARSE_PREC).min(max_precision());
    loop {
        z = z.iter().map(|c| c.with_prec(wp)).collect();
        aberth(f, &df, &mut z, wp);
        if let Some(roots) = certify(f, &z, real_count, prec, wp) {
            return Ok(roots);
        }
        if wp >= max_precision() {
            return Err(Error::PrecisionExhausted(format!(
                "could not certify the roots of {f} at {wp} bits"
            )));
        }
        wp = (wp * 2).min(max_precision());
    }
}

fn point(re: Dyadic, im: Dyadic, prec: u32) -> ComplexBall {
    ComplexBall::new(RealBall::exact(re, prec), RealBall::exact(im, prec))
}

/// Points on a circle whose radius is the geometric mean of the root moduli
/// (ignoring roots at zero), rotated off the axes.
fn initial_points(f: &IntPolynomial, prec: u32) -> Vec<ComplexBall> {
    let n = f.deg();
    let (k, rest) = f.split_x_power();
    let m = n - k;
    let log2 = |c: &BigInt| c.abs().bits() as f64;
    let r = if m == 0 {
        1.0
    } else {
        2f64.powf((log2(&rest.coeff(0)) - log2(f.leading().unwrap())) / m as f64)
    };
    (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64 + 0.7;
            let re = Dyadic::from_f64(r * a.cos()).unwrap();
            let im = Dyadic::from_f64(r * a.sin()).unwrap();
            point(re, im, prec)
        })
        .collect()
}

fn log2_upper(m: Mag) -> i64 {
    m.log2_ceil().unwrap_or(i64::MIN / 4)
}

/// Gauss–Seidel Aberth iteration on exact midpoints until the corrections
/// fall below the working precision or the iteration budget runs out.
fn aberth(f: &IntPolynomial, df: &IntPolynomial, z: &mut [ComplexBall], wp: u32) {
    let n = z.len();
    let one = ComplexBall::one(wp);
    let budget = 60 + 8 * n;
    for _ in 0..budget {
        let mut converged = true;
        for i in 0..n {
            let zi = z[i].clone();
            let fz = f.eval_complex(&zi).mid();
            if fz.re.mid().is_zero() && fz.im.mid().is_zero() {
                continue;
            }
            let Ok(ratio) = fz.div(&df.eval_complex(&zi).mid()) else {
                z[i] = nudge(&zi, wp);
                converged = false;
                continue;
            };
            let ratio = ratio.mid();
            let mut s = ComplexBall::zero(wp);
            let mut clash = false;
            for (j, zj) in z.iter().enumerate() {
                if j == i {
                    continue;
                }
                match (&zi - zj).mid().inv() {
                    Ok(v) => s = (&s + &v).mid(),
                    Err(_) => clash = true,
                }
            }
            if clash {
                z[i] = nudge(&zi, wp);
                converged = false;
                continue;
            }
            let denom = (&one - &(&ratio * &s)).mid();
            let w = ratio.div(&denom).map(|w| w.mid()).unwrap_or(ratio);
            let scale = log2_upper(zi.mag_upper()).max(0);
            if log2_upper(w.mag_upper()) > scale - wp as i64 + 8 {
                converged = false;
            }
            z[i] = (&zi - &w).mid();
        }
        if converged {
            break;
        }
    }
}

fn nudge(z: &ComplexBall, wp: u32) -> ComplexBall {
    let eps = Dyadic::pow2(-(wp as i64) / 4);
    point(z.re.mid() + &eps, z.im.mid() + &eps, wp)
}

fn abs_dyadic_gt(a: &Dyadic, b: &Dyadic) -> bool {
    a.abs() > *b
}

/// Symmetrizes the approximations and certifies disjoint inclusion boxes,
/// or returns `None` when more precision is needed.
fn certify(
    f: &IntPolynomial,
    z: &[ComplexBall],
    real_count: usize,
    prec: u32,
    wp: u32,
) -> Option<Vec<IsolatedRoot<ComplexBall>>> {
    let n = z.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[a].im.mid().abs().cmp(&z[b].im.mid().abs()));
    let mut reals = Vec::new();
    let mut upper = Vec::new();
    let mut lower = 0;
    for (rank, &i) in order.iter().enumerate() {
        let c = &z[i];
        if rank < real_count {
            reals.push(c.re.mid().clone());
        } else if c.im.mid().is_positive() {
            upper.push((c.re.mid().clone(), c.im.mid().clone()));
        } else {
            lower += 1;
        }
    }
    if upper.len() != lower {
        return None;
    }
    // centers: reals, then each upper-half root followed by its conjugate
    let mut centers: Vec<(Dyadic, Dyadic)> = reals.into_iter().map(|r| (r, Dyadic::zero())).collect();
    for (re, im) in upper {
        centers.push((re.clone(), im.clone()));
        centers.push((re, -im));
    }
    let lc = ComplexBall::from_int(f.leading().unwrap().clone(), wp);
    let mut radii = Vec::with_capacity(n);
    for (i, (re, im)) in centers.iter().enumerate() {
        let c = point(re.clone(), im.clone(), wp);
        let mut den = lc.clone();
        for (j, (rj, ij)) in centers.iter().enumerate() {
            if j != i {
                den = &den * &point(re - rj, im - ij, wp);
            }
        }
        let w = f.eval_complex(&c).div(&den).ok()?;
        radii.push(w.mag_upper().mul_u64(n as u64));
    }
    // conjugate pairs share the larger radius so the boxes mirror exactly
    for k in (real_count..n).step_by(2) {
        let r = radii[k].max(radii[k + 1]);
        radii[k] = r;
        radii[k + 1] = r;
    }
    for (i, (re, im)) in centers.iter().enumerate() {
        let scale = re.abs().max(im.abs()).mag_exp().unwrap_or(0).max(0);
        if !radii[i].is_zero() && log2_upper(radii[i]) > scale - prec as i64 {
            return None;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = (radii[i].add(&radii[j])).to_dyadic();
            let (a, b) = (&centers[i], &centers[j]);
            if !abs_dyadic_gt(&(&a.0 - &b.0), &gap) && !abs_dyadic_gt(&(&a.1 - &b.1), &gap) {
                return None;
            }
        }
    }
    let mut roots: Vec<IsolatedRoot<ComplexBall>> = centers
        .into_iter()
        .zip(radii)
        .map(|((re, im), r)| IsolatedRoot {
            region: ComplexBall::new(RealBall::new(re, r, wp), RealBall::new(im, r, wp)),
            multiplicity: 1,
            parent: f.clone(),
        })
        .collect();
    roots.sort_by(|a, b| {
        a.region.re.mid().cmp(b.region.re.mid()).then_with(|| a.region.im.mid().cmp(b.region.im.mid()))
    });
    Some(roots)
}

impl IsolatedRoot<ComplexBall> {
    /// The same root in a box of radius at most about `2^-prec * max(1, |z|)`.
    ///
    /// Newton iteration from the current center, then a Krawczyk test on a
    /// small box `B`: if `K(B)` lies in `B`, `0` is not in `f'(B)`, and `B`
    /// lies in the old region, the root in `B` is the one designated before.
    pub fn refine(&self, prec: u32) -> Result<Self> {
        if self.region.is_exact() {
            return Ok(self.clone());
        }
        let f = self.parent.squarefree_part()?;
        let df = f.derivative();
        let mut wp = (prec + 32).max(COARSE_PREC);
        loop {
            check_precision(wp, "complex root refinement")?;
            if let Some(region) = krawczyk(&f, &df, &self.region, prec, wp) {
                return Ok(IsolatedRoot { region, multiplicity: self.multiplicity, parent: self.parent.clone() });
            }
            // Newton from the center can drift to a neighbouring root when
            // roots cluster; isolate them all and keep the one in our box.
            if let Some(region) = reisolate(&f, &self.region, prec)? {
                return Ok(IsolatedRoot { region, multiplicity: self.multiplicity, parent: self.parent.clone() });
            }
            if wp >= max_precision() {
                return Err(Error::PrecisionExhausted("complex root refinement".into()));
            }
            wp = (wp * 2).min(max_precision());
        }
    }
}

fn reisolate(f: &IntPolynomial, region: &ComplexBall, prec: u32) -> Result<Option<ComplexBall>> {
    let roots = complex_roots(f, prec)?;
    let touching: Vec<&ComplexBall> = roots.iter().map(|r| &r.region).filter(|b| b.overlaps(region)).collect();
    match touching.as_slice() {
        [only] if region.contains(only) => Ok(Some((*only).clone())),
        _ => Ok(None),
    }
}

fn krawczyk(
    f: &IntPolynomial,
    df: &IntPolynomial,
    region: &ComplexBall,
    prec: u32,
    wp: u32,
) -> Option<ComplexBall> {
    let real = region.im.mid().is_zero();
    let mut c = region.mid().with_prec(wp);
    let mut step = Mag::ZERO;
    for _ in 0..(wp.ilog2() as usize + 8) {
        let d = df.eval_complex(&c).mid();
        let Ok(w) = f.eval_complex(&c).mid().div(&d) else { break };
        let w = w.mid();
        step = w.mag_upper();
        c = (&c - &w).mid();
        if real {
            c = point(c.re.mid().clone(), Dyadic::zero(), wp);
        }
        let scale = log2_upper(c.mag_upper()).max(0);
        if step.is_zero() || log2_upper(step) < scale - wp as i64 + 4 {
            break;
        }
    }
    let scale = log2_upper(c.mag_upper()).max(0);
    let floor = Mag::pow2(scale - wp as i64 + 8);
    let r = step.mul_u64(4).add(&floor);
    let target = Mag::pow2(scale - prec as i64);
    if r > target {
        return None;
    }
    let b = c.add_error(r);
    if !region.contains(&b) {
        return None;
    }
    let dc = df.eval_complex(&c);
    let db = df.eval_complex(&b);
    if db.contains_zero() {
        return None;
    }
    let newton = f.eval_complex(&c).div(&dc).ok()?;
    let slope = &ComplexBall::one(wp) - &db.div(&dc).ok()?;
    let k = &(&c - &newton) + &(&slope * &(&b - &c));
    if !b.contains(&k) {
        return None;
    }
    // a real root of a real polynomial keeps a box symmetric about the axis
    let k = if real {
        let im = k.im.mag_upper();
        ComplexBall::new(k.re, RealBall::new(Dyadic::zero(), im, wp))
    } else {
        k
    };
    Some(k)
}
