//! Low-precision unsigned upper bounds used for ball radii.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::dyadic::Dyadic;

const MAG_BITS: u32 = 30;

/// A non-negative magnitude `man * 2^exp` with a short mantissa.
///
/// Every operation rounds away from zero (upward), so a `Mag` produced by
/// arithmetic on upper bounds is again an upper bound. The `_lower` helpers
/// round downward instead and are used only for denominators.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    fn from_parts_up(mut man: u128, mut exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - man.leading_zeros();
        if bits > MAG_BITS {
            let shift = bits - MAG_BITS;
            let lost = man & ((1u128 << shift) - 1);
            man >>= shift;
            exp += shift as i64;
            if lost != 0 {
                man += 1;
                if man >> MAG_BITS != 0 {
                    man >>= 1;
                    exp += 1;
                }
            }
        } else {
            let shift = MAG_BITS - bits;
            man <<= shift;
            exp -= shift as i64;
        }
        Mag { man: man as u64, exp }
    }

    fn from_parts_down(mut man: u128, mut exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - man.leading_zeros();
        if bits > MAG_BITS {
            let shift = bits - MAG_BITS;
            man >>= shift;
            exp += shift as i64;
        } else {
            let shift = MAG_BITS - bits;
            man <<= shift;
            exp -= shift as i64;
        }
        Mag { man: man as u64, exp }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::from_parts_up(v as u128, 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Mag {
        Mag::from_parts_up(1, e)
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    /// Upper bound for `|x|`.
    pub fn from_dyadic_upper(x: &Dyadic) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        let m = x.mantissa().abs();
        let bits = m.bits();
        if bits <= 100 {
            return Mag::from_parts_up(to_u128(&m), x.exponent());
        }
        let shift = bits - 100;
        let top = to_u128(&(&m >> shift as usize)) + 1;
        Mag::from_parts_up(top, x.exponent() + shift as i64)
    }

    /// Lower bound for `|x|`.
    pub fn from_dyadic_lower(x: &Dyadic) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        let m = x.mantissa().abs();
        let bits = m.bits();
        if bits <= 100 {
            return Mag::from_parts_down(to_u128(&m), x.exponent());
        }
        let shift = bits - 100;
        let top = to_u128(&(&m >> shift as usize));
        Mag::from_parts_down(top, x.exponent() + shift as i64)
    }

    pub fn to_dyadic(&self) -> Dyadic {
        Dyadic::new(BigInt::from(self.man), self.exp)
    }

    pub fn add(&self, other: &Mag) -> Mag {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let diff = hi.exp - lo.exp;
        if diff > 60 {
            // lo is below one unit of the last place of hi: bump hi by one unit
            return Mag::from_parts_up(hi.man as u128 + 1, hi.exp);
        }
        let a = (hi.man as u128) << diff;
        Mag::from_parts_up(a + lo.man as u128, lo.exp)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Mag::from_parts_up(self.man as u128 * other.man as u128, self.exp + other.exp)
    }

    /// Upper bound for `self / other`; `other` must be nonzero.
    pub fn div(&self, other: &Mag) -> Mag {
        assert!(!other.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let num = (self.man as u128) << 64;
        let q = num.div_ceil(other.man as u128);
        Mag::from_parts_up(q, self.exp - other.exp - 64)
    }

    pub fn mul_u64(&self, k: u64) -> Mag {
        Mag::from_parts_up(self.man as u128 * k as u128, self.exp)
    }

    pub fn mul_2exp(&self, e: i64) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        Mag { man: self.man, exp: self.exp + e }
    }

    /// Upper bound for `self - other`, clamped at zero (`other` must be a lower bound).
    pub fn sub_lower_bound(&self, other: &Mag) -> Mag {
        let d = &self.to_dyadic() - &other.to_dyadic();
        if d.is_negative() {
            Mag::ZERO
        } else {
            Mag::from_dyadic_upper(&d)
        }
    }

    pub fn max(self, other: Mag) -> Mag {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Smallest `e` with `self <= 2^e`; `None` for zero.
    pub fn log2_ceil(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let bits = 64 - self.man.leading_zeros() as i64;
        let exact_pow = self.man.is_power_of_two();
        Some(self.exp + bits - if exact_pow { 1 } else { 0 })
    }

    pub fn to_f64(&self) -> f64 {
        self.man as f64 * 2f64.powi(self.exp.clamp(-2000, 2000) as i32)
    }
}

fn to_u128(m: &BigInt) -> u128 {
    let (_, digits) = m.to_u64_digits();
    let mut v: u128 = 0;
    for (i, d) in digits.iter().enumerate().take(2) {
        v |= (*d as u128) << (64 * i);
    }
    v
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            // normalized mantissas share the same bit length
            _ => self.exp.cmp(&other.exp).then(self.man.cmp(&other.man)),
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}
