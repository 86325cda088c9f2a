//! Closed intervals with exact rational endpoints.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, Round};
use super::real::RealBall;

/// The closed interval `[lo, hi]`, possibly a single point.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalInterval {
    #[serde(with = "rational_str")]
    pub lo: BigRational,
    #[serde(with = "rational_str")]
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty rational interval");
        RationalInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RationalInterval { lo: x.clone(), hi: x }
    }

    /// Exact endpoints of a ball.
    pub fn from_ball(x: &RealBall) -> Self {
        RationalInterval { lo: x.lower().to_rational(), hi: x.upper().to_rational() }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn overlaps(&self, other: &RationalInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Smallest ball at `prec` bits enclosing the interval.
    pub fn to_ball(&self, prec: u32) -> RealBall {
        if self.is_point() {
            return RealBall::from_rational(&self.lo, prec);
        }
        let (lo, _) = Dyadic::round_rational(&self.lo, prec + 8, Round::Floor);
        let (hi, _) = Dyadic::round_rational(&self.hi, prec + 8, Round::Ceil);
        RealBall::from_endpoints(&lo, &hi, prec)
    }

    /// `floor(x)` if it is the same for every point of the interval.
    pub fn unique_floor(&self) -> Option<BigInt> {
        let a = self.lo.floor().to_integer();
        (a == self.hi.floor().to_integer()).then_some(a)
    }

    /// `log2` of the width rounded up, `None` for a point.
    pub fn width_log2(&self) -> Option<i64> {
        let w = self.width();
        if !w.is_positive() {
            return None;
        }
        let n = w.numer().bits() as i64;
        let d = w.denom().bits() as i64;
        Some(n - d + 1)
    }

    pub fn recip(&self) -> Option<RationalInterval> {
        if self.lo.is_positive() || self.hi.is_negative() {
            let one = BigRational::one();
            Some(RationalInterval { lo: &one / &self.hi, hi: &one / &self.lo })
        } else {
            None
        }
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

mod rational_str {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad rational {s:?}")))
    }
}
