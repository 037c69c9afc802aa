//! Exact dyadic rationals `n / 2^e`, the capital type of every martingale.
//!
//! Only addition, subtraction, comparison and multiplication by fixed
//! constants are offered; these are the operations that stay automatic on the
//! two-row presentation in [`tworow`].

mod tworow;

pub use tworow::{
    decode_tworow, encode_tworow, rel_l, rel_p, rel_z, tworow_add, tworow_add_traced, AddTrace,
    TwoRowCode,
};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("cannot parse dyadic {0:?}: expected \"n\" or \"n/2^e\"")]
    Parse(String),
    #[error("malformed two-row code: {0}")]
    MalformedCode(String),
}

/// `numerator / 2^exponent`, normalized so that the numerator is odd unless
/// the exponent is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u64) -> Self {
        let mut d = Dyadic {
            num: num.into(),
            exp,
        };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp);
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(n, 0)
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic::one().scale_pow2(k)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn sign(&self) -> Sign {
        self.num.sign()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    /// `x · 2^k`.
    pub fn scale_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        if k >= 0 {
            let k = k as u64;
            if k <= self.exp {
                Dyadic {
                    num: self.num.clone(),
                    exp: self.exp - k,
                }
            } else {
                Dyadic {
                    num: &self.num << (k - self.exp),
                    exp: 0,
                }
            }
        } else {
            Dyadic::new(self.num.clone(), self.exp + k.unsigned_abs())
        }
    }

    /// `x · c` for a constant `c` fixed by the caller's construction.
    pub fn scale_const(&self, c: &Dyadic) -> Self {
        Dyadic::new(&self.num * &c.num, self.exp + c.exp)
    }

    /// Rounded value, for display only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.num.bits();
        // Keep at most 60 significant bits before converting.
        let drop = bits.saturating_sub(60);
        let head: i64 = (&self.num >> drop).try_into().unwrap_or(0);
        head as f64 * 2f64.powf(drop as f64 - self.exp as f64)
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u64) {
        let exp = self.exp.max(other.exp);
        (
            &self.num << (exp - self.exp),
            &other.num << (exp - other.exp),
            exp,
        )
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exp) = self.aligned(rhs);
        Dyadic::new(a + b, exp)
    }
}

impl Sub<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exp) = self.aligned(rhs);
        Dyadic::new(a - b, exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Dyadic> for Dyadic {
    fn sub_assign(&mut self, rhs: &Dyadic) {
        *self = &*self - rhs;
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| &acc + &x)
    }
}

/// Written as `n` when integral, otherwise `n/2^e`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = DyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DyadicError::Parse(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            None => s
                .parse::<BigInt>()
                .map(|n| Dyadic::new(n, 0))
                .map_err(|_| err()),
            Some((n, d)) => {
                let num = n.trim().parse::<BigInt>().map_err(|_| err())?;
                let exp = d
                    .trim()
                    .strip_prefix("2^")
                    .ok_or_else(err)?
                    .parse::<u64>()
                    .map_err(|_| err())?;
                Ok(Dyadic::new(num, exp))
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::Lcg;

    /// Random dyadic with numerator below `2^40` in magnitude and exponent
    /// below 30.
    pub fn random(rng: &mut Lcg) -> Dyadic {
        let mag = rng.next_u64() >> (24 + rng.below(40));
        let num = if rng.coin() {
            -(mag as i64)
        } else {
            mag as i64
        };
        Dyadic::new(num, rng.below(30))
    }

    /// General product; only for checking scaled values in tests.
    pub fn mul(a: &Dyadic, b: &Dyadic) -> Dyadic {
        Dyadic::new(&a.num * &b.num, a.exp + b.exp)
    }

    pub fn boundary() -> Vec<Dyadic> {
        let mut out = vec![Dyadic::zero()];
        for base in [Dyadic::one(), Dyadic::new(1, 1), Dyadic::new(3, 2)] {
            out.push(base.clone());
            out.push(-base);
        }
        for k in 0..=20 {
            out.push(Dyadic::pow2(k));
            out.push(-Dyadic::pow2(k));
            out.push(Dyadic::pow2(-k));
            out.push(-Dyadic::pow2(-k));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;
    use crate::Lcg;
    use proptest::prelude::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(&d("1/2^1") + &d("3/2^2"), d("5/2^2"));
        assert_eq!(d("5/2^2").cmp(&Dyadic::from_int(2)), Ordering::Less);
        assert_eq!(d("5/2^2").scale_pow2(-2), d("5/2^4"));
        assert_eq!(Dyadic::from_int(3).scale_pow2(1), Dyadic::from_int(6));
        assert_eq!(Dyadic::one().scale_const(&d("3/2^1")), d("3/2^1"));
        assert_eq!(d("81/2^4").scale_const(&d("1/2^1")), d("81/2^5"));
        assert_eq!(d("81/2^4").scale_const(&Dyadic::zero()), Dyadic::zero());
    }

    #[test]
    fn normalization() {
        let x = Dyadic::new(12, 3);
        assert_eq!((x.numerator().clone(), x.exponent()), (BigInt::from(3), 1));
        let z = Dyadic::new(0, 9);
        assert_eq!(z.exponent(), 0);
        assert_eq!(Dyadic::new(8, 2), Dyadic::from_int(2));
    }

    #[test]
    fn text_format() {
        assert_eq!(d("81/2^4").to_string(), "81/2^4");
        assert_eq!(d("6/2^1").to_string(), "3");
        assert_eq!(d("-3").to_string(), "-3");
        assert!("3/4".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
        let json = serde_json::to_string(&d("5/2^3")).unwrap();
        assert_eq!(json, "\"5/2^3\"");
        assert_eq!(serde_json::from_str::<Dyadic>(&json).unwrap(), d("5/2^3"));
    }

    #[test]
    fn sub_self_is_zero() {
        let mut rng = Lcg::new(1);
        for _ in 0..1000 {
            let x = random(&mut rng);
            assert!((&x - &x).is_zero());
        }
    }

    #[test]
    fn field_fragment_laws_on_random_triples() {
        let mut rng = Lcg::new(2);
        for _ in 0..10_000 {
            let (a, b, c) = (random(&mut rng), random(&mut rng), random(&mut rng));
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&a + &b, &b + &a);
            assert_eq!(
                (&a + &b).scale_const(&c),
                &a.scale_const(&c) + &b.scale_const(&c)
            );
            assert_eq!(a.cmp(&b), (&a - &b).sign().cmp(&Sign::NoSign));
        }
    }

    proptest! {
        #[test]
        fn scale_pow2_matches_product(n in -1_000_000i64..1_000_000, e in 0u64..40, k in -40i64..40) {
            let x = Dyadic::new(n, e);
            prop_assert_eq!(x.scale_pow2(k), mul(&x, &Dyadic::pow2(k)));
            prop_assert_eq!(x.scale_pow2(k).scale_pow2(-k), x);
        }

        #[test]
        fn display_parse_roundtrip(n in any::<i64>(), e in 0u64..100) {
            let x = Dyadic::new(n, e);
            prop_assert_eq!(x.to_string().parse::<Dyadic>().unwrap(), x);
        }

        #[test]
        fn order_is_compatible_with_addition(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000, e in 0u64..8) {
            let (x, y, z) = (Dyadic::new(a, e), Dyadic::new(b, 0), Dyadic::new(c, e + 1));
            prop_assert_eq!(x.cmp(&y), (&x + &z).cmp(&(&y + &z)));
        }
    }
}
