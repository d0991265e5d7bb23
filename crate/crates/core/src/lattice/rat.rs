use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number, always in lowest terms with a positive denominator.
/// Values whose numerator and denominator fit in an `i64` are kept inline.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, denominator positive, neither part equal to `i64::MIN`.
    Small(i64, i64),
    /// Only for values that do not fit `Small`.
    Big(BigRational),
}

fn small_part(x: i128) -> Option<i64> {
    i64::try_from(x).ok().filter(|&v| v != i64::MIN)
}

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rat::from_i128(numer as i128, denom as i128)
    }

    fn from_i128(mut n: i128, mut d: i128) -> Self {
        debug_assert!(d != 0);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (small_part(n), small_part(d)) {
            (Some(a), Some(b)) => Rat(Repr::Small(a, b)),
            _ => Rat(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_ratio(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) if a != i64::MIN && b != i64::MIN => Rat(Repr::Small(a, b)),
            _ => Rat(Repr::Big(r)),
        }
    }

    fn to_ratio(&self) -> BigRational {
        match &self.0 {
            Repr::Small(a, b) => BigRational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Rat::new(n, 1)
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rat::from_ratio(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Rat(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rat(Repr::Small(1, 1))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Option<Rat> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => Some(Rat::from_i128(*d as i128, *n as i128)),
            Repr::Big(r) => Some(Rat::from_ratio(r.recip())),
        }
    }

    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, d) => BigInt::from(n.div_floor(d)),
            Repr::Big(r) => r.floor().to_integer(),
        }
    }

    /// Integer value, if this is an integer that fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            Repr::Small(..) => None,
            Repr::Big(r) if r.is_integer() => r.numer().to_i64(),
            Repr::Big(_) => None,
        }
    }

    /// Integer power; `None` for zero raised to a negative exponent.
    pub fn pow(&self, exp: i64) -> Option<Rat> {
        let base = if exp >= 0 { self.clone() } else { self.recip()? };
        let mut acc = Rat::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_ratio().cmp(&other.to_ratio()),
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRatError(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Rat::from_big(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| err())?;
                Ok(Rat::from_big(n, BigInt::one()))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn add_ref(x: &Rat, y: &Rat) -> Rat {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                Rat::from_i128(a + c, b)
            } else {
                Rat::from_i128(a * d + c * b, b * d)
            }
        }
        _ => Rat::from_ratio(x.to_ratio() + y.to_ratio()),
    }
}

fn mul_ref(x: &Rat, y: &Rat) -> Rat {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
        }
        _ => Rat::from_ratio(x.to_ratio() * y.to_ratio()),
    }
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, rhs: &'a Rat) -> Rat {
        add_ref(self, rhs)
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, rhs: &'a Rat) -> Rat {
        add_ref(self, &-rhs)
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, rhs: &'a Rat) -> Rat {
        mul_ref(self, rhs)
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        add_ref(&self, &rhs)
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        add_ref(&self, &-rhs)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        mul_ref(&self, &rhs)
    }
}

impl Div for Rat {
    type Output = Rat;
    /// Panics on division by zero, like the primitive types.
    fn div(self, rhs: Rat) -> Rat {
        mul_ref(&self, &rhs.recip().expect("division by zero"))
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl<'a> Neg for &'a Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => Rat(Repr::Small(-n, *d)),
            Repr::Big(r) => Rat::from_ratio(-r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_on_construction() {
        let r = Rat::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(r.denom(), BigInt::from(2));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("4/6".parse::<Rat>().unwrap(), Rat::new(2, 3));
        assert_eq!("-7".parse::<Rat>().unwrap(), Rat::from_int(-7));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        assert_eq!(Rat::from_int(5).to_string(), "5");
    }

    #[test]
    fn powers() {
        assert_eq!(Rat::new(2, 3).pow(-2), Some(Rat::new(9, 4)));
        assert_eq!(Rat::zero().pow(0), Some(Rat::one()));
        assert_eq!(Rat::zero().pow(-1), None);
    }

    #[test]
    fn crosses_word_size() {
        let big = Rat::from_int(i64::MAX);
        let sum = &big + &big;
        assert_eq!(sum.to_string(), "18446744073709551614");
        assert_eq!(&sum - &big, big);
        assert_eq!(-Rat::from_int(i64::MAX) - Rat::one(), "-9223372036854775808".parse().unwrap());
        assert!(Rat::new(1, 3) < Rat::new(1, 2));
        assert!(sum > big);
        assert_eq!(Rat::new(-7, 2).floor(), BigInt::from(-4));
    }

    fn big(r: &Rat) -> BigRational {
        BigRational::new(r.numer(), r.denom())
    }

    proptest::proptest! {
        #[test]
        fn matches_big_rationals(
            a in proptest::prelude::any::<i64>(),
            b in 1i64..=i64::MAX,
            c in proptest::prelude::any::<i64>(),
            d in 1i64..=i64::MAX,
        ) {
            let x = Rat::new(a, b);
            let y = Rat::new(c, d);
            let (bx, by) = (BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()));
            proptest::prop_assert_eq!(big(&(&x + &y)), &bx + &by);
            proptest::prop_assert_eq!(big(&(&x - &y)), &bx - &by);
            proptest::prop_assert_eq!(big(&(&x * &y)), &bx * &by);
            proptest::prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            if !y.is_zero() {
                proptest::prop_assert_eq!(big(&(x.clone() / y.clone())), &bx / &by);
            }
            // representation is canonical, so equality is structural
            let round = &(&x + &y) - &y;
            proptest::prop_assert_eq!(round, x);
        }
    }
}
