use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rat::Rat;

/// Exact field arithmetic shared by the scalar types the group and chart
/// computations run over (`Rat` and `RatFun`).
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn from_rat(r: &Rat) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rat(&Rat::from_int(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.clone() * r)
    }

    /// `self^exp`; `0^0 = 1`, and `None` for zero to a negative power.
    fn pow(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * sq;
            }
        }
        Some(acc)
    }
}

impl Field for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}
