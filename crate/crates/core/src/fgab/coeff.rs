//! Integer coefficient types for elimination: checked `i64` for the fast path and `BigInt` for the
//! fallback. Every operation on `i64` reports overflow instead of wrapping.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Raised by the `i64` path; callers rerun the computation over `BigInt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub type Checked<T> = std::result::Result<T, Overflow>;

pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + Zero + One + Signed + 'static {
    fn from_i64(v: i64) -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn checked_add(&self, other: &Self) -> Checked<Self>;
    fn checked_sub(&self, other: &Self) -> Checked<Self>;
    fn checked_mul(&self, other: &Self) -> Checked<Self>;
    fn checked_neg(&self) -> Checked<Self>;
    /// Quotient rounded to nearest, so the remainder has absolute value at most |other|/2.
    fn round_div(&self, other: &Self) -> Checked<Self>;
    /// Exact division; `other` must divide `self`.
    fn exact_div(&self, other: &Self) -> Checked<Self>;
    fn is_divisible_by(&self, other: &Self) -> bool;
    /// (g, s, t) with g = s·a + t·b and g = gcd(a, b) > 0.
    fn xgcd(a: &Self, b: &Self) -> Checked<(Self, Self, Self)>;

    fn is_unit(&self) -> bool {
        self.cmp_abs(&Self::one()) == Ordering::Equal
    }

    fn abs_checked(&self) -> Checked<Self> {
        if self.is_negative() {
            self.checked_neg()
        } else {
            Ok(self.clone())
        }
    }
}

impl Coeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn checked_add(&self, other: &Self) -> Checked<Self> {
        i64::checked_add(*self, *other).ok_or(Overflow)
    }
    fn checked_sub(&self, other: &Self) -> Checked<Self> {
        i64::checked_sub(*self, *other).ok_or(Overflow)
    }
    fn checked_mul(&self, other: &Self) -> Checked<Self> {
        i64::checked_mul(*self, *other).ok_or(Overflow)
    }
    fn checked_neg(&self) -> Checked<Self> {
        i64::checked_neg(*self).ok_or(Overflow)
    }
    fn round_div(&self, other: &Self) -> Checked<Self> {
        // Work in i128 so |a| + |b|/2 cannot overflow.
        let (a, b) = (*self as i128, *other as i128);
        let q = a.div_euclid(b);
        let r = a - q * b;
        let q = if 2 * r.abs() > b.abs() { q + b.signum() } else { q };
        i64::try_from(q).map_err(|_| Overflow)
    }
    fn exact_div(&self, other: &Self) -> Checked<Self> {
        self.checked_div(*other).ok_or(Overflow)
    }
    fn is_divisible_by(&self, other: &Self) -> bool {
        if *other == 0 {
            return *self == 0;
        }
        (*self as i128) % (*other as i128) == 0
    }
    fn xgcd(a: &Self, b: &Self) -> Checked<(Self, Self, Self)> {
        let e = (*a as i128).extended_gcd(&(*b as i128));
        let (g, s, t) = if e.gcd < 0 { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) };
        let conv = |v: i128| i64::try_from(v).map_err(|_| Overflow);
        Ok((conv(g)?, conv(s)?, conv(t)?))
    }
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn checked_add(&self, other: &Self) -> Checked<Self> {
        Ok(self + other)
    }
    fn checked_sub(&self, other: &Self) -> Checked<Self> {
        Ok(self - other)
    }
    fn checked_mul(&self, other: &Self) -> Checked<Self> {
        Ok(self * other)
    }
    fn checked_neg(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn round_div(&self, other: &Self) -> Checked<Self> {
        let (q, r) = self.div_mod_floor(other);
        let two_r: BigInt = r.abs() * 2;
        // Floor division leaves r with the sign of other, so stepping q up always moves r toward zero.
        Ok(if two_r > other.abs() { q + 1 } else { q })
    }
    fn exact_div(&self, other: &Self) -> Checked<Self> {
        Ok(self / other)
    }
    fn is_divisible_by(&self, other: &Self) -> bool {
        if Zero::is_zero(other) {
            return Zero::is_zero(self);
        }
        Zero::is_zero(&(self % other))
    }
    fn xgcd(a: &Self, b: &Self) -> Checked<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        Ok(if Signed::is_negative(&e.gcd) { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) })
    }
}

/// Runs `f` over `i64`, retrying over `BigInt` on overflow.
pub fn with_fallback<R>(fast: impl FnOnce() -> Checked<R>, slow: impl FnOnce() -> Checked<R>) -> R {
    match fast() {
        Ok(r) => r,
        Err(Overflow) => {
            log::debug!("i64 overflow, retrying with big integers");
            slow().expect("big integer arithmetic cannot overflow")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_is_reported() {
        assert_eq!(Coeff::checked_add(&i64::MAX, &1), Err(Overflow));
        assert_eq!(Coeff::checked_neg(&i64::MIN), Err(Overflow));
        assert_eq!(Coeff::checked_mul(&(1i64 << 40), &(1i64 << 40)), Err(Overflow));
    }

    #[test]
    fn round_div_minimizes_remainder() {
        for a in -30i64..=30 {
            for b in [-7i64, -4, -1, 1, 3, 6] {
                let q = a.round_div(&b).unwrap();
                let r = a - q * b;
                assert!(2 * r.abs() <= b.abs(), "{a} {b}");
                let qb = BigInt::from(a).round_div(&BigInt::from(b)).unwrap();
                let rb = BigInt::from(a) - qb * b;
                assert!(rb.abs() * 2 <= BigInt::from(b.abs()));
            }
        }
    }

    #[test]
    fn xgcd_is_positive_bezout() {
        for (a, b) in [(12i64, 18i64), (-12, 18), (0, -5), (7, 0), (-3, -9)] {
            let (g, s, t) = i64::xgcd(&a, &b).unwrap();
            assert!(g > 0);
            assert_eq!(s * a + t * b, g);
            assert_eq!(g, num_integer::gcd(a, b));
        }
    }
}
