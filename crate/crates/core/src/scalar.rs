//! The ordered-field abstraction the planar geometry is written against.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An ordered field with exact (or, for `f64`, best-effort) sign evaluation.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Sign relative to zero.
    fn sign(&self) -> Ordering;

    fn from_int(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// A positive factor turning `values` into coprime integers, when every
    /// value is rational. Used to canonicalize line and plane equations.
    fn integral_rescale(_values: &[Self]) -> Option<Self> {
        None
    }

    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    fn compare(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl Scalar for BigRational {
    fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if Signed::is_positive(self) {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self.numer()).unwrap_or(f64::NAN) / ToPrimitive::to_f64(self.denom()).unwrap_or(f64::NAN)
    }

    fn integral_rescale(values: &[Self]) -> Option<Self> {
        coprime_scale(values.iter())
    }
}

/// Positive factor `s` with `s * v` coprime integers for all `v`.
pub(crate) fn coprime_scale<'a, I>(values: I) -> Option<BigRational>
where
    I: Iterator<Item = &'a BigRational> + Clone,
{
    let den_lcm = values.clone().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let num_gcd = values.fold(BigInt::zero(), |acc, v| {
        let scaled = v.numer() * (&den_lcm / v.denom());
        acc.gcd(&scaled)
    });
    if num_gcd.is_zero() {
        None
    } else {
        Some(BigRational::new(den_lcm, num_gcd))
    }
}

impl Scalar for f64 {
    fn sign(&self) -> Ordering {
        self.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn coprime_scale_clears_denominators() {
        let vals = [q(1, 2), q(-3, 4), q(0, 1)];
        let s = coprime_scale(vals.iter()).unwrap();
        let scaled: Vec<_> = vals.iter().map(|v| v * &s).collect();
        assert_eq!(scaled, vec![q(2, 1), q(-3, 1), q(0, 1)]);
    }

    #[test]
    fn coprime_scale_divides_common_factor() {
        let vals = [q(4, 1), q(6, 1)];
        let s = coprime_scale(vals.iter()).unwrap();
        assert_eq!(s, q(1, 2));
        assert!(coprime_scale([q(0, 1)].iter()).is_none());
    }

    #[test]
    fn sign_and_compare() {
        assert_eq!(q(-1, 3).sign(), Ordering::Less);
        assert_eq!(q(2, 3).compare(&q(1, 2)), Ordering::Greater);
        assert_eq!(0.0f64.sign(), Ordering::Equal);
    }
}
