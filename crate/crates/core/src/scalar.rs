//! Coefficient traits shared by the polynomial and matrix code.
//!
//! Everything in this crate is exact. [`Scalar`] covers the integer and
//! rational coefficient types (`i64`, `BigInt`, `Ratio<i64>`, `BigRational`);
//! [`Ring`] is the small interface the generic linear algebra needs, and is
//! also implemented by the polynomial and cyclotomic element types.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed, Zero};

/// An exact coefficient type.
pub trait Scalar:
    Num + Clone + Debug + Display + PartialOrd + Neg<Output = Self> + Send + Sync + 'static
{
    /// Lossless embedding of a machine integer.
    fn from_i64(v: i64) -> Self;

    /// `Some(a / b)` when `b` divides `a` exactly (always, for fields).
    fn checked_exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if (self.clone() % rhs.clone()).is_zero() {
            Some(self.clone() / rhs.clone())
        } else {
            None
        }
    }
}

/// Marker for scalars where every nonzero element is invertible.
pub trait FieldScalar: Scalar {}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
}

impl Scalar for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Display + Send + Sync + 'static,
    T: TryFrom<i64>,
{
    fn from_i64(v: i64) -> Self {
        let n = T::try_from(v).ok().expect("integer out of range for ratio scalar");
        Ratio::from_integer(n)
    }

    fn checked_exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self.clone() / rhs.clone())
        }
    }
}

impl<T> FieldScalar for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Display + Send + Sync + 'static,
    T: TryFrom<i64>,
{
}

/// Commutative ring element whose zero/one may depend on runtime context
/// (a variable set, a cyclotomic modulus), so they are produced from an
/// existing element.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn ring_add(&self, rhs: &Self) -> Self;
    fn ring_sub(&self, rhs: &Self) -> Self;
    fn ring_mul(&self, rhs: &Self) -> Self;
    fn ring_neg(&self) -> Self;
}

/// A ring in which exact division can be attempted.
pub trait ExactDiv: Ring {
    /// `Some(q)` with `q * rhs == self`, or `None` if no such `q` exists.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

/// A field: every nonzero element has an inverse.
pub trait Field: Ring {
    fn inverse(&self) -> Option<Self>;
}

impl<T: Scalar + PartialEq> Ring for T {
    fn zero_like(&self) -> Self {
        T::zero()
    }
    fn one_like(&self) -> Self {
        T::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
    fn ring_sub(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }
    fn ring_neg(&self) -> Self {
        -self.clone()
    }
}

impl<T: Scalar + PartialEq> ExactDiv for T {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        self.checked_exact_div(rhs)
    }
}

impl<T: FieldScalar + PartialEq> Field for T {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(T::one() / self.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn exact_div_on_integers_and_rationals() {
        assert_eq!(6i64.checked_exact_div(&3), Some(2));
        assert_eq!(7i64.checked_exact_div(&3), None);
        assert_eq!(7i64.checked_exact_div(&0), None);
        let a = BigRational::from_i64(7);
        let b = BigRational::from_i64(3);
        assert_eq!(a.checked_exact_div(&b), Some(BigRational::new(7.into(), 3.into())));
    }

    #[test]
    fn field_inverse() {
        let q = Ratio::<i64>::new(2, 5);
        assert_eq!(q.inverse(), Some(Ratio::new(5, 2)));
        assert_eq!(Ratio::<i64>::from_i64(0).inverse(), None);
    }
}
