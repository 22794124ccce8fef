//! Scalar abstractions shared by the polynomial and linear-algebra code.
//!
//! Everything class-level (Picard lattice, Chow ring, Cox gradings) is plain
//! integer arithmetic. Sections, fiber matrices and discriminant restrictions
//! are generic over [`Scalar`] so the same code runs over exact integers,
//! exact rationals, or machine floats.

use std::fmt::Debug;
use std::ops::{AddAssign, MulAssign, Neg};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num};

/// A commutative ring with exact `==` and an exact (or best-effort, for
/// floats) division used by fraction-free elimination.
pub trait Scalar:
    Num + Clone + Debug + Neg<Output = Self> + FromPrimitive + for<'a> AddAssign<&'a Self> + for<'a> MulAssign<&'a Self>
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type represents small integers")
    }
}

impl<T> Scalar for T where
    T: Num + Clone + Debug + Neg<Output = T> + FromPrimitive + for<'a> AddAssign<&'a T> + for<'a> MulAssign<&'a T>
{
}

/// Marker for scalars where every nonzero element is invertible.
///
/// Algorithms that divide by arbitrary pivots (polynomial gcd, interpolation)
/// require this. Fraction-free elimination only needs [`Scalar`].
pub trait Field: Scalar {}

impl Field for f32 {}
impl Field for f64 {}
impl Field for BigRational {}
impl Field for Ratio<i64> {}
impl Field for Ratio<i128> {}

/// Lossless embedding of an exact integer into a scalar type.
pub fn from_bigint<T: Scalar>(v: &BigInt) -> T {
    // Horner in base 2^32 keeps this generic without a dedicated conversion trait.
    let (sign, digits) = v.to_u32_digits();
    let base = T::from_u64(1u64 << 32).expect("2^32 fits every scalar type");
    let mut acc = T::zero();
    for d in digits.iter().rev() {
        acc = acc * base.clone() + T::from_u32(*d).expect("u32 fits every scalar type");
    }
    if sign == num_bigint::Sign::Minus {
        -acc
    } else {
        acc
    }
}
