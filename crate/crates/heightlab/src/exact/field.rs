//! Minimal field-element abstraction shared by the group law and polynomial
//! code. Elements carry their own field context (conductor, modulus, ...),
//! so constructors are phrased as `*_like` methods on an existing element.

use rug::Rational;
use std::fmt::Debug;

pub trait FieldElem: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Image of a small integer in this field.
    fn from_i64_like(&self, n: i64) -> Self;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
    fn is_one(&self) -> bool {
        self.sub(&self.one_like()).is_zero()
    }
    fn square(&self) -> Self {
        self.mul(self)
    }
    fn mul_i64(&self, n: i64) -> Self {
        self.mul(&self.from_i64_like(n))
    }
}

impl FieldElem for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn one_like(&self) -> Self {
        Rational::from(1)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn inv(&self) -> Option<Self> {
        if *self == 0 {
            None
        } else {
            Some(Rational::from(self.recip_ref()))
        }
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Rational::from(n)
    }
}
