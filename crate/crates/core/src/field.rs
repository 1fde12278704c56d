//! Coefficient fields for multivariate polynomial arithmetic.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A coefficient literal as produced by the polynomial parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffLiteral {
    /// A rational number `num/den`.
    Rational(BigRational),
    /// A coordinate vector in the power basis of a finite field.
    Vector(Vec<i64>),
}

/// A field whose elements are plain values; operations go through the
/// field object so elements need not carry their context.
pub trait Field: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Zero for characteristic zero.
    fn characteristic(&self) -> u64;
    /// Interpret a parsed literal; `None` when it is not an element of this field.
    fn from_literal(&self, lit: &CoeffLiteral) -> Option<Self::Elem>;
    /// Render an element in the literal syntax accepted by `from_literal`.
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Only meaningful for ordered fields; used by the printer to emit `-`.
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `n * a` for a machine integer `n`.
    fn scale_int(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        let p = self.characteristic();
        let n = if p > 0 { n % p } else { n };
        self.mul(a, &self.from_i64(n as i64))
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn from_literal(&self, lit: &CoeffLiteral) -> Option<BigRational> {
        match lit {
            CoeffLiteral::Rational(r) => Some(r.clone()),
            CoeffLiteral::Vector(_) => None,
        }
    }
    fn format_elem(&self, a: &BigRational) -> String {
        use alloc::format;
        if a.denom().is_one() {
            format!("{}", a.numer())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}
