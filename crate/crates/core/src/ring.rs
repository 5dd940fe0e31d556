//! The minimal commutative-ring interface shared by matrices and recurrences.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactnum::{ComplexRat, Rational};

pub trait Ring: Clone + PartialEq + Debug {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

macro_rules! num_ring {
    ($t:ty) => {
        impl Ring for $t {
            fn zero_elem() -> Self {
                <$t as Zero>::zero()
            }
            fn one_elem() -> Self {
                <$t as One>::one()
            }
            fn is_zero_elem(&self) -> bool {
                Zero::is_zero(self)
            }
            fn add(&self, other: &Self) -> Self {
                self + other
            }
            fn sub(&self, other: &Self) -> Self {
                self - other
            }
            fn mul(&self, other: &Self) -> Self {
                self * other
            }
            fn neg(&self) -> Self {
                -self
            }
        }
    };
}

num_ring!(Rational);
num_ring!(BigInt);

impl Ring for ComplexRat {
    fn zero_elem() -> Self {
        ComplexRat::zero()
    }
    fn one_elem() -> Self {
        ComplexRat::one()
    }
    fn is_zero_elem(&self) -> bool {
        ComplexRat::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}
