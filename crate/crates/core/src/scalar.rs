//! Coefficient domains usable as matrix entries.

use std::fmt;

use rand::RngCore;

use crate::gf::FieldElement;
use crate::symfield::RatFunc;

/// A field element that carries its own domain context.
///
/// Constructors are relative to an existing value (`zero_like`, ...) since
/// neither finite fields nor rational function fields are global types.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    fn power(&self, e: u64) -> Self;
    /// x^q for q a power of the characteristic.
    fn twist(&self, q: u64) -> Self;
    fn characteristic(&self) -> u64;
    /// Whether both values live in the same field.
    fn same_domain(&self, other: &Self) -> bool;
    /// A pseudorandom element (a random constant for symbolic domains).
    fn random_like(&self, rng: &mut dyn RngCore) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn divide(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|inv| self.times(&inv))
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        self.spec().zero()
    }
    fn one_like(&self) -> Self {
        self.spec().one()
    }
    fn from_int_like(&self, v: i64) -> Self {
        self.spec().from_int(v)
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self.clone()
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn power(&self, e: u64) -> Self {
        self.pow(e)
    }
    fn twist(&self, q: u64) -> Self {
        self.pow_q(q)
    }
    fn characteristic(&self) -> u64 {
        self.spec().p()
    }
    fn same_domain(&self, other: &Self) -> bool {
        self.spec() == other.spec()
    }
    fn random_like(&self, rng: &mut dyn RngCore) -> Self {
        self.spec().random(rng)
    }
    fn is_one(&self) -> bool {
        FieldElement::is_one(self)
    }
}

impl Scalar for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.ring())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.ring())
    }
    fn from_int_like(&self, v: i64) -> Self {
        RatFunc::constant(self.ring(), v)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn power(&self, e: u64) -> Self {
        self.pow(e)
    }
    fn twist(&self, q: u64) -> Self {
        self.pow(q)
    }
    fn characteristic(&self) -> u64 {
        self.ring().p()
    }
    fn same_domain(&self, other: &Self) -> bool {
        self.ring() == other.ring()
    }
    fn random_like(&self, rng: &mut dyn RngCore) -> Self {
        let p = self.ring().p();
        RatFunc::constant(self.ring(), (rng.next_u64() % p) as i64)
    }
    fn is_one(&self) -> bool {
        RatFunc::is_one(self)
    }
}
