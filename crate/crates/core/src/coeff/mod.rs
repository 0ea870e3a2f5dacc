//! Exact scalars and exact linear algebra.
//!
//! The scalar tower is `Rational` (arbitrary-precision ℚ), `DeltaPoly`
//! (univariate polynomials ℚ[d] in the loop parameter) and `DeltaRational`
//! (the fraction field ℚ(d)). Matrices are generic over these; determinants
//! use fraction-free (Bareiss) elimination over the polynomial ring, ranks
//! and nullspaces exact elimination over a field.

mod matrix;
mod poly;
mod ratfn;
mod rational;
mod span;

pub use matrix::{Matrix, MatrixError};
pub use poly::DeltaPoly;
pub use ratfn::DeltaRational;
pub use rational::Rational;
pub use span::Span;

use std::fmt::Debug;

/// Commutative ring scalar usable as a matrix entry.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

/// Integral domain with exact division where the quotient is known to exist
/// (what Bareiss elimination needs).
pub trait ExactDomain: Ring {
    /// `self / rhs` when `rhs` divides `self` exactly. Panics otherwise —
    /// callers only divide where divisibility is guaranteed.
    fn exact_div(&self, rhs: &Self) -> Self;
}

/// Field scalar: adds inversion on nonzero elements.
pub trait Field: ExactDomain {
    fn inv(&self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self {
        self.mul_ref(&rhs.inv())
    }
}

/// Either the generic point of ℚ(d) or an exact rational specialization of
/// the loop parameter.
#[derive(Clone, Debug, PartialEq)]
pub enum Specialization {
    Generic,
    At(Rational),
}

impl Specialization {
    pub fn at(num: i64, den: i64) -> Self {
        Specialization::At(Rational::new(num, den))
    }
}
