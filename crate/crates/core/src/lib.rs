//! Exact computational algebra for planar diagram algebras with an
//! anti-involution.
//!
//! The crate provides, bottom up:
//!
//! - [`coeff`] — arbitrary-precision rationals, univariate polynomials in the
//!   loop parameter `d`, their fraction field, and exact linear algebra
//!   (fraction-free determinants, ranks, nullspaces).
//! - [`diagram`] — planar Temperley-Lieb diagram combinatorics: full diagrams,
//!   half-diagrams, composition with loop counting, the mirror
//!   anti-involution, and enumeration.
//! - [`algebra`] — finite-dimensional associative algebras given by basis and
//!   structure constants, equipped with an anti-involution; the diagram
//!   algebra is the main instance.
//! - [`twist`] — deformation of the multiplication by an endomorphism or by
//!   the anti-involution, producing Hom-associative products of type I₁ or
//!   type II, with exhaustive axiom checking.
//! - [`cellular`] — cell data, cell modules, Gram matrices, radicals,
//!   semisimplicity and the ideal filtration.
//! - [`hommod`] — right Hom-modules of type II: the module axiom, the functor
//!   from left modules, and the lattice operations (image, preimage,
//!   intersection, sum, direct sum, quotient).
//! - [`rewrite`] — a small string-diagram term rewriting engine over the
//!   signature `{id, mu, alpha, sigma, eta}` with bounded bidirectional
//!   derivation search.
//!
//! All arithmetic is exact; nothing in this crate touches floating point.
//! With the default `parallel` feature the hot inner loops run on rayon;
//! disabling it yields a dependency-free sequential build of the same
//! functions.

pub mod algebra;
pub mod cellular;
pub mod coeff;
pub mod diagram;
pub mod hommod;
pub mod rewrite;
pub mod twist;

pub(crate) mod exec;
pub(crate) mod rng;

#[doc(hidden)]
pub mod bench_support;
