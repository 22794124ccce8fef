//! Divisor-class certificates and sampled instance checks for a family of
//! Fano conic bundles `f: X → Y` whose target `Y = P(O ⊕ O(2m) ⊕ O(2m))` over
//! `P^{3m}` has `-K_Y` not nef.
//!
//! The numeric core ([`poly`], [`linalg`], [`univariate`]) is generic over
//! [`scalar::Scalar`]; the verifier instantiates it with exact integers and
//! rationals through the aliases below.

pub mod chow;
pub mod cli;
pub mod conicbundle;
pub mod cones;
pub mod coxring;
pub mod error;
pub mod linalg;
pub mod picard;
pub mod poly;
pub mod scalar;
pub mod univariate;
pub mod verifier;

pub use error::{Error, Result};
pub use picard::{ConstructionParams, CurveClassY, DivisorClassY};

pub type Integer = num_bigint::BigInt;
pub type Rational = num_rational::BigRational;
pub type IntPoly = poly::Poly<Integer>;
pub type RatPoly = poly::Poly<Rational>;
pub type RatUnivariate = univariate::UniPoly<Rational>;
