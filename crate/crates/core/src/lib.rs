//! Hypergeometric approximants to (a/b)^(m/n), their exact denominators, and
//! the effective irrationality measures they yield.
//!
//! The numeric kernels are generic over [`scalar::Real`]; `f32`, `f64` and
//! the arbitrary precision [`HpFloat`] all implement it.

// NaN must fail the range checks, hence the negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cf;
pub mod compensated;
pub mod constants;
pub mod denominators;
pub mod error;
pub mod hp;
pub mod hypg;
pub mod measures;
pub mod poly;
pub mod prime_tables;
pub mod quad;
pub mod scalar;
pub mod sturm;
pub mod tables;
pub mod valuation;

pub use error::{HmError, Result};
pub use hp::HpFloat;
pub use hypg::{ComplexHP, HypgIndex, RemainderParams};
pub use poly::{IntPoly, Poly, RatPoly};

pub type Rational = num_rational::BigRational;
pub type Integer = num_bigint::BigInt;
pub type ComplexF64 = num_complex::Complex<f64>;
pub type ComplexHp = num_complex::Complex<HpFloat>;
