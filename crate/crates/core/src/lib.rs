//! Kostant partition functions, weight multiplicities and tensor product
//! coefficients for the classical Lie algebras, in exact arithmetic.

pub mod arith;
pub mod cache;
pub mod error;
pub mod multiplicity;
pub mod nested;
pub mod partition;
pub mod roots;
pub mod weyl;

pub use num_bigint::BigInt;

pub use arith::{MultiPoly, ParityForm, QuasiPolynomial, Rational};
pub use error::{Error, Result};
pub use multiplicity::{Algebra, FormalResult, FormalWeight};
pub use partition::{Options, PartitionFunction};
pub use roots::{Family, RootSystem, Weight};
