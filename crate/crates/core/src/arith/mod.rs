//! Coefficient rings: rationals, polynomials, truncated series, quasipolynomials.

pub mod boxseries;
pub mod integer;
pub mod laurent;
pub mod poly;
pub mod quasi;
pub mod rational;

pub use boxseries::BoxSeries;
pub use laurent::LaurentSeries;
pub use poly::MultiPoly;
pub use quasi::{ParityForm, QuasiPolynomial};
pub use rational::Rational;
