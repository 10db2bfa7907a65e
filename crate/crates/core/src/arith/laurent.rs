//! Truncated Laurent series in one active variable whose coefficients are
//! polynomials in the remaining variables.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::poly::MultiPoly;
use super::rational::{factorial, rat, Rational};
use crate::error::{Error, Result};

/// `Σ_{k = lowest}^{trunc-1} coeffs[k - lowest]·z^k + O(z^trunc)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    var: String,
    rest: Arc<[String]>,
    lowest: i64,
    coeffs: Vec<MultiPoly>,
    trunc: i64,
}

impl LaurentSeries {
    /// Builds a series from `(exponent, coefficient)` pairs; terms at or past
    /// `trunc` are dropped.
    pub fn from_terms(
        var: &str,
        rest: Arc<[String]>,
        terms: &[(i64, MultiPoly)],
        trunc: i64,
    ) -> Result<Self> {
        let lowest = terms.iter().map(|(k, _)| *k).min().unwrap_or(trunc).min(trunc);
        let mut coeffs = vec![MultiPoly::zero(rest.clone()); (trunc - lowest) as usize];
        for (k, c) in terms {
            if c.vars() != &rest {
                return Err(Error::Usage(format!(
                    "coefficient variables {:?} differ from series variables {:?}",
                    c.vars(),
                    rest
                )));
            }
            if *k < trunc {
                coeffs[(k - lowest) as usize].add_assign_poly(c);
            }
        }
        Ok(Self::normalized(var.to_string(), rest, lowest, coeffs, trunc))
    }

    /// Series with scalar coefficients `c[i]` at exponent `lowest + i`.
    pub fn from_scalars(var: &str, lowest: i64, c: &[Rational], trunc: i64) -> Self {
        let rest: Arc<[String]> = Vec::<String>::new().into();
        let n = (trunc - lowest).max(0) as usize;
        let coeffs = (0..n)
            .map(|i| MultiPoly::constant(rest.clone(), c.get(i).cloned().unwrap_or_else(Rational::zero)))
            .collect();
        Self::normalized(var.to_string(), rest, lowest, coeffs, trunc)
    }

    fn normalized(
        var: String,
        rest: Arc<[String]>,
        mut lowest: i64,
        mut coeffs: Vec<MultiPoly>,
        trunc: i64,
    ) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        lowest += lead as i64;
        LaurentSeries { var, rest, lowest, coeffs, trunc }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^k`, `None` if `k` is past the truncation order.
    pub fn coeff(&self, k: i64) -> Option<MultiPoly> {
        if k >= self.trunc {
            return None;
        }
        if k < self.lowest {
            return Some(MultiPoly::zero(self.rest.clone()));
        }
        Some(self.coeffs[(k - self.lowest) as usize].clone())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.var != other.var || self.rest != other.rest {
            return Err(Error::Usage(format!(
                "series in {}{:?} and {}{:?} cannot be combined",
                self.var, self.rest, other.var, other.rest
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let trunc = (self.trunc + other.lowest).min(other.trunc + self.lowest);
        let lowest = self.lowest + other.lowest;
        let n = (trunc - lowest).max(0) as usize;
        let mut coeffs = vec![MultiPoly::zero(self.rest.clone()); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                coeffs[i + j].add_assign_poly(&(a * b));
            }
        }
        Ok(Self::normalized(self.var.clone(), self.rest.clone(), lowest, coeffs, trunc))
    }

    /// Multiplicative inverse; the leading coefficient must be a nonzero scalar.
    pub fn invert(&self) -> Result<Self> {
        let lead = self
            .coeffs
            .first()
            .ok_or_else(|| Error::Internal("cannot invert a series with no known nonzero term".into()))?;
        let a0 = lead.as_constant().filter(|c| !c.is_zero()).ok_or_else(|| {
            Error::Internal(format!(
                "leading coefficient {lead} of the series in {} is not an invertible scalar",
                self.var
            ))
        })?;
        let inv0 = a0.recip();
        let n = self.coeffs.len();
        let mut b: Vec<MultiPoly> = Vec::with_capacity(n);
        b.push(MultiPoly::constant(self.rest.clone(), inv0.clone()));
        for k in 1..n {
            let mut acc = MultiPoly::zero(self.rest.clone());
            for i in 1..=k {
                acc.add_assign_poly(&(&self.coeffs[i] * &b[k - i]));
            }
            b.push(acc.scale(&(-&inv0)));
        }
        let lowest = -self.lowest;
        Ok(Self::normalized(self.var.clone(), self.rest.clone(), lowest, b, lowest + n as i64))
    }

    /// Coefficient of `z^{-1}`.
    pub fn residue(&self) -> Result<MultiPoly> {
        if self.trunc < 0 {
            return Err(Error::Truncation(format!(
                "series in {} is only known below order {}",
                self.var, self.trunc
            )));
        }
        Ok(self.coeff(-1).expect("order -1 is known"))
    }

    /// Scalar coefficients of the series `1/(1 - ζ·e^{-x})` for `ζ = ±1`,
    /// starting at `x^{-1}` when `ζ = 1` and at `x^0` otherwise, up to `x^{order-1}`.
    pub fn exp_denominator_inverse(zeta: i8, order: i64) -> Result<Self> {
        // 1 - ζ e^{-x} = Σ_k c_k x^k, c_0 = 1 - ζ, c_k = -ζ (-1)^k / k!
        let lowest = if zeta == 1 { 1 } else { 0 };
        // the inverse starts at x^{-lowest} and keeps as many terms as the input
        let known = order + lowest;
        let trunc = lowest + known.max(1);
        let c: Vec<Rational> = (lowest..trunc)
            .map(|k| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let mut v = Rational::new((-(zeta as i64) * sign).into(), factorial(k as usize));
                if k == 0 {
                    v += rat(1);
                }
                v
            })
            .collect();
        Self::from_scalars("x", lowest, &c, trunc).invert()
    }

    pub fn scalar_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_constant()).collect()
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{}^{}", self.var, self.lowest + i as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.trunc)
    }
}
