//! Dense multivariate power series truncated to a box of exponents.
//!
//! A coefficient at exponent `e` is kept iff `e[k] <= bound[k]` for every `k`.
//! Products, inverses and compositions are exact within the box because all
//! exponents are nonnegative.

use num_traits::{One, Zero};

use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSeries {
    bound: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<Rational>,
}

impl BoxSeries {
    pub fn zero(bound: &[usize]) -> Self {
        let mut strides = vec![1; bound.len()];
        for k in (0..bound.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * (bound[k + 1] + 1);
        }
        let size = bound.iter().map(|b| b + 1).product();
        BoxSeries { bound: bound.to_vec(), strides, data: vec![Rational::zero(); size] }
    }

    pub fn constant(bound: &[usize], c: Rational) -> Self {
        let mut s = Self::zero(bound);
        s.data[0] = c;
        s
    }

    pub fn one(bound: &[usize]) -> Self {
        Self::constant(bound, Rational::one())
    }

    pub fn bound(&self) -> &[usize] {
        &self.bound
    }

    fn index(&self, e: &[usize]) -> Option<usize> {
        let mut i = 0;
        for ((&x, &b), &s) in e.iter().zip(&self.bound).zip(&self.strides) {
            if x > b {
                return None;
            }
            i += x * s;
        }
        Some(i)
    }

    fn exponents(&self, mut i: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let x = i / s;
                i %= s;
                x
            })
            .collect()
    }

    pub fn get(&self, e: &[usize]) -> Rational {
        self.index(e).map_or_else(Rational::zero, |i| self.data[i].clone())
    }

    /// Adds `c·y^e`; terms outside the box are dropped.
    pub fn add_monomial(&mut self, e: &[usize], c: &Rational) {
        if let Some(i) = self.index(e) {
            self.data[i] += c;
        }
    }

    pub fn constant_term(&self) -> &Rational {
        &self.data[0]
    }

    pub fn mul(&self, other: &BoxSeries) -> BoxSeries {
        debug_assert_eq!(self.bound, other.bound);
        let mut out = BoxSeries::zero(&self.bound);
        let nz: Vec<(usize, Vec<usize>)> = other
            .data
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| (j, other.exponents(j)))
            .collect();
        for (i, a) in self.data.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.exponents(i);
            'inner: for (j, eb) in &nz {
                let mut idx = 0;
                for k in 0..ea.len() {
                    let x = ea[k] + eb[k];
                    if x > self.bound[k] {
                        continue 'inner;
                    }
                    idx += x * self.strides[k];
                }
                out.data[idx] += a * &other.data[*j];
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> BoxSeries {
        let mut out = self.clone();
        for c in out.data.iter_mut() {
            *c *= s;
        }
        out
    }

    pub fn add(&self, other: &BoxSeries) -> BoxSeries {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    /// Largest total degree that fits in the box.
    pub fn max_degree(&self) -> usize {
        self.bound.iter().sum()
    }

    /// `Σ_k c[k]·x^k` for a series `x` without constant term.
    pub fn compose(c: &[Rational], x: &BoxSeries) -> BoxSeries {
        debug_assert!(x.constant_term().is_zero());
        let n = c.len().min(x.max_degree() + 1);
        let mut out = BoxSeries::zero(&x.bound);
        for k in (0..n).rev() {
            out = out.mul(x);
            out.data[0] += &c[k];
        }
        out
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Option<BoxSeries> {
        let a0 = self.data[0].clone();
        if a0.is_zero() {
            return None;
        }
        // 1/a = (1/a0)·Σ u^k with u = 1 - a/a0 nilpotent in the box
        let inv0 = a0.recip();
        let mut u = self.scale(&-inv0.clone());
        u.data[0] = Rational::zero();
        let ones = vec![Rational::one(); self.max_degree() + 1];
        Some(BoxSeries::compose(&ones, &u).scale(&inv0))
    }
}
