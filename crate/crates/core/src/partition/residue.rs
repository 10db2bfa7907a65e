//! Iterated residues `Res_{α_r=0} ⋯ Res_{α_1=0}` over an ordered basis.
//!
//! With `z_i = ⟨α_i, u⟩` and the substitution `z_i = y_i y_{i+1} ⋯ y_r`, the
//! iterated residue of `f` is the coefficient of `Π_k y_k^{-k}` in `f(z(y))`.
//! A linear form `Σ c_i z_i` whose last nonzero coefficient is `c_j` becomes
//! `(y_j ⋯ y_r)·w` with `w` a unit, so every denominator factor splits into a
//! monomial pole and a power series with scalar constant term.

use std::sync::Arc;

use num_traits::Zero;

use crate::arith::boxseries::BoxSeries;
use crate::arith::laurent::LaurentSeries;
use crate::arith::poly::MultiPoly;
use crate::arith::rational::{factorial, rat, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `1/x`.
    Linear,
    /// `1/(1 - e^{-x})`.
    Todd,
    /// `1/(1 + e^{-x})`.
    Half,
}

/// `x^k` coefficients of `x/(1 - e^{-x})` (Todd) or `1/(1 + e^{-x})`.
fn unit_coeffs(kind: Factor, n: usize) -> Result<Vec<Rational>> {
    let c = match kind {
        Factor::Linear => return Ok(vec![rat(1)]),
        Factor::Todd => LaurentSeries::exp_denominator_inverse(1, n as i64 + 1)?,
        Factor::Half => LaurentSeries::exp_denominator_inverse(-1, n as i64 + 1)?,
    };
    let mut v = c.scalar_coeffs().ok_or_else(|| Error::Internal("non-scalar series".into()))?;
    v.truncate(n + 1);
    Ok(v)
}

/// `y_from ⋯ y_{to-1}` as an exponent vector.
fn block(r: usize, from: usize, to: usize) -> Vec<usize> {
    (0..r).map(|k| usize::from(k >= from && k < to)).collect()
}

/// Iterated residue of `e^{⟨a,u⟩} / Π factors`, as a polynomial in the
/// coordinates `a'` of `a` in the basis.
///
/// Each factor is given by the coordinates of its linear form in the basis.
/// Returns zero when there are too few poles for a residue.
pub fn iterated_residue(
    r: usize,
    factors: &[(Vec<Rational>, Factor)],
    vars: Arc<[String]>,
) -> Result<MultiPoly> {
    let mut last = Vec::with_capacity(factors.len());
    let mut poles = vec![0i64; r];
    for (c, kind) in factors {
        let j = (0..r)
            .rev()
            .find(|&i| !c[i].is_zero())
            .ok_or_else(|| Error::Internal("zero linear form in denominator".into()))?;
        last.push(j);
        if *kind != Factor::Half {
            for p in poles.iter_mut().skip(j) {
                *p += 1;
            }
        }
    }
    // y_k must reach exponent -(k+1)
    let d: Vec<i64> = poles.iter().enumerate().map(|(k, &p)| p - (k as i64 + 1)).collect();
    if d.iter().any(|&x| x < 0) {
        return Ok(MultiPoly::zero(vars));
    }
    let bound: Vec<usize> = d.iter().map(|&x| x as usize).collect();
    let deg = bound.iter().sum::<usize>();
    let todd = unit_coeffs(Factor::Todd, deg)?;
    let half = unit_coeffs(Factor::Half, deg)?;
    let mut unit = BoxSeries::one(&bound);
    for ((c, kind), &j) in factors.iter().zip(&last) {
        // x = Σ_i c_i z_i and w = x / (y_j ⋯ y_r)
        let mut x = BoxSeries::zero(&bound);
        let mut w = BoxSeries::zero(&bound);
        for i in 0..=j {
            if !c[i].is_zero() {
                x.add_monomial(&block(r, i, r), &c[i]);
                w.add_monomial(&block(r, i, j), &c[i]);
            }
        }
        let f = match kind {
            Factor::Linear => w.invert(),
            Factor::Todd => w.invert().map(|wi| wi.mul(&BoxSeries::compose(&todd, &x))),
            Factor::Half => Some(BoxSeries::compose(&half, &x)),
        }
        .ok_or_else(|| Error::Internal("leading coefficient vanished".into()))?;
        unit = unit.mul(&f);
    }
    // e^{Σ a'_i z_i} contributes Π a'_i^{n_i}/n_i! at y^m, m_k = n_1 + ... + n_k
    let mut out = MultiPoly::zero(vars);
    let mut m = vec![0usize; r];
    loop {
        let rest: Vec<usize> = bound.iter().zip(&m).map(|(b, x)| b - x).collect();
        let u = unit.get(&rest);
        if !u.is_zero() {
            let mut denom = num_bigint::BigInt::from(1);
            let mut e = Vec::with_capacity(r);
            let mut prev = 0;
            for &mk in &m {
                let n = mk - prev;
                denom *= factorial(n);
                e.push(n as u32);
                prev = mk;
            }
            out.add_term(e, u / Rational::from_integer(denom));
        }
        if !next_monotone(&mut m, &bound) {
            break;
        }
    }
    Ok(out)
}

/// Next nondecreasing `m` with `m_k <= bound_k`, in lexicographic order.
fn next_monotone(m: &mut [usize], bound: &[usize]) -> bool {
    let r = m.len();
    for k in (0..r).rev() {
        if m[k] < bound[k] {
            let ok_after = (k + 1..r).all(|i| bound[i] > m[k]);
            if ok_after {
                m[k] += 1;
                for i in k + 1..r {
                    m[i] = m[k];
                }
                return true;
            }
        }
    }
    false
}
