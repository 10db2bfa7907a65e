//! Finite subgroups `T(σ)` of the torus, parametrised by the values
//! `t_k = ⟨α_k, G⟩ mod 1` on the simple roots.

use std::collections::BTreeSet;

use crate::arith::integer::smith;
use crate::error::{Error, Result};
use crate::nested::{Basic, Matroid};

/// A torus element of order dividing 2, stored as `π = 2t ∈ {0,1}^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElement {
    pub pi: Vec<u8>,
}

impl TorusElement {
    pub fn identity(r: usize) -> Self {
        TorusElement { pi: vec![0; r] }
    }

    pub fn is_identity(&self) -> bool {
        self.pi.iter().all(|&x| x == 0)
    }

    /// `e^{-2iπ⟨β,G⟩}` for a root with simple coordinates `b`.
    pub fn character(&self, b: &[i64]) -> i8 {
        let s: i64 = self.pi.iter().zip(b).map(|(&p, &x)| p as i64 * x).sum();
        if s.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// `G` as a vector of rationals in `{0, 1/2}`, on the simple roots.
    pub fn coords(&self) -> Vec<(i64, i64)> {
        self.pi.iter().map(|&p| (p as i64, 2)).collect()
    }
}

/// All `t ∈ (ℚ/ℤ)^r` with `⟨β, t⟩ ∈ ℤ` for the roots `β ∈ σ`.
pub fn torus_subgroup(m: &Matroid, sigma: &[usize]) -> Result<Vec<TorusElement>> {
    let r = m.rank();
    // rows are the roots of σ, so the condition reads A·t ∈ ℤ^r
    let a: Vec<Vec<i64>> = sigma.iter().map(|&i| m.root(i).to_vec()).collect();
    let (d, v) = smith(&a);
    if d.contains(&0) {
        return Err(Error::Usage("σ is not a basis".into()));
    }
    let total: i64 = d.iter().product();
    if total.count_ones() != 1 {
        return Err(Error::UnsupportedTorus(format!("|det σ| = {total} is not a power of 2")));
    }
    let mut out = BTreeSet::new();
    let mut k = vec![0i64; r];
    loop {
        // t = V·(k_i/d_i); 2t must be integral
        let mut pi = Vec::with_capacity(r);
        for row in &v {
            let l = d.iter().fold(1i64, |acc, &x| num_integer::lcm(acc, x));
            let num: i64 = row.iter().zip(&k).zip(&d).map(|((&vij, &kj), &dj)| vij * kj * (l / dj)).sum();
            // t_i = num / l
            if (2 * num) % l != 0 {
                return Err(Error::UnsupportedTorus(format!(
                    "torus element of order {} > 2",
                    l / num_integer::gcd(num, l)
                )));
            }
            pi.push(((2 * num / l).rem_euclid(2)) as u8);
        }
        out.insert(TorusElement { pi });
        let mut i = 0;
        while i < r {
            k[i] += 1;
            if k[i] < d[i] {
                break;
            }
            k[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    Ok(out.into_iter().collect())
}

/// Union of `T(σ)` over the basic subsets whose open cone contains `v`
/// (simple coordinates).
pub fn torus_set(
    m: &Matroid,
    bases: &[Basic],
    v: &[crate::arith::Rational],
) -> Result<Vec<TorusElement>> {
    let mut out = BTreeSet::new();
    out.insert(TorusElement::identity(m.rank()));
    for b in bases {
        if b.det.abs() > 1 && b.contains_strictly_rat(v) {
            out.extend(torus_subgroup(m, &b.roots)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Union of `T(σ)` over every basic subset.
pub fn torus_full(m: &Matroid, bases: &[Basic]) -> Result<Vec<TorusElement>> {
    let mut out = BTreeSet::new();
    out.insert(TorusElement::identity(m.rank()));
    for b in bases {
        if b.det.abs() > 1 {
            out.extend(torus_subgroup(m, &b.roots)?);
        }
    }
    Ok(out.into_iter().collect())
}
