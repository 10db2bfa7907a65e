//! Weyl groups of the classical families as signed permutations.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::rational::Rational;
use crate::roots::{Family, RootSystem, Weight};

/// `(w·v)ᵢ = signsᵢ · v_{perm[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement { perm: (0..n).collect(), signs: vec![1; n] }
    }

    pub fn apply(&self, v: &[Rational]) -> Weight {
        Weight(
            self.perm
                .iter()
                .zip(&self.signs)
                .map(|(&p, &s)| if s < 0 { -&v[p] } else { v[p].clone() })
                .collect(),
        )
    }

    /// Determinant of the signed permutation matrix.
    pub fn sign(&self) -> i8 {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut parity = 0usize;
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut j = i;
            let mut len = 0;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            parity += len - 1;
        }
        parity += self.signs.iter().filter(|&&s| s < 0).count();
        if parity.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s > 0)
    }
}

/// Streams every element of the Weyl group exactly once.
pub struct WeylIter {
    family: Family,
    n: usize,
    perm: Option<Vec<usize>>,
    mask: u64,
}

pub fn weyl_enumerate(rs: &RootSystem) -> WeylIter {
    let n = rs.dim();
    WeylIter { family: rs.family(), n, perm: Some((0..n).collect()), mask: 0 }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl Iterator for WeylIter {
    type Item = WeylElement;

    fn next(&mut self) -> Option<WeylElement> {
        let masks: u64 = if self.family == Family::A { 1 } else { 1 << self.n };
        loop {
            let perm = self.perm.as_mut()?;
            if self.mask >= masks {
                self.mask = 0;
                if !next_permutation(perm) {
                    self.perm = None;
                    return None;
                }
            }
            let m = self.mask;
            self.mask += 1;
            if self.family == Family::D && m.count_ones() % 2 == 1 {
                continue;
            }
            let signs = (0..self.n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect();
            return Some(WeylElement { perm: perm.clone(), signs });
        }
    }
}

/// A Weyl group datum with its sign and the shifted argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidTerm {
    pub w: WeylElement,
    /// Second element for pairs.
    pub w2: Option<WeylElement>,
    pub sign: i8,
    pub arg: Weight,
}

/// Finds every `w` with `w·p + s ∈ C(Δ⁺)`, pruning partial assignments.
///
/// All such conditions are sign conditions on partial sums of the
/// coordinates, so the signed permutation is built position by position and a
/// branch is cut as soon as a later partial sum can no longer become
/// nonnegative.
/// Vectors scaled to integers by one common denominator.
fn scaled(vs: &[&[Rational]]) -> Vec<Vec<i128>> {
    let den = vs.iter().flat_map(|v| v.iter()).fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    vs.iter()
        .map(|v| {
            v.iter()
                .map(|x| (x.numer() * (&den / x.denom())).to_i128().expect("coordinates fit in i128"))
                .collect()
        })
        .collect()
}

struct ConeSearch {
    family: Family,
    n: usize,
    /// Scaled to integers by a common denominator.
    p: Vec<i128>,
    s: Vec<i128>,
    /// Positions k (0-based) where `P_k >= 0` is required.
    checked: Vec<bool>,
}

impl ConeSearch {
    fn new(rs: &RootSystem, p: &[Rational], s: &[Rational]) -> Self {
        let mut v = scaled(&[p, s]).into_iter();
        Self::from_scaled(rs, v.next().unwrap(), v.next().unwrap())
    }

    fn from_scaled(rs: &RootSystem, p: Vec<i128>, s: Vec<i128>) -> Self {
        let n = rs.dim();
        let r = rs.rank();
        let checked = (0..n)
            .map(|k| match rs.family() {
                Family::A => k < r,
                Family::B | Family::C => true,
                Family::D => k + 2 < n || k + 1 == n,
            })
            .collect();
        ConeSearch { family: rs.family(), n, p, s, checked }
    }

    fn run(&self) -> Vec<WeylElement> {
        if self.family == Family::A {
            let total: i128 = self.p.iter().chain(&self.s).sum();
            if total != 0 {
                return Vec::new();
            }
        }
        let mut out = Vec::new();
        let mut perm = Vec::with_capacity(self.n);
        let mut signs = Vec::with_capacity(self.n);
        let mut used = vec![false; self.n];
        self.step(0, 0, &mut perm, &mut signs, &mut used, &mut out);
        out
    }

    /// Upper bound on the sum of `m` further entries drawn from the unused values.
    fn best_sum(&self, used: &[bool], m: usize) -> i128 {
        let mut vals: Vec<i128> = (0..self.n)
            .filter(|&i| !used[i])
            .map(|i| if self.family == Family::A { self.p[i] } else { self.p[i].abs() })
            .collect();
        vals.sort_unstable_by(|a, b| b.cmp(a));
        vals.iter().take(m).sum()
    }

    fn feasible(&self, k: usize, partial: i128, used: &[bool]) -> bool {
        // k positions assigned; partial = P_{k-1}
        let mut s_acc = 0i128;
        for m in k..self.n {
            s_acc += self.s[m];
            if self.checked[m] && partial + s_acc + self.best_sum(used, m + 1 - k) < 0 {
                return false;
            }
        }
        true
    }

    fn step(
        &self,
        k: usize,
        partial: i128,
        perm: &mut Vec<usize>,
        signs: &mut Vec<i8>,
        used: &mut Vec<bool>,
        out: &mut Vec<WeylElement>,
    ) {
        if k == self.n {
            if self.family == Family::D {
                if signs.iter().filter(|&&x| x < 0).count() % 2 == 1 {
                    return;
                }
                // (P_{n-1} - x_n)/2 >= 0
                let last = self.s[k - 1] + signs[k - 1] as i128 * self.p[perm[k - 1]];
                if partial - 2 * last < 0 {
                    return;
                }
            }
            out.push(WeylElement { perm: perm.clone(), signs: signs.clone() });
            return;
        }
        let sign_choices: &[i8] = if self.family == Family::A { &[1] } else { &[1, -1] };
        for i in 0..self.n {
            if used[i] {
                continue;
            }
            for &sg in sign_choices {
                let val = self.s[k] + sg as i128 * self.p[i];
                let next = partial + val;
                if self.checked[k] && next < 0 {
                    continue;
                }
                used[i] = true;
                if self.feasible(k + 1, next, used) {
                    perm.push(i);
                    signs.push(sg);
                    self.step(k + 1, next, perm, signs, used, out);
                    perm.pop();
                    signs.pop();
                }
                used[i] = false;
            }
        }
    }
}

/// Every `w` with `w(λ+ρ) − (μ+ρ) ∈ C(Δ⁺)`.
pub fn valid_elements(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Vec<ValidTerm> {
    let p = lambda + rs.rho();
    let s = -&(mu + rs.rho());
    let mut out: Vec<ValidTerm> = ConeSearch::new(rs, &p, &s)
        .run()
        .into_iter()
        .map(|w| {
            let arg = &w.apply(&p) + &s;
            ValidTerm { sign: w.sign(), w, w2: None, arg }
        })
        .collect();
    out.sort_by(|a, b| a.w.cmp(&b.w));
    out
}

/// Every `(w, w′)` with `w(λ+ρ) + w′(μ+ρ) − (ν+2ρ) ∈ C(Δ⁺)`.
pub fn valid_pairs(rs: &RootSystem, lambda: &Weight, mu: &Weight, nu: &Weight) -> Vec<ValidTerm> {
    let lp = lambda + rs.rho();
    let mp = mu + rs.rho();
    let shift = &(nu + rs.rho()) + rs.rho();
    let v = scaled(&[&lp, &mp, &shift]);
    let mut out: Vec<ValidTerm> = weyl_enumerate(rs)
        .par_bridge()
        .flat_map_iter(|w| {
            let si: Vec<i128> = w.perm.iter().zip(&w.signs).zip(&v[2]).map(|((&p, &sg), &t)| sg as i128 * v[0][p] - t).collect();
            let found = ConeSearch::from_scaled(rs, v[1].clone(), si).run();
            let s = if found.is_empty() { Weight::zero(0) } else { &w.apply(&lp) - &shift };
            let sw = w.sign();
            found
                .into_iter()
                .map(|w2| {
                    let arg = &w2.apply(&mp) + &s;
                    ValidTerm { sign: sw * w2.sign(), w: w.clone(), w2: Some(w2), arg }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(|a, b| (&a.w, &a.w2).cmp(&(&b.w, &b.w2)));
    out
}

/// Full scan over `W`, for cross-checking [`valid_elements`].
pub fn valid_elements_naive(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Vec<ValidTerm> {
    let p = lambda + rs.rho();
    let q = mu + rs.rho();
    let mut out: Vec<ValidTerm> = weyl_enumerate(rs)
        .filter_map(|w| {
            let arg = &w.apply(&p) - &q;
            rs.in_positive_cone(&arg).then(|| ValidTerm { sign: w.sign(), w, w2: None, arg })
        })
        .collect();
    out.sort_by(|a, b| a.w.cmp(&b.w));
    out
}

/// Full scan over `W × W`, for cross-checking [`valid_pairs`].
pub fn valid_pairs_naive(
    rs: &RootSystem,
    lambda: &Weight,
    mu: &Weight,
    nu: &Weight,
) -> Vec<ValidTerm> {
    let lp = lambda + rs.rho();
    let mp = mu + rs.rho();
    let shift = &(nu + rs.rho()) + rs.rho();
    let mut out = Vec::new();
    for w in weyl_enumerate(rs) {
        let s = &w.apply(&lp) - &shift;
        for w2 in weyl_enumerate(rs) {
            let arg = &w2.apply(&mp) + &s;
            if rs.in_positive_cone(&arg) {
                out.push(ValidTerm { sign: w.sign() * w2.sign(), w: w.clone(), w2: Some(w2), arg });
            }
        }
    }
    out.sort_by(|a, b| (&a.w, &a.w2).cmp(&(&b.w, &b.w2)));
    out
}

/// The element `w` with `w·v` dominant, and whether `v` lies on a wall.
pub fn to_dominant(rs: &RootSystem, v: &[Rational]) -> (WeylElement, bool) {
    let n = v.len();
    let key = |x: &Rational| if rs.family() == Family::A { x.clone() } else { x.abs() };
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| key(&v[b]).cmp(&key(&v[a])));
    let mut signs: Vec<i8> = if rs.family() == Family::A {
        vec![1; n]
    } else {
        perm.iter().map(|&i| if v[i].is_negative() { -1 } else { 1 }).collect()
    };
    if rs.family() == Family::D && signs.iter().filter(|&&s| s < 0).count() % 2 == 1 {
        signs[n - 1] = -signs[n - 1];
    }
    let sorted: Vec<Rational> = perm.iter().map(|&i| key(&v[i])).collect();
    let singular = sorted.windows(2).any(|p| p[0] == p[1])
        || (matches!(rs.family(), Family::B | Family::C) && sorted[n - 1].is_zero());
    (WeylElement { perm, signs }, singular)
}
