//! Complete and irreducible subsets of `Δ⁺`, maximal proper nested sets,
//! hyperplanes, regular perturbations and chamber counting.
//!
//! Everything here works in simple-root coordinates, where `C(Δ⁺)` is the
//! nonnegative orthant. Subsets of roots are bitmasks over the frozen order.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::integer::{hyperplane_normal, rank_of, Echelon};
use crate::arith::rational::{adjugate_i64, det_i64, frac, rat, Rational};
use crate::error::{Error, Result};
use crate::roots::{RootSystem, Weight};

pub type RootSet = u64;

pub fn members_of(s: RootSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| s >> i & 1 == 1)
}

/// Span data for the positive roots of one root system.
#[derive(Clone, Debug)]
pub struct Matroid {
    rank: usize,
    roots: Vec<Vec<i64>>,
}

impl Matroid {
    pub fn new(rs: &RootSystem) -> Self {
        Matroid { rank: rs.rank(), roots: rs.positive_simple_coords().to_vec() }
    }

    pub fn from_vectors(rank: usize, roots: Vec<Vec<i64>>) -> Self {
        Matroid { rank, roots }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn full(&self) -> RootSet {
        if self.roots.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.roots.len()) - 1
        }
    }

    fn echelon(&self, s: RootSet) -> Echelon {
        let mut e = Echelon::new();
        for i in members_of(s) {
            e.insert(&self.roots[i]);
        }
        e
    }

    pub fn span_rank(&self, s: RootSet) -> usize {
        self.echelon(s).rank()
    }

    /// `⟨S⟩ ∩ Δ⁺`.
    pub fn closure(&self, s: RootSet) -> RootSet {
        let e = self.echelon(s);
        (0..self.roots.len()).filter(|&i| e.contains(&self.roots[i])).fold(0, |m, i| m | 1 << i)
    }

    pub fn is_complete(&self, s: RootSet) -> bool {
        self.closure(s) == s
    }

    /// All complete subsets, found by closing up one root at a time.
    pub fn flats(&self) -> Vec<RootSet> {
        let mut seen: HashSet<RootSet> = HashSet::new();
        let mut frontier = vec![0u64];
        seen.insert(0);
        while let Some(f) = frontier.pop() {
            for i in 0..self.roots.len() {
                if f >> i & 1 == 0 {
                    let g = self.closure(f | 1 << i);
                    if seen.insert(g) {
                        frontier.push(g);
                    }
                }
            }
        }
        let mut v: Vec<RootSet> = seen.into_iter().collect();
        v.sort_by_key(|&s| (s.count_ones(), s));
        v
    }

    /// Connected components of the matroid restricted to `s`, via
    /// fundamental circuits with respect to a greedy basis.
    pub fn components(&self, s: RootSet) -> Vec<RootSet> {
        let elems: Vec<usize> = members_of(s).collect();
        let mut basis = Vec::new();
        let mut e = Echelon::new();
        for &i in &elems {
            if e.insert(&self.roots[i]) {
                basis.push(i);
            }
        }
        let mut parent: HashMap<usize, usize> = elems.iter().map(|&i| (i, i)).collect();
        fn find(p: &mut HashMap<usize, usize>, x: usize) -> usize {
            let mut r = x;
            while p[&r] != r {
                r = p[&r];
            }
            let mut y = x;
            while p[&y] != r {
                let n = p[&y];
                p.insert(y, r);
                y = n;
            }
            r
        }
        let without: Vec<Echelon> = (0..basis.len())
            .map(|k| {
                let mut e = Echelon::new();
                for (j, &b) in basis.iter().enumerate() {
                    if j != k {
                        e.insert(&self.roots[b]);
                    }
                }
                e
            })
            .collect();
        for &i in &elems {
            if basis.contains(&i) {
                continue;
            }
            for (k, &b) in basis.iter().enumerate() {
                // b is in the fundamental circuit of i iff i leaves the span of B \ {b}
                if !without[k].contains(&self.roots[i]) {
                    let (ri, rb) = (find(&mut parent, i), find(&mut parent, b));
                    parent.insert(ri, rb);
                }
            }
        }
        let mut comps: HashMap<usize, RootSet> = HashMap::new();
        for &i in &elems {
            let r = find(&mut parent, i);
            *comps.entry(r).or_insert(0) |= 1 << i;
        }
        let mut v: Vec<RootSet> = comps.into_values().collect();
        v.sort_unstable();
        v
    }

    pub fn is_irreducible(&self, s: RootSet) -> bool {
        s != 0 && self.components(s).len() == 1
    }

    /// Irreducible complete subsets, smallest first.
    pub fn irreducibles(&self) -> Vec<RootSet> {
        self.flats().into_iter().filter(|&f| self.is_irreducible(f)).collect()
    }

    pub fn matrix(&self, cols: &[usize]) -> Vec<Vec<i64>> {
        (0..self.rank).map(|i| cols.iter().map(|&c| self.roots[c][i]).collect()).collect()
    }
}

/// A maximal proper nested set with its ordered basis `θ(M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalNestedSet {
    /// Member subsets, sorted by size then mask.
    pub members: Vec<RootSet>,
    /// Root indices of `φ(M)`, ascending in the total order.
    pub theta: Vec<usize>,
    pub vol: i64,
    /// `adj · Θ = det · I` for the matrix `Θ` with columns `θ(M)`.
    #[serde(skip)]
    adj: Vec<Vec<i64>>,
    #[serde(skip)]
    det: i64,
}

impl MaximalNestedSet {
    pub fn new(m: &Matroid, mut members: Vec<RootSet>, priority: &[usize]) -> Self {
        members.sort_by_key(|&s| (s.count_ones(), s));
        let mut theta: Vec<usize> = members
            .iter()
            .map(|&s| members_of(s).max_by_key(|&i| priority[i]).expect("nonempty member"))
            .collect();
        theta.sort_by_key(|&i| priority[i]);
        Self::with_theta(m, members, theta)
    }

    fn with_theta(m: &Matroid, members: Vec<RootSet>, theta: Vec<usize>) -> Self {
        let mat = m.matrix(&theta);
        let det = det_i64(&mat) as i64;
        MaximalNestedSet { members, theta, vol: det.abs(), adj: adjugate_i64(&mat), det }
    }

    /// Rebuilds the cached matrices after deserialization.
    pub fn restore(&mut self, m: &Matroid) {
        *self = Self::with_theta(m, std::mem::take(&mut self.members), std::mem::take(&mut self.theta));
    }

    /// Coordinates of a simple-coordinate vector in the basis `θ(M)`.
    pub fn coords(&self, v: &[Rational]) -> Vec<Rational> {
        self.adj
            .iter()
            .map(|row| row.iter().zip(v).fold(rat(0), |acc, (&a, x)| acc + x * rat(a)) / rat(self.det))
            .collect()
    }

    pub fn coords_int(&self, v: &[i64]) -> Vec<Rational> {
        self.adj
            .iter()
            .map(|row| frac(row.iter().zip(v).map(|(&a, &x)| a * x).sum(), self.det))
            .collect()
    }

    /// Signs of the `θ`-coordinates of an integer vector.
    pub fn coord_signs_int<'a>(&'a self, v: &'a [i64]) -> impl Iterator<Item = i64> + 'a {
        let sd = self.det.signum();
        self.adj.iter().map(move |row| row.iter().zip(v).map(|(&a, &x)| a * x).sum::<i64>().signum() * sd)
    }

    /// `Θ⁻¹` as a rational matrix.
    pub fn inverse(&self) -> Vec<Vec<Rational>> {
        self.adj.iter().map(|row| row.iter().map(|&a| frac(a, self.det)).collect()).collect()
    }
}

/// The frozen total order: root index = position.
pub fn default_priority(m: &Matroid) -> Vec<usize> {
    (0..m.len()).collect()
}

/// All maximal proper nested sets for the given total order.
///
/// Built top-down: the members strictly below an irreducible `I` in a maximal
/// nested set are the irreducible components of a complete subset `H ⊂ I` of
/// rank one less. Properness forces `H` to avoid the largest root of `I`.
pub fn maximal_proper_nested_sets_with(m: &Matroid, priority: &[usize]) -> Vec<MaximalNestedSet> {
    let flats = m.flats();
    let ranks: HashMap<RootSet, usize> = flats.iter().map(|&f| (f, m.span_rank(f))).collect();
    let mut memo: HashMap<RootSet, Vec<Vec<RootSet>>> = HashMap::new();
    let top = m.full();
    let sets = nested_below(m, &flats, &ranks, priority, top, &mut memo);
    let mut out: Vec<MaximalNestedSet> =
        sets.into_iter().map(|s| MaximalNestedSet::new(m, s, priority)).collect();
    out.sort_by(|a, b| a.theta.cmp(&b.theta).then_with(|| a.members.cmp(&b.members)));
    out
}

fn nested_below(
    m: &Matroid,
    flats: &[RootSet],
    ranks: &HashMap<RootSet, usize>,
    priority: &[usize],
    i: RootSet,
    memo: &mut HashMap<RootSet, Vec<Vec<RootSet>>>,
) -> Vec<Vec<RootSet>> {
    if let Some(v) = memo.get(&i) {
        return v.clone();
    }
    let k = ranks[&i];
    let out = if k == 1 {
        vec![vec![i]]
    } else {
        let top = members_of(i).max_by_key(|&x| priority[x]).expect("nonempty");
        let mut out = Vec::new();
        for &h in flats {
            if h & !i != 0 || h >> top & 1 == 1 || ranks[&h] != k - 1 {
                continue;
            }
            let mut partial: Vec<Vec<RootSet>> = vec![vec![i]];
            for c in m.components(h) {
                let below = nested_below(m, flats, ranks, priority, c, memo);
                partial = partial
                    .iter()
                    .flat_map(|p| {
                        below.iter().map(move |b| {
                            let mut q = p.clone();
                            q.extend_from_slice(b);
                            q
                        })
                    })
                    .collect();
            }
            out.extend(partial);
        }
        out
    };
    memo.insert(i, out.clone());
    out
}

pub fn maximal_proper_nested_sets(rs: &RootSystem) -> Vec<MaximalNestedSet> {
    let m = Matroid::new(rs);
    let p = default_priority(&m);
    maximal_proper_nested_sets_with(&m, &p)
}

/// Independent check of the nested, maximal and proper conditions.
pub fn check_nested(m: &Matroid, members: &[RootSet], priority: &[usize]) -> bool {
    if members.len() != m.rank() || members.iter().any(|&s| !m.is_irreducible(s) || !m.is_complete(s)) {
        return false;
    }
    let n = members.len();
    for pick in 1u32..(1 << n) {
        let chosen: Vec<RootSet> = (0..n).filter(|&j| pick >> j & 1 == 1).map(|j| members[j]).collect();
        let antichain = chosen
            .iter()
            .all(|&a| chosen.iter().all(|&b| a == b || (a & !b != 0 && b & !a != 0)));
        if !antichain {
            continue;
        }
        let union = chosen.iter().fold(0, |u, &s| u | s);
        if !m.is_complete(union) {
            return false;
        }
        let mut comps = m.components(union);
        let mut c2 = chosen.clone();
        comps.sort_unstable();
        c2.sort_unstable();
        if comps != c2 {
            return false;
        }
    }
    let phi: Vec<usize> = members
        .iter()
        .map(|&s| members_of(s).max_by_key(|&i| priority[i]).unwrap())
        .collect();
    let cols: Vec<&[i64]> = phi.iter().map(|&i| m.root(i)).collect();
    rank_of(&cols) == m.rank()
}

/// Normals (in simple coordinates) of the hyperplanes spanned by roots.
pub fn hyperplanes(m: &Matroid) -> Vec<Vec<i64>> {
    let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
    for f in m.flats() {
        if m.span_rank(f) + 1 != m.rank() {
            continue;
        }
        let mut e = Echelon::new();
        let mut basis: Vec<&[i64]> = Vec::new();
        for i in members_of(f) {
            if e.insert(m.root(i)) {
                basis.push(m.root(i));
            }
        }
        out.insert(hyperplane_normal(&basis));
    }
    out.into_iter().collect()
}

fn dot(h: &[i64], v: &[Rational]) -> Rational {
    h.iter().zip(v).fold(rat(0), |acc, (&a, x)| acc + x * rat(a))
}

/// A direction off every hyperplane: `(1, K, K², …)` with `K` beyond every normal entry.
pub fn generic_direction(m: &Matroid, hyperplanes: &[Vec<i64>]) -> Vec<Rational> {
    let k = 2 * hyperplanes.iter().flatten().map(|x| x.abs()).max().unwrap_or(1) + 1;
    (0..m.rank()).map(|i| rat(k.pow(i as u32))).collect()
}

/// Selected MPNS for a vector `a` pushed an infinitesimal step along `delta`:
/// each `θ`-coordinate of `a` must be positive, or zero with the matching
/// coordinate of `delta` positive.
pub fn select_lex(mpns: &[MaximalNestedSet], a: &[Rational], delta: &[Rational]) -> Vec<usize> {
    mpns.iter()
        .enumerate()
        .filter(|(_, m)| {
            let ca = m.coords(a);
            ca.iter().all(|x| !x.is_negative())
                && {
                    let cd = m.coords(delta);
                    ca.iter().zip(&cd).all(|(x, d)| x.is_positive() || d.is_positive())
                }
        })
        .map(|(i, _)| i)
        .collect()
}

/// MPNS whose open cone contains the regular vector `v` (simple coordinates).
pub fn select_mpns(mpns: &[MaximalNestedSet], v: &[Rational]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, m) in mpns.iter().enumerate() {
        let c = m.coords(v);
        if c.iter().any(Zero::is_zero) {
            return Err(Error::Singular(format!("({})", crate::arith::rational::render_list(v))));
        }
        if c.iter().all(Signed::is_positive) {
            out.push(i);
        }
    }
    Ok(out)
}

/// `a + ε·δ` with `ε` half the distance (along `δ`) to the nearest hyperplane
/// not through `a`; canonical coordinates in and out.
pub fn regular_perturbation(rs: &RootSystem, a: &Weight) -> Result<Weight> {
    if !rs.in_positive_cone(a) {
        return Err(Error::Cone(format!("({a})")));
    }
    let m = Matroid::new(rs);
    let hs = hyperplanes(&m);
    let delta = generic_direction(&m, &hs);
    let s = rs.simple_coords(a)?;
    let mut eps: Option<Rational> = None;
    let mut regular = true;
    for h in &hs {
        let ha = dot(h, &s);
        if ha.is_zero() {
            regular = false;
            continue;
        }
        let r = ha.abs() / dot(h, &delta).abs();
        eps = Some(match eps {
            Some(e) if e <= r => e,
            _ => r,
        });
    }
    if regular {
        return Ok(a.clone());
    }
    let eps = eps.map_or_else(|| rat(1), |e| e / rat(2));
    let v: Vec<Rational> = s.iter().zip(&delta).map(|(x, d)| x + &eps * d).collect();
    Ok(rs.from_simple_coords(&v))
}

/// Number of combinatorial chambers of `C(Δ⁺)`.
///
/// The orthant is cut by every root hyperplane (double description); the
/// resulting regions are then merged by the set of basic subsets whose open
/// cone contains them.
pub fn count_chambers(rs: &RootSystem) -> Result<usize> {
    if rs.rank() > 4 {
        return Err(Error::Unsupported(format!("chamber counting above rank 4 ({rs})")));
    }
    let m = Matroid::new(rs);
    let regions = arrangement_regions(&m);
    let bases = basic_subsets(&m);
    let mut keys: HashSet<Vec<bool>> = HashSet::new();
    for reg in &regions {
        let v = interior_point(reg);
        keys.insert(bases.iter().map(|b| b.contains_strictly(&v)).collect());
    }
    Ok(keys.len())
}

/// A basic subset with the adjugate of its matrix.
#[derive(Clone, Debug)]
pub struct Basic {
    pub roots: Vec<usize>,
    pub det: i64,
    adj: Vec<Vec<i64>>,
}

impl Basic {
    pub fn contains_strictly(&self, v: &[i128]) -> bool {
        self.adj.iter().all(|row| {
            let x: i128 = row.iter().zip(v).map(|(&a, &b)| a as i128 * b).sum();
            x != 0 && (x > 0) == (self.det > 0)
        })
    }

    pub fn contains_strictly_rat(&self, v: &[Rational]) -> bool {
        self.adj.iter().all(|row| {
            let x = dot(row, v);
            !x.is_zero() && x.is_positive() == (self.det > 0)
        })
    }
}

/// Every `r`-subset of `Δ⁺` forming a basis.
pub fn basic_subsets(m: &Matroid) -> Vec<Basic> {
    let n = m.len();
    let r = m.rank();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let mat = m.matrix(&idx);
        let det = det_i64(&mat) as i64;
        if det != 0 {
            out.push(Basic { roots: idx.clone(), det, adj: adjugate_i64(&mat) });
        }
        // next combination
        let mut k = r;
        while k > 0 && idx[k - 1] == n - r + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for j in k..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// A pointed polyhedral cone given by rays and the inequalities `g·x >= 0`.
#[derive(Clone, Debug)]
struct Region {
    rays: Vec<Vec<i128>>,
    ineqs: Vec<Vec<i128>>,
}

fn dot128(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive128(mut v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, &x| {
        let (mut a, mut b) = (g.abs(), x.abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    });
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
    v
}

fn rank128(rows: &[&Vec<i128>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        let v: Vec<i64> = r.iter().map(|&x| x as i64).collect();
        e.insert(&v);
    }
    e.rank()
}

fn arrangement_regions(m: &Matroid) -> Vec<Region> {
    let r = m.rank();
    let unit = |i: usize| (0..r).map(|j| i128::from(i == j)).collect::<Vec<i128>>();
    let mut regions = vec![Region { rays: (0..r).map(unit).collect(), ineqs: (0..r).map(unit).collect() }];
    for h in hyperplanes(m) {
        let h: Vec<i128> = h.iter().map(|&x| x as i128).collect();
        let mut next = Vec::with_capacity(regions.len());
        for reg in regions {
            let vals: Vec<i128> = reg.rays.iter().map(|u| dot128(&h, u)).collect();
            if vals.iter().all(|&x| x >= 0) || vals.iter().all(|&x| x <= 0) {
                next.push(reg);
                continue;
            }
            let mut new_rays = Vec::new();
            for (i, u) in reg.rays.iter().enumerate() {
                for (j, w) in reg.rays.iter().enumerate() {
                    if vals[i] <= 0 || vals[j] >= 0 {
                        continue;
                    }
                    let tight: Vec<&Vec<i128>> = reg
                        .ineqs
                        .iter()
                        .filter(|g| dot128(g, u) == 0 && dot128(g, w) == 0)
                        .collect();
                    if rank128(&tight) + 2 != r {
                        continue;
                    }
                    let ray: Vec<i128> =
                        u.iter().zip(w).map(|(&x, &y)| vals[i] * y - vals[j] * x).collect();
                    new_rays.push(primitive128(ray));
                }
            }
            for side in [1i128, -1] {
                let mut rays: Vec<Vec<i128>> = reg
                    .rays
                    .iter()
                    .zip(&vals)
                    .filter(|(_, &x)| x * side >= 0)
                    .map(|(u, _)| u.clone())
                    .collect();
                rays.extend(new_rays.iter().cloned());
                let mut ineqs = reg.ineqs.clone();
                ineqs.push(h.iter().map(|&x| x * side).collect());
                next.push(Region { rays, ineqs });
            }
        }
        regions = next;
    }
    regions
}

fn interior_point(reg: &Region) -> Vec<i128> {
    let r = reg.rays[0].len();
    (0..r).map(|i| reg.rays.iter().map(|u| u[i]).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::Family;

    fn rs(f: Family, r: usize) -> RootSystem {
        RootSystem::new(f, r).unwrap()
    }

    /// Irreducible complete subsets by scanning every subset and every
    /// bipartition.
    fn irreducibles_brute(m: &Matroid) -> Vec<RootSet> {
        let mut out = Vec::new();
        for s in 1..=m.full() {
            if !m.is_complete(s) {
                continue;
            }
            let k = m.span_rank(s);
            let elems: Vec<usize> = members_of(s).collect();
            let split = (1u64..(1 << elems.len()) - 1).any(|pick| {
                let a = elems.iter().enumerate().filter(|(j, _)| pick >> j & 1 == 1).fold(0, |u, (_, &i)| u | 1 << i);
                m.span_rank(a) + m.span_rank(s & !a) == k
            });
            if !split {
                out.push(s);
            }
        }
        out.sort_by_key(|&s| (s.count_ones(), s));
        out
    }

    #[test]
    fn irreducibles_match_brute_force() {
        for (f, r) in [(Family::A, 2), (Family::B, 2), (Family::A, 3), (Family::B, 3), (Family::C, 3)] {
            let m = Matroid::new(&rs(f, r));
            assert_eq!(m.irreducibles(), irreducibles_brute(&m), "{f}{r}");
        }
    }

    #[test]
    fn irreducibles_a3() {
        let m = Matroid::new(&rs(Family::A, 3));
        let irr = m.irreducibles();
        // 6 singletons, 4 triples (A2 subsystems), 1 full set
        assert_eq!(irr.len(), 11);
        assert_eq!(irr.iter().filter(|s| s.count_ones() == 1).count(), 6);
        assert_eq!(irr.iter().filter(|s| s.count_ones() == 3).count(), 4);
        let a2 = Matroid::new(&rs(Family::A, 2));
        assert_eq!(a2.irreducibles().len(), 4);
    }

    #[test]
    fn mpns_are_nested_and_proper() {
        for (f, r) in [(Family::A, 1), (Family::A, 2), (Family::A, 3), (Family::B, 2), (Family::B, 3), (Family::C, 3), (Family::D, 4)] {
            let rs = rs(f, r);
            let m = Matroid::new(&rs);
            let p = default_priority(&m);
            let all = maximal_proper_nested_sets_with(&m, &p);
            assert!(!all.is_empty());
            let distinct: HashSet<_> = all.iter().map(|x| x.members.clone()).collect();
            assert_eq!(distinct.len(), all.len());
            for x in &all {
                assert!(check_nested(&m, &x.members, &p), "{f}{r} {:?}", x.members);
                assert!(x.vol >= 1 && (x.vol as u64).is_power_of_two());
                if f == Family::A {
                    assert_eq!(x.vol, 1);
                }
            }
        }
    }

    #[test]
    fn mpns_counts() {
        assert_eq!(maximal_proper_nested_sets(&rs(Family::A, 1)).len(), 1);
        assert_eq!(maximal_proper_nested_sets(&rs(Family::A, 2)).len(), 2);
        // products of the exponents: 1·2·3 and 1·3·5
        assert_eq!(maximal_proper_nested_sets(&rs(Family::A, 3)).len(), 6);
        assert_eq!(maximal_proper_nested_sets(&rs(Family::B, 3)).len(), 15);
    }

    #[test]
    fn a3_contains_listed_sets() {
        let rs = rs(Family::A, 3);
        let m = Matroid::new(&rs);
        let all = maximal_proper_nested_sets(&rs);
        let idx = |i: usize, j: usize| {
            let mut v = vec![0i64; 4];
            v[i - 1] = 1;
            v[j - 1] = -1;
            rs.root_index(&v).unwrap()
        };
        let subset = |s: &[usize]| {
            let mut mask = 0u64;
            for a in 0..s.len() {
                for b in a + 1..s.len() {
                    mask |= 1 << idx(s[a], s[b]);
                }
            }
            mask
        };
        let full = m.full();
        for want in [
            vec![subset(&[1, 2]), subset(&[1, 2, 3]), full],
            vec![subset(&[1, 3]), subset(&[2, 4]), full],
            vec![subset(&[1, 2]), subset(&[3, 4]), full],
        ] {
            let mut want = want;
            want.sort_by_key(|&s| (s.count_ones(), s));
            assert!(all.iter().any(|x| x.members == want), "{want:?}");
        }
    }

    #[test]
    fn chambers_low_rank() {
        assert_eq!(count_chambers(&rs(Family::A, 2)).unwrap(), 2);
        assert_eq!(count_chambers(&rs(Family::B, 2)).unwrap(), 3);
        assert_eq!(count_chambers(&rs(Family::A, 3)).unwrap(), 7);
        assert_eq!(count_chambers(&rs(Family::B, 3)).unwrap(), 23);
    }

    #[test]
    fn perturbation() {
        let rs = rs(Family::A, 3);
        let a = Weight::parse("1,0,0,-1").unwrap();
        let v = regular_perturbation(&rs, &a).unwrap();
        assert_ne!(v, a);
        let m = Matroid::new(&rs);
        let s = rs.simple_coords(&v).unwrap();
        assert!(hyperplanes(&m).iter().all(|h| !dot(h, &s).is_zero()));
        let zero = Weight::zero(4);
        let v0 = regular_perturbation(&rs, &zero).unwrap();
        assert!(rs.in_positive_cone(&v0) && !v0.is_zero());
        assert!(matches!(regular_perturbation(&rs, &Weight::parse("-1,1,0,0").unwrap()), Err(Error::Cone(_))));
        // lexicographic selection agrees with the explicit perturbation
        let all = maximal_proper_nested_sets(&rs);
        let delta = generic_direction(&m, &hyperplanes(&m));
        assert_eq!(select_lex(&all, &rs.simple_coords(&a).unwrap(), &delta), select_mpns(&all, &s).unwrap());
    }

    #[test]
    fn torus_free_selection_a2() {
        // v = α₁ + 2α₂
        let rs = rs(Family::A, 2);
        let all = maximal_proper_nested_sets(&rs);
        let sel = select_mpns(&all, &[rat(1), rat(2)]).unwrap();
        assert_eq!(sel.len(), 1);
        assert!(select_mpns(&all, &[rat(-1), rat(2)]).unwrap().is_empty());
        assert!(matches!(select_mpns(&all, &[rat(1), rat(1)]), Err(Error::Singular(_))));
    }
}
