//! Positive root systems of the classical families in canonical coordinates.

use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::rational::{
    frac, is_integer, parse_rational_list, rat, render_list, solve, to_i64, Rational,
};
use crate::error::{Error, Result};

/// Largest supported rank; root subsets are stored as 64-bit masks.
pub const MAX_RANK: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn min_rank(self) -> usize {
        match self {
            Family::A => 1,
            Family::B | Family::C => 2,
            Family::D => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::Usage(format!("unknown family {other:?}; expected A, B, C or D"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exact coordinates in the canonical basis `e₁, …, eₙ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight(pub Vec<Rational>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![rat(0); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Weight(v.iter().map(|&x| rat(x)).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        parse_rational_list(s).map(Weight)
    }

    pub fn scale(&self, s: &Rational) -> Weight {
        Weight(self.0.iter().map(|x| x * s).collect())
    }

    pub fn dot(&self, other: &Weight) -> Rational {
        self.0.iter().zip(&other.0).fold(rat(0), |acc, (a, b)| acc + a * b)
    }

    pub fn dot_int(&self, v: &[i64]) -> Rational {
        self.0.iter().zip(v).fold(rat(0), |acc, (a, &b)| acc + a * rat(b))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(to_i64).collect()
    }
}

impl Deref for Weight {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl Add for &Weight {
    type Output = Weight;

    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;

    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;

    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_list(&self.0))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter()
            .map(|s| crate::arith::rational::parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    family: Family,
    rank: usize,
    dim: usize,
    /// Canonical coordinates, in the frozen order (lexicographic, largest last).
    positive: Vec<Vec<i64>>,
    simple: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, same order.
    positive_simple: Vec<Vec<i64>>,
    rho: Weight,
    fundamental: Vec<Weight>,
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if rank < family.min_rank() || rank > MAX_RANK {
            return Err(Error::Usage(format!(
                "rank {rank} out of range for family {family} (supported: {}..={MAX_RANK})",
                family.min_rank()
            )));
        }
        let dim = if family == Family::A { rank + 1 } else { rank };
        let unit = |i: usize, c: i64| {
            let mut v = vec![0i64; dim];
            v[i] = c;
            v
        };
        let combo = |i: usize, a: i64, j: usize, b: i64| {
            let mut v = vec![0i64; dim];
            v[i] += a;
            v[j] += b;
            v
        };
        let mut positive = Vec::new();
        let n = if family == Family::A { rank + 1 } else { rank };
        for i in 0..n {
            for j in i + 1..n {
                positive.push(combo(i, 1, j, -1));
                if family != Family::A {
                    positive.push(combo(i, 1, j, 1));
                }
            }
            match family {
                Family::B => positive.push(unit(i, 1)),
                Family::C => positive.push(unit(i, 2)),
                _ => {}
            }
        }
        positive.sort();
        let mut simple: Vec<Vec<i64>> = (0..rank.min(dim - 1)).map(|i| combo(i, 1, i + 1, -1)).collect();
        match family {
            Family::A => {}
            Family::B => simple.push(unit(rank - 1, 1)),
            Family::C => simple.push(unit(rank - 1, 2)),
            Family::D => {
                simple.truncate(rank - 1);
                simple.push(combo(rank - 2, 1, rank - 1, 1));
            }
        }
        let mut rs = RootSystem {
            family,
            rank,
            dim,
            positive,
            simple,
            positive_simple: Vec::new(),
            rho: Weight::zero(dim),
            fundamental: Vec::new(),
        };
        rs.positive_simple = rs
            .positive
            .iter()
            .map(|a| {
                rs.simple_coords(&Weight::from_ints(a))
                    .expect("roots lie in their span")
                    .iter()
                    .map(|c| to_i64(c).expect("integral simple coordinates"))
                    .collect()
            })
            .collect();
        let mut sum = Weight::zero(dim);
        for a in &rs.positive {
            sum = &sum + &Weight::from_ints(a);
        }
        rs.rho = sum.scale(&frac(1, 2));
        rs.fundamental = rs.compute_fundamental();
        Ok(rs)
    }

    /// Solves `2(ω_i, α_j)/(α_j, α_j) = δ_ij`; for A also `ω_i` has last coordinate 0.
    fn compute_fundamental(&self) -> Vec<Weight> {
        let mut rows: Vec<Vec<Rational>> = self
            .simple
            .iter()
            .map(|a| {
                let n2: i64 = a.iter().map(|x| x * x).sum();
                a.iter().map(|&x| frac(2 * x, n2)).collect()
            })
            .collect();
        if self.family == Family::A {
            let mut last = vec![rat(0); self.dim];
            last[self.dim - 1] = rat(1);
            rows.push(last);
        }
        (0..self.rank)
            .map(|i| {
                let rhs: Vec<Rational> =
                    (0..self.dim).map(|j| if j == i { rat(1) } else { rat(0) }).collect();
                Weight(solve(&rows, &rhs).expect("coroots are independent"))
            })
            .collect()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Ambient dimension: `r + 1` for A, `r` otherwise.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple
    }

    /// Positive roots in simple-root coordinates, in the frozen order.
    pub fn positive_simple_coords(&self) -> &[Vec<i64>] {
        &self.positive_simple
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn fundamental_weights(&self) -> &[Weight] {
        &self.fundamental
    }

    /// Position of a root in the frozen total order.
    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.positive.binary_search_by(|r| r.as_slice().cmp(root)).ok()
    }

    fn check_dim(&self, w: &[Rational]) -> Result<()> {
        if w.len() != self.dim {
            return Err(Error::Usage(format!(
                "{}{} weights have {} coordinates, got {}",
                self.family,
                self.rank,
                self.dim,
                w.len()
            )));
        }
        Ok(())
    }

    pub fn validate(&self, w: &Weight) -> Result<()> {
        self.check_dim(w)
    }

    /// `Σ vᵢ ωᵢ` in canonical coordinates.
    pub fn from_funda_to_cano(&self, v: &[Rational]) -> Result<Weight> {
        if v.len() != self.rank {
            return Err(Error::Usage(format!(
                "expected {} fundamental coordinates, got {}",
                self.rank,
                v.len()
            )));
        }
        let mut w = Weight::zero(self.dim);
        for (c, om) in v.iter().zip(&self.fundamental) {
            w = &w + &om.scale(c);
        }
        Ok(w)
    }

    /// `vⱼ = 2(w, αⱼ)/(αⱼ, αⱼ)`.
    pub fn from_cano_to_funda(&self, w: &Weight) -> Result<Vec<Rational>> {
        self.check_dim(w)?;
        Ok(self
            .simple
            .iter()
            .map(|a| {
                let n2: i64 = a.iter().map(|x| x * x).sum();
                w.dot_int(a) * frac(2, n2)
            })
            .collect())
    }

    /// Coefficients `c` with `w = Σ cᵢ αᵢ`.
    pub fn simple_coords(&self, w: &[Rational]) -> Result<Vec<Rational>> {
        self.check_dim(w)?;
        if self.family == Family::A && !w.iter().fold(rat(0), |a, b| a + b).is_zero() {
            return Err(Error::Span(format!("({})", render_list(w))));
        }
        Ok(self.simple_coords_linear(w))
    }

    /// Matrix of the linear map behind [`Self::simple_coords`]; for A it
    /// ignores the coordinate sum.
    pub fn simple_coords_matrix(&self) -> Vec<Vec<Rational>> {
        let cols: Vec<Vec<Rational>> = (0..self.dim)
            .map(|i| {
                let e: Vec<Rational> = (0..self.dim).map(|j| if i == j { rat(1) } else { rat(0) }).collect();
                self.simple_coords_linear(&e)
            })
            .collect();
        (0..self.rank).map(|k| cols.iter().map(|c| c[k].clone()).collect()).collect()
    }

    fn simple_coords_linear(&self, w: &[Rational]) -> Vec<Rational> {
        let r = self.rank;
        let mut partial = Vec::with_capacity(self.dim);
        let mut acc = rat(0);
        for x in w {
            acc += x;
            partial.push(acc.clone());
        }
        let mut c: Vec<Rational> = partial[..r].to_vec();
        match self.family {
            Family::A | Family::B => {}
            Family::C => c[r - 1] = &partial[r - 1] / rat(2),
            Family::D => {
                c[r - 2] = (&partial[r - 2] - &w[r - 1]) / rat(2);
                c[r - 1] = &partial[r - 1] / rat(2);
            }
        }
        c
    }

    /// Integer simple-root coordinates of a root-lattice element.
    pub fn simple_coords_int(&self, w: &[Rational]) -> Option<Vec<i64>> {
        self.simple_coords(w).ok()?.iter().map(to_i64).collect()
    }

    /// Simple-root coordinates of an integer vector, or `None` off the root lattice.
    pub fn lattice_coords(&self, w: &[i64]) -> Option<Vec<i64>> {
        if w.len() != self.dim {
            return None;
        }
        let r = self.rank;
        let partial: Vec<i64> = w
            .iter()
            .scan(0i64, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect();
        let mut c = partial[..r].to_vec();
        let even = |x: i64| x.rem_euclid(2) == 0;
        match self.family {
            Family::A if partial[self.dim - 1] != 0 => return None,
            Family::A | Family::B => {}
            Family::C => {
                if !even(partial[r - 1]) {
                    return None;
                }
                c[r - 1] = partial[r - 1] / 2;
            }
            Family::D => {
                if !even(partial[r - 1]) {
                    return None;
                }
                c[r - 2] = (partial[r - 2] - w[r - 1]) / 2;
                c[r - 1] = partial[r - 1] / 2;
            }
        }
        Some(c)
    }

    /// Canonical coordinates of `Σ cᵢ αᵢ`.
    pub fn from_simple_coords(&self, c: &[Rational]) -> Weight {
        let mut w = Weight::zero(self.dim);
        for (ci, a) in c.iter().zip(&self.simple) {
            for (x, &y) in w.0.iter_mut().zip(a) {
                *x += ci * rat(y);
            }
        }
        w
    }

    pub fn in_positive_cone(&self, w: &[Rational]) -> bool {
        self.simple_coords(w).is_ok_and(|c| c.iter().all(|x| !x.is_negative()))
    }

    pub fn in_root_lattice(&self, w: &[Rational]) -> bool {
        if w.len() != self.dim || !w.iter().all(is_integer) {
            return false;
        }
        let sum: Rational = w.iter().fold(rat(0), |a, b| a + b);
        match self.family {
            Family::A => sum.is_zero(),
            Family::B => true,
            Family::C | Family::D => is_integer(&(sum / rat(2))),
        }
    }

    pub fn is_dominant(&self, w: &[Rational]) -> bool {
        if w.len() != self.dim || w.windows(2).any(|p| p[0] < p[1]) {
            return false;
        }
        let n = self.dim;
        match self.family {
            Family::A => true,
            Family::B | Family::C => !w[n - 1].is_negative(),
            Family::D => w[n - 2] >= w[n - 1].abs(),
        }
    }

    /// Strictly dominant: dominant and off every wall.
    pub fn is_strictly_dominant(&self, w: &[Rational]) -> bool {
        self.simple.iter().all(|a| Weight(w.to_vec()).dot_int(a).is_positive())
    }

    /// Weights that are integral for this family: integer or (B, D) all half-odd.
    pub fn in_weight_lattice(&self, w: &[Rational]) -> bool {
        self.from_cano_to_funda(&Weight(w.to_vec()))
            .is_ok_and(|v| v.iter().all(is_integer))
    }

    pub fn order_of_weyl_group(&self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match self.family {
            Family::A => fact(self.rank + 1),
            Family::B | Family::C => (1u128 << self.rank) * fact(self.rank),
            Family::D => (1u128 << (self.rank - 1)) * fact(self.rank),
        }
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(f: Family, r: usize) -> RootSystem {
        RootSystem::new(f, r).unwrap()
    }

    fn w(s: &str) -> Weight {
        Weight::parse(s).unwrap()
    }

    #[test]
    fn root_counts() {
        for r in 1..=5 {
            assert_eq!(rs(Family::A, r).num_positive(), r * (r + 1) / 2);
        }
        for r in 2..=5 {
            assert_eq!(rs(Family::B, r).num_positive(), r * r);
            assert_eq!(rs(Family::C, r).num_positive(), r * r);
        }
        for r in 3..=5 {
            assert_eq!(rs(Family::D, r).num_positive(), r * (r - 1));
        }
        assert!(RootSystem::new(Family::B, 1).is_err());
        assert!(RootSystem::new(Family::A, 0).is_err());
    }

    #[test]
    fn matrices_of_rank_two() {
        let cols = |rs: &RootSystem| {
            let mut v = rs.positive_roots().to_vec();
            v.sort();
            v
        };
        let mut a2 = vec![vec![1, -1, 0], vec![1, 0, -1], vec![0, 1, -1]];
        a2.sort();
        assert_eq!(cols(&rs(Family::A, 2)), a2);
        let mut b2 = vec![vec![1, -1], vec![1, 1], vec![1, 0], vec![0, 1]];
        b2.sort();
        assert_eq!(cols(&rs(Family::B, 2)), b2);
    }

    #[test]
    fn conversions() {
        let b3 = rs(Family::B, 3);
        assert_eq!(b3.from_funda_to_cano(&w("0,15,5")).unwrap(), w("35/2,35/2,5/2"));
        assert_eq!(b3.from_funda_to_cano(&w("12,15,3")).unwrap(), w("57/2,33/2,3/2"));
        assert_eq!(b3.from_cano_to_funda(&w("24,18,3")).unwrap(), w("6,15,6").0);
        assert_eq!(b3.from_cano_to_funda(&w("35/2,35/2,5/2")).unwrap(), w("0,15,5").0);
        for f in [Family::A, Family::B, Family::C, Family::D] {
            let rs = rs(f, 4);
            let ones = vec![rat(1); 4];
            assert_eq!(rs.from_cano_to_funda(rs.rho()).unwrap(), ones);
        }
    }

    #[test]
    fn simple_coordinates() {
        assert_eq!(rs(Family::A, 2).simple_coords(&w("1,0,-1")).unwrap(), w("1,1").0);
        assert_eq!(rs(Family::B, 2).simple_coords(&w("1,1")).unwrap(), w("1,2").0);
        assert!(matches!(rs(Family::A, 2).simple_coords(&w("1,0,0")), Err(Error::Span(_))));
        for f in [Family::A, Family::B, Family::C, Family::D] {
            let rs = rs(f, 4);
            for (a, c) in rs.positive_roots().iter().zip(rs.positive_simple_coords()) {
                assert!(c.iter().all(|&x| x >= 0), "{a:?}");
                let back = rs.from_simple_coords(&c.iter().map(|&x| rat(x)).collect::<Vec<_>>());
                assert_eq!(back, Weight::from_ints(a));
            }
        }
    }

    #[test]
    fn cone_lattice_dominance() {
        let a2 = rs(Family::A, 2);
        assert!(a2.in_positive_cone(&w("1,0,-1")));
        assert!(!a2.in_positive_cone(&w("-1,0,1")));
        assert!(rs(Family::B, 2).in_positive_cone(&w("0,1")));
        let c3 = rs(Family::C, 3);
        assert!(c3.in_root_lattice(&w("1,1,0")));
        assert!(!c3.in_root_lattice(&w("1,0,0")));
        assert!(rs(Family::B, 2).in_root_lattice(&w("5,-3")));
        assert!(!a2.in_root_lattice(&w("1,1,-1")));
        assert!(rs(Family::A, 3).is_dominant(&w("2,1,0,-3")));
        assert!(rs(Family::B, 3).is_dominant(&w("35/2,35/2,5/2")));
        let d4 = rs(Family::D, 4);
        assert!(d4.is_dominant(&w("1,1,1,-1")));
        assert!(!d4.is_dominant(&w("1,1,-1,-1")));
    }

    #[test]
    fn fundamental_weights_closed_forms() {
        // B: ω_i = e_1 + ... + e_i for i < r, ω_r = (1/2, ..., 1/2)
        let b3 = rs(Family::B, 3);
        assert_eq!(b3.fundamental_weights()[1], w("1,1,0"));
        assert_eq!(b3.fundamental_weights()[2], w("1/2,1/2,1/2"));
        // C: ω_i = e_1 + ... + e_i
        assert_eq!(rs(Family::C, 3).fundamental_weights()[2], w("1,1,1"));
        // D: the two spin weights
        let d4 = rs(Family::D, 4);
        assert_eq!(d4.fundamental_weights()[2], w("1/2,1/2,1/2,-1/2"));
        assert_eq!(d4.fundamental_weights()[3], w("1/2,1/2,1/2,1/2"));
        // A: gl convention
        assert_eq!(rs(Family::A, 3).fundamental_weights()[1], w("1,1,0,0"));
    }

    #[test]
    fn weyl_group_orders() {
        assert_eq!(rs(Family::A, 2).order_of_weyl_group(), 6);
        assert_eq!(rs(Family::B, 2).order_of_weyl_group(), 8);
        assert_eq!(rs(Family::D, 4).order_of_weyl_group(), 192);
    }

    #[test]
    fn integer_lattice_coords() {
        for (f, r) in [(Family::A, 2), (Family::B, 3), (Family::C, 3), (Family::D, 4)] {
            let rs = rs(f, r);
            let n = rs.dim();
            for code in 0..5i64.pow(n as u32) {
                let v: Vec<i64> = (0..n).map(|i| (code / 5i64.pow(i as u32)) % 5 - 2).collect();
                let q = Weight::from_ints(&v);
                let want = rs.in_root_lattice(&q).then(|| rs.simple_coords_int(&q).unwrap());
                assert_eq!(rs.lattice_coords(&v), want, "{f}{r} {v:?}");
            }
        }
    }
}
