//! The Kostant partition function through Jeffrey-Kirwan residues.
//!
//! For `a` in the closure of a chamber `𝔠`,
//! `k(a) = Σ_{g ∈ F} Σ_{M ∈ 𝒫, 𝔠 ⊂ C(M)} IRes_M(𝓕(g, a)) / vol(M)`
//! where `𝓕(g, a) = e^{⟨a, 2iπG + u⟩} / Π_{α ∈ Δ⁺} (1 − e^{−⟨α, 2iπG + u⟩})`.
//! All torus elements have order at most 2, so every character is `±1`.

pub mod dp;
pub mod residue;
pub mod torus;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::poly::MultiPoly;
use crate::arith::quasi::{ParityForm, QuasiPolynomial};
use crate::arith::rational::{is_integer, rat, to_i64, Rational};
use crate::error::{Error, Result};
use crate::nested::{
    basic_subsets, generic_direction, hyperplanes, maximal_proper_nested_sets_with, select_lex,
    Basic, Matroid, MaximalNestedSet,
};
use crate::roots::{Family, RootSystem, Weight};

pub use dp::{kostant_partition_dp, DpTable};
pub use residue::{iterated_residue, Factor};
pub use torus::{torus_full, torus_set, torus_subgroup, TorusElement};

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// A total order on `Δ⁺` other than the frozen one: `priority[i]` ranks root `i`.
    pub priority: Option<Vec<usize>>,
    /// Perturbation direction in simple coordinates; must avoid every hyperplane.
    pub delta: Option<Vec<Rational>>,
    /// Where MPNS are cached; ignored with a custom order.
    pub cache_dir: Option<PathBuf>,
    /// Sum over every `T(σ)` instead of the ones meeting the chamber.
    pub full_torus: bool,
}

#[derive(Debug, Default)]
pub struct Stats {
    pub evaluations: AtomicU64,
    pub memo_hits: AtomicU64,
    pub residue_terms: AtomicU64,
}

type TermKey = (usize, Vec<u8>);

/// `Σ_M term(M, g)` over a chamber, in simple coordinates, as integer
/// coefficients over one denominator.
struct ChamberPoly {
    pi: Vec<u8>,
    den: BigInt,
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl ChamberPoly {
    fn new(pi: Vec<u8>, p: &MultiPoly) -> Self {
        let den = p.terms().fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()));
        let terms = p.terms().map(|(e, c)| (e.to_vec(), c.numer() * (&den / c.denom()))).collect();
        ChamberPoly { pi, den, terms }
    }

    fn rescale(&mut self, den: &BigInt) {
        let f = den / &self.den;
        for (_, c) in &mut self.terms {
            *c *= &f;
        }
        self.den = den.clone();
    }

    fn numerator(&self, powers: &[Vec<BigInt>]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (p, &k) in powers.iter().zip(e) {
                if k > 0 {
                    t *= &p[k as usize];
                }
            }
            acc += t;
        }
        acc
    }
}

pub struct PartitionFunction {
    rs: RootSystem,
    matroid: Matroid,
    mpns: Vec<MaximalNestedSet>,
    hyperplanes: Vec<Vec<i64>>,
    delta: Vec<Rational>,
    delta_pos: Vec<Vec<bool>>,
    bases: Vec<Basic>,
    full_torus: bool,
    terms: RwLock<HashMap<TermKey, Arc<MultiPoly>>>,
    tori: RwLock<HashMap<Vec<usize>, Arc<Vec<TorusElement>>>>,
    simple_terms: RwLock<HashMap<TermKey, Arc<MultiPoly>>>,
    chambers: RwLock<HashMap<Vec<usize>, Arc<Vec<ChamberPoly>>>>,
    values: RwLock<HashMap<Vec<i64>, BigInt>>,
    pub stats: Stats,
}

fn simple_vars(r: usize) -> Arc<[String]> {
    (1..=r).map(|i| format!("s{i}")).collect::<Vec<_>>().into()
}

fn theta_vars(r: usize) -> Arc<[String]> {
    (1..=r).map(|i| format!("a{i}")).collect::<Vec<_>>().into()
}

/// Linear coefficients and constant of an affine polynomial.
pub(crate) fn affine_parts(p: &MultiPoly) -> Result<(Vec<Rational>, Rational)> {
    let n = p.nvars();
    if p.total_degree().unwrap_or(0) > 1 {
        return Err(Error::Usage(format!("{p} is not affine")));
    }
    let lin = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            p.coeff(&e)
        })
        .collect();
    Ok((lin, p.coeff(&vec![0; n])))
}

impl PartitionFunction {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        Self::with_options(rs, Options::default())
    }

    pub fn with_options(rs: &RootSystem, opts: Options) -> Result<Self> {
        let matroid = Matroid::new(rs);
        let mpns = match &opts.priority {
            Some(p) => {
                if p.len() != matroid.len() {
                    return Err(Error::Usage("priority must rank every positive root".into()));
                }
                maximal_proper_nested_sets_with(&matroid, p)
            }
            None => crate::cache::load_or_build(rs, opts.cache_dir.as_deref())?,
        };
        let hs = hyperplanes(&matroid);
        let delta = match opts.delta {
            Some(d) => {
                let off = hs.iter().all(|h| {
                    !h.iter().zip(&d).fold(rat(0), |acc, (&x, y)| acc + y * rat(x)).is_zero()
                });
                if d.len() != rs.rank() || !off {
                    return Err(Error::Usage("perturbation direction must avoid every hyperplane".into()));
                }
                d
            }
            None => generic_direction(&matroid, &hs),
        };
        let bases = if rs.family() == Family::A && !opts.full_torus { Vec::new() } else { basic_subsets(&matroid) };
        let delta_pos = mpns.iter().map(|m| m.coords(&delta).iter().map(Signed::is_positive).collect()).collect();
        Ok(PartitionFunction {
            rs: rs.clone(),
            matroid,
            mpns,
            hyperplanes: hs,
            delta_pos,
            delta,
            bases,
            full_torus: opts.full_torus,
            terms: RwLock::default(),
            tori: RwLock::default(),
            simple_terms: RwLock::default(),
            chambers: RwLock::default(),
            values: RwLock::default(),
            stats: Stats::default(),
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn mpns(&self) -> &[MaximalNestedSet] {
        &self.mpns
    }

    pub fn delta(&self) -> &[Rational] {
        &self.delta
    }

    /// MPNS selected for the chamber whose closure contains `s` and which
    /// lies in direction `δ` from it.
    pub fn chamber(&self, s: &[Rational]) -> Vec<usize> {
        select_lex(&self.mpns, s, &self.delta)
    }

    /// [`Self::chamber`] for an integer vector.
    pub fn chamber_int(&self, s: &[i64]) -> Vec<usize> {
        self.mpns
            .iter()
            .zip(&self.delta_pos)
            .enumerate()
            .filter(|(_, (m, dp))| m.coord_signs_int(s).zip(dp.iter()).all(|(c, &d)| c > 0 || (c == 0 && d)))
            .map(|(i, _)| i)
            .collect()
    }

    /// A regular vector of that chamber (simple coordinates).
    pub fn chamber_point(&self, s: &[Rational]) -> Vec<Rational> {
        self.lex_point(&[s])
    }

    /// `d₀ + ε₁d₁ + ε₁ε₂d₂ + ⋯ + ε…δ` for small enough `εᵢ`: the point of the
    /// chamber reached from `d₀` by moving along `d₁`, then `d₂`, …, then `δ`.
    pub fn lex_point(&self, dirs: &[&[Rational]]) -> Vec<Rational> {
        let dot = |h: &[i64], v: &[Rational]| h.iter().zip(v).fold(rat(0), |acc, (&x, y)| acc + y * rat(x));
        let mut v = dirs[0].to_vec();
        for d in dirs[1..].iter().copied().chain([self.delta.as_slice()]) {
            let mut eps: Option<Rational> = None;
            let mut regular = true;
            for h in &self.hyperplanes {
                let hv = dot(h, &v);
                if hv.is_zero() {
                    regular = false;
                    continue;
                }
                let hd = dot(h, d);
                if hd.is_zero() {
                    continue;
                }
                let r = hv.abs() / hd.abs();
                if eps.as_ref().is_none_or(|e| &r < e) {
                    eps = Some(r);
                }
            }
            if regular {
                break;
            }
            let eps = eps.map_or_else(|| rat(1), |e| e / rat(2));
            for (x, y) in v.iter_mut().zip(d) {
                *x += &eps * y;
            }
        }
        v
    }

    /// Torus elements contributing for a chamber.
    pub fn torus(&self, selection: &[usize], s: &[Rational]) -> Result<Arc<Vec<TorusElement>>> {
        if let Some(t) = self.tori.read().unwrap().get(selection) {
            return Ok(t.clone());
        }
        let r = self.rs.rank();
        let t = if self.bases.is_empty() {
            vec![TorusElement::identity(r)]
        } else if self.full_torus {
            torus_full(&self.matroid, &self.bases)?
        } else {
            torus_set(&self.matroid, &self.bases, &self.chamber_point(s))?
        };
        let t = Arc::new(t);
        self.tori.write().unwrap().insert(selection.to_vec(), t.clone());
        Ok(t)
    }

    /// `IRes_M(𝓕(g, a)) / vol(M)` without the phase, as a polynomial in the
    /// `θ(M)`-coordinates of `a`.
    pub fn term(&self, m: usize, g: &TorusElement) -> Result<Arc<MultiPoly>> {
        let key = (m, g.pi.clone());
        if let Some(p) = self.terms.read().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let set = &self.mpns[m];
        let factors: Vec<(Vec<Rational>, Factor)> = (0..self.matroid.len())
            .map(|i| {
                let b = self.matroid.root(i);
                let kind = if g.character(b) == 1 { Factor::Todd } else { Factor::Half };
                (set.coords_int(b), kind)
            })
            .collect();
        let p = iterated_residue(self.rs.rank(), &factors, theta_vars(self.rs.rank()))?
            .scale(&Rational::new(1.into(), set.vol.into()));
        self.stats.residue_terms.fetch_add(1, Ordering::Relaxed);
        let p = Arc::new(p);
        self.terms.write().unwrap().insert(key, p.clone());
        Ok(p)
    }

    /// [`Self::term`] in simple coordinates.
    fn simple_term(&self, m: usize, g: &TorusElement) -> Result<Arc<MultiPoly>> {
        let key = (m, g.pi.clone());
        if let Some(p) = self.simple_terms.read().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let vars = simple_vars(self.rs.rank());
        let images: Vec<MultiPoly> =
            self.mpns[m].inverse().iter().map(|row| MultiPoly::affine(vars.clone(), row, rat(0))).collect();
        let p = Arc::new(self.term(m, g)?.substitute(&images)?);
        self.simple_terms.write().unwrap().insert(key, p.clone());
        Ok(p)
    }

    fn chamber_polys(&self, sel: &[usize], sr: &[Rational]) -> Result<Arc<Vec<ChamberPoly>>> {
        if let Some(c) = self.chambers.read().unwrap().get(sel) {
            return Ok(c.clone());
        }
        let mut out = Vec::new();
        for g in self.torus(sel, sr)?.iter() {
            let mut sum = MultiPoly::zero(simple_vars(self.rs.rank()));
            for &m in sel {
                sum.add_assign_poly(&*self.simple_term(m, g)?);
            }
            out.push(ChamberPoly::new(g.pi.clone(), &sum));
        }
        let den = out.iter().fold(BigInt::one(), |d, c| d.lcm(&c.den));
        for c in &mut out {
            c.rescale(&den);
        }
        let out = Arc::new(out);
        self.chambers.write().unwrap().insert(sel.to_vec(), out.clone());
        Ok(out)
    }

    /// Numerator and common denominator of [`Self::jk_sum`].
    fn jk_parts(&self, s: &[i64]) -> Result<(BigInt, BigInt)> {
        let sr: Vec<Rational> = s.iter().map(|&x| rat(x)).collect();
        let polys = self.chamber_polys(&self.chamber_int(s), &sr)?;
        let degree = polys.iter().flat_map(|c| c.terms.iter()).flat_map(|(e, _)| e.iter().copied()).max().unwrap_or(0);
        let powers: Vec<Vec<BigInt>> = s
            .iter()
            .map(|&x| {
                let x = BigInt::from(x);
                let mut p = vec![BigInt::one()];
                for k in 0..degree as usize {
                    let next = &p[k] * &x;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = BigInt::zero();
        for c in polys.iter() {
            let phase: i64 = c.pi.iter().zip(s).map(|(&p, &x)| p as i64 * x).sum();
            if phase.rem_euclid(2) == 0 {
                acc += c.numerator(&powers);
            } else {
                acc -= c.numerator(&powers);
            }
        }
        Ok((acc, polys.first().map_or_else(BigInt::one, |c| c.den.clone())))
    }

    /// The residue sum at a root-lattice point given in simple coordinates.
    pub fn jk_sum(&self, s: &[i64]) -> Result<Rational> {
        let (n, d) = self.jk_parts(s)?;
        Ok(Rational::new(n, d))
    }

    /// `k(a)` for `a` in simple-root coordinates.
    pub fn kostant_simple(&self, s: &[i64]) -> Result<BigInt> {
        if s.len() != self.rs.rank() {
            return Err(Error::Usage(format!("expected {} simple coordinates", self.rs.rank())));
        }
        if s.iter().any(|&x| x < 0) {
            return Ok(BigInt::zero());
        }
        if let Some(v) = self.values.read().unwrap().get(s) {
            self.stats.memo_hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v.clone());
        }
        self.stats.evaluations.fetch_add(1, Ordering::Relaxed);
        let (n, d) = self.jk_parts(s)?;
        let (v, rem) = n.div_rem(&d);
        if !rem.is_zero() || v.is_negative() {
            return Err(Error::Internal(format!("residue sum {} at {s:?} is not a count", Rational::new(n, d))));
        }
        self.values.write().unwrap().insert(s.to_vec(), v.clone());
        Ok(v)
    }

    /// `k(a)` for `a` in canonical coordinates; 0 off the root lattice or cone.
    pub fn kostant(&self, a: &Weight) -> Result<BigInt> {
        self.rs.validate(a)?;
        if !a.iter().all(is_integer) {
            return Ok(BigInt::zero());
        }
        let ints = a
            .iter()
            .map(to_i64)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Usage(format!("({a}) is too large")))?;
        match self.rs.lattice_coords(&ints) {
            Some(s) => self.kostant_simple(&s),
            None => Ok(BigInt::zero()),
        }
    }

    /// Residue sum with `a` given by affine forms in formal variables
    /// (simple coordinates), on the chamber of the base point `s_base`.
    pub fn quasipoly_simple(
        &self,
        s_base: &[Rational],
        s_form: &[MultiPoly],
        integral: bool,
    ) -> Result<QuasiPolynomial> {
        if s_base.iter().any(Signed::is_negative) {
            let vars = s_form.first().map(|p| p.vars().clone()).ok_or_else(|| Error::Usage("no coordinates".into()))?;
            return Ok(QuasiPolynomial::zero(vars, integral));
        }
        let sel = self.chamber(s_base);
        self.quasipoly_in_chamber(&sel, s_base, s_form, integral)
    }

    /// Residue sum for the chamber `sel` whose closure contains `point`.
    pub fn quasipoly_in_chamber(
        &self,
        sel: &[usize],
        point: &[Rational],
        s_form: &[MultiPoly],
        integral: bool,
    ) -> Result<QuasiPolynomial> {
        let vars = s_form
            .first()
            .map(|p| p.vars().clone())
            .ok_or_else(|| Error::Usage("no coordinates".into()))?;
        let mut out = QuasiPolynomial::zero(vars.clone(), integral);
        let parts: Vec<(Vec<Rational>, Rational)> = s_form.iter().map(affine_parts).collect::<Result<_>>()?;
        let tori = self.torus(sel, point)?;
        for g in tori.iter() {
            let mut form = ParityForm::trivial(vars.len());
            for (p, (lin, c)) in g.pi.iter().zip(&parts) {
                if *p == 1 {
                    for (f, l) in form.linear.iter_mut().zip(lin) {
                        *f += l;
                    }
                    form.constant += c;
                }
            }
            for &m in sel {
                let p = self.term(m, g)?;
                if p.is_zero() {
                    continue;
                }
                let inv = self.mpns[m].inverse();
                let images: Vec<MultiPoly> = inv
                    .iter()
                    .map(|row| {
                        let mut acc = MultiPoly::zero(vars.clone());
                        for (q, sf) in row.iter().zip(s_form) {
                            acc.add_scaled(sf, q);
                        }
                        acc
                    })
                    .collect();
                out.add(form.clone(), &p.substitute(&images)?);
            }
        }
        Ok(out)
    }

    /// Quasipolynomial of `k` near `base`, in formal canonical coordinates
    /// named by `vars`.
    pub fn kostant_quasipoly(&self, base: &Weight, vars: &[&str]) -> Result<QuasiPolynomial> {
        self.rs.validate(base)?;
        if vars.len() != self.rs.dim() {
            return Err(Error::Usage(format!("expected {} formal symbols", self.rs.dim())));
        }
        if !self.rs.in_positive_cone(base) {
            return Err(Error::Cone(format!("({base})")));
        }
        let names = MultiPoly::names(vars);
        let l = self.rs.simple_coords_matrix();
        let s_form: Vec<MultiPoly> = l
            .iter()
            .map(|row| MultiPoly::affine(names.clone(), row, rat(0)))
            .collect();
        let s_base = self.rs.simple_coords(base)?;
        self.quasipoly_simple(&s_base, &s_form, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nested::select_mpns;

    fn pf(f: Family, r: usize) -> PartitionFunction {
        PartitionFunction::new(&RootSystem::new(f, r).unwrap()).unwrap()
    }

    fn k(p: &PartitionFunction, a: &str) -> BigInt {
        p.kostant(&Weight::parse(a).unwrap()).unwrap()
    }

    #[test]
    fn small_values() {
        let a2 = pf(Family::A, 2);
        assert_eq!(k(&a2, "1,0,-1"), 2.into());
        assert_eq!(k(&a2, "0,0,0"), 1.into());
        assert_eq!(k(&a2, "-1,0,1"), 0.into());
        assert_eq!(k(&a2, "1,1,-1"), 0.into());
        let b2 = pf(Family::B, 2);
        assert_eq!(k(&b2, "1,1"), 3.into());
        assert_eq!(k(&b2, "0,0"), 1.into());
        let a1 = pf(Family::A, 1);
        assert_eq!(k(&a1, "0,0"), 1.into());
        assert_eq!(k(&a1, "5,-5"), 1.into());
    }

    #[test]
    fn worked_b2_residue() {
        // JK of e^{x-y}/(x y²) for the chamber cone(e₁, e₁+e₂)
        let rs = RootSystem::new(Family::B, 2).unwrap();
        let p = pf(Family::B, 2);
        let v = rs.simple_coords(&Weight::parse("2,1").unwrap()).unwrap();
        let sel = select_mpns(p.mpns(), &v).unwrap();
        let a = rs.simple_coords(&Weight::parse("1,-1").unwrap()).unwrap();
        let e1 = rs.simple_coords(&Weight::parse("1,0").unwrap()).unwrap();
        let e2 = rs.simple_coords(&Weight::parse("0,1").unwrap()).unwrap();
        let mut total = rat(0);
        for m in sel {
            let set = &p.mpns()[m];
            let f: Vec<(Vec<Rational>, Factor)> = [&e1, &e2, &e2]
                .iter()
                .map(|b| (set.coords(b), Factor::Linear))
                .collect();
            let poly = iterated_residue(2, &f, theta_vars(2)).unwrap();
            total += poly.eval(&set.coords(&a)).unwrap() / rat(set.vol);
        }
        assert_eq!(total, rat(-1));
    }

    #[test]
    fn quasipolynomial_reproduces_values() {
        let p = pf(Family::B, 2);
        let base = Weight::parse("3,1").unwrap();
        let q = p.kostant_quasipoly(&base, &["x", "y"]).unwrap();
        assert_eq!(q.eval(&base).unwrap(), Rational::from_integer(k(&p, "3,1")));
        let a1 = pf(Family::A, 1);
        let q = a1.kostant_quasipoly(&Weight::parse("4,-4").unwrap(), &["x", "y"]).unwrap();
        assert_eq!(q.as_polynomial().unwrap().as_constant(), Some(rat(1)));
    }

    #[test]
    fn agrees_with_dynamic_programming() {
        for (f, r, b) in [(Family::A, 3, 3), (Family::B, 2, 4), (Family::C, 3, 2), (Family::B, 3, 2), (Family::D, 4, 2)] {
            let p = pf(f, r);
            let dp = DpTable::new(p.root_system(), &vec![b; r]);
            for s in dp.points() {
                let si: Vec<i64> = s.iter().map(|&x| x as i64).collect();
                let want = BigInt::from(dp.get(&s).unwrap().clone());
                assert_eq!(p.kostant_simple(&si).unwrap(), want, "{f}{r} at {s:?}");
            }
        }
    }

    #[test]
    fn integer_selection_matches_rational() {
        for (f, r) in [(Family::B, 3), (Family::C, 3), (Family::D, 4)] {
            let p = pf(f, r);
            let dp = DpTable::new(p.root_system(), &vec![2; r]);
            for s in dp.points() {
                let si: Vec<i64> = s.iter().map(|&x| x as i64).collect();
                let sr: Vec<Rational> = si.iter().map(|&x| rat(x)).collect();
                assert_eq!(p.chamber_int(&si), p.chamber(&sr));
            }
        }
    }
}
