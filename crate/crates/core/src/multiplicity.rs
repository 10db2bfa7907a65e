//! Weight multiplicities and tensor product coefficients.
//!
//! Kostant: `c_λ^μ = Σ_{w ∈ Val(λ,μ)} ε(w) k(w(λ+ρ) − (μ+ρ))`.
//! Steinberg: `c_{λμ}^ν = Σ_{(w,w′) ∈ Val(λ,μ,ν)} ε(w)ε(w′) k(w(λ+ρ) + w′(μ+ρ) − (ν+2ρ))`.
//!
//! The Freudenthal recursion, the Weyl dimension formula and a
//! Brauer-Klimyk tensor product are kept as independent oracles.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::poly::MultiPoly;
use crate::arith::quasi::QuasiPolynomial;
use crate::arith::rational::{is_integer, rat, Rational};
use crate::error::{Error, Result};
use crate::partition::{Options, PartitionFunction};
use crate::roots::{Family, RootSystem, Weight};
use crate::weyl::{to_dominant, valid_elements, valid_pairs, weyl_enumerate, ValidTerm, WeylElement};

/// A weight whose coordinates are affine polynomials in formal symbols.
pub type FormalWeight = Vec<MultiPoly>;

/// A quasipolynomial together with the data fixing its validity region.
#[derive(Clone, Debug)]
pub struct FormalResult {
    pub value: QuasiPolynomial,
    /// Number of valid Weyl elements or pairs at the base point.
    pub valid_terms: usize,
    /// Selected MPNS for each valid term, in the order of the Weyl sum.
    pub chambers: Vec<Vec<usize>>,
}

fn check_dominant(rs: &RootSystem, name: &str, w: &Weight) -> Result<()> {
    rs.validate(w)?;
    if !rs.in_weight_lattice(w) {
        return Err(Error::Usage(format!("{name} = ({w}) is not an integral weight")));
    }
    if !rs.is_dominant(w) {
        return Err(Error::Usage(format!("{name} = ({w}) is not dominant")));
    }
    Ok(())
}

fn check_weight(rs: &RootSystem, name: &str, w: &Weight) -> Result<()> {
    rs.validate(w)?;
    if !rs.in_weight_lattice(w) {
        return Err(Error::Usage(format!("{name} = ({w}) is not an integral weight")));
    }
    Ok(())
}

/// `w` applied to a formal weight.
pub fn apply_formal(w: &WeylElement, v: &[MultiPoly]) -> FormalWeight {
    w.perm
        .iter()
        .zip(&w.signs)
        .map(|(&p, &s)| if s < 0 { v[p].scale(&rat(-1)) } else { v[p].clone() })
        .collect()
}

fn add_constant(v: &mut [MultiPoly], c: &[Rational]) {
    for (p, x) in v.iter_mut().zip(c) {
        let n = p.nvars();
        p.add_term(vec![0; n], x.clone());
    }
}

fn sub_formal(a: &mut [MultiPoly], b: &[MultiPoly]) {
    for (p, q) in a.iter_mut().zip(b) {
        p.add_scaled(q, &rat(-1));
    }
}

/// `t·base` as a formal weight in the single symbol `t`.
pub fn stretched(base: &Weight, vars: Arc<[String]>) -> FormalWeight {
    base.iter().map(|x| MultiPoly::affine(vars.clone(), std::slice::from_ref(x), rat(0))).collect()
}

/// The formal weight `(X_offset, …, X_{offset+n-1})`.
pub fn symbols(vars: Arc<[String]>, offset: usize, n: usize) -> FormalWeight {
    (0..n).map(|i| MultiPoly::var(vars.clone(), offset + i)).collect()
}

/// The formal weight `(base₀·X_offset, …)`: each symbol scales one coordinate,
/// so all symbols equal to 1 give back the base point.
pub fn scaled_symbols(base: &Weight, vars: Arc<[String]>, offset: usize) -> FormalWeight {
    base.iter()
        .enumerate()
        .map(|(i, x)| MultiPoly::var(vars.clone(), offset + i).scale(x))
        .collect()
}

/// A root system with its partition function engine.
pub struct Algebra {
    rs: RootSystem,
    pf: PartitionFunction,
    pub valid_terms: AtomicU64,
}

impl Algebra {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        Self::with_options(&RootSystem::new(family, rank)?, Options::default())
    }

    pub fn with_options(rs: &RootSystem, opts: Options) -> Result<Self> {
        Ok(Algebra { rs: rs.clone(), pf: PartitionFunction::with_options(rs, opts)?, valid_terms: AtomicU64::new(0) })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn partition(&self) -> &PartitionFunction {
        &self.pf
    }

    fn weyl_sum(&self, terms: &[ValidTerm]) -> Result<BigInt> {
        self.valid_terms.fetch_add(terms.len() as u64, Ordering::Relaxed);
        let parts: Vec<BigInt> = terms
            .par_iter()
            .map(|t| {
                let k = self.pf.kostant(&t.arg)?;
                Ok(if t.sign < 0 { -k } else { k })
            })
            .collect::<Result<_>>()?;
        let total: BigInt = parts.into_iter().sum();
        if total < BigInt::zero() {
            return Err(Error::Internal(format!("negative alternating sum {total}")));
        }
        Ok(total)
    }

    /// Multiplicity of `μ` in `V(λ)`.
    pub fn weight_multiplicity(&self, lambda: &Weight, mu: &Weight) -> Result<BigInt> {
        check_dominant(&self.rs, "lambda", lambda)?;
        check_weight(&self.rs, "mu", mu)?;
        if !self.rs.in_root_lattice(&(lambda - mu)) {
            return Ok(BigInt::zero());
        }
        self.weyl_sum(&valid_elements(&self.rs, lambda, mu))
    }

    /// Multiplicity of `V(ν)` in `V(λ) ⊗ V(μ)`.
    pub fn tensor_coefficient(&self, lambda: &Weight, mu: &Weight, nu: &Weight) -> Result<BigInt> {
        check_dominant(&self.rs, "lambda", lambda)?;
        check_dominant(&self.rs, "mu", mu)?;
        check_dominant(&self.rs, "nu", nu)?;
        if !self.rs.in_root_lattice(&(&(lambda + mu) - nu)) {
            return Ok(BigInt::zero());
        }
        self.weyl_sum(&valid_pairs(&self.rs, lambda, mu, nu))
    }

    fn check_formal(&self, forms: &[&FormalWeight]) -> Result<Arc<[String]>> {
        let vars = forms[0]
            .first()
            .map(|p| p.vars().clone())
            .ok_or_else(|| Error::Usage("empty formal weight".into()))?;
        for f in forms {
            if f.len() != self.rs.dim() {
                return Err(Error::Usage(format!("formal weights need {} coordinates", self.rs.dim())));
            }
            if f.iter().any(|p| p.vars() != &vars) {
                return Err(Error::Usage("formal weights over different symbols".into()));
            }
        }
        Ok(vars)
    }

    /// Sum of `sign · k(arg)` as quasipolynomials, one chamber per term.
    fn formal_sum(
        &self,
        vars: Arc<[String]>,
        terms: &[ValidTerm],
        form: impl Fn(&ValidTerm) -> FormalWeight,
        integral: bool,
    ) -> Result<FormalResult> {
        self.valid_terms.fetch_add(terms.len() as u64, Ordering::Relaxed);
        let l = self.rs.simple_coords_matrix();
        let mut value = QuasiPolynomial::zero(vars.clone(), integral);
        let mut chambers = Vec::with_capacity(terms.len());
        for t in terms {
            let arg = form(t);
            let s_form: Vec<MultiPoly> = l
                .iter()
                .map(|row| {
                    let mut acc = MultiPoly::zero(vars.clone());
                    for (c, p) in row.iter().zip(&arg) {
                        acc.add_scaled(p, c);
                    }
                    acc
                })
                .collect();
            let s_base = self.rs.simple_coords(&t.arg)?;
            chambers.push(self.pf.chamber(&s_base));
            let q = self.pf.quasipoly_simple(&s_base, &s_form, integral)?;
            value.add_quasi(&q.scale(&rat(t.sign as i64)))?;
        }
        Ok(FormalResult { value, valid_terms: terms.len(), chambers })
    }

    /// Quasipolynomial for `(λ′, μ′) ↦ c_{λ′}^{μ′}` near `(λ, μ)`.
    ///
    /// `integral` declares that every symbol takes integer values.
    pub fn weight_multiplicity_quasipoly(
        &self,
        lambda: &Weight,
        lambda_f: &FormalWeight,
        mu: &Weight,
        mu_f: &FormalWeight,
        integral: bool,
    ) -> Result<FormalResult> {
        check_dominant(&self.rs, "lambda", lambda)?;
        check_weight(&self.rs, "mu", mu)?;
        let vars = self.check_formal(&[lambda_f, mu_f])?;
        if !self.rs.in_root_lattice(&(lambda - mu)) {
            return Ok(FormalResult { value: QuasiPolynomial::zero(vars, integral), valid_terms: 0, chambers: vec![] });
        }
        let rho = self.rs.rho();
        let terms = valid_elements(&self.rs, lambda, mu);
        self.formal_sum(
            vars,
            &terms,
            |t| {
                let mut a = apply_formal(&t.w, lambda_f);
                add_constant(&mut a, &t.w.apply(rho));
                sub_formal(&mut a, mu_f);
                add_constant(&mut a, &(-rho));
                a
            },
            integral,
        )
    }

    /// Quasipolynomial for `(λ′, μ′, ν′) ↦ c_{λ′μ′}^{ν′}` near `(λ, μ, ν)`.
    #[allow(clippy::too_many_arguments)]
    pub fn tensor_quasipoly(
        &self,
        lambda: &Weight,
        lambda_f: &FormalWeight,
        mu: &Weight,
        mu_f: &FormalWeight,
        nu: &Weight,
        nu_f: &FormalWeight,
        integral: bool,
    ) -> Result<FormalResult> {
        check_dominant(&self.rs, "lambda", lambda)?;
        check_dominant(&self.rs, "mu", mu)?;
        check_dominant(&self.rs, "nu", nu)?;
        let vars = self.check_formal(&[lambda_f, mu_f, nu_f])?;
        if !self.rs.in_root_lattice(&(&(lambda + mu) - nu)) {
            return Ok(FormalResult { value: QuasiPolynomial::zero(vars, integral), valid_terms: 0, chambers: vec![] });
        }
        let rho = self.rs.rho();
        let two_rho = rho + rho;
        let terms = valid_pairs(&self.rs, lambda, mu, nu);
        self.formal_sum(
            vars,
            &terms,
            |t| {
                let w2 = t.w2.as_ref().expect("pair");
                let mut a = apply_formal(&t.w, lambda_f);
                add_constant(&mut a, &t.w.apply(rho));
                for (p, q) in a.iter_mut().zip(apply_formal(w2, mu_f)) {
                    p.add_assign_poly(&q);
                }
                add_constant(&mut a, &w2.apply(rho));
                sub_formal(&mut a, nu_f);
                add_constant(&mut a, &(-&two_rho));
                a
            },
            integral,
        )
    }

    /// Scale `T` past which `T·A + B ∈ C(Δ⁺)` iff `A + εB ∈ C(Δ⁺)` for every
    /// Weyl sum argument `T·A + B` with `A` in the root lattice.
    fn ray_scale(&self) -> Rational {
        let rho = self.rs.simple_coords(self.rs.rho()).expect("rho");
        let m = rho.into_iter().max().unwrap_or_else(|| rat(0));
        (m * rat(4)).floor() + rat(1)
    }

    /// Sum over the terms valid along the ray, each with the chamber
    /// containing `A + εB`.
    fn ray_sum(&self, var: &str, terms: &[ValidTerm], scale: &Rational, shift: impl Fn(&ValidTerm) -> Weight) -> Result<FormalResult> {
        self.valid_terms.fetch_add(terms.len() as u64, Ordering::Relaxed);
        let vars = MultiPoly::names(&[var]);
        let mut value = QuasiPolynomial::zero(vars.clone(), true);
        let mut chambers = Vec::with_capacity(terms.len());
        for t in terms {
            let b = shift(t);
            let a = (&t.arg - &b).scale(&(rat(1) / scale));
            let sa = self.rs.simple_coords(&a)?;
            let sb = self.rs.simple_coords(&b)?;
            let point = self.pf.lex_point(&[&sa, &sb]);
            let sel = crate::nested::select_mpns(self.pf.mpns(), &point)?;
            let s_form: Vec<MultiPoly> =
                sa.iter().zip(&sb).map(|(x, y)| MultiPoly::affine(vars.clone(), std::slice::from_ref(x), y.clone())).collect();
            let q = self.pf.quasipoly_in_chamber(&sel, &point, &s_form, true)?;
            value.add_quasi(&q.scale(&rat(t.sign as i64)))?;
            chambers.push(sel);
        }
        Ok(FormalResult { value, valid_terms: terms.len(), chambers })
    }

    /// `t ↦ c_{tλ}^{tμ}` for all integers `t ≥ 0`.
    pub fn weight_multiplicity_stretched(&self, lambda: &Weight, mu: &Weight, var: &str) -> Result<FormalResult> {
        check_dominant(&self.rs, "lambda", lambda)?;
        check_weight(&self.rs, "mu", mu)?;
        if !self.rs.in_root_lattice(&(lambda - mu)) {
            return Err(Error::Usage("stretching needs lambda - mu in the root lattice".into()));
        }
        let big = self.ray_scale();
        let terms = valid_elements(&self.rs, &lambda.scale(&big), &mu.scale(&big));
        let rho = self.rs.rho();
        self.ray_sum(var, &terms, &big, |t| &t.w.apply(rho) - rho)
    }

    /// `t ↦ c_{tλ,tμ}^{tν}` for all integers `t ≥ 0`.
    pub fn tensor_stretched(&self, lambda: &Weight, mu: &Weight, nu: &Weight, var: &str) -> Result<FormalResult> {
        check_dominant(&self.rs, "lambda", lambda)?;
        check_dominant(&self.rs, "mu", mu)?;
        check_dominant(&self.rs, "nu", nu)?;
        if !self.rs.in_root_lattice(&(&(lambda + mu) - nu)) {
            return Err(Error::Usage("stretching needs lambda + mu - nu in the root lattice".into()));
        }
        let big = self.ray_scale();
        let terms = valid_pairs(&self.rs, &lambda.scale(&big), &mu.scale(&big), &nu.scale(&big));
        let rho = self.rs.rho();
        let two_rho = rho + rho;
        self.ray_sum(var, &terms, &big, |t| &(&t.w.apply(rho) + &t.w2.as_ref().expect("pair").apply(rho)) - &two_rho)
    }
}

/// `Π_{α>0} ⟨λ+ρ, α⟩ / ⟨ρ, α⟩`.
pub fn weyl_dimension(rs: &RootSystem, lambda: &Weight) -> Result<BigInt> {
    check_dominant(rs, "lambda", lambda)?;
    let lp = lambda + rs.rho();
    let mut d = rat(1);
    for a in rs.positive_roots() {
        d = d * lp.dot_int(a) / rs.rho().dot_int(a);
    }
    if !is_integer(&d) {
        return Err(Error::Internal(format!("dimension {d} is not an integer")));
    }
    Ok(d.to_integer())
}

/// Dominant weights `μ ≤ λ`, in order of increasing depth below `λ`.
pub fn dominant_weights_below(rs: &RootSystem, lambda: &Weight) -> Result<Vec<Weight>> {
    check_dominant(rs, "lambda", lambda)?;
    let roots: Vec<Weight> = rs.positive_roots().iter().map(|a| Weight::from_ints(a)).collect();
    let mut seen = BTreeSet::from([lambda.clone()]);
    let mut queue = VecDeque::from([lambda.clone()]);
    let mut out = Vec::new();
    while let Some(mu) = queue.pop_front() {
        for a in &roots {
            let next = &mu - a;
            if rs.is_dominant(&next) && !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
        out.push(mu);
    }
    Ok(out)
}

/// The Weyl orbit of a weight.
pub fn weyl_orbit(rs: &RootSystem, mu: &Weight) -> Vec<Weight> {
    let set: BTreeSet<Weight> = weyl_enumerate(rs).map(|w| w.apply(mu)).collect();
    set.into_iter().collect()
}

/// Freudenthal's recursion for the dominant character of `V(λ)`.
pub struct Freudenthal<'a> {
    rs: &'a RootSystem,
    lambda: Weight,
    norm: Rational,
    memo: HashMap<Weight, BigInt>,
}

impl<'a> Freudenthal<'a> {
    pub fn new(rs: &'a RootSystem, lambda: &Weight) -> Result<Self> {
        check_dominant(rs, "lambda", lambda)?;
        let lp = lambda + rs.rho();
        Ok(Freudenthal { rs, lambda: lambda.clone(), norm: lp.dot(&lp), memo: HashMap::new() })
    }

    pub fn multiplicity(&mut self, mu: &Weight) -> BigInt {
        let rs = self.rs;
        let (w, _) = to_dominant(rs, mu);
        let mu = w.apply(mu);
        let diff = &self.lambda - &mu;
        if !rs.in_root_lattice(&diff) || !rs.in_positive_cone(&diff) {
            return BigInt::zero();
        }
        if mu == self.lambda {
            return BigInt::one();
        }
        if let Some(m) = self.memo.get(&mu) {
            return m.clone();
        }
        let mut acc = rat(0);
        for a in rs.positive_roots() {
            let alpha = Weight::from_ints(a);
            let mut nu = &mu + &alpha;
            while rs.in_positive_cone(&(&self.lambda - &nu)) {
                let m = self.multiplicity(&nu);
                if !m.is_zero() {
                    acc += Rational::from_integer(m) * nu.dot(&alpha);
                }
                nu = &nu + &alpha;
            }
        }
        let mp = &mu + rs.rho();
        let m = rat(2) * acc / (&self.norm - mp.dot(&mp));
        debug_assert!(is_integer(&m));
        let m = m.to_integer();
        self.memo.insert(mu, m.clone());
        m
    }
}

/// Multiplicity of `μ` in `V(λ)` by Freudenthal's formula.
pub fn freudenthal_multiplicity(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Result<BigInt> {
    check_weight(rs, "mu", mu)?;
    Ok(Freudenthal::new(rs, lambda)?.multiplicity(mu))
}

/// Dominant character of `V(λ)`: every dominant weight with its multiplicity.
pub fn dominant_character(rs: &RootSystem, lambda: &Weight) -> Result<BTreeMap<Weight, BigInt>> {
    let mut f = Freudenthal::new(rs, lambda)?;
    let mut out = BTreeMap::new();
    for mu in dominant_weights_below(rs, lambda)? {
        let m = f.multiplicity(&mu);
        if !m.is_zero() {
            out.insert(mu, m);
        }
    }
    Ok(out)
}

/// `V(λ) ⊗ V(μ)` by reflecting `λ + β + ρ` into the dominant chamber for
/// every weight `β` of `V(μ)`.
pub fn tensor_product_oracle(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Result<BTreeMap<Weight, BigInt>> {
    check_dominant(rs, "lambda", lambda)?;
    let lp = lambda + rs.rho();
    let mut out: BTreeMap<Weight, BigInt> = BTreeMap::new();
    for (dom, m) in dominant_character(rs, mu)? {
        for beta in weyl_orbit(rs, &dom) {
            let v = &lp + &beta;
            let (w, singular) = to_dominant(rs, &v);
            if singular {
                continue;
            }
            let nu = &w.apply(&v) - rs.rho();
            let e = out.entry(nu).or_default();
            if w.sign() > 0 {
                *e += &m;
            } else {
                *e -= &m;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// `c_{λμ}^ν` from [`tensor_product_oracle`].
pub fn tensor_oracle(rs: &RootSystem, lambda: &Weight, mu: &Weight, nu: &Weight) -> Result<BigInt> {
    check_dominant(rs, "nu", nu)?;
    Ok(tensor_product_oracle(rs, lambda, mu)?.remove(nu).unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        Weight::parse(s).unwrap()
    }

    #[test]
    fn sl2_strings() {
        let rs = RootSystem::new(Family::A, 1).unwrap();
        let alg = Algebra::new(Family::A, 1).unwrap();
        for mu in ["3,0", "2,1", "1,2", "0,3"] {
            assert_eq!(alg.weight_multiplicity(&w("3,0"), &w(mu)).unwrap(), 1.into());
            assert_eq!(freudenthal_multiplicity(&rs, &w("3,0"), &w(mu)).unwrap(), 1.into());
        }
        assert_eq!(alg.weight_multiplicity(&w("3,0"), &w("4,-1")).unwrap(), 0.into());
        assert_eq!(weyl_dimension(&rs, &w("5,0")).unwrap(), 6.into());
        let prod = tensor_product_oracle(&rs, &w("1,0"), &w("1,0")).unwrap();
        assert_eq!(prod.len(), 2);
        assert_eq!(prod[&w("2,0")], 1.into());
        assert_eq!(prod[&w("1,1")], 1.into());
    }

    #[test]
    fn dominance_is_checked() {
        let alg = Algebra::new(Family::B, 2).unwrap();
        assert!(alg.weight_multiplicity(&w("0,1"), &w("0,0")).unwrap_err().is_usage());
        assert!(alg.weight_multiplicity(&w("1/3,0"), &w("0,0")).unwrap_err().is_usage());
        assert!(alg.tensor_coefficient(&w("1,0"), &w("1,0"), &w("-1,0")).unwrap_err().is_usage());
    }

    #[test]
    fn kostant_matches_freudenthal_b2() {
        let rs = RootSystem::new(Family::B, 2).unwrap();
        let alg = Algebra::new(Family::B, 2).unwrap();
        for lam in ["2,1", "3/2,1/2", "3,3"] {
            let lam = w(lam);
            let ch = dominant_character(&rs, &lam).unwrap();
            let mut dim = BigInt::zero();
            for (mu, m) in &ch {
                assert_eq!(&alg.weight_multiplicity(&lam, mu).unwrap(), m, "{lam} {mu}");
                dim += m * BigInt::from(weyl_orbit(&rs, mu).len());
            }
            assert_eq!(dim, weyl_dimension(&rs, &lam).unwrap());
        }
    }

    #[test]
    fn tensor_matches_oracle_a2() {
        let rs = RootSystem::new(Family::A, 2).unwrap();
        let alg = Algebra::new(Family::A, 2).unwrap();
        let lam = w("2,1,0");
        let mu = w("1,1,0");
        let prod = tensor_product_oracle(&rs, &lam, &mu).unwrap();
        for (nu, c) in &prod {
            assert_eq!(&alg.tensor_coefficient(&lam, &mu, nu).unwrap(), c);
        }
        assert_eq!(alg.tensor_coefficient(&lam, &mu, &w("4,0,-1")).unwrap(), 0.into());
    }

    #[test]
    fn formal_multiplicity_reproduces_base() {
        let alg = Algebra::new(Family::B, 2).unwrap();
        let vars = MultiPoly::names(&["x1", "x2", "y1", "y2"]);
        let lam = w("3,1");
        let mu = w("1,0");
        let r = alg
            .weight_multiplicity_quasipoly(&lam, &symbols(vars.clone(), 0, 2), &mu, &symbols(vars, 2, 2), false)
            .unwrap();
        let point: Vec<Rational> = lam.iter().chain(mu.iter()).cloned().collect();
        assert_eq!(r.value.eval(&point).unwrap(), Rational::from_integer(alg.weight_multiplicity(&lam, &mu).unwrap()));
    }
}
