//! Quasipolynomials of period 2: polynomials whose coefficients depend on the
//! parity of affine forms in the variables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::poly::{render_monomial, Exponents, MultiPoly};
use super::rational::{is_integer, rat, rem_euclid, Rational};
use crate::error::{Error, Result};

/// The sign `(-1)^(ℓ·X + c)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParityForm {
    pub linear: Vec<Rational>,
    pub constant: Rational,
}

impl ParityForm {
    pub fn trivial(n: usize) -> Self {
        ParityForm { linear: vec![rat(0); n], constant: rat(0) }
    }

    pub fn is_trivial(&self) -> bool {
        self.constant.is_zero() && self.linear.iter().all(Zero::is_zero)
    }

    /// Value of the exponent `ℓ·X + c` at a point.
    pub fn exponent_at(&self, point: &[Rational]) -> Rational {
        self.linear.iter().zip(point).fold(self.constant.clone(), |acc, (l, x)| acc + l * x)
    }

    /// `±1` at a point where the exponent is an integer.
    pub fn sign_at(&self, point: &[Rational]) -> Result<i8> {
        let e = self.exponent_at(point);
        if !is_integer(&e) {
            return Err(Error::Usage(format!(
                "parity exponent {e} is not an integer at this point"
            )));
        }
        Ok(if rem_euclid(&e, 2).is_zero() { 1 } else { -1 })
    }

    fn render(&self, vars: &[String]) -> String {
        let mut s = String::new();
        for (v, l) in vars.iter().zip(&self.linear) {
            if l.is_zero() {
                continue;
            }
            let neg = l.is_negative();
            if !s.is_empty() {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let a = l.abs();
            if a.is_one() {
                s.push_str(v);
            } else {
                s.push_str(&format!("{a}*{v}"));
            }
        }
        if !self.constant.is_zero() || s.is_empty() {
            if !s.is_empty() {
                s.push_str(" + ");
            }
            s.push_str(&self.constant.to_string());
        }
        s
    }
}

/// `Σ_f (-1)^f · P_f` over parity forms `f`.
///
/// With `integral` set every variable is taken to be an integer, which lets
/// the linear part of each form be reduced mod 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    vars: Arc<[String]>,
    integral: bool,
    terms: BTreeMap<ParityForm, MultiPoly>,
}

impl QuasiPolynomial {
    pub fn zero(vars: Arc<[String]>, integral: bool) -> Self {
        QuasiPolynomial { vars, integral, terms: BTreeMap::new() }
    }

    pub fn from_poly(p: MultiPoly, integral: bool) -> Self {
        let mut q = Self::zero(p.vars().clone(), integral);
        q.add(ParityForm::trivial(p.nvars()), &p);
        q
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&ParityForm, &MultiPoly)> {
        self.terms.iter()
    }

    fn normalize(&self, mut f: ParityForm) -> (ParityForm, bool) {
        if self.integral {
            for l in f.linear.iter_mut() {
                *l = rem_euclid(l, 2);
            }
        }
        let c = rem_euclid(&f.constant, 2);
        let flip = c >= rat(1);
        f.constant = if flip { c - rat(1) } else { c };
        (f, flip)
    }

    /// Adds `(-1)^f · p`.
    pub fn add(&mut self, form: ParityForm, p: &MultiPoly) {
        assert_eq!(form.linear.len(), self.vars.len(), "parity form arity");
        let (f, flip) = self.normalize(form);
        let entry = self.terms.entry(f.clone()).or_insert_with(|| MultiPoly::zero(self.vars.clone()));
        entry.add_scaled(p, &if flip { rat(-1) } else { rat(1) });
        if entry.is_zero() {
            self.terms.remove(&f);
        }
    }

    pub fn add_quasi(&mut self, other: &QuasiPolynomial) -> Result<()> {
        if other.vars != self.vars {
            return Err(Error::Usage("quasipolynomials over different variables".into()));
        }
        for (f, p) in &other.terms {
            self.add(f.clone(), p);
        }
        Ok(())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.integral);
        if !s.is_zero() {
            for (f, p) in &self.terms {
                out.terms.insert(f.clone(), p.scale(s));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars.len() {
            return Err(Error::Usage(format!(
                "expected {} coordinates, got {}",
                self.vars.len(),
                point.len()
            )));
        }
        let mut acc = rat(0);
        for (f, p) in &self.terms {
            let v = p.eval(point)?;
            match f.sign_at(point)? {
                1 => acc += v,
                _ => acc -= v,
            }
        }
        Ok(acc)
    }

    pub fn eval_int(&self, point: &[i64]) -> Result<Rational> {
        let p: Vec<Rational> = point.iter().map(|&x| rat(x)).collect();
        self.eval(&p)
    }

    /// The polynomial if no nontrivial parity form remains.
    pub fn as_polynomial(&self) -> Option<MultiPoly> {
        match self.terms.len() {
            0 => Some(MultiPoly::zero(self.vars.clone())),
            1 => self.terms.iter().next().filter(|(f, _)| f.is_trivial()).map(|(_, p)| p.clone()),
            _ => None,
        }
    }

    /// Even and odd classes for a single-variable quasipolynomial whose only
    /// nontrivial form is `(-1)^t`.
    pub fn even_odd(&self) -> Option<(MultiPoly, MultiPoly)> {
        let mut even = MultiPoly::zero(self.vars.clone());
        let mut odd = MultiPoly::zero(self.vars.clone());
        for (f, p) in &self.terms {
            if f.is_trivial() {
                even.add_assign_poly(p);
                odd.add_assign_poly(p);
            } else if f.constant.is_zero() && self.vars.len() == 1 && f.linear[0].is_one() {
                even.add_assign_poly(p);
                odd.add_scaled(p, &rat(-1));
            } else {
                return None;
            }
        }
        Some((even, odd))
    }

    /// Coefficient of `x^e` as `(form, coefficient)` pairs, trivial form first.
    pub fn coeff(&self, e: &[u32]) -> Vec<(ParityForm, Rational)> {
        self.terms
            .iter()
            .map(|(f, p)| (f.clone(), p.coeff(e)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    fn monomials(&self) -> Vec<Exponents> {
        let mut all: Vec<Exponents> =
            self.terms.values().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
        all.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        all.dedup();
        all
    }

    pub fn to_json(&self) -> Value {
        let parts: Vec<Value> = self
            .terms
            .iter()
            .map(|(f, p)| {
                let terms: Vec<Value> = p
                    .sorted_terms()
                    .into_iter()
                    .map(|(e, c)| json!({"exponents": e, "coeff": c.to_string()}))
                    .collect();
                json!({
                    "parity": {
                        "linear": f.linear.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "constant": f.constant.to_string(),
                    },
                    "terms": terms,
                })
            })
            .collect();
        json!({"variables": self.vars.to_vec(), "parts": parts})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Usage("malformed quasipolynomial JSON".into());
        let vars: Vec<String> = serde_json::from_value(v["variables"].clone())?;
        let vars: Arc<[String]> = vars.into();
        let mut q = Self::zero(vars.clone(), false);
        let parse = |x: &Value| -> Result<Rational> {
            super::rational::parse_rational(x.as_str().ok_or_else(bad)?)
        };
        for part in v["parts"].as_array().ok_or_else(bad)? {
            let linear = part["parity"]["linear"]
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(parse)
                .collect::<Result<Vec<_>>>()?;
            let constant = parse(&part["parity"]["constant"])?;
            let mut p = MultiPoly::zero(vars.clone());
            for t in part["terms"].as_array().ok_or_else(bad)? {
                let e: Vec<u32> = serde_json::from_value(t["exponents"].clone())?;
                if e.len() != vars.len() {
                    return Err(bad());
                }
                p.add_term(e, parse(&t["coeff"])?);
            }
            q.terms.insert(ParityForm { linear, constant }, p);
        }
        Ok(q)
    }
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monos = self.monomials();
        if monos.is_empty() {
            return write!(f, "0");
        }
        for (i, e) in monos.iter().enumerate() {
            let cs = self.coeff(e);
            let mono = render_monomial(&self.vars, e);
            if i > 0 {
                write!(f, " + ")?;
            }
            let plain = cs.len() == 1 && cs[0].0.is_trivial();
            if plain {
                write!(f, "{}", cs[0].1)?;
            } else {
                let body: Vec<String> = cs
                    .iter()
                    .map(|(form, c)| {
                        if form.is_trivial() {
                            c.to_string()
                        } else {
                            format!("{c}*(-1)^({})", form.render(&self.vars))
                        }
                    })
                    .collect();
                write!(f, "({})", body.join(" + "))?;
            }
            if !mono.is_empty() {
                write!(f, "*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::frac;

    fn t_vars() -> Arc<[String]> {
        MultiPoly::names(&["t"])
    }

    #[test]
    fn cubic_evaluates_like_binomial() {
        // (t+1)(t+2)(t+3)/6
        let t = MultiPoly::var(t_vars(), 0);
        let one = MultiPoly::one(t_vars());
        let two = one.scale(&rat(2));
        let three = one.scale(&rat(3));
        let p = &(&(&t + &one) * &(&t + &two)) * &(&t + &three);
        let q = QuasiPolynomial::from_poly(p.scale(&frac(1, 6)), true);
        assert_eq!(q.eval_int(&[1]).unwrap(), rat(4));
        assert_eq!(q.eval_int(&[0]).unwrap(), rat(1));
        assert!(q.as_polynomial().is_some());
    }

    #[test]
    fn parity_classes() {
        let mut q = QuasiPolynomial::zero(t_vars(), true);
        let c = |x: Rational| MultiPoly::constant(t_vars(), x);
        q.add(ParityForm::trivial(1), &c(frac(203, 256)));
        q.add(ParityForm { linear: vec![rat(1)], constant: rat(0) }, &c(frac(53, 256)));
        assert_eq!(q.eval_int(&[0]).unwrap(), rat(1));
        assert_eq!(q.eval_int(&[1]).unwrap(), frac(150, 256));
        let (even, odd) = q.even_odd().unwrap();
        assert_eq!(even.as_constant().unwrap(), rat(1));
        assert_eq!(odd.as_constant().unwrap(), frac(150, 256));
        assert_eq!(q.to_string(), "(203/256 + 53/256*(-1)^(t))");
    }

    #[test]
    fn forms_are_reduced_mod_two() {
        let mut q = QuasiPolynomial::zero(t_vars(), true);
        let one = MultiPoly::one(t_vars());
        q.add(ParityForm { linear: vec![rat(3)], constant: rat(1) }, &one);
        q.add(ParityForm { linear: vec![rat(1)], constant: rat(0) }, &one);
        assert!(q.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let mut q = QuasiPolynomial::zero(t_vars(), true);
        let t = MultiPoly::var(t_vars(), 0);
        q.add(ParityForm::trivial(1), &t.scale(&frac(3, 7)));
        q.add(ParityForm { linear: vec![rat(1)], constant: frac(1, 2) }, &t);
        let back = QuasiPolynomial::from_json(&q.to_json()).unwrap();
        assert_eq!(back.terms, q.terms);
    }
}
