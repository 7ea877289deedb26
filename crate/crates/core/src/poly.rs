//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept sorted in descending monomial order (the order is supplied
//! by the caller, normally the ring's). No zero coefficients are stored, so
//! equality is a plain term-list comparison.

use crate::field::{scalar_is_negative, FieldDesc, Scalar};
use crate::monomial::{Monomial, MonomialOrder};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    /// (monomial, coefficient), descending in the construction order.
    terms: Vec<(Monomial, Scalar)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: Scalar, n_vars: usize) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(n_vars), c)],
            }
        }
    }

    pub fn var(field: &FieldDesc, n_vars: usize, idx: usize) -> Self {
        Poly {
            terms: vec![(Monomial::var(n_vars, idx), field.one())],
        }
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Build from arbitrary terms: combines duplicates, drops zeros, sorts.
    pub fn from_terms(terms: Vec<(Monomial, Scalar)>, order: &MonomialOrder) -> Self {
        let mut map: HashMap<Monomial, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(acc) => *acc = acc.add(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        let mut v: Vec<(Monomial, Scalar)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly { terms: v }
    }

    /// Build from terms already sorted descending with no duplicates/zeros.
    pub(crate) fn from_sorted_terms(terms: Vec<(Monomial, Scalar)>) -> Self {
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self, field: &FieldDesc) -> Option<Scalar> {
        if self.is_zero() {
            Some(field.zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    /// Merge-add of two polynomials sorted under the same order.
    pub fn add(&self, other: &Poly, order: &MonomialOrder) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match order.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add(&other.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, other: &Poly, order: &MonomialOrder) -> Poly {
        self.add(&other.neg(), order)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.mul(c)))
                .collect(),
        }
    }

    /// Multiply by a single term `c * m`. Preserves sortedness.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), a.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly, order: &MonomialOrder) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut map: HashMap<Monomial, Scalar> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match map.get_mut(&m) {
                    Some(acc) => *acc = acc.add(&c),
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        let mut v: Vec<(Monomial, Scalar)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly { terms: v }
    }

    pub fn pow(&self, k: u32, order: &MonomialOrder) -> Poly {
        let n_vars = self
            .terms
            .first()
            .map(|(m, _)| m.n_vars())
            .unwrap_or(0);
        let field_one = match self.terms.first() {
            Some((_, Scalar::Q(_))) => Scalar::Q(num::BigRational::from(num::BigInt::from(1))),
            Some((_, Scalar::Fp { p, .. })) => Scalar::Fp { v: 1, p: *p },
            None => {
                return if k == 0 {
                    panic!("0^0 of polynomial with unknown field")
                } else {
                    Poly::zero()
                }
            }
        };
        let mut result = Poly::constant(field_one, n_vars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, order);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, order);
            }
        }
        result
    }

    /// Divide every coefficient by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, lc)) => {
                if lc.is_one() {
                    self.clone()
                } else {
                    self.scale(&lc.inv())
                }
            }
        }
    }

    /// Re-sort terms under a (possibly different) order.
    pub fn resorted(&self, order: &MonomialOrder) -> Poly {
        let mut v = self.terms.clone();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly { terms: v }
    }

    /// Map monomials through a variable embedding: `var_map[i]` is the index
    /// of old variable `i` in the new ring with `new_n_vars` variables.
    pub fn embed(&self, var_map: &[usize], new_n_vars: usize, order: &MonomialOrder) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u16; new_n_vars];
                for (i, &exp) in m.exponents().iter().enumerate() {
                    if exp > 0 {
                        e[var_map[i]] = exp;
                    }
                }
                (Monomial::from_exponents(e), c.clone())
            })
            .collect();
        Poly::from_terms(terms, order)
    }

    /// Render the polynomial with the given variable names, terms in stored
    /// (descending) order. Leading coefficient printed as-is.
    pub fn render(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = scalar_is_negative(c);
            let abs = if neg { c.neg() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono = render_monomial(m, vars);
            if mono.is_empty() {
                write!(out, "{abs}").unwrap();
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                write!(out, "{abs}*{mono}").unwrap();
            }
        }
        out
    }
}

fn render_monomial(m: &Monomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 1 {
            parts.push(vars[i].clone());
        } else if e > 1 {
            parts.push(format!("{}^{}", vars[i], e));
        }
    }
    parts.join("*")
}
