//! Ideals with cached reduced Gröbner bases, membership and equality tests,
//! arithmetic (sum, product, power), elimination, saturation, and colon.
//!
//! Quotient-ring questions are answered in the ambient polynomial ring with
//! the relation generators adjoined.

use crate::gb::{normal_form, normal_form_with_quotients, reduced_groebner_basis};
use crate::limits::{CapExceeded, GbLimits};
use crate::monomial::MonomialOrder;
use crate::poly::Poly;
use crate::ring::{Ring, RingPresentation};
use itertools::Itertools;
use std::sync::OnceLock;

#[derive(Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Poly>,
    cached_gb: OnceLock<Vec<Poly>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let c = Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cached_gb: OnceLock::new(),
        };
        if let Some(gb) = self.cached_gb.get() {
            let _ = c.cached_gb.set(gb.clone());
        }
        c
    }
}

impl Ideal {
    /// Nonzero generators are kept, normalized modulo the ring relations.
    pub fn new(ring: Ring, gens: Vec<Poly>) -> Self {
        let gens: Vec<Poly> = gens
            .into_iter()
            .map(|g| ring.normalize(&g))
            .filter(|g| !g.is_zero())
            .collect();
        Ideal {
            ring,
            gens,
            cached_gb: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// The unique reduced Gröbner basis of (gens + ring relations), cached.
    pub fn groebner_basis(&self, limits: &GbLimits) -> Result<&[Poly], CapExceeded> {
        if let Some(gb) = self.cached_gb.get() {
            return Ok(gb);
        }
        let mut input = self.gens.clone();
        input.extend_from_slice(self.ring.relations());
        let gb = reduced_groebner_basis(&input, self.ring.order(), limits)?;
        Ok(self.cached_gb.get_or_init(|| gb))
    }

    /// Normal form of `h` modulo this ideal (and the ring relations).
    pub fn normal_form(&self, h: &Poly, limits: &GbLimits) -> Result<Poly, CapExceeded> {
        let gb = self.groebner_basis(limits)?;
        Ok(normal_form(h, gb, self.ring.order()))
    }

    pub fn member(&self, h: &Poly, limits: &GbLimits) -> Result<bool, CapExceeded> {
        let h = self.ring.normalize(h);
        if h.is_zero() {
            return Ok(true);
        }
        // monomial fast path: divisibility decides membership
        if self.ring.relations().is_empty()
            && h.n_terms() == 1
            && self.gens.iter().all(|g| g.n_terms() == 1)
        {
            let hm = h.leading_monomial().unwrap();
            return Ok(self
                .gens
                .iter()
                .any(|g| g.leading_monomial().unwrap().divides(hm)));
        }
        Ok(self.normal_form(&h, limits)?.is_zero())
    }

    pub fn equal(&self, other: &Ideal, limits: &GbLimits) -> Result<bool, CapExceeded> {
        assert_eq!(**self.ring(), **other.ring(), "ideal_equal across rings");
        Ok(self.groebner_basis(limits)? == other.groebner_basis(limits)?)
    }

    pub fn contains_one(&self, limits: &GbLimits) -> Result<bool, CapExceeded> {
        Ok(self
            .groebner_basis(limits)?
            .iter()
            .any(|g| g.is_constant() && !g.is_zero()))
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Ideal::new(self.ring.clone(), gens)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(self.ring.mul(a, b));
            }
        }
        gens = dedup_polys(gens);
        Ideal::new(self.ring.clone(), gens)
    }

    /// `I^k`: all k-fold products of generators, deduplicated.
    pub fn power(&self, k: u32) -> Ideal {
        assert!(k >= 1, "ideal_power needs k >= 1");
        let mut gens = Vec::new();
        for combo in (0..self.gens.len()).combinations_with_replacement(k as usize) {
            let mut p = self.ring.one();
            for i in combo {
                p = self.ring.mul(&p, &self.gens[i]);
            }
            gens.push(p);
        }
        Ideal::new(self.ring.clone(), dedup_polys(gens))
    }

    /// Adjoin one element.
    pub fn with_element(&self, h: &Poly) -> Ideal {
        let mut gens = self.gens.clone();
        gens.push(h.clone());
        Ideal::new(self.ring.clone(), gens)
    }
}

fn dedup_polys(gens: Vec<Poly>) -> Vec<Poly> {
    let mut seen = std::collections::HashSet::new();
    gens.into_iter()
        .filter(|g| !g.is_zero() && seen.insert(g.clone()))
        .collect()
}

/// Generators of `I ∩ k[kept vars]`, computed via a block elimination order.
/// Requires the ambient polynomial ring (no relations); callers working in a
/// quotient adjoin the relations to `I` first.
pub fn eliminate(ideal: &Ideal, keep: &[usize], limits: &GbLimits) -> Result<Ideal, CapExceeded> {
    let ring = ideal.ring();
    assert!(
        ring.relations().is_empty(),
        "eliminate requires the ambient polynomial ring"
    );
    let kept_flags = {
        let mut f = vec![false; ring.n_vars()];
        for &i in keep {
            f[i] = true;
        }
        f
    };
    let eliminated: Vec<usize> = (0..ring.n_vars()).filter(|i| !kept_flags[*i]).collect();
    if eliminated.is_empty() {
        let gb = ideal.groebner_basis(limits)?.to_vec();
        return Ok(Ideal::new(ring.clone(), gb));
    }
    let elim_order = MonomialOrder::Block(vec![eliminated, keep.to_vec()]);
    let resorted: Vec<Poly> = ideal.gens().iter().map(|g| g.resorted(&elim_order)).collect();
    let gb = reduced_groebner_basis(&resorted, &elim_order, limits)?;
    let kept_polys: Vec<Poly> = gb
        .into_iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.supported_on(&kept_flags)))
        .map(|g| g.resorted(ring.order()))
        .collect();
    Ok(Ideal::new(ring.clone(), kept_polys))
}

/// Pick a variable name not already used by the ring.
pub fn fresh_var_name(ring: &Ring, stem: &str) -> String {
    if ring.var_index(stem).is_none() {
        return stem.to_string();
    }
    for i in 0.. {
        let name = format!("{stem}{i}");
        if ring.var_index(&name).is_none() {
            return name;
        }
    }
    unreachable!()
}

/// Saturation `(I : g^∞)` by the auxiliary-variable method: adjoin `w`, add
/// `w*g - 1`, eliminate `w`. Ambient polynomial rings only.
pub fn saturate(ideal: &Ideal, g: &Poly, limits: &GbLimits) -> Result<Ideal, CapExceeded> {
    let ring = ideal.ring();
    assert!(
        ring.relations().is_empty(),
        "saturate requires the ambient polynomial ring"
    );
    assert!(!g.is_zero(), "saturate by zero");
    let w_name = fresh_var_name(ring, "w_sat");
    let n = ring.n_vars();
    let mut vars = ring.vars().to_vec();
    vars.push(w_name);
    // block order [w | old vars] eliminates w
    let order = MonomialOrder::Block(vec![vec![n], (0..n).collect()]);
    let big = RingPresentation::polynomial(*ring.field(), vars, order.clone());
    let embed: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Poly> = ideal
        .gens()
        .iter()
        .map(|p| p.embed(&embed, n + 1, &order))
        .collect();
    let w = big.var(n);
    let g_up = g.embed(&embed, n + 1, &order);
    gens.push(big.sub(&big.mul(&w, &g_up), &big.one()));
    let gb = reduced_groebner_basis(&gens, &order, limits)?;
    let mut kept_flags = vec![true; n + 1];
    kept_flags[n] = false;
    let result: Vec<Poly> = gb
        .into_iter()
        .filter(|p| p.terms().iter().all(|(m, _)| m.supported_on(&kept_flags)))
        .map(|p| crate::ring::project_to_subring(&p, &embed, ring))
        .collect();
    Ok(Ideal::new(ring.clone(), result))
}

/// Ideal intersection via the `t`-trick: eliminate `t` from `t·I + (1−t)·K`.
pub fn intersect(a: &Ideal, b: &Ideal, limits: &GbLimits) -> Result<Ideal, CapExceeded> {
    let ring = a.ring();
    assert!(
        ring.relations().is_empty(),
        "intersect requires the ambient polynomial ring"
    );
    let n = ring.n_vars();
    let t_name = fresh_var_name(ring, "t_cap");
    let mut vars = ring.vars().to_vec();
    vars.push(t_name);
    let order = MonomialOrder::Block(vec![vec![n], (0..n).collect()]);
    let big = RingPresentation::polynomial(*ring.field(), vars, order.clone());
    let embed: Vec<usize> = (0..n).collect();
    let t = big.var(n);
    let one_minus_t = big.sub(&big.one(), &t);
    let mut gens = Vec::new();
    for g in a.gens() {
        gens.push(big.mul(&t, &g.embed(&embed, n + 1, &order)));
    }
    for g in b.gens() {
        gens.push(big.mul(&one_minus_t, &g.embed(&embed, n + 1, &order)));
    }
    let gb = reduced_groebner_basis(&gens, &order, limits)?;
    let mut kept_flags = vec![true; n + 1];
    kept_flags[n] = false;
    let result: Vec<Poly> = gb
        .into_iter()
        .filter(|p| p.terms().iter().all(|(m, _)| m.supported_on(&kept_flags)))
        .map(|p| crate::ring::project_to_subring(&p, &embed, ring))
        .collect();
    Ok(Ideal::new(ring.clone(), result))
}

/// Colon ideal `(I : J) = { r : rJ ⊆ I }`, via `(I : g) = (I ∩ (g))/g`
/// intersected over the generators of `J`. Works in the ambient ring with
/// relations adjoined, so quotient rings are handled.
pub fn colon(ideal: &Ideal, j: &Ideal, limits: &GbLimits) -> Result<Ideal, CapExceeded> {
    let ring = ideal.ring();
    assert_eq!(**ring, **j.ring(), "colon across rings");
    let (ambient, i_amb) = if ring.relations().is_empty() {
        (ring.clone(), ideal.clone())
    } else {
        let amb = RingPresentation::polynomial(
            *ring.field(),
            ring.vars().to_vec(),
            ring.order().clone(),
        );
        let mut gens = ideal.gens().to_vec();
        gens.extend_from_slice(ring.relations());
        (amb.clone(), Ideal::new(amb, gens))
    };
    let mut result: Option<Ideal> = None;
    for g in j.gens() {
        let principal = Ideal::new(ambient.clone(), vec![g.clone()]);
        let meet = intersect(&i_amb, &principal, limits)?;
        let mut quotients = Vec::new();
        for p in meet.gens() {
            let (r, q) = normal_form_with_quotients(p, &[g.clone()], ambient.order());
            assert!(r.is_zero(), "element of I ∩ (g) not divisible by g");
            quotients.push(q.into_iter().next().unwrap());
        }
        let colon_g = Ideal::new(ambient.clone(), quotients);
        result = Some(match result {
            None => colon_g,
            Some(acc) => intersect(&acc, &colon_g, limits)?,
        });
    }
    let result = result.unwrap_or_else(|| i_amb.clone());
    // map back into the (possibly quotient) original ring
    Ok(Ideal::new(ring.clone(), result.gens().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDesc;
    use crate::parser::{parse_poly, parse_poly_list};

    fn ring2() -> Ring {
        RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into()],
            MonomialOrder::Grevlex,
        )
    }

    fn ideal_of(ring: &Ring, s: &str) -> Ideal {
        Ideal::new(ring.clone(), parse_poly_list(s, ring).unwrap())
    }

    #[test]
    fn membership_examples() {
        let r = ring2();
        let lim = GbLimits::default();
        let i = ideal_of(&r, "x^2, y^2");
        assert!(i.member(&parse_poly("x^2*y", &r).unwrap(), &lim).unwrap());
        assert!(!i.member(&parse_poly("x*y", &r).unwrap(), &lim).unwrap());
    }

    #[test]
    fn product_and_power_agree() {
        let r = ring2();
        let lim = GbLimits::default();
        // (x^2, xy) == (x)*(x, y)
        let a = ideal_of(&r, "x^2, x*y");
        let b = ideal_of(&r, "x").product(&ideal_of(&r, "x, y"));
        assert!(a.equal(&b, &lim).unwrap());
        // (x) != (x^2)
        assert!(!ideal_of(&r, "x").equal(&ideal_of(&r, "x^2"), &lim).unwrap());
        // (x^2,y^2)*(x^2,y^2,xy) == (x^2,y^2,xy)^2
        let j = ideal_of(&r, "x^2, y^2");
        let jh = ideal_of(&r, "x^2, y^2, x*y");
        assert!(j.product(&jh).equal(&jh.power(2), &lim).unwrap());
        // (x,y)^2 = (x^2, xy, y^2)
        let sq = ideal_of(&r, "x, y").power(2);
        assert!(sq.equal(&ideal_of(&r, "x^2, x*y, y^2"), &lim).unwrap());
    }

    #[test]
    fn elimination_examples() {
        let lim = GbLimits::default();
        let r3 = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into(), "t".into()],
            MonomialOrder::Grevlex,
        );
        // graph of blowup chart: no relations purely in x,y
        let i = ideal_of(&r3, "x*t - y");
        let e = eliminate(&i, &[0, 1], &lim).unwrap();
        assert!(e.is_zero());
        // graph of a map
        let r2 = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "t".into()],
            MonomialOrder::Grevlex,
        );
        let i = ideal_of(&r2, "t - x^2");
        assert!(eliminate(&i, &[0], &lim).unwrap().is_zero());
    }

    #[test]
    fn saturation_examples() {
        let r = ring2();
        let lim = GbLimits::default();
        let x = parse_poly("x", &r).unwrap();
        let y = parse_poly("y", &r).unwrap();
        // ((xy) : x^∞) = (y)
        let i = ideal_of(&r, "x*y");
        let s = saturate(&i, &x, &lim).unwrap();
        assert!(s.equal(&ideal_of(&r, "y"), &lim).unwrap());
        // ((x^2) : y^∞) = (x^2)
        let i = ideal_of(&r, "x^2");
        let s = saturate(&i, &y, &lim).unwrap();
        assert!(s.equal(&ideal_of(&r, "x^2"), &lim).unwrap());
        // ((xT - y, yT - xT^2) : x^∞) = (xT - y)
        let r3 = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into(), "T".into()],
            MonomialOrder::Grevlex,
        );
        let i = ideal_of(&r3, "x*T - y, y*T - x*T^2");
        let x3 = parse_poly("x", &r3).unwrap();
        let s = saturate(&i, &x3, &lim).unwrap();
        assert!(s.equal(&ideal_of(&r3, "x*T - y"), &lim).unwrap());
    }

    #[test]
    fn colon_examples() {
        let r = ring2();
        let lim = GbLimits::default();
        let c = colon(&ideal_of(&r, "x^2"), &ideal_of(&r, "x"), &lim).unwrap();
        assert!(c.equal(&ideal_of(&r, "x"), &lim).unwrap());
        let c = colon(&ideal_of(&r, "x^2, y^2"), &ideal_of(&r, "x, y"), &lim).unwrap();
        assert!(c.equal(&ideal_of(&r, "x^2, y^2, x*y"), &lim).unwrap());
        let c = colon(&ideal_of(&r, "x"), &ideal_of(&r, "1"), &lim).unwrap();
        assert!(c.equal(&ideal_of(&r, "x"), &lim).unwrap());
    }
}
