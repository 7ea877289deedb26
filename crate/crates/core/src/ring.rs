//! Finitely presented commutative rings: field, named variables, monomial
//! order, and a relation ideal stored as its reduced Gröbner basis.
//!
//! Every polynomial handed out by ring-level operations is the normal form
//! modulo the relations, so equality of ring elements is term-list equality.

use crate::field::{FieldDesc, Scalar};
use crate::gb::{normal_form, reduced_groebner_basis};
use crate::limits::{CapExceeded, GbLimits};
use crate::monomial::MonomialOrder;
use crate::poly::Poly;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub type Ring = Arc<RingPresentation>;

#[derive(Debug, Clone, PartialEq)]
pub struct RingPresentation {
    field: FieldDesc,
    vars: Vec<String>,
    order: MonomialOrder,
    /// Reduced Gröbner basis of the relation ideal; empty for a polynomial ring.
    relations: Vec<Poly>,
    /// Set when 1 lies in the relation ideal. Reported, not an error.
    zero_ring: bool,
}

impl RingPresentation {
    /// Polynomial ring: no relations.
    pub fn polynomial(field: FieldDesc, vars: Vec<String>, order: MonomialOrder) -> Ring {
        field.validate().expect("invalid field");
        assert!(
            vars.iter().all(|v| !v.is_empty()),
            "empty variable name"
        );
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            assert!(seen.insert(v.clone()), "duplicate variable {v}");
        }
        Arc::new(RingPresentation {
            field,
            vars,
            order,
            relations: Vec::new(),
            zero_ring: false,
        })
    }

    /// Quotient of an ambient polynomial ring by `relation_gens`. The zero
    /// ring (when 1 reduces into the ideal) is representable and flagged.
    pub fn quotient(
        ambient: &Ring,
        relation_gens: &[Poly],
        limits: &GbLimits,
    ) -> Result<Ring, CapExceeded> {
        assert!(
            ambient.relations.is_empty(),
            "quotient must start from a polynomial ring"
        );
        let gb = reduced_groebner_basis(relation_gens, &ambient.order, limits)?;
        let zero_ring = gb.iter().any(|g| g.is_constant() && !g.is_zero());
        Ok(Arc::new(RingPresentation {
            field: ambient.field,
            vars: ambient.vars.clone(),
            order: ambient.order.clone(),
            relations: gb,
            zero_ring,
        }))
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn is_zero_ring(&self) -> bool {
        self.zero_ring
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, idx: usize) -> Poly {
        Poly::var(&self.field, self.vars.len(), idx)
    }

    pub fn constant_i64(&self, n: i64) -> Poly {
        Poly::constant(self.field.from_i64(n), self.vars.len())
    }

    pub fn one(&self) -> Poly {
        self.constant_i64(1)
    }

    /// Normal form modulo the ring relations.
    pub fn normalize(&self, p: &Poly) -> Poly {
        if self.relations.is_empty() {
            return p.clone();
        }
        normal_form(p, &self.relations, &self.order)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.normalize(&a.add(b, &self.order))
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.normalize(&a.sub(b, &self.order))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.normalize(&a.mul(b, &self.order))
    }

    pub fn pow(&self, a: &Poly, k: u32) -> Poly {
        self.normalize(&a.pow(k, &self.order))
    }

    pub fn eq_mod(&self, a: &Poly, b: &Poly) -> bool {
        self.normalize(a) == self.normalize(b)
    }

    pub fn render(&self, p: &Poly) -> String {
        p.render(&self.vars)
    }

    /// New polynomial ring with extra variables appended (grevlex) and the
    /// embedding of this ring's polynomials into it.
    pub fn extended(&self, extra: &[String], order: MonomialOrder) -> (Ring, VarEmbedding) {
        let mut vars = self.vars.clone();
        vars.extend_from_slice(extra);
        let n_new = vars.len();
        let ring = RingPresentation::polynomial(self.field, vars, order);
        let map: Vec<usize> = (0..self.vars.len()).collect();
        (
            ring,
            VarEmbedding {
                var_map: map,
                new_n_vars: n_new,
            },
        )
    }

    pub fn descriptor(&self) -> RingDescriptor {
        RingDescriptor {
            field: self.field,
            vars: self.vars.clone(),
            order: match &self.order {
                MonomialOrder::Lex => OrderDescriptor::Named("lex".into()),
                MonomialOrder::Grevlex => OrderDescriptor::Named("grevlex".into()),
                MonomialOrder::Block(groups) => OrderDescriptor::Block {
                    block: groups
                        .iter()
                        .map(|g| g.iter().map(|&i| self.vars[i].clone()).collect())
                        .collect(),
                },
            },
            relations: self.relations.iter().map(|p| self.render(p)).collect(),
        }
    }
}

/// Carries a variable-index map from a smaller ring into a larger one.
#[derive(Debug, Clone)]
pub struct VarEmbedding {
    pub var_map: Vec<usize>,
    pub new_n_vars: usize,
}

impl VarEmbedding {
    pub fn apply(&self, p: &Poly, target_order: &MonomialOrder) -> Poly {
        p.embed(&self.var_map, self.new_n_vars, target_order)
    }
}

/// Restrict polynomials supported on a variable subset into a smaller ring.
/// Panics if `p` involves a variable outside the subset.
pub fn project_to_subring(p: &Poly, keep: &[usize], target: &Ring) -> Poly {
    let mut pos = vec![usize::MAX; p.terms().first().map(|(m, _)| m.n_vars()).unwrap_or(0)];
    for (new_i, &old_i) in keep.iter().enumerate() {
        if old_i < pos.len() {
            pos[old_i] = new_i;
        }
    }
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e = vec![0u16; keep.len()];
            for (i, &exp) in m.exponents().iter().enumerate() {
                if exp > 0 {
                    assert!(pos[i] != usize::MAX, "polynomial not supported on subring");
                    e[pos[i]] = exp;
                }
            }
            (crate::monomial::Monomial::from_exponents(e), c.clone())
        })
        .collect();
    Poly::from_terms(terms, target.order())
}

/// JSON ring descriptor, the on-disk format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub field: FieldDesc,
    pub vars: Vec<String>,
    #[serde(default = "default_order")]
    pub order: OrderDescriptor,
    #[serde(default)]
    pub relations: Vec<String>,
}

fn default_order() -> OrderDescriptor {
    OrderDescriptor::Named("grevlex".into())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderDescriptor {
    Named(String),
    Block { block: Vec<Vec<String>> },
}

impl RingDescriptor {
    pub fn resolve_order(&self) -> Result<MonomialOrder, String> {
        match &self.order {
            OrderDescriptor::Named(n) => match n.as_str() {
                "lex" => Ok(MonomialOrder::Lex),
                "grevlex" => Ok(MonomialOrder::Grevlex),
                other => Err(format!("unknown order {other:?}")),
            },
            OrderDescriptor::Block { block } => {
                let mut groups = Vec::new();
                let mut used = std::collections::HashSet::new();
                for g in block {
                    let mut idx = Vec::new();
                    for name in g {
                        let i = self
                            .vars
                            .iter()
                            .position(|v| v == name)
                            .ok_or_else(|| format!("unknown variable {name:?} in block order"))?;
                        idx.push(i);
                        used.insert(i);
                    }
                    groups.push(idx);
                }
                if used.len() != self.vars.len() {
                    return Err("block order must cover all variables".into());
                }
                Ok(MonomialOrder::Block(groups))
            }
        }
    }
}

/// Present a descriptor as a ring: build the ambient ring, parse the relation
/// expressions, and quotient.
pub fn ring_from_descriptor(desc: &RingDescriptor, limits: &GbLimits) -> Result<Ring, String> {
    desc.field.validate()?;
    let order = desc.resolve_order()?;
    let ambient = RingPresentation::polynomial(desc.field, desc.vars.clone(), order);
    if desc.relations.is_empty() {
        return Ok(ambient);
    }
    let rels: Result<Vec<Poly>, _> = desc
        .relations
        .iter()
        .map(|s| crate::parser::parse_poly(s, &ambient))
        .collect();
    let rels = rels.map_err(|e| e.to_string())?;
    RingPresentation::quotient(&ambient, &rels, limits).map_err(|e| e.to_string())
}

/// Fold a scalar coefficient into a ring: used by matrices of scalars.
pub fn scalar_poly(ring: &Ring, s: Scalar) -> Poly {
    Poly::constant(s, ring.n_vars())
}
