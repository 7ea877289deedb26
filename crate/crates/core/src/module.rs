//! Module-level Gröbner bases over presented rings: kernels (syzygies) and
//! exact linear-system solving.
//!
//! Vectors carry a position-over-term order (lower component dominates, ties
//! by the ring's monomial order). Solving `M·x ≡ b` augments each column with
//! a unit tracking component and adjoins relation multiples per coordinate;
//! the augmentation part of the normal form of `(b, 0)` reads off the
//! solution, and basis elements supported on the augmentation alone generate
//! the syzygy module.

use crate::field::Scalar;
use crate::limits::{CapExceeded, GbLimits};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Poly;
use crate::ring::Ring;
use num::{BigInt, Integer, One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;

/// A rows×cols matrix of ring elements, entries reduced modulo relations.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>, // row-major
}

impl ModuleMatrix {
    pub fn new(ring: Ring, rows: usize, cols: usize, entries: Vec<Poly>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        let entries = entries.iter().map(|p| ring.normalize(p)).collect();
        ModuleMatrix {
            ring,
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Self {
        let entries = vec![Poly::zero(); rows * cols];
        ModuleMatrix {
            ring,
            rows,
            cols,
            entries,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<Poly> {
        (0..self.rows).map(|r| self.entry(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    /// Matrix-vector product, reduced modulo relations.
    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Poly::zero();
                for c in 0..self.cols {
                    if !self.entry(r, c).is_zero() && !v[c].is_zero() {
                        acc = acc.add(
                            &self.entry(r, c).mul(&v[c], self.ring.order()),
                            self.ring.order(),
                        );
                    }
                }
                self.ring.normalize(&acc)
            })
            .collect()
    }

    /// Matrix product `self * other`, reduced modulo relations.
    pub fn compose(&self, other: &ModuleMatrix) -> ModuleMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    if !self.entry(r, k).is_zero() && !other.entry(k, c).is_zero() {
                        acc = acc.add(
                            &self.entry(r, k).mul(other.entry(k, c), self.ring.order()),
                            self.ring.order(),
                        );
                    }
                }
                entries.push(self.ring.normalize(&acc));
            }
        }
        ModuleMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: other.cols,
            entries,
        }
    }

    /// Same entries re-interpreted in another presentation (same variables).
    pub fn map_entries<F: Fn(&Poly) -> Poly>(&self, ring: Ring, f: F) -> ModuleMatrix {
        ModuleMatrix::new(
            ring,
            self.rows,
            self.cols,
            self.entries.iter().map(f).collect(),
        )
    }

    pub fn render(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.ring.render(self.entry(r, c)))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&ModuleMatrix> for MatrixJson {
    fn from(m: &ModuleMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.render(),
        }
    }
}

/// Free-module vector with dense component storage.
#[derive(Debug, Clone, PartialEq)]
struct ModVec {
    comps: Vec<Poly>,
}

impl ModVec {
    fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    /// POT leading term: (component, monomial, coefficient).
    fn leading(&self) -> Option<(usize, Monomial, Scalar)> {
        for (c, p) in self.comps.iter().enumerate() {
            if let Some((m, s)) = p.leading() {
                return Some((c, m.clone(), s.clone()));
            }
        }
        None
    }

    fn sub_scaled(
        &self,
        other: &ModVec,
        t: &Monomial,
        c: &Scalar,
        order: &MonomialOrder,
    ) -> ModVec {
        ModVec {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| {
                    if b.is_zero() {
                        a.clone()
                    } else {
                        a.sub(&b.mul_term(t, c), order)
                    }
                })
                .collect(),
        }
    }

    fn scale(&self, c: &Scalar) -> ModVec {
        ModVec {
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    fn max_degree(&self) -> u32 {
        self.comps.iter().map(|p| p.total_degree()).max().unwrap_or(0)
    }

    /// Integer-primitive representative with positive POT-leading coefficient
    /// (rationals); monic leading coefficient for prime fields.
    fn primitive(&self) -> ModVec {
        let lead = match self.leading() {
            None => return self.clone(),
            Some(l) => l,
        };
        match &lead.2 {
            Scalar::Fp { .. } => self.scale(&lead.2.inv()),
            Scalar::Q(_) => {
                let mut den_lcm = BigInt::one();
                let mut num_gcd = BigInt::zero();
                for p in &self.comps {
                    for (_, c) in p.terms() {
                        let (_, d) = c.as_ratio();
                        den_lcm = den_lcm.lcm(&d);
                    }
                }
                for p in &self.comps {
                    for (_, c) in p.terms() {
                        let (n, d) = c.as_ratio();
                        num_gcd = num_gcd.gcd(&(n * (&den_lcm / d)));
                    }
                }
                if num_gcd.is_zero() {
                    return self.clone();
                }
                if let Scalar::Q(lc) = &lead.2 {
                    if lc.is_negative() {
                        num_gcd = -num_gcd;
                    }
                }
                self.scale(&Scalar::Q(num::BigRational::new(den_lcm, num_gcd)))
            }
        }
    }
}

/// Full POT normal form of `v` against `basis`, with reducers bucketed by
/// leading component.
fn module_nf(v: &ModVec, basis: &[ModVec], order: &MonomialOrder) -> ModVec {
    let rank = v.comps.len();
    let mut buckets: Vec<Vec<&ModVec>> = vec![Vec::new(); rank];
    for w in basis {
        if let Some((wc, _, _)) = w.leading() {
            if wc < rank {
                buckets[wc].push(w);
            }
        }
    }
    let mut out = v.clone();
    for c in 0..rank {
        // reduce component c like a polynomial; tails land in components > c
        let mut frozen: Vec<(Monomial, Scalar)> = Vec::new();
        'term: while let Some((lm, lc)) = out.comps[c].leading() {
            let (lm, lc) = (lm.clone(), lc.clone());
            for w in &buckets[c] {
                let (_, wm, wcoef) = w.leading().unwrap();
                if let Some(t) = lm.div(&wm) {
                    let factor = lc.div(&wcoef);
                    out = out.sub_scaled(w, &t, &factor, order);
                    continue 'term;
                }
            }
            frozen.push((lm, lc));
            let rest = out.comps[c].terms()[1..].to_vec();
            out.comps[c] = Poly::from_sorted_terms(rest);
        }
        out.comps[c] = Poly::from_sorted_terms(frozen);
    }
    out
}

struct ModPair {
    i: usize,
    j: usize,
    comp: usize,
    lcm: Monomial,
    sugar: u32,
}

fn make_mod_pair(basis: &[ModVec], sugars: &[u32], i: usize, j: usize) -> ModPair {
    let (ci, mi, _) = basis[i].leading().unwrap();
    let (cj, mj, _) = basis[j].leading().unwrap();
    debug_assert_eq!(ci, cj);
    let lcm = mi.lcm(&mj);
    let sugar = (sugars[i] + lcm.degree() - mi.degree())
        .max(sugars[j] + lcm.degree() - mj.degree());
    ModPair {
        i,
        j,
        comp: ci,
        lcm,
        sugar,
    }
}

/// Gebauer-Möller update restricted to what is valid for modules: the chain
/// criterion and divisibility pruning among candidates with the same leading
/// component. No product criterion.
fn module_update_pairs(
    pairs: &mut Vec<ModPair>,
    basis: &[ModVec],
    sugars: &[u32],
    minimal: &[bool],
    relation_row: &[bool],
    t: usize,
) {
    let (ct, mt, _) = basis[t].leading().unwrap();
    pairs.retain(|p| {
        if p.comp != ct || !mt.divides(&p.lcm) {
            return true;
        }
        let (_, mi, _) = basis[p.i].leading().unwrap();
        let (_, mj, _) = basis[p.j].leading().unwrap();
        mi.lcm(&mt) == p.lcm || mj.lcm(&mt) == p.lcm
    });
    let mut c: Vec<ModPair> = (0..t)
        .filter(|&i| {
            minimal[i]
                && !(relation_row[i] && relation_row[t])
                && basis[i]
                    .leading()
                    .map(|(ci, _, _)| ci == ct)
                    .unwrap_or(false)
        })
        .map(|i| make_mod_pair(basis, sugars, i, t))
        .collect();
    let mut d: Vec<ModPair> = Vec::new();
    while let Some(cand) = c.pop() {
        let dominated = c.iter().any(|o| o.lcm.divides(&cand.lcm))
            || d.iter().any(|o| o.lcm.divides(&cand.lcm));
        if !dominated {
            d.push(cand);
        }
    }
    pairs.extend(d);
}

/// Buchberger loop for submodules of a free module under POT. Generators
/// flagged as relation rows are copies of the ring's relation basis in one
/// coordinate: S-pairs between two of them reduce to zero by that same
/// basis, so they are never formed.
fn module_groebner(
    gens: Vec<(ModVec, bool)>,
    order: &MonomialOrder,
    limits: &GbLimits,
) -> Result<Vec<ModVec>, CapExceeded> {
    let mut basis: Vec<ModVec> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut relation_row: Vec<bool> = Vec::new();
    for (g, is_rel) in gens {
        let g = g.primitive();
        if !g.is_zero() {
            sugars.push(g.max_degree());
            relation_row.push(is_rel);
            basis.push(g);
        }
    }
    let mut minimal = vec![true; basis.len()];
    let mut pairs: Vec<ModPair> = Vec::new();
    for t in 1..basis.len() {
        module_update_pairs(&mut pairs, &basis, &sugars, &minimal, &relation_row, t);
    }
    sort_mod_pairs(&mut pairs, order);

    let mut processed = 0usize;
    while let Some(pair) = pairs.pop() {
        processed += 1;
        if processed > limits.max_pairs {
            return Err(CapExceeded::Pairs(limits.max_pairs));
        }
        if pair.lcm.degree() > limits.max_degree {
            return Err(CapExceeded::Degree(pair.lcm.degree()));
        }
        let (_, mi, si) = basis[pair.i].leading().unwrap();
        let (_, mj, sj) = basis[pair.j].leading().unwrap();
        let ti = pair.lcm.div(&mi).unwrap();
        let tj = pair.lcm.div(&mj).unwrap();
        let a = scale_shift(&basis[pair.i], &ti, &si.inv());
        let s = a.sub_scaled(&basis[pair.j], &tj, &sj.inv(), order);
        let r = module_nf(&s, &basis, order).primitive();
        if r.is_zero() {
            continue;
        }
        if r.max_degree() > limits.max_degree {
            return Err(CapExceeded::Degree(r.max_degree()));
        }
        let new_idx = basis.len();
        sugars.push(pair.sugar.max(r.max_degree()));
        basis.push(r);
        minimal.push(true);
        relation_row.push(false);
        module_update_pairs(&mut pairs, &basis, &sugars, &minimal, &relation_row, new_idx);
        let (cn, mn, _) = basis[new_idx].leading().unwrap();
        for i in 0..new_idx {
            if minimal[i] {
                if let Some((ci, mi, _)) = basis[i].leading() {
                    if ci == cn && mn.divides(&mi) {
                        minimal[i] = false;
                    }
                }
            }
        }
        sort_mod_pairs(&mut pairs, order);
    }
    Ok(basis)
}

fn scale_shift(v: &ModVec, t: &Monomial, c: &Scalar) -> ModVec {
    ModVec {
        comps: v.comps.iter().map(|p| p.mul_term(t, c)).collect(),
    }
}

fn sort_mod_pairs(pairs: &mut [ModPair], order: &MonomialOrder) {
    pairs.sort_by(|a, b| match b.sugar.cmp(&a.sugar) {
        Ordering::Equal => match b.comp.cmp(&a.comp) {
            Ordering::Equal => match order.cmp(&b.lcm, &a.lcm) {
                Ordering::Equal => (b.i, b.j).cmp(&(a.i, a.j)),
                ord => ord,
            },
            ord => ord,
        },
        ord => ord,
    });
}

/// Precomputed Gröbner data for a fixed matrix, reusable across right-hand
/// sides. Augmented layout: components `0..rows` carry the target module,
/// `rows..rows+cols` the solution tracking.
pub struct ModuleSolver {
    matrix: ModuleMatrix,
    basis: Vec<ModVec>,
}

impl ModuleSolver {
    pub fn new(matrix: &ModuleMatrix, limits: &GbLimits) -> Result<Self, CapExceeded> {
        let ring = matrix.ring().clone();
        let (rows, cols) = (matrix.rows(), matrix.cols());
        let rank = rows + cols;
        let mut gens = Vec::new();
        for j in 0..cols {
            let mut comps = vec![Poly::zero(); rank];
            for r in 0..rows {
                comps[r] = matrix.entry(r, j).clone();
            }
            comps[rows + j] = ring.one();
            gens.push((ModVec { comps }, false));
        }
        for rel in ring.relations() {
            for r in 0..rows {
                let mut comps = vec![Poly::zero(); rank];
                comps[r] = rel.clone();
                gens.push((ModVec { comps }, true));
            }
        }
        let basis = module_groebner(gens, ring.order(), limits)?;
        Ok(ModuleSolver {
            matrix: matrix.clone(),
            basis,
        })
    }

    /// Solve `M·x ≡ b` modulo the ring relations; `None` when no solution
    /// exists. The returned lift is the canonical (normal-form) one.
    pub fn solve(&self, b: &[Poly]) -> Option<Vec<Poly>> {
        let ring = self.matrix.ring();
        let (rows, cols) = (self.matrix.rows(), self.matrix.cols());
        assert_eq!(b.len(), rows, "rhs length mismatch");
        let mut comps = vec![Poly::zero(); rows + cols];
        for (r, p) in b.iter().enumerate() {
            comps[r] = ring.normalize(p);
        }
        let v = ModVec { comps };
        let nf = module_nf(&v, &self.basis, ring.order());
        if nf.comps[..rows].iter().any(|p| !p.is_zero()) {
            return None;
        }
        let x: Vec<Poly> = nf.comps[rows..]
            .iter()
            .map(|p| ring.normalize(&p.neg()))
            .collect();
        debug_assert_eq!(self.matrix.apply(&x), b.iter().map(|p| ring.normalize(p)).collect::<Vec<_>>());
        Some(x)
    }

    /// Columns generating `ker(M)` over the presented ring.
    pub fn syzygies(&self) -> ModuleMatrix {
        let ring = self.matrix.ring().clone();
        let (rows, cols) = (self.matrix.rows(), self.matrix.cols());
        let mut columns: Vec<Vec<Poly>> = Vec::new();
        for w in &self.basis {
            if w.comps[..rows].iter().all(|p| p.is_zero()) {
                let col: Vec<Poly> = w.comps[rows..].iter().map(|p| ring.normalize(p)).collect();
                if col.iter().any(|p| !p.is_zero()) && !columns.contains(&col) {
                    columns.push(col);
                }
            }
        }
        let n = columns.len();
        let mut entries = vec![Poly::zero(); cols * n];
        for (j, col) in columns.iter().enumerate() {
            for (r, p) in col.iter().enumerate() {
                entries[r * n + j] = p.clone();
            }
        }
        ModuleMatrix::new(ring, cols, n, entries)
    }
}

/// One-shot solve; build a `ModuleSolver` for repeated right-hand sides.
pub fn module_solve(
    matrix: &ModuleMatrix,
    b: &[Poly],
    limits: &GbLimits,
) -> Result<Option<Vec<Poly>>, CapExceeded> {
    Ok(ModuleSolver::new(matrix, limits)?.solve(b))
}

/// Kernel of `M` as a matrix whose columns generate the syzygy module.
pub fn syzygies(matrix: &ModuleMatrix, limits: &GbLimits) -> Result<ModuleMatrix, CapExceeded> {
    Ok(ModuleSolver::new(matrix, limits)?.syzygies())
}
