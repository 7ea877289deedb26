//! Buchberger's algorithm: normal forms and unique reduced Gröbner bases.
//!
//! Pair selection uses the sugar strategy; Buchberger's product criterion and
//! the chain criterion (with the strict-lcm variant, which is sound without
//! done-pair bookkeeping) prune the queue. All loops run in deterministic
//! order, so repeated runs give identical output.

use crate::field::Scalar;
use crate::limits::{CapExceeded, GbLimits};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Poly;
use num::{BigInt, Integer, One, Signed, Zero};
use std::cmp::Ordering;

/// Reduce `p` to its unique normal form modulo `basis`.
pub fn normal_form(p: &Poly, basis: &[Poly], order: &MonomialOrder) -> Poly {
    reduce_inner(p, basis, order, None)
}

/// Normal form together with quotients: `p = sum q_i * basis_i + r`.
pub fn normal_form_with_quotients(
    p: &Poly,
    basis: &[Poly],
    order: &MonomialOrder,
) -> (Poly, Vec<Poly>) {
    let mut quotients = vec![Poly::zero(); basis.len()];
    let r = reduce_inner(p, basis, order, Some(&mut quotients));
    (r, quotients)
}

fn reduce_inner(
    p: &Poly,
    basis: &[Poly],
    order: &MonomialOrder,
    mut quotients: Option<&mut Vec<Poly>>,
) -> Poly {
    let mut work = p.clone();
    let mut remainder: Vec<(Monomial, Scalar)> = Vec::new();
    'outer: while let Some((lm, lc)) = work.leading() {
        let lm = lm.clone();
        let lc = lc.clone();
        for (gi, g) in basis.iter().enumerate() {
            if let Some((glm, glc)) = g.leading() {
                if let Some(t) = lm.div(glm) {
                    let c = lc.div(glc);
                    work = work.sub(&g.mul_term(&t, &c), order);
                    if let Some(q) = quotients.as_deref_mut() {
                        q[gi] = q[gi].add(&Poly::monomial(t, c), order);
                    }
                    continue 'outer;
                }
            }
        }
        remainder.push((lm, lc));
        let rest = work.terms()[1..].to_vec();
        work = Poly::from_sorted_terms(rest);
    }
    // remainder was collected in descending order already
    Poly::from_sorted_terms(remainder)
}

/// Scale to an integer-primitive representative with positive leading
/// coefficient (rationals) or monic (prime fields). Keeps intermediate
/// coefficient growth in check during the Buchberger loop.
pub fn primitive_part(p: &Poly) -> Poly {
    match p.leading() {
        None => Poly::zero(),
        Some((_, Scalar::Fp { .. })) => p.monic(),
        Some((_, Scalar::Q(_))) => {
            let mut den_lcm = BigInt::one();
            for (_, c) in p.terms() {
                let (_, d) = c.as_ratio();
                den_lcm = den_lcm.lcm(&d);
            }
            let mut num_gcd = BigInt::zero();
            for (_, c) in p.terms() {
                if let Scalar::Q(r) = c {
                    let scaled = r.numer() * (&den_lcm / r.denom());
                    num_gcd = num_gcd.gcd(&scaled);
                }
            }
            if num_gcd.is_zero() {
                return Poly::zero();
            }
            if let Some((_, Scalar::Q(lc))) = p.leading() {
                if lc.is_negative() {
                    num_gcd = -num_gcd;
                }
            }
            let factor = Scalar::Q(num::BigRational::new(den_lcm, num_gcd));
            p.scale(&factor)
        }
    }
}

fn s_poly(f: &Poly, g: &Poly, order: &MonomialOrder) -> Poly {
    let (fm, fc) = f.leading().expect("s_poly of zero");
    let (gm, gc) = g.leading().expect("s_poly of zero");
    let lcm = fm.lcm(gm);
    let tf = lcm.div(fm).unwrap();
    let tg = lcm.div(gm).unwrap();
    let a = f.mul_term(&tf, &fc.inv());
    let b = g.mul_term(&tg, &gc.inv());
    a.sub(&b, order)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

fn make_pair(basis: &[Poly], sugars: &[u32], i: usize, j: usize) -> Pair {
    let lmi = basis[i].leading_monomial().unwrap();
    let lmj = basis[j].leading_monomial().unwrap();
    let lcm = lmi.lcm(lmj);
    let sugar = (sugars[i] + lcm.degree() - lmi.degree())
        .max(sugars[j] + lcm.degree() - lmj.degree());
    Pair { i, j, lcm, sugar }
}

fn sort_pairs(pairs: &mut [Pair], order: &MonomialOrder) {
    // descending so pop() takes the minimum
    pairs.sort_by(|a, b| match b.sugar.cmp(&a.sugar) {
        Ordering::Equal => match order.cmp(&b.lcm, &a.lcm) {
            Ordering::Equal => (b.i, b.j).cmp(&(a.i, a.j)),
            ord => ord,
        },
        ord => ord,
    });
}

/// Gebauer-Möller pair-set update for a new basis element `t`. Prunes the
/// pending set with the chain criterion, prunes candidate pairs against each
/// other, and (for ideals) drops coprime-lead pairs.
fn update_pairs(
    pairs: &mut Vec<Pair>,
    basis: &[Poly],
    sugars: &[u32],
    minimal: &[bool],
    t: usize,
    allow_product: bool,
) {
    let lm_t = basis[t].leading_monomial().unwrap().clone();
    // chain criterion against pending pairs
    pairs.retain(|p| {
        if !lm_t.divides(&p.lcm) {
            return true;
        }
        let lcm_it = basis[p.i].leading_monomial().unwrap().lcm(&lm_t);
        let lcm_jt = basis[p.j].leading_monomial().unwrap().lcm(&lm_t);
        lcm_it == p.lcm || lcm_jt == p.lcm
    });
    // candidate pairs (i, t) against minimal generators only; keep a pair if
    // its lead monomials are coprime (it then prunes others before being
    // dropped by the product criterion) or nothing else divides its lcm
    let mut c: Vec<Pair> = (0..t)
        .filter(|&i| minimal[i] && !basis[i].is_zero())
        .map(|i| make_pair(basis, sugars, i, t))
        .collect();
    let mut d: Vec<Pair> = Vec::new();
    while let Some(cand) = c.pop() {
        let lm_i = basis[cand.i].leading_monomial().unwrap();
        let coprime = allow_product && lm_i.coprime(&lm_t);
        let dominated = c.iter().any(|o| o.lcm.divides(&cand.lcm))
            || d.iter().any(|o| o.lcm.divides(&cand.lcm));
        if coprime || !dominated {
            d.push(cand);
        }
    }
    pairs.extend(d.into_iter().filter(|p| {
        let lm_i = basis[p.i].leading_monomial().unwrap();
        !(allow_product && lm_i.coprime(&lm_t))
    }));
}

/// Compute the unique reduced Gröbner basis of the ideal generated by `gens`.
///
/// Output elements are monic and sorted by leading monomial descending.
/// The unit ideal yields `[1]`; the zero ideal yields `[]`.
pub fn reduced_groebner_basis(
    gens: &[Poly],
    order: &MonomialOrder,
    limits: &GbLimits,
) -> Result<Vec<Poly>, CapExceeded> {
    let mut basis: Vec<Poly> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    for g in gens {
        let g = primitive_part(g);
        if !g.is_zero() {
            sugars.push(g.total_degree());
            basis.push(g);
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    let mut minimal = vec![true; basis.len()];
    let mut pairs: Vec<Pair> = Vec::new();
    for t in 1..basis.len() {
        update_pairs(&mut pairs, &basis, &sugars, &minimal, t, true);
    }
    sort_pairs(&mut pairs, order);

    let mut processed = 0usize;
    while let Some(pair) = pairs.pop() {
        // the S-polynomial of two single-term generators is identically zero
        if basis[pair.i].n_terms() == 1 && basis[pair.j].n_terms() == 1 {
            continue;
        }
        processed += 1;
        if processed > limits.max_pairs {
            return Err(CapExceeded::Pairs(limits.max_pairs));
        }
        if pair.lcm.degree() > limits.max_degree {
            return Err(CapExceeded::Degree(pair.lcm.degree()));
        }
        let s = s_poly(&basis[pair.i], &basis[pair.j], order);
        let r = primitive_part(&normal_form(&s, &basis, order));
        if r.is_zero() {
            continue;
        }
        if r.total_degree() > limits.max_degree {
            return Err(CapExceeded::Degree(r.total_degree()));
        }
        if r.is_constant() {
            // unit ideal: short-circuit
            let one = r.monic();
            return Ok(vec![one]);
        }
        let new_idx = basis.len();
        sugars.push(pair.sugar.max(r.total_degree()));
        basis.push(r);
        minimal.push(true);
        update_pairs(&mut pairs, &basis, &sugars, &minimal, new_idx, true);
        let lm_new = basis[new_idx].leading_monomial().unwrap().clone();
        for i in 0..new_idx {
            if minimal[i]
                && lm_new.divides(basis[i].leading_monomial().unwrap())
            {
                minimal[i] = false;
            }
        }
        sort_pairs(&mut pairs, order);
    }

    Ok(interreduce(basis, order))
}

/// Minimalize and tail-reduce a Gröbner basis into the reduced basis.
fn interreduce(mut basis: Vec<Poly>, order: &MonomialOrder) -> Vec<Poly> {
    basis.retain(|g| !g.is_zero());
    // minimalize: drop g when another kept element's LM divides LM(g)
    basis.sort_by(|a, b| {
        order.cmp(
            a.leading_monomial().unwrap(),
            b.leading_monomial().unwrap(),
        )
    });
    let mut kept: Vec<Poly> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial().unwrap();
        if !kept
            .iter()
            .any(|h| h.leading_monomial().unwrap().divides(lm))
        {
            kept.push(g);
        }
    }
    // tail-reduce to fixpoint
    loop {
        let mut changed = false;
        for i in 0..kept.len() {
            let others: Vec<Poly> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, h)| h.clone())
                .collect();
            let r = normal_form(&kept[i], &others, order);
            if r != kept[i] {
                kept[i] = primitive_part(&r);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out: Vec<Poly> = kept.into_iter().map(|g| g.monic()).collect();
    out.sort_by(|a, b| {
        order.cmp(
            b.leading_monomial().unwrap(),
            a.leading_monomial().unwrap(),
        )
    });
    out
}
