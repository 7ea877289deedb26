//! Degree-bounded brute-force reference checks, independent of the Gröbner
//! engine: ideal membership by exact linear algebra over the monomial basis.
//!
//! These exist to cross-validate the main implementation path and are used
//! by the acceptance suite; they share no code with normal-form reduction.

use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::ring::Ring;
use num::{BigRational, Zero};
use std::collections::BTreeMap;

/// All monomials in `n_vars` variables of total degree ≤ `max_degree`.
pub fn monomials_up_to(n_vars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for c in crate::bs::compositions(d, n_vars) {
            out.push(Monomial::from_exponents(c));
        }
    }
    out
}

fn to_rational(s: &crate::field::Scalar) -> BigRational {
    match s {
        crate::field::Scalar::Q(r) => r.clone(),
        crate::field::Scalar::Fp { .. } => panic!("oracle runs over Q only"),
    }
}

/// Does `h` admit a representation `h = Σ q_i·g_i` with
/// `deg(q_i·g_i) ≤ degree_bound`? Decided by solving one exact rational
/// linear system; ring relations are adjoined as extra generators.
pub fn brute_force_member(h: &Poly, gens: &[Poly], ring: &Ring, degree_bound: u32) -> bool {
    let mut all_gens: Vec<Poly> = gens.to_vec();
    all_gens.extend_from_slice(ring.relations());
    all_gens.retain(|g| !g.is_zero());
    if h.is_zero() {
        return true;
    }
    if all_gens.is_empty() {
        return false;
    }
    let n = ring.n_vars();
    // columns: (generator, multiplier monomial); rows: monomials
    let mut columns: Vec<Poly> = Vec::new();
    for g in &all_gens {
        let gd = g.total_degree();
        if gd > degree_bound {
            continue;
        }
        for m in monomials_up_to(n, degree_bound - gd) {
            columns.push(g.mul_term(&m, &ring.field().one()));
        }
    }
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let index_of = |m: &Monomial, rows: &mut BTreeMap<Monomial, usize>| -> usize {
        let next = rows.len();
        *rows.entry(m.clone()).or_insert(next)
    };
    let mut triplets: Vec<(usize, usize, BigRational)> = Vec::new();
    for (c, p) in columns.iter().enumerate() {
        for (m, coeff) in p.terms() {
            let r = index_of(m, &mut row_index);
            triplets.push((r, c, to_rational(coeff)));
        }
    }
    let mut rhs_triplets = Vec::new();
    for (m, coeff) in h.terms() {
        let r = index_of(m, &mut row_index);
        rhs_triplets.push((r, to_rational(coeff)));
    }
    let n_rows = row_index.len();
    let n_cols = columns.len();
    let mut a = vec![vec![BigRational::zero(); n_cols]; n_rows];
    for (r, c, v) in triplets {
        a[r][c] += v;
    }
    let mut b = vec![BigRational::zero(); n_rows];
    for (r, v) in rhs_triplets {
        b[r] += v;
    }
    solve_rational(&mut a, &mut b).is_some()
}

/// Gaussian elimination over exact rationals; returns any solution of
/// `A·x = b` or `None` when inconsistent. Consumes the inputs.
pub fn solve_rational(
    a: &mut [Vec<BigRational>],
    b: &mut [BigRational],
) -> Option<Vec<BigRational>> {
    let n_rows = a.len();
    let n_cols = if n_rows == 0 { 0 } else { a[0].len() };
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..n_cols {
        let pr = (row..n_rows).find(|&r| !a[r][col].is_zero());
        let pr = match pr {
            Some(p) => p,
            None => continue,
        };
        a.swap(row, pr);
        b.swap(row, pr);
        let pv = a[row][col].clone();
        for v in a[row].iter_mut() {
            *v /= pv.clone();
        }
        b[row] /= pv;
        for r in 0..n_rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[row].clone();
                for (v, pvv) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * pvv;
                }
                let pb = b[row].clone();
                b[r] -= &f * &pb;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n_rows {
            break;
        }
    }
    // inconsistency: zero row with nonzero rhs
    for r in row..n_rows {
        if !b[r].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); n_cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}

/// Nullspace basis of `A` over the rationals.
pub fn nullspace(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n_rows = a.len();
    let n_cols = if n_rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..n_cols {
        let pr = (row..n_rows).find(|&r| !m[r][col].is_zero());
        let pr = match pr {
            Some(p) => p,
            None => continue,
        };
        m.swap(row, pr);
        let pv = m[row][col].clone();
        for v in m[row].iter_mut() {
            *v /= pv.clone();
        }
        for r in 0..n_rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (v, pvv) in m[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * pvv;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n_rows {
            break;
        }
    }
    let is_pivot: Vec<bool> = {
        let mut f = vec![false; n_cols];
        for &c in &pivot_cols {
            f[c] = true;
        }
        f
    };
    let mut basis = Vec::new();
    for free in 0..n_cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![BigRational::zero(); n_cols];
        v[free] = BigRational::from_integer(1.into());
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Row-echelon basis of the degree-≤D slice of the ideal spanned by
/// `{m·g : g ∈ gens, deg(m·g) ≤ D}`, as reduced coordinate vectors over the
/// monomial list. Used as an elimination oracle.
pub fn ideal_slice_basis(gens: &[Poly], ring: &Ring, degree_bound: u32) -> Vec<Poly> {
    let n = ring.n_vars();
    let monos = monomials_up_to(n, degree_bound);
    let index: BTreeMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for g in gens {
        let gd = g.total_degree();
        if gd > degree_bound || g.is_zero() {
            continue;
        }
        for m in monomials_up_to(n, degree_bound - gd) {
            let p = g.mul_term(&m, &ring.field().one());
            let mut row = vec![BigRational::zero(); monos.len()];
            for (mm, c) in p.terms() {
                row[index[mm]] = to_rational(c);
            }
            rows.push(row);
        }
    }
    // row echelon
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    for mut row in rows {
        for b in &basis {
            let lead = b.iter().position(|v| !v.is_zero()).unwrap();
            if !row[lead].is_zero() {
                let f = row[lead].clone();
                for (rv, bv) in row.iter_mut().zip(b) {
                    *rv -= &f * bv;
                }
            }
        }
        if let Some(lead) = row.iter().position(|v| !v.is_zero()) {
            let pv = row[lead].clone();
            for v in row.iter_mut() {
                *v /= pv.clone();
            }
            basis.push(row);
        }
    }
    basis
        .into_iter()
        .map(|row| {
            let terms: Vec<(Monomial, crate::field::Scalar)> = row
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (monos[i].clone(), crate::field::Scalar::Q(v)))
                .collect();
            Poly::from_terms(terms, ring.order())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDesc;
    use crate::limits::GbLimits;
    use crate::monomial::MonomialOrder;
    use crate::parser::{parse_poly, parse_poly_list};
    use crate::ring::RingPresentation;

    #[test]
    fn oracle_matches_simple_memberships() {
        let r = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into()],
            MonomialOrder::Grevlex,
        );
        let gens = parse_poly_list("x^2, y^2", &r).unwrap();
        let h = parse_poly("x^2*y", &r).unwrap();
        assert!(brute_force_member(&h, &gens, &r, 4));
        let h = parse_poly("x*y", &r).unwrap();
        assert!(!brute_force_member(&h, &gens, &r, 6));
    }

    #[test]
    fn oracle_agrees_with_gb_membership_randomized() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let lim = GbLimits::default();
        for _ in 0..60 {
            let n_vars = rng.gen_range(2..=3);
            let names: Vec<String> = (0..n_vars).map(|i| format!("x{i}")).collect();
            let r = RingPresentation::polynomial(
                FieldDesc::Q,
                names,
                MonomialOrder::Grevlex,
            );
            let rand_poly = |rng: &mut StdRng| {
                let terms = rng.gen_range(1..=3);
                let mut p = Poly::zero();
                for _ in 0..terms {
                    let exps: Vec<u16> =
                        (0..n_vars).map(|_| rng.gen_range(0..=2u16)).collect();
                    let c = FieldDesc::Q.from_i64(rng.gen_range(-3i64..=3));
                    p = p.add(
                        &Poly::monomial(Monomial::from_exponents(exps), c),
                        r.order(),
                    );
                }
                p
            };
            let n_gens = rng.gen_range(1..=3);
            let gens: Vec<Poly> = (0..n_gens).map(|_| rand_poly(&mut rng)).collect();
            let h = rand_poly(&mut rng);
            let ideal = crate::ideal::Ideal::new(r.clone(), gens.clone());
            let gb_says = ideal.member(&h, &lim).unwrap();
            if gb_says {
                // extract a representation to bound the oracle's degree
                let m = crate::module::ModuleMatrix::new(
                    r.clone(),
                    1,
                    gens.len().max(1),
                    if gens.is_empty() { vec![Poly::zero()] } else { gens.clone() },
                );
                let q = crate::module::module_solve(&m, &[r.normalize(&h)], &lim)
                    .unwrap()
                    .expect("member must have a representation");
                let bound = q
                    .iter()
                    .zip(&gens)
                    .map(|(qi, gi)| {
                        if qi.is_zero() { 0 } else { qi.total_degree() + gi.total_degree() }
                    })
                    .max()
                    .unwrap_or(0)
                    .max(h.total_degree());
                assert!(
                    brute_force_member(&h, &gens, &r, bound),
                    "oracle missed a member"
                );
            } else {
                assert!(
                    !brute_force_member(&h, &gens, &r, h.total_degree() + 4),
                    "oracle found a phantom representation"
                );
            }
        }
    }

    #[test]
    fn slice_basis_sees_no_eliminated_relations() {
        // ideal (x·t − y) has no elements purely in x, y up to degree 6
        let r = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into(), "t".into()],
            MonomialOrder::Grevlex,
        );
        let gens = parse_poly_list("x*t - y", &r).unwrap();
        let slice = ideal_slice_basis(&gens, &r, 6);
        for p in &slice {
            let pure_xy = p
                .terms()
                .iter()
                .all(|(m, _)| m.exponents()[2] == 0);
            assert!(!pure_xy, "unexpected relation in the subring: {}", r.render(p));
        }
    }

    #[test]
    fn slice_basis_finds_rees_relation() {
        // kernel of T1↦xs, T2↦ys contains xT2 − yT1; the slice oracle of the
        // graph ideal must see it once s is eliminated by slicing
        let r = RingPresentation::polynomial(
            FieldDesc::Q,
            vec![
                "x".into(),
                "y".into(),
                "T1".into(),
                "T2".into(),
                "s".into(),
            ],
            MonomialOrder::Grevlex,
        );
        let gens = parse_poly_list("T1 - x*s, T2 - y*s", &r).unwrap();
        let target = parse_poly("x*T2 - y*T1", &r).unwrap();
        assert!(
            brute_force_member(&target, &gens, &r, 4),
            "x·T2 − y·T1 not in the degree-4 slice of the graph ideal"
        );
        // and the slice basis is nontrivial at that degree
        assert!(!ideal_slice_basis(&gens, &r, 4).is_empty());
    }
}
