//! Cross-module invariants: the Čech H⁰ of the two-chart blowup cover
//! matches the base ring on degree-bounded slices (exact linear algebra, no
//! Gröbner path), the redundancy integral equation on charts, certificate
//! monotonicity, witness/chart-screen implications, and sign coherence of
//! the total differential on random elements.

use num::BigRational;
use num::Zero;
use skoda_core::blowup::{build_blowup, cech_complex, Cochain};
use skoda_core::bs::l_complex;
use skoda_core::closure::{power_certificate, ClosureCaps};
use skoda_core::field::FieldDesc;
use skoda_core::ideal::Ideal;
use skoda_core::limits::GbLimits;
use skoda_core::monomial::{Monomial, MonomialOrder};
use skoda_core::parser::{parse_poly, parse_poly_list};
use skoda_core::poly::Poly;
use skoda_core::ring::{Ring, RingPresentation};
use skoda_core::total::{LiftMode, LiftOutcome, TotalComplexSystem, TotalElement};
use skoda_core::workbench::{chart_level_check, main_theorem_verify, theorem_model_in};
use std::collections::BTreeMap;

fn ring2() -> Ring {
    RingPresentation::polynomial(
        FieldDesc::Q,
        vec!["x".into(), "y".into()],
        MonomialOrder::Grevlex,
    )
}

/// H⁰ oracle: on the blowup of (x,y), the kernel of δ: C⁰ → C¹ restricted to
/// the degree-≤6 monomial slice equals the image of the degree-≤6 slice of
/// the base ring. Decided entirely by rational linear algebra on normal-form
/// coordinates.
#[test]
fn cech_h0_equals_base_on_degree_slices() {
    const DEGREE: u32 = 6;
    let r = ring2();
    let lim = GbLimits::default();
    let f = parse_poly_list("x, y", &r).unwrap();
    let model = build_blowup(&r, &f, &f, 1, &lim).unwrap();
    let cech = cech_complex(&model);

    // slice bases: normal forms of chart-ambient monomials of degree <= 6
    let chart_rings: Vec<Ring> = (0..2).map(|i| model.section(&[i]).ring.clone()).collect();
    let mut domain: Vec<(usize, Poly)> = Vec::new();
    for (i, cr) in chart_rings.iter().enumerate() {
        let mut seen = std::collections::HashSet::new();
        for m in skoda_core::oracle::monomials_up_to(cr.n_vars(), DEGREE) {
            let nf = cr.normalize(&Poly::monomial(m, FieldDesc::Q.one()));
            if !nf.is_zero() && seen.insert(nf.clone()) {
                domain.push((i, nf));
            }
        }
    }

    // coordinates of δ(basis vector) in the overlap ring
    let overlap = model.section(&[0, 1]).ring.clone();
    let mut mono_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut images: Vec<Vec<(usize, BigRational)>> = Vec::new();
    for (chart, p) in &domain {
        let mut cochain = Cochain::new();
        cochain.insert(vec![*chart], p.clone());
        let d = cech.delta(0, &cochain);
        let v = d.get(&vec![0, 1]).cloned().unwrap_or_else(Poly::zero);
        let v = overlap.normalize(&v);
        let mut coords = Vec::new();
        for (m, c) in v.terms() {
            let next = mono_index.len();
            let idx = *mono_index.entry(m.clone()).or_insert(next);
            match c {
                skoda_core::field::Scalar::Q(q) => coords.push((idx, q.clone())),
                _ => unreachable!(),
            }
        }
        images.push(coords);
    }
    let n_rows = mono_index.len();
    let n_cols = domain.len();
    let mut a = vec![vec![BigRational::zero(); n_cols]; n_rows];
    for (col, coords) in images.iter().enumerate() {
        for (row, val) in coords {
            a[*row][col] = val.clone();
        }
    }
    let kernel = skoda_core::oracle::nullspace(&a);

    // expected: the diagonal images of base monomials of degree <= 6
    let base_slice = skoda_core::oracle::monomials_up_to(2, DEGREE);
    assert_eq!(
        kernel.len(),
        base_slice.len(),
        "kernel dimension must match the base slice"
    );
    // and each diagonal is in the kernel: δ(diag) = 0
    for m in &base_slice {
        let p = Poly::monomial(m.clone(), FieldDesc::Q.one());
        let d = cech.delta(0, &cech.diagonal(&p));
        assert!(d.values().all(|v| v.is_zero()), "diagonal of a base element must glue");
    }
}

/// Redundancy: a certified h makes h/f_i^(n+k-1) integral over the chart
/// ring. With a power certificate h^s ∈ (J^m)^s the monic equation is
/// X^s = h^s/f^(ms); the test substitutes a lift of h^s over the s-fold
/// products of center generators, divided by f^(ms) via the u-variables,
/// and verifies u_h^s equals it modulo the chart relations.
#[test]
fn chart_redundancy_integral_equation() {
    let r = ring2();
    let lim = GbLimits::default();
    let f = parse_poly_list("x^2, y^2", &r).unwrap();
    let h = parse_poly("x^3*y", &r).unwrap();
    let j = Ideal::new(r.clone(), f.clone());
    // certificate: (x^3·y)^2 = x^6y^2 ∈ (J^2)^2, so s = 2
    let s = 2u32;
    assert!(power_certificate(&h, &j, 2, s, &lim).unwrap().is_member());
    let model = theorem_model_in(&r, &f, 1, std::slice::from_ref(&h), &lim).unwrap();
    let center = model.center_gens().to_vec();
    let h_idx = center
        .iter()
        .position(|g| r.eq_mod(g, &h))
        .expect("h is a center generator");
    // s-fold products of center generators with their index multisets
    let mut products: Vec<(Poly, Vec<usize>)> = Vec::new();
    for a in 0..center.len() {
        for b in a..center.len() {
            products.push((r.mul(&center[a], &center[b]), vec![a, b]));
        }
    }
    let row = skoda_core::module::ModuleMatrix::new(
        r.clone(),
        1,
        products.len(),
        products.iter().map(|(p, _)| p.clone()).collect(),
    );
    let hs = r.pow(&h, s);
    let lift = skoda_core::module::module_solve(&row, &[hs], &lim)
        .unwrap()
        .expect("h^s lies in the s-fold products of the center");
    for chart_idx in 0..model.n_charts() {
        let chart = model.chart(chart_idx);
        let u_h = &chart.center_images[h_idx];
        let lhs = chart.ring.pow(u_h, s);
        let mut rhs = Poly::zero();
        let embed: Vec<usize> = (0..r.n_vars()).collect();
        for (c, (_, idxs)) in lift.iter().zip(&products) {
            if c.is_zero() {
                continue;
            }
            let mut term = c.embed(&embed, chart.ring.n_vars(), chart.ring.order());
            for &t in idxs {
                term = chart.ring.mul(&term, &chart.ring.var(r.n_vars() + t));
            }
            rhs = chart.ring.add(&rhs, &term);
        }
        assert!(
            chart.ring.eq_mod(&lhs, &rhs),
            "monic integral relation for h/f^2 fails on chart {chart_idx}"
        );
    }
}

/// Monotonicity: a Member verdict at (m, s) stays a Member at (m, s·t) for
/// t ≤ 2 on monomial fixtures.
#[test]
fn power_certificate_monotonicity() {
    let r = ring2();
    let lim = GbLimits::default();
    let j = Ideal::new(r.clone(), parse_poly_list("x^2, y^2", &r).unwrap());
    let cases: [(&str, u32); 3] = [("x*y", 1), ("x^3*y", 2), ("x^2*y^2", 2)];
    for (expr, m) in cases {
        let h = parse_poly(expr, &r).unwrap();
        for s in 1..=4u32 {
            if power_certificate(&h, &j, m, s, &lim).unwrap().is_member() {
                for t in 1..=2u32 {
                    assert!(
                        power_certificate(&h, &j, m, s * t, &lim).unwrap().is_member(),
                        "{expr}: member at s={s} but not at s={}",
                        s * t
                    );
                }
            }
        }
    }
}

/// Whenever a witness exists, the chart-level screen holds on every chart.
#[test]
fn witness_implies_chart_level_check() {
    let r = ring2();
    let lim = GbLimits::default();
    let caps = ClosureCaps::default();
    let f = parse_poly_list("x, y", &r).unwrap();
    for (expr, k) in [("x*y", 1u32), ("x^2", 1), ("x*y^2", 2)] {
        let h = parse_poly(expr, &r).unwrap();
        let report = main_theorem_verify(&r, &f, k, &h, None, &caps, &lim).unwrap();
        assert!(report.verified);
        let screens = chart_level_check(&r, &f, k, &h, &lim).unwrap();
        assert!(
            screens.iter().all(|&b| b),
            "chart screen must hold when a witness exists ({expr}, k={k})"
        );
    }
}

/// Sign coherence on randomized elements: the total differential squares to
/// zero over chart and overlap summands.
#[test]
fn total_differential_squares_to_zero_randomized() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let r = ring2();
    let lim = GbLimits::default();
    let f = parse_poly_list("x, y", &r).unwrap();
    let center = parse_poly_list("x^2, x*y, y^2", &r).unwrap();
    let model = build_blowup(&r, &center, &f, 2, &lim).unwrap();
    let cech = cech_complex(&model);
    let system = TotalComplexSystem::new(l_complex(&r, &f, 2), cech);
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..12 {
        let mut elem: TotalElement = BTreeMap::new();
        for gamma in [vec![0usize], vec![1usize], vec![0usize, 1usize]] {
            let sec = system.model().section(&gamma).ring.clone();
            let degree = rng.gen_range(1..=2usize);
            let rank = system.complex().rank(degree);
            let mut v = vec![Poly::zero(); rank];
            for slot in v.iter_mut() {
                if rng.gen_bool(0.5) {
                    let var = rng.gen_range(0..sec.n_vars());
                    let coeff = FieldDesc::Q.from_i64(rng.gen_range(-2i64..=2));
                    *slot = sec.normalize(&sec.var(var).scale(&coeff));
                }
            }
            if v.iter().any(|p| !p.is_zero()) {
                elem.insert((degree, gamma), v);
            }
        }
        if elem.is_empty() {
            continue;
        }
        let dd = system.total_differential(&system.total_differential(&elem));
        assert!(dd.is_empty(), "d² must vanish on random elements");
    }
}

/// The twisted lifting only certifies elements of the twisted submodule:
/// on the model of closure(J^2), the generator x of J itself has no twisted
/// witness even though its plain class vanishes.
#[test]
fn twisted_and_plain_modes_differ_on_j_elements() {
    let r = ring2();
    let lim = GbLimits::default();
    let f = parse_poly_list("x, y", &r).unwrap();
    let center = parse_poly_list("x^2, x*y, y^2", &r).unwrap();
    let model = build_blowup(&r, &center, &f, 2, &lim).unwrap();
    let h = parse_poly("x", &r).unwrap();
    let twisted = {
        let system = TotalComplexSystem::new(l_complex(&r, &f, 1), cech_complex(&model));
        matches!(
            system.solve(&h, LiftMode::Twisted, &lim).unwrap(),
            LiftOutcome::Solved(_)
        )
    };
    let plain = {
        let system = TotalComplexSystem::new(l_complex(&r, &f, 1), cech_complex(&model));
        matches!(
            system.solve(&h, LiftMode::Plain, &lim).unwrap(),
            LiftOutcome::Solved(_)
        )
    };
    assert!(!twisted, "x is not in closure(J^2)");
    assert!(plain, "x ∈ J has a plain witness from the base ring");
}
