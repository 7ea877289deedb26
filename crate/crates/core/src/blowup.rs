//! Blowup models: Rees-algebra presentations, chart rings for the blowup of
//! a certified center with charts indexed by the f_i, overlap rings obtained
//! by inverting chart-generator ratios, restriction maps, exceptional
//! generators, and Čech complex assembly on the affine cover.
//!
//! A chart Y_i presents `base[u_g : g ∈ center]` with `u_g ↦ g / f_i^power`;
//! its defining ideal is the saturation by f_i of `(f_i^power·u_g − g) +
//! base relations`. Overlaps adjoin one inverse per extra chart index. All
//! section rings are finite presentations; homological questions about them
//! are posed as module-solvability over those presentations.

use crate::ideal::{saturate, Ideal};
use crate::limits::{CapExceeded, GbLimits};
use crate::module::{ModuleMatrix, ModuleSolver};
use crate::monomial::MonomialOrder;
use crate::poly::Poly;
use crate::ring::{project_to_subring, Ring, RingPresentation};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum BlowupError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error("precondition violation: {0}")]
    Precondition(String),
}

/// A ring homomorphism given by images of the source variables.
#[derive(Debug, Clone)]
pub struct RingMap {
    source: Ring,
    target: Ring,
    images: Vec<Poly>,
}

impl RingMap {
    pub fn new(source: Ring, target: Ring, images: Vec<Poly>) -> Self {
        assert_eq!(images.len(), source.n_vars(), "image count mismatch");
        let images = images.iter().map(|p| target.normalize(p)).collect();
        RingMap {
            source,
            target,
            images,
        }
    }

    pub fn identity_embedding(source: Ring, target: Ring) -> Self {
        // variables of `source` must be a prefix of `target`'s
        assert!(source.n_vars() <= target.n_vars());
        let images = (0..source.n_vars()).map(|i| target.var(i)).collect();
        RingMap::new(source, target, images)
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Substitute variable images, reducing in the target.
    pub fn apply(&self, p: &Poly) -> Poly {
        let order = self.target.order();
        let mut acc = Poly::zero();
        for (m, c) in p.terms() {
            let mut term = Poly::constant(c.clone(), self.target.n_vars());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&self.images[i].pow(e as u32, order), order);
                }
            }
            acc = acc.add(&term, order);
        }
        self.target.normalize(&acc)
    }

    pub fn compose(&self, then: &RingMap) -> RingMap {
        assert_eq!(**self.target(), **then.source(), "composition mismatch");
        let images = self.images.iter().map(|p| then.apply(p)).collect();
        RingMap::new(self.source.clone(), then.target.clone(), images)
    }
}

/// Section ring of an intersection of charts, presented on the smallest
/// chart's coordinates plus one inverted ratio per further index.
#[derive(Debug, Clone)]
pub struct SectionRing {
    /// Sorted chart indices this ring is the sections over.
    pub gamma: Vec<usize>,
    /// The chart whose coordinates present this ring (min of gamma).
    pub pivot: usize,
    pub ring: Ring,
    /// Variable index of the inverse of q_{pivot, gamma[t+1]}.
    pub w_vars: Vec<usize>,
}

/// One affine chart of the blowup.
#[derive(Debug, Clone)]
pub struct Chart {
    pub index: usize,
    pub ring: Ring,
    /// Images of the center generators divided by the chart generator power:
    /// the u-variables, normalized in the chart presentation.
    pub center_images: Vec<Poly>,
    /// Images of f_t / f_index in the chart ring, t = 0..n-1.
    pub f_ratios: Vec<Poly>,
    /// Per-chart generator of J·O_{Y_i}: the image of f_index.
    pub exceptional: Poly,
}

#[derive(Debug)]
pub struct BlowupModel {
    base: Ring,
    center_gens: Vec<Poly>,
    chart_index_gens: Vec<Poly>,
    power: u32,
    charts: Vec<Chart>,
    /// Section rings for every index subset of size 1..=n, keyed by subset.
    sections: BTreeMap<Vec<usize>, SectionRing>,
    /// q[(i, j)]: the image of f_j^power / f_i^power in chart i coordinates.
    ratio_polys: BTreeMap<(usize, usize), Poly>,
    n_u: usize,
}

impl BlowupModel {
    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn center_gens(&self) -> &[Poly] {
        &self.center_gens
    }

    pub fn chart_index_gens(&self) -> &[Poly] {
        &self.chart_index_gens
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn n_charts(&self) -> usize {
        self.charts.len()
    }

    pub fn chart(&self, i: usize) -> &Chart {
        &self.charts[i]
    }

    pub fn section(&self, gamma: &[usize]) -> &SectionRing {
        self.sections
            .get(gamma)
            .unwrap_or_else(|| panic!("no section ring for {gamma:?}"))
    }

    /// Map a base-ring element into the section ring over `gamma`.
    pub fn base_to_section(&self, gamma: &[usize], p: &Poly) -> Poly {
        let sec = self.section(gamma);
        let embed: Vec<usize> = (0..self.base.n_vars()).collect();
        let up = p.embed(&embed, sec.ring.n_vars(), sec.ring.order());
        sec.ring.normalize(&up)
    }

    /// Images of f_t / f_pivot in the section ring over `gamma`.
    pub fn f_ratios_in_section(&self, gamma: &[usize]) -> Vec<Poly> {
        let sec = self.section(gamma);
        let chart = &self.charts[sec.pivot];
        chart
            .f_ratios
            .iter()
            .map(|p| {
                let embed: Vec<usize> = (0..chart.ring.n_vars()).collect();
                sec.ring
                    .normalize(&p.embed(&embed, sec.ring.n_vars(), sec.ring.order()))
            })
            .collect()
    }

    /// Single-step restriction `Γ(Y_from) → Γ(Y_to)` where `to ⊇ from` with
    /// exactly one more index.
    pub fn restriction(&self, from: &[usize], to: &[usize]) -> RingMap {
        assert_eq!(from.len() + 1, to.len(), "restriction must add one index");
        assert!(from.iter().all(|i| to.contains(i)), "from ⊄ to");
        let src = self.section(from);
        let dst = self.section(to);
        let base_n = self.base.n_vars();
        let mut images: Vec<Poly> = Vec::with_capacity(src.ring.n_vars());
        // base variables map identically
        for i in 0..base_n {
            images.push(dst.ring.var(i));
        }
        if src.pivot == dst.pivot {
            // u-variables carry over
            for t in 0..self.n_u {
                images.push(dst.ring.var(base_n + t));
            }
            // each inverted ratio of the source appears in the target
            for s in 0..src.w_vars.len() {
                let inverted_chart = src.gamma[1 + s];
                let pos = dst
                    .gamma
                    .iter()
                    .skip(1)
                    .position(|&c| c == inverted_chart)
                    .expect("inverted chart missing in target");
                images.push(dst.ring.var(dst.w_vars[pos]));
            }
        } else {
            // the target pivot is the newly added, smaller index j0; the
            // source pivot j1 shows up in the target as an inverted ratio:
            // u'_g = g/f_j1^p = (g/f_j0^p)·(f_j0^p/f_j1^p) = u_g·w_j1 and
            // 1/q_{j1,i} = q_{j0,j1}·w_i
            let j0 = dst.pivot;
            let j1 = src.pivot;
            let w_j1_pos = dst
                .gamma
                .iter()
                .skip(1)
                .position(|&c| c == j1)
                .expect("source pivot missing in target");
            let w_j1 = dst.ring.var(dst.w_vars[w_j1_pos]);
            for t in 0..self.n_u {
                let u = dst.ring.var(base_n + t);
                images.push(dst.ring.mul(&u, &w_j1));
            }
            let q01 = self.embed_chart_poly(j0, &self.ratio_polys[&(j0, j1)].clone(), to);
            for s in 0..src.w_vars.len() {
                let inverted_chart = src.gamma[1 + s];
                let pos = dst
                    .gamma
                    .iter()
                    .skip(1)
                    .position(|&c| c == inverted_chart)
                    .expect("inverted chart missing in target");
                let w = dst.ring.var(dst.w_vars[pos]);
                images.push(dst.ring.mul(&q01, &w));
            }
        }
        RingMap::new(src.ring.clone(), dst.ring.clone(), images)
    }

    fn embed_chart_poly(&self, chart: usize, p: &Poly, gamma: &[usize]) -> Poly {
        let sec = self.section(gamma);
        assert_eq!(sec.pivot, chart);
        let embed: Vec<usize> = (0..self.charts[chart].ring.n_vars()).collect();
        sec.ring
            .normalize(&p.embed(&embed, sec.ring.n_vars(), sec.ring.order()))
    }

    pub fn to_json(&self) -> BlowupJson {
        BlowupJson {
            power: self.power,
            center: self
                .center_gens
                .iter()
                .map(|p| self.base.render(p))
                .collect(),
            chart_index_gens: self
                .chart_index_gens
                .iter()
                .map(|p| self.base.render(p))
                .collect(),
            charts: self
                .charts
                .iter()
                .map(|c| ChartJson {
                    index: c.index,
                    ring: c.ring.descriptor(),
                    center_images: c.center_images.iter().map(|p| c.ring.render(p)).collect(),
                    f_ratios: c.f_ratios.iter().map(|p| c.ring.render(p)).collect(),
                    exceptional: c.ring.render(&c.exceptional),
                })
                .collect(),
            overlaps: self
                .sections
                .iter()
                .filter(|(g, _)| g.len() >= 2)
                .map(|(g, s)| OverlapJson {
                    charts: g.clone(),
                    ring: s.ring.descriptor(),
                    restrictions: g
                        .iter()
                        .map(|&dropped| {
                            let from: Vec<usize> =
                                g.iter().copied().filter(|&c| c != dropped).collect();
                            let map = self.restriction(&from, g);
                            RestrictionJson {
                                from,
                                images: map
                                    .images()
                                    .iter()
                                    .map(|p| map.target().render(p))
                                    .collect(),
                            }
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupJson {
    pub power: u32,
    pub center: Vec<String>,
    pub chart_index_gens: Vec<String>,
    pub charts: Vec<ChartJson>,
    pub overlaps: Vec<OverlapJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartJson {
    pub index: usize,
    pub ring: crate::ring::RingDescriptor,
    pub center_images: Vec<String>,
    pub f_ratios: Vec<String>,
    pub exceptional: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OverlapJson {
    pub charts: Vec<usize>,
    pub ring: crate::ring::RingDescriptor,
    pub restrictions: Vec<RestrictionJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RestrictionJson {
    pub from: Vec<usize>,
    pub images: Vec<String>,
}

/// Defining ideal of the Rees algebra of `I`: the kernel of
/// `base[T_1..T_m] → base[s]`, `T_i ↦ g_i·s`, by eliminating `s`.
pub fn rees_presentation(ideal: &Ideal, limits: &GbLimits) -> Result<Ideal, CapExceeded> {
    let base = ideal.ring();
    assert!(!ideal.is_zero(), "rees presentation of the zero ideal");
    let m = ideal.gens().len();
    let base_n = base.n_vars();
    let mut t_names = Vec::new();
    let mut taken: Vec<String> = base.vars().to_vec();
    for i in 1..=m {
        let name = fresh_name(&taken, &format!("T{i}"));
        taken.push(name.clone());
        t_names.push(name);
    }
    let s_name = fresh_name(&taken, "s");
    taken.push(s_name);

    // eliminate the last variable s with a block order
    let total = base_n + m + 1;
    let order = MonomialOrder::Block(vec![vec![total - 1], (0..total - 1).collect()]);
    let big = RingPresentation::polynomial(*base.field(), taken.clone(), order.clone());
    let embed: Vec<usize> = (0..base_n).collect();
    let s = big.var(total - 1);
    let mut gens: Vec<Poly> = base
        .relations()
        .iter()
        .map(|p| p.embed(&embed, total, &order))
        .collect();
    for (i, g) in ideal.gens().iter().enumerate() {
        let t = big.var(base_n + i);
        let gs = big.mul(&g.embed(&embed, total, &order), &s);
        gens.push(big.sub(&t, &gs));
    }
    let elim = crate::ideal::eliminate(&Ideal::new(big, gens), &(0..total - 1).collect::<Vec<_>>(), limits)?;

    // present the result in base vars + T vars (drop s)
    let out_vars: Vec<String> = taken[..total - 1].to_vec();
    let out_ring = RingPresentation::polynomial(*base.field(), out_vars, base.order().clone());
    let keep: Vec<usize> = (0..total - 1).collect();
    let gens: Vec<Poly> = elim
        .gens()
        .iter()
        .map(|p| project_to_subring(p, &keep, &out_ring))
        .collect();
    Ok(Ideal::new(out_ring, gens))
}

fn fresh_name(taken: &[String], stem: &str) -> String {
    if !taken.iter().any(|v| v == stem) {
        return stem.to_string();
    }
    for i in 0.. {
        let name = format!("{stem}_{i}");
        if !taken.iter().any(|v| v == &name) {
            return name;
        }
    }
    unreachable!()
}

/// Build the blowup of the ideal generated by `center_gens`, with one chart
/// per `chart_index_gens[i]`, presenting `base[u_g : g]` via `u_g ↦
/// g/f_i^power`. Requires `J^power ⊆ (center_gens)` so that chart ratios and
/// exceptional generators exist.
pub fn build_blowup(
    base: &Ring,
    center_gens: &[Poly],
    chart_index_gens: &[Poly],
    power: u32,
    limits: &GbLimits,
) -> Result<BlowupModel, BlowupError> {
    assert!(power >= 1);
    assert!(!center_gens.is_empty() && !chart_index_gens.is_empty());
    let center_gens: Vec<Poly> = center_gens.iter().map(|p| base.normalize(p)).collect();
    let f: Vec<Poly> = chart_index_gens.iter().map(|p| base.normalize(p)).collect();
    let n = f.len();
    let m = center_gens.len();
    let base_n = base.n_vars();

    // precondition: every degree-`power` monomial in f lies in the center
    // ideal (single generator powers are the spec minimum; the chart ratio
    // structure needs the rest, checked here so failures are loud)
    let center_row = ModuleMatrix::new(base.clone(), 1, m, center_gens.clone());
    let center_solver = ModuleSolver::new(&center_row, limits).map_err(BlowupError::Cap)?;
    let power_monos = crate::bs::power_monomials(base, &f, power);
    for mono in &power_monos {
        if center_solver.solve(&[mono.clone()]).is_none() {
            return Err(BlowupError::Precondition(format!(
                "{} is not in the ideal generated by the center generators",
                base.render(mono)
            )));
        }
    }

    // chart ambient: base vars + u_1..u_m
    let mut taken: Vec<String> = base.vars().to_vec();
    let mut u_names = Vec::new();
    for i in 1..=m {
        let name = fresh_name(&taken, &format!("u{i}"));
        taken.push(name.clone());
        u_names.push(name);
    }

    let mut charts = Vec::with_capacity(n);
    let mut sections: BTreeMap<Vec<usize>, SectionRing> = BTreeMap::new();
    let mut ratio_polys: BTreeMap<(usize, usize), Poly> = BTreeMap::new();

    for (i, fi) in f.iter().enumerate() {
        let ambient = RingPresentation::polynomial(
            *base.field(),
            taken.clone(),
            base.order().clone(),
        );
        let embed: Vec<usize> = (0..base_n).collect();
        let total = ambient.n_vars();
        let fi_up = fi.embed(&embed, total, ambient.order());
        let fi_pow = ambient.pow(&fi_up, power);
        let mut gens: Vec<Poly> = base
            .relations()
            .iter()
            .map(|p| p.embed(&embed, total, ambient.order()))
            .collect();
        for (t, g) in center_gens.iter().enumerate() {
            let u = ambient.var(base_n + t);
            let g_up = g.embed(&embed, total, ambient.order());
            gens.push(ambient.sub(&ambient.mul(&fi_pow, &u), &g_up));
        }
        let raw = Ideal::new(ambient.clone(), gens);
        let saturated = saturate(&raw, &fi_up, limits).map_err(BlowupError::Cap)?;
        let chart_ring = RingPresentation::quotient(&ambient, saturated.gens(), limits)
            .map_err(BlowupError::Cap)?;

        // f_t / f_i = Σ c_s u_s from f_t·f_i^(power-1) = Σ c_s g_s over base
        let fi_pm1 = base.pow(fi, power - 1);
        let mut f_ratios = Vec::with_capacity(n);
        for ft in &f {
            let rhs = base.mul(ft, &fi_pm1);
            let c = center_solver
                .solve(&[rhs])
                .expect("J^power ⊆ center was checked");
            let mut ratio = Poly::zero();
            for (s, cs) in c.iter().enumerate() {
                let u = chart_ring.var(base_n + s);
                let cs_up = cs.embed(&embed, total, chart_ring.order());
                ratio = chart_ring.add(&ratio, &chart_ring.mul(&cs_up, &u));
            }
            f_ratios.push(chart_ring.normalize(&ratio));
        }

        // q_{i,j} = image of f_j^power / f_i^power in chart i coordinates
        for (j, fj) in f.iter().enumerate() {
            if i == j {
                continue;
            }
            let rhs = base.pow(fj, power);
            let c = center_solver
                .solve(&[rhs])
                .expect("checked precondition");
            let mut q = Poly::zero();
            for (s, cs) in c.iter().enumerate() {
                let u = chart_ring.var(base_n + s);
                let cs_up = cs.embed(&embed, total, chart_ring.order());
                q = chart_ring.add(&q, &chart_ring.mul(&cs_up, &u));
            }
            ratio_polys.insert((i, j), chart_ring.normalize(&q));
        }

        let center_images: Vec<Poly> = (0..m)
            .map(|t| chart_ring.normalize(&chart_ring.var(base_n + t)))
            .collect();
        let exceptional = chart_ring.normalize(&fi_up);
        sections.insert(
            vec![i],
            SectionRing {
                gamma: vec![i],
                pivot: i,
                ring: chart_ring.clone(),
                w_vars: Vec::new(),
            },
        );
        charts.push(Chart {
            index: i,
            ring: chart_ring,
            center_images,
            f_ratios,
            exceptional,
        });
    }

    // overlap rings for every subset of size 2..=n
    for size in 2..=n {
        for gamma in crate::bs::subsets(n, size) {
            let pivot = gamma[0];
            let chart = &charts[pivot];
            let mut names: Vec<String> = chart.ring.vars().to_vec();
            let mut w_vars = Vec::new();
            for &other in &gamma[1..] {
                let name = fresh_name(&names, &format!("w{}", other + 1));
                w_vars.push(names.len());
                names.push(name);
            }
            let ambient = RingPresentation::polynomial(
                *base.field(),
                names.clone(),
                base.order().clone(),
            );
            let total = ambient.n_vars();
            let chart_embed: Vec<usize> = (0..chart.ring.n_vars()).collect();
            let mut gens: Vec<Poly> = chart
                .ring
                .relations()
                .iter()
                .map(|p| p.embed(&chart_embed, total, ambient.order()))
                .collect();
            for (t, &other) in gamma[1..].iter().enumerate() {
                let q = ratio_polys[&(pivot, other)].embed(&chart_embed, total, ambient.order());
                let w = ambient.var(w_vars[t]);
                gens.push(ambient.sub(&ambient.mul(&w, &q), &ambient.one()));
            }
            let ring = RingPresentation::quotient(&ambient, &gens, limits)
                .map_err(BlowupError::Cap)?;
            sections.insert(
                gamma.clone(),
                SectionRing {
                    gamma: gamma.clone(),
                    pivot,
                    ring,
                    w_vars: w_vars.clone(),
                },
            );
        }
    }

    Ok(BlowupModel {
        base: base.clone(),
        center_gens,
        chart_index_gens: f,
        power,
        charts,
        sections,
        ratio_polys,
        n_u: m,
    })
}

/// A Čech cochain: one section-ring element per index subset of a fixed size.
pub type Cochain = BTreeMap<Vec<usize>, Poly>;

/// The Čech complex of the affine cover: cochain rings and signed
/// restriction differences. `δ² = 0` is verified on ring generators at
/// assembly time.
#[derive(Debug)]
pub struct CechComplex<'a> {
    model: &'a BlowupModel,
    index_sets: Vec<Vec<Vec<usize>>>,
}

impl<'a> CechComplex<'a> {
    pub fn model(&self) -> &BlowupModel {
        self.model
    }

    /// Index subsets for cochain degree p (subsets of size p+1).
    pub fn index_sets(&self, p: usize) -> &[Vec<usize>] {
        &self.index_sets[p]
    }

    pub fn top_degree(&self) -> usize {
        self.index_sets.len() - 1
    }

    /// δ: C^p → C^(p+1), the signed restriction difference.
    pub fn delta(&self, p: usize, cochain: &Cochain) -> Cochain {
        let mut out = Cochain::new();
        if p + 1 >= self.index_sets.len() {
            return out;
        }
        for gamma in &self.index_sets[p + 1] {
            let ring = &self.model.section(gamma).ring;
            let mut acc = Poly::zero();
            for (t, &dropped) in gamma.iter().enumerate() {
                let from: Vec<usize> =
                    gamma.iter().copied().filter(|&c| c != dropped).collect();
                if let Some(v) = cochain.get(&from) {
                    if !v.is_zero() {
                        let res = self.model.restriction(&from, gamma).apply(v);
                        acc = if t % 2 == 0 {
                            ring.add(&acc, &res)
                        } else {
                            ring.sub(&acc, &res)
                        };
                    }
                }
            }
            out.insert(gamma.clone(), acc);
        }
        out
    }

    /// Diagonal image of a base element in C^0.
    pub fn diagonal(&self, h: &Poly) -> Cochain {
        let mut out = Cochain::new();
        for gamma in &self.index_sets[0] {
            out.insert(gamma.clone(), self.model.base_to_section(gamma, h));
        }
        out
    }
}

/// Assemble the Čech complex, checking δ∘δ = 0 on every section-ring
/// generator.
pub fn cech_complex(model: &BlowupModel) -> CechComplex<'_> {
    let n = model.n_charts();
    let mut index_sets = Vec::new();
    for size in 1..=n {
        index_sets.push(crate::bs::subsets(n, size));
    }
    let cech = CechComplex { model, index_sets };
    for p in 0..cech.index_sets.len().saturating_sub(2) {
        for gamma in cech.index_sets(p).to_vec() {
            let ring = &model.section(&gamma).ring;
            for v in 0..ring.n_vars() {
                let mut cochain = Cochain::new();
                cochain.insert(gamma.clone(), ring.var(v));
                let dd = cech.delta(p + 1, &cech.delta(p, &cochain));
                assert!(
                    dd.values().all(|p| p.is_zero()),
                    "δ² ≠ 0 on generator {v} of {gamma:?}"
                );
            }
        }
    }
    cech
}

/// For each chart, decide `h ∈ (f_i)^m · Γ(Y_i)`.
pub fn exceptional_power_membership(
    model: &BlowupModel,
    h: &Poly,
    m: u32,
    limits: &GbLimits,
) -> Result<Vec<bool>, CapExceeded> {
    let mut out = Vec::with_capacity(model.n_charts());
    for i in 0..model.n_charts() {
        let chart = model.chart(i);
        let fim = chart.ring.pow(&chart.exceptional, m);
        let matrix = ModuleMatrix::new(chart.ring.clone(), 1, 1, vec![fim]);
        let h_up = model.base_to_section(&[i], h);
        out.push(crate::module::module_solve(&matrix, &[h_up], limits)?.is_some());
    }
    Ok(out)
}

impl BlowupModel {
    /// On each pairwise overlap the two restriction images of every center
    /// generator, multiplied back by the respective chart generator powers,
    /// agree (they both present the generator itself).
    pub fn check_chart_consistency(&self) -> bool {
        let n = self.n_charts();
        for pair in crate::bs::subsets(n, 2) {
            let (i, j) = (pair[0], pair[1]);
            let ring = &self.section(&pair).ring;
            let ri = self.restriction(&[i], &pair);
            let rj = self.restriction(&[j], &pair);
            let fi_p = self.base_to_section(&pair, &self.base.pow(&self.chart_index_gens[i], self.power));
            let fj_p = self.base_to_section(&pair, &self.base.pow(&self.chart_index_gens[j], self.power));
            for (t, g) in self.center_gens.iter().enumerate() {
                let via_i = ring.mul(&ri.apply(&self.charts[i].center_images[t]), &fi_p);
                let via_j = ring.mul(&rj.apply(&self.charts[j].center_images[t]), &fj_p);
                let g_up = self.base_to_section(&pair, g);
                if !ring.eq_mod(&via_i, &g_up) || !ring.eq_mod(&via_j, &g_up) {
                    return false;
                }
            }
        }
        true
    }

    /// Restriction maps commute on triple overlaps (checked on generators).
    pub fn check_restriction_coherence(&self) -> bool {
        let n = self.n_charts();
        if n < 3 {
            return true;
        }
        for triple in crate::bs::subsets(n, 3) {
            for &single in &triple {
                let ring = &self.section(&triple).ring;
                let chart_ring = &self.charts[single].ring;
                let mids: Vec<Vec<usize>> = triple
                    .iter()
                    .copied()
                    .filter(|&c| c != single)
                    .map(|other| {
                        let mut m = vec![single, other];
                        m.sort();
                        m
                    })
                    .collect();
                let route_a = self
                    .restriction(&[single], &mids[0])
                    .compose(&self.restriction(&mids[0], &triple));
                let route_b = self
                    .restriction(&[single], &mids[1])
                    .compose(&self.restriction(&mids[1], &triple));
                for v in 0..chart_ring.n_vars() {
                    let x = chart_ring.var(v);
                    if !ring.eq_mod(&route_a.apply(&x), &route_b.apply(&x)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDesc;
    use crate::parser::{parse_poly, parse_poly_list};
    use crate::ring::RingPresentation;

    fn ring2() -> Ring {
        RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into()],
            MonomialOrder::Grevlex,
        )
    }

    #[test]
    fn rees_of_two_variables() {
        let r = ring2();
        let lim = GbLimits::default();
        let i = Ideal::new(r.clone(), parse_poly_list("x, y", &r).unwrap());
        let rees = rees_presentation(&i, &lim).unwrap();
        let ring = rees.ring();
        assert_eq!(ring.vars(), &["x", "y", "T1", "T2"]);
        let expected = Ideal::new(
            ring.clone(),
            vec![parse_poly("x*T2 - y*T1", ring).unwrap()],
        );
        assert!(rees.equal(&expected, &lim).unwrap());
    }

    #[test]
    fn rees_of_principal_is_zero() {
        let r = ring2();
        let lim = GbLimits::default();
        let i = Ideal::new(r.clone(), parse_poly_list("x", &r).unwrap());
        let rees = rees_presentation(&i, &lim).unwrap();
        assert!(rees.is_zero());
    }

    #[test]
    fn rees_of_squared_maximal_ideal() {
        let r = ring2();
        let lim = GbLimits::default();
        let i = Ideal::new(r.clone(), parse_poly_list("x^2, x*y, y^2", &r).unwrap());
        let rees = rees_presentation(&i, &lim).unwrap();
        let ring = rees.ring();
        let expected = Ideal::new(
            ring.clone(),
            parse_poly_list("T2^2 - T1*T3, x*T2 - y*T1, x*T3 - y*T2", ring).unwrap(),
        );
        assert!(rees.equal(&expected, &lim).unwrap());
    }

    #[test]
    fn blowup_of_maximal_ideal_charts() {
        let r = ring2();
        let lim = GbLimits::default();
        let f = parse_poly_list("x, y", &r).unwrap();
        let model = build_blowup(&r, &f, &f, 1, &lim).unwrap();
        assert_eq!(model.n_charts(), 2);
        let chart_x = model.chart(0);
        // u1 = x/x collapses to 1; u2 = y/x satisfies x·u2 = y
        assert!(chart_x.ring.eq_mod(&chart_x.center_images[0], &chart_x.ring.one()));
        let u2 = chart_x.ring.var(3);
        let x = chart_x.ring.var(0);
        let y = chart_x.ring.var(1);
        assert!(chart_x.ring.eq_mod(&chart_x.ring.mul(&x, &u2), &y));
        assert_eq!(chart_x.f_ratios.len(), 2);
        assert!(chart_x.ring.eq_mod(&chart_x.f_ratios[0], &chart_x.ring.one()));
        assert!(chart_x.ring.eq_mod(&chart_x.exceptional, &x));
        assert!(model.check_chart_consistency());
        let _cech = cech_complex(&model);
    }

    #[test]
    fn principal_center_single_chart_is_base() {
        let r = ring2();
        let lim = GbLimits::default();
        let f = parse_poly_list("x", &r).unwrap();
        let model = build_blowup(&r, &f, &f, 1, &lim).unwrap();
        assert_eq!(model.n_charts(), 1);
        let chart = model.chart(0);
        // u = x/x = 1: the chart is the base itself
        assert!(chart.ring.eq_mod(&chart.center_images[0], &chart.ring.one()));
        let cech = cech_complex(&model);
        assert_eq!(cech.top_degree(), 0);
    }

    #[test]
    fn blowup_power_invariance() {
        // charts of the blowup of (x,y)^2 with power 2 collapse onto the
        // power-1 charts of (x,y): u1 = 1, u2 = t, u3 = t^2
        let r = ring2();
        let lim = GbLimits::default();
        let f = parse_poly_list("x, y", &r).unwrap();
        let center = parse_poly_list("x^2, x*y, y^2", &r).unwrap();
        let model = build_blowup(&r, &center, &f, 2, &lim).unwrap();
        let chart = model.chart(0);
        let ring = &chart.ring;
        let one = ring.one();
        let u1 = ring.var(2);
        let u2 = ring.var(3);
        let u3 = ring.var(4);
        assert!(ring.eq_mod(&u1, &one));
        assert!(ring.eq_mod(&u3, &ring.mul(&u2, &u2)));
        let x = ring.var(0);
        let y = ring.var(1);
        assert!(ring.eq_mod(&ring.mul(&x, &u2), &y));
        // elimination oracle: keeping {x, y, u2} recovers the power-1 chart
        let ambient = RingPresentation::polynomial(
            *ring.field(),
            ring.vars().to_vec(),
            ring.order().clone(),
        );
        let rel_ideal = Ideal::new(ambient.clone(), ring.relations().to_vec());
        let kept = crate::ideal::eliminate(&rel_ideal, &[0, 1, 3], &lim).unwrap();
        let small = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into(), "t".into()],
            MonomialOrder::Grevlex,
        );
        let projected: Vec<Poly> = kept
            .gens()
            .iter()
            .map(|p| crate::ring::project_to_subring(p, &[0, 1, 3], &small))
            .collect();
        let got = Ideal::new(small.clone(), projected);
        let want = Ideal::new(small.clone(), vec![parse_poly("x*t - y", &small).unwrap()]);
        assert!(got.equal(&want, &lim).unwrap());
    }

    #[test]
    fn exceptional_membership_examples() {
        let r = ring2();
        let lim = GbLimits::default();
        let f = parse_poly_list("x, y", &r).unwrap();
        let center = parse_poly_list("x^2, x*y, y^2", &r).unwrap();
        let model = build_blowup(&r, &center, &f, 2, &lim).unwrap();
        // xy = x^2·t on the x-chart and y^2·(x/y) on the y-chart
        let h = parse_poly("x*y", &r).unwrap();
        assert_eq!(
            exceptional_power_membership(&model, &h, 2, &lim).unwrap(),
            vec![true, true]
        );
        // x ∉ (x^2)Γ(Y_x): degree obstruction
        let h = parse_poly("x", &r).unwrap();
        assert_eq!(
            exceptional_power_membership(&model, &h, 2, &lim).unwrap()[0],
            false
        );
        // f_i^m on chart i is trivially a member
        let h = parse_poly("x^2", &r).unwrap();
        assert!(exceptional_power_membership(&model, &h, 2, &lim).unwrap()[0]);
    }

    #[test]
    fn precondition_rejects_small_center() {
        let r = ring2();
        let lim = GbLimits::default();
        let f = parse_poly_list("x, y", &r).unwrap();
        // center (x^2, y^2) misses xy = J^2's mixed monomial
        let center = parse_poly_list("x^2, y^2", &r).unwrap();
        match build_blowup(&r, &center, &f, 2, &lim) {
            Err(BlowupError::Precondition(_)) => {}
            other => panic!("expected precondition violation, got {other:?}"),
        }
    }

    #[test]
    fn three_chart_coherence() {
        let r3 = RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into(), "z".into()],
            MonomialOrder::Grevlex,
        );
        let lim = GbLimits::default();
        let f = parse_poly_list("x, y, z", &r3).unwrap();
        let model = build_blowup(&r3, &f, &f, 1, &lim).unwrap();
        assert!(model.check_chart_consistency());
        assert!(model.check_restriction_coherence());
        let cech = cech_complex(&model);
        assert_eq!(cech.top_degree(), 2);
    }
}
