//! The total complex of (free complex over the base) ⊗ (Čech complex of a
//! blowup cover), and constructive vanishing of a degree-0 class.
//!
//! A witness for `h` is a chain `z = (z_0, …)` with `z_i` a vector over each
//! size-(i+1) chart intersection, solving `∂₁(z_0) = (h,…,h)` and
//! `∂_{i+1}(z_i) = (−1)^{i+1} δ(z_{i−1})`. Stages are solved one at a time
//! with canonical module lifts. In twisted mode the stage-i system is scaled
//! by `f_pivot^(n−i−1)`, confining the chain to the exact twisted subcomplex:
//! there every stage obstruction is a cycle of an exact complex, so no lift
//! choice can block a later stage. Returned witnesses are re-verified against
//! the untwisted equations by substitution.
//!
//! Sign convention: the Čech differential carries (−1)^(homological degree),
//! so the total differential squares to zero.

use crate::blowup::{BlowupModel, CechComplex};
use crate::complex::FreeComplex;
use crate::limits::{CapExceeded, GbLimits};
use crate::module::{ModuleMatrix, ModuleSolver};
use crate::poly::Poly;
use serde::Serialize;
use std::collections::BTreeMap;

/// Free complex over the base tensored against the Čech complex of a model.
pub struct TotalComplexSystem<'a> {
    complex: FreeComplex,
    cech: CechComplex<'a>,
}

/// Stage vectors keyed by chart index set: `stages[i][γ]` is a vector of
/// length `rank_(i+1)` over the section ring of γ.
#[derive(Debug, Clone)]
pub struct Witness {
    pub stages: Vec<BTreeMap<Vec<usize>, Vec<Poly>>>,
}

/// Outcome of the stage-wise lifting.
#[derive(Debug)]
pub enum LiftOutcome {
    Solved(Witness),
    /// The lifting system has no solution at this stage over this index set.
    Stuck { stage: usize, gamma: Vec<usize> },
}

/// Whether stage systems are scaled into the exact twisted subcomplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMode {
    Plain,
    Twisted,
}

/// Sparse element of the total complex for sign checks: (degree, γ) → vector.
pub type TotalElement = BTreeMap<(usize, Vec<usize>), Vec<Poly>>;

impl<'a> TotalComplexSystem<'a> {
    pub fn new(complex: FreeComplex, cech: CechComplex<'a>) -> Self {
        assert_eq!(
            **complex.ring(),
            **cech.model().base(),
            "complex must live over the model base"
        );
        TotalComplexSystem { complex, cech }
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn cech(&self) -> &CechComplex<'a> {
        &self.cech
    }

    pub fn model(&self) -> &BlowupModel {
        self.cech.model()
    }

    /// ∂_i with entries mapped into the section ring over γ.
    pub fn differential_in_section(&self, i: usize, gamma: &[usize]) -> ModuleMatrix {
        let model = self.model();
        let sec_ring = model.section(gamma).ring.clone();
        let d = self.complex.differential(i);
        let mut entries = Vec::with_capacity(d.rows() * d.cols());
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                entries.push(model.base_to_section(gamma, d.entry(r, c)));
            }
        }
        ModuleMatrix::new(sec_ring, d.rows(), d.cols(), entries)
    }

    /// δ applied to a stage vector: signed restriction differences,
    /// componentwise on the free-module coordinates.
    fn delta_vec(
        &self,
        rank: usize,
        lower: &BTreeMap<Vec<usize>, Vec<Poly>>,
        gamma: &[usize],
    ) -> Vec<Poly> {
        let model = self.model();
        let ring = model.section(gamma).ring.clone();
        let mut acc = vec![Poly::zero(); rank];
        for (t, &dropped) in gamma.iter().enumerate() {
            let from: Vec<usize> = gamma.iter().copied().filter(|&c| c != dropped).collect();
            if let Some(v) = lower.get(&from) {
                let map = model.restriction(&from, gamma);
                for (r, p) in v.iter().enumerate() {
                    if !p.is_zero() {
                        let res = map.apply(p);
                        acc[r] = if t % 2 == 0 {
                            ring.add(&acc[r], &res)
                        } else {
                            ring.sub(&acc[r], &res)
                        };
                    }
                }
            }
        }
        acc
    }

    /// Right-hand side of stage i: `(h,…,h)` at stage 0, else
    /// `(−1)^(i+1) δ(z_(i−1))`.
    fn stage_rhs(
        &self,
        i: usize,
        h: &Poly,
        prev: Option<&BTreeMap<Vec<usize>, Vec<Poly>>>,
        gamma: &[usize],
    ) -> Vec<Poly> {
        if i == 0 {
            vec![self.model().base_to_section(gamma, h)]
        } else {
            let rank = self.complex.rank(i);
            let mut v = self.delta_vec(rank, prev.unwrap(), gamma);
            if (i + 1) % 2 == 1 {
                // (−1)^(i+1) = −1 for even i ≥ 2; flip when i+1 is odd
                for p in v.iter_mut() {
                    *p = p.neg();
                }
            }
            v
        }
    }

    /// Solve the lifting system stage by stage. In plain mode a stage-0
    /// solution over the base ring is preferred: its diagonal image has
    /// vanishing Čech difference, so all later stages are zero.
    pub fn solve(
        &self,
        h: &Poly,
        mode: LiftMode,
        limits: &GbLimits,
    ) -> Result<LiftOutcome, CapExceeded> {
        let model = self.model();
        let n_charts = model.n_charts();
        let mut base_stage0: Option<Vec<Poly>> = None;
        if mode == LiftMode::Plain && self.complex.len() >= 1 {
            let solver = ModuleSolver::new(self.complex.differential(1), limits)?;
            base_stage0 = solver.solve(&[self.complex.ring().normalize(h)]);
        }
        let mut stages: Vec<BTreeMap<Vec<usize>, Vec<Poly>>> = Vec::new();
        for i in 0..n_charts {
            let prev = stages.last();
            let mut stage = BTreeMap::new();
            if i == 0 {
                if let Some(base_sol) = &base_stage0 {
                    for gamma in self.cech.index_sets(0).to_vec() {
                        let z: Vec<Poly> = base_sol
                            .iter()
                            .map(|p| model.base_to_section(&gamma, p))
                            .collect();
                        stage.insert(gamma, z);
                    }
                    stages.push(stage);
                    continue;
                }
            }
            for gamma in self.cech.index_sets(i).to_vec() {
                let rhs = self.stage_rhs(i, h, prev, &gamma);
                if i + 1 > self.complex.len() {
                    // the complex has run out; the equation degenerates to rhs = 0
                    if rhs.iter().any(|p| !p.is_zero()) {
                        return Ok(LiftOutcome::Stuck { stage: i, gamma });
                    }
                    stage.insert(gamma, Vec::new());
                    continue;
                }
                let matrix = self.differential_in_section(i + 1, &gamma);
                let sec = model.section(&gamma);
                let (matrix, scale) = match mode {
                    LiftMode::Plain => (matrix, None),
                    LiftMode::Twisted => {
                        let twist = (n_charts - i - 1) as u32;
                        if twist == 0 {
                            (matrix, None)
                        } else {
                            let f_piv = model
                                .base_to_section(&gamma, &model.chart_index_gens()[sec.pivot]);
                            let scale = sec.ring.pow(&f_piv, twist);
                            let scaled = matrix.map_entries(sec.ring.clone(), |p| {
                                p.mul(&scale, sec.ring.order())
                            });
                            (scaled, Some(scale))
                        }
                    }
                };
                let solver = ModuleSolver::new(&matrix, limits)?;
                match solver.solve(&rhs) {
                    None => return Ok(LiftOutcome::Stuck { stage: i, gamma }),
                    Some(y) => {
                        let ring = &sec.ring;
                        let z: Vec<Poly> = match &scale {
                            None => y,
                            Some(s) => y.iter().map(|p| ring.mul(p, s)).collect(),
                        };
                        stage.insert(gamma, z);
                    }
                }
            }
            stages.push(stage);
        }
        let witness = Witness { stages };
        assert!(
            self.verify_witness(h, &witness),
            "constructed witness failed substitution re-verification"
        );
        Ok(LiftOutcome::Solved(witness))
    }

    /// Substitute a witness into the untwisted defining equations.
    pub fn verify_witness(&self, h: &Poly, witness: &Witness) -> bool {
        let model = self.model();
        let n_charts = model.n_charts();
        for i in 0..n_charts {
            let prev = if i == 0 {
                None
            } else {
                witness.stages.get(i - 1)
            };
            let stage = match witness.stages.get(i) {
                Some(s) => s,
                None => return false,
            };
            for gamma in self.cech.index_sets(i) {
                let rhs = self.stage_rhs(i, h, prev, gamma);
                let lhs = if i + 1 > self.complex.len() {
                    vec![Poly::zero(); rhs.len()]
                } else {
                    let matrix = self.differential_in_section(i + 1, gamma);
                    match stage.get(gamma) {
                        Some(z) if z.len() == matrix.cols() => matrix.apply(z),
                        Some(z) if z.is_empty() => vec![Poly::zero(); rhs.len()],
                        _ => return false,
                    }
                };
                let ring = &model.section(gamma).ring;
                for (a, b) in lhs.iter().zip(&rhs) {
                    if !ring.eq_mod(a, b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Total differential `d = ∂ + (−1)^degree δ` on a sparse element.
    pub fn total_differential(&self, elem: &TotalElement) -> TotalElement {
        let model = self.model();
        let mut out: TotalElement = BTreeMap::new();
        let mut add_into = |key: (usize, Vec<usize>), v: Vec<Poly>| {
            let ring = model.section(&key.1).ring.clone();
            match out.get_mut(&key) {
                Some(existing) => {
                    for (e, p) in existing.iter_mut().zip(&v) {
                        *e = ring.add(e, p);
                    }
                }
                None => {
                    out.insert(key, v);
                }
            }
        };
        for ((i, gamma), v) in elem {
            // horizontal part ∂_i
            if *i >= 1 && *i <= self.complex.len() {
                let matrix = self.differential_in_section(*i, gamma);
                add_into((*i - 1, gamma.clone()), matrix.apply(v));
            }
            // vertical part (−1)^i δ
            let p = gamma.len() - 1;
            if p + 1 < model.n_charts() {
                for bigger in self.cech.index_sets(p + 1).to_vec() {
                    if gamma.iter().all(|c| bigger.contains(c)) {
                        let t = bigger
                            .iter()
                            .position(|c| !gamma.contains(c))
                            .expect("one extra index");
                        let map = model.restriction(gamma, &bigger);
                        let ring = model.section(&bigger).ring.clone();
                        let mut res: Vec<Poly> =
                            v.iter().map(|p| map.apply(p)).collect();
                        let negate = (t % 2 == 1) ^ (*i % 2 == 1);
                        if negate {
                            for p in res.iter_mut() {
                                *p = p.neg();
                            }
                        }
                        for p in res.iter_mut() {
                            *p = ring.normalize(p);
                        }
                        add_into((*i, bigger), res);
                    }
                }
            }
        }
        out.retain(|_, v| v.iter().any(|p| !p.is_zero()));
        out
    }

    pub fn witness_json(&self, witness: &Witness) -> WitnessJson {
        let model = self.model();
        let mut stages = Vec::new();
        for (i, stage) in witness.stages.iter().enumerate() {
            for (gamma, v) in stage {
                let ring = &model.section(gamma).ring;
                stages.push(WitnessStageJson {
                    degree: i + 1,
                    charts: gamma.iter().map(|c| c + 1).collect(),
                    vector: v.iter().map(|p| ring.render(p)).collect(),
                });
            }
        }
        WitnessJson { stages }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub stages: Vec<WitnessStageJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessStageJson {
    /// Homological degree of the complex factor (stage index + 1).
    pub degree: usize,
    /// 1-based chart indices of the Čech factor.
    pub charts: Vec<usize>,
    pub vector: Vec<String>,
}

/// Vanishing of the class of `h` in degree 0 of the total complex, certified
/// by an explicit witness confined to the exact twisted subcomplex. `None`
/// means some stage was unsolvable there (reported by the caller); a cap is
/// a distinct outcome.
pub fn class_vanishes_in_h0(
    system: &TotalComplexSystem<'_>,
    h: &Poly,
    limits: &GbLimits,
) -> Result<Option<Witness>, CapExceeded> {
    match system.solve(h, LiftMode::Twisted, limits)? {
        LiftOutcome::Solved(w) => Ok(Some(w)),
        LiftOutcome::Stuck { .. } => Ok(None),
    }
}
