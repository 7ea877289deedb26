//! Orchestration of the containment checks: Briançon-Skoda containment
//! reports, Main-Theorem vanishing with witnesses, chart-level screens,
//! birational pre-closure membership, and the elliptic×ℙ¹ counterexample
//! suite.
//!
//! Every Member or vanishing claim in a report carries a re-checkable
//! certificate or witness. A certified element whose witness construction
//! fails is a falsification alarm: a first-class outcome with a full system
//! dump, distinct from a resource cap.

use crate::blowup::{build_blowup, cech_complex, BlowupError, BlowupModel};
use crate::bs::l_complex;
use crate::closure::{
    closure_generators, CertifiedGenerator, ClosureCaps, ClosureVerdict,
};
use crate::ideal::Ideal;
use crate::limits::{CapExceeded, GbLimits};
use crate::module::{ModuleMatrix, ModuleSolver};
use crate::parser::parse_poly;
use crate::poly::Poly;
use crate::ring::{ring_from_descriptor, Ring, RingDescriptor};
use crate::total::{LiftMode, LiftOutcome, TotalComplexSystem, Witness, WitnessJson};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error("uncertifiable closure generator: {0}")]
    Uncertified(String),
    #[error("{0}")]
    Precondition(String),
    #[error("falsification alarm: certified element has no witness")]
    Falsification(Box<FalsificationDump>),
    #[error("invalid instance: {0}")]
    BadInstance(String),
}

impl From<BlowupError> for WorkbenchError {
    fn from(e: BlowupError) -> Self {
        match e {
            BlowupError::Cap(c) => WorkbenchError::Cap(c),
            BlowupError::Precondition(m) => WorkbenchError::Precondition(m),
        }
    }
}

/// Full system dump accompanying a falsification alarm.
#[derive(Debug, Clone, Serialize)]
pub struct FalsificationDump {
    pub element: String,
    pub certificate: ClosureVerdict,
    pub stage: usize,
    pub charts: Vec<usize>,
    pub model: crate::blowup::BlowupJson,
    pub complex: crate::complex::ComplexJson,
}

/// Exactly-once instance description: one JSON object per fixture.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub ring: RingDescriptor,
    #[serde(rename = "J")]
    pub j: Vec<String>,
    pub n: usize,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure_gens: Option<Vec<ClosureGenSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosureGenSpec {
    pub expr: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub via: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    HOLDS,
    FAILS,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceEcho {
    pub ring: RingDescriptor,
    #[serde(rename = "J")]
    pub j: Vec<String>,
    pub n: usize,
    pub k: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentEntry {
    pub generator: String,
    pub member: bool,
}

/// Containment report: per-generator verdicts, with failing witnesses listed.
#[derive(Debug, Clone, Serialize)]
pub struct BsReport {
    pub instance: InstanceEcho,
    pub closure_generators: Vec<CertifiedGenerator>,
    pub containment: Vec<ContainmentEntry>,
    pub verdict: Verdict,
    /// Elements of the closure that are not in J^k (the failing witnesses).
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

fn parse_closure_specs(
    ring: &Ring,
    specs: &[ClosureGenSpec],
) -> Result<Vec<(Poly, Option<u32>, Option<Vec<Poly>>)>, WorkbenchError> {
    specs
        .iter()
        .map(|s| {
            let g = parse_poly(&s.expr, ring)
                .map_err(|e| WorkbenchError::BadInstance(e.to_string()))?;
            let via = match &s.via {
                None => None,
                Some(texts) => Some(
                    texts
                        .iter()
                        .map(|t| {
                            parse_poly(t, ring)
                                .map_err(|e| WorkbenchError::BadInstance(e.to_string()))
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                ),
            };
            Ok((g, s.power_s, via))
        })
        .collect()
}

/// Check `closure(J^(n+k−1)) ⊆ J^k` generator by certified generator.
pub fn bs_check(
    j: &Ideal,
    k: u32,
    closure_specs: Option<&[ClosureGenSpec]>,
    caps: &ClosureCaps,
    limits: &GbLimits,
) -> Result<BsReport, WorkbenchError> {
    let ring = j.ring();
    let n = j.gens().len();
    let m = (n as u32) + k - 1;
    let parsed;
    let candidates = match closure_specs {
        None => None,
        Some(specs) => {
            parsed = parse_closure_specs(ring, specs)?;
            Some(parsed.as_slice())
        }
    };
    let certified = closure_generators(j, m, candidates, caps, limits)?;
    for (_, c) in &certified {
        if !c.verdict.is_member() {
            return Err(WorkbenchError::Uncertified(c.expr.clone()));
        }
    }
    let jk = j.power(k);
    let mut containment = Vec::new();
    let mut witnesses = Vec::new();
    for (g, c) in &certified {
        let member = jk.member(g, limits)?;
        if !member {
            witnesses.push(c.expr.clone());
        }
        containment.push(ContainmentEntry {
            generator: c.expr.clone(),
            member,
        });
    }
    let verdict = if witnesses.is_empty() {
        Verdict::HOLDS
    } else {
        Verdict::FAILS
    };
    Ok(BsReport {
        instance: InstanceEcho {
            ring: ring.descriptor(),
            j: j.gens().iter().map(|g| ring.render(g)).collect(),
            n,
            k,
        },
        closure_generators: certified.into_iter().map(|(_, c)| c).collect(),
        containment,
        verdict,
        witnesses,
        timing_ms: None,
    })
}

/// The blowup model used by the theorem checks: the center is generated by
/// `J^(n+k−1)` together with the certified element(s), charts indexed by the
/// f_i. Every added center generator carries a closure certificate (powers
/// of J trivially), so the chart for the element itself is redundant.
pub fn theorem_model_in(
    base: &Ring,
    f: &[Poly],
    k: u32,
    extra_center: &[Poly],
    limits: &GbLimits,
) -> Result<BlowupModel, WorkbenchError> {
    let n = f.len() as u32;
    let m = n + k - 1;
    let j = Ideal::new(base.clone(), f.to_vec());
    let mut center = j.power(m).gens().to_vec();
    for g in extra_center {
        let g = base.normalize(g);
        if !g.is_zero() && !center.contains(&g) {
            center.push(g);
        }
    }
    Ok(build_blowup(base, &center, f, m, limits)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct MainTheoremReport {
    pub h: String,
    pub certificate: ClosureVerdict,
    pub witness: WitnessJson,
    pub verified: bool,
}

/// Verify the vanishing statement for a certified `h ∈ closure(J^(n+k−1))`:
/// build the blowup model and the degree-k complex, construct the witness,
/// and re-verify it. A certified element without a witness raises a
/// falsification alarm carrying the full system dump.
pub fn main_theorem_verify(
    base: &Ring,
    f: &[Poly],
    k: u32,
    h: &Poly,
    spec: Option<&ClosureGenSpec>,
    caps: &ClosureCaps,
    limits: &GbLimits,
) -> Result<MainTheoremReport, WorkbenchError> {
    let n = f.len() as u32;
    let m = n + k - 1;
    let j = Ideal::new(base.clone(), f.to_vec());
    let h = base.normalize(h);

    // certify the hypothesis h ∈ closure(J^m)
    let cand = match spec {
        Some(s) => {
            let mut parsed = parse_closure_specs(base, std::slice::from_ref(s))?;
            let (_, s_hint, via) = parsed.remove(0);
            vec![(h.clone(), s_hint, via)]
        }
        None => vec![(h.clone(), None, None)],
    };
    let certified = closure_generators(&j, m, Some(&cand), caps, limits)?;
    let (_, cert) = &certified[0];
    if !cert.verdict.is_member() {
        return Err(WorkbenchError::Uncertified(cert.expr.clone()));
    }

    let model = theorem_model_in(base, f, k, std::slice::from_ref(&h), limits)?;
    let cech = cech_complex(&model);
    let complex = l_complex(base, f, k);
    let system = TotalComplexSystem::new(complex.clone(), cech);
    match system.solve(&h, LiftMode::Twisted, limits)? {
        LiftOutcome::Solved(w) => {
            let verified = system.verify_witness(&h, &w);
            Ok(MainTheoremReport {
                h: base.render(&h),
                certificate: cert.verdict.clone(),
                witness: system.witness_json(&w),
                verified,
            })
        }
        LiftOutcome::Stuck { stage, gamma } => {
            Err(WorkbenchError::Falsification(Box::new(FalsificationDump {
                element: base.render(&h),
                certificate: cert.verdict.clone(),
                stage,
                charts: gamma,
                model: model.to_json(),
                complex: complex.to_json(),
            })))
        }
    }
}

/// Fast screen implied by the vanishing statement: `h ∈ J^k·Γ(Y_j)` on each
/// chart, decided by module solving over the chart presentation.
pub fn chart_level_check(
    base: &Ring,
    f: &[Poly],
    k: u32,
    h: &Poly,
    limits: &GbLimits,
) -> Result<Vec<bool>, WorkbenchError> {
    let h = base.normalize(h);
    let model = theorem_model_in(base, f, k, std::slice::from_ref(&h), limits)?;
    let jk_gens = crate::bs::power_monomials(base, f, k);
    let mut out = Vec::with_capacity(model.n_charts());
    for i in 0..model.n_charts() {
        let gamma = vec![i];
        let ring = model.section(&gamma).ring.clone();
        let entries: Vec<Poly> = jk_gens
            .iter()
            .map(|g| model.base_to_section(&gamma, g))
            .collect();
        let matrix = ModuleMatrix::new(ring, 1, entries.len(), entries);
        let rhs = vec![model.base_to_section(&gamma, &h)];
        out.push(crate::module::module_solve(&matrix, &rhs, limits)?.is_some());
    }
    Ok(out)
}

/// Free resolution of `R/J^k` over the base, truncated at `max_len`:
/// `P_1` is the generator row, `P_(i+1)` the syzygies of `∂_i`.
pub fn truncated_resolution(
    j: &Ideal,
    k: u32,
    max_len: usize,
    limits: &GbLimits,
) -> Result<crate::complex::FreeComplex, CapExceeded> {
    let ring = j.ring().clone();
    let jk = j.power(k);
    let gens = jk.gens().to_vec();
    let mut ranks = vec![1usize, gens.len()];
    let mut diffs = vec![ModuleMatrix::new(ring.clone(), 1, gens.len(), gens)];
    for i in 1..max_len {
        let syz = crate::module::syzygies(&diffs[i - 1], limits)?;
        if syz.cols() == 0 {
            break;
        }
        ranks.push(syz.cols());
        diffs.push(syz);
    }
    Ok(crate::complex::FreeComplex::new(ring, ranks, diffs, None))
}

/// Decide whether the class of `h` dies in degree 0 of
/// `R/J^k ⊗ RΓ(Y, O_Y)` for this fixed model. Stage-wise solving over the
/// truncated resolution; when that sticks, the witness is transported from
/// the twisted L-complex witness through a chain map, which must succeed for
/// certified closure elements. `true` is certified by a verified witness;
/// `false` is relative to the model.
pub fn bir_preclosure_member(
    base: &Ring,
    j: &Ideal,
    k: u32,
    h: &Poly,
    model: &BlowupModel,
    limits: &GbLimits,
) -> Result<bool, WorkbenchError> {
    let h = base.normalize(h);
    let n_charts = model.n_charts();
    let resolution = truncated_resolution(j, k, n_charts, limits)?;
    let cech = cech_complex(model);
    let system = TotalComplexSystem::new(resolution.clone(), cech);
    match system.solve(&h, LiftMode::Plain, limits)? {
        LiftOutcome::Solved(_) => return Ok(true),
        LiftOutcome::Stuck { .. } => {}
    }
    // retry by transporting the twisted L-complex witness through a chain map
    let f = model.chart_index_gens().to_vec();
    let l = l_complex(base, &f, k);
    let cech2 = cech_complex(model);
    let l_system = TotalComplexSystem::new(l.clone(), cech2);
    let l_witness = match l_system.solve(&h, LiftMode::Twisted, limits)? {
        LiftOutcome::Solved(w) => w,
        LiftOutcome::Stuck { .. } => return Ok(false),
    };
    let phi = chain_map_to_resolution(&l, &resolution, limits)?;
    let transported = transport_witness(&l_system, &system, &phi, &l_witness);
    let ok = system.verify_witness(&h, &transported);
    assert!(ok, "transported witness failed re-verification");
    Ok(true)
}

/// Chain map from the degree-k complex to the truncated resolution, lifting
/// the identity on degree 0. Columns are solved over the base ring; rhs
/// columns are cycles, so exactness of the resolution guarantees lifts.
fn chain_map_to_resolution(
    l: &crate::complex::FreeComplex,
    p: &crate::complex::FreeComplex,
    limits: &GbLimits,
) -> Result<Vec<ModuleMatrix>, CapExceeded> {
    let ring = l.ring().clone();
    let mut phi: Vec<ModuleMatrix> = vec![ModuleMatrix::new(
        ring.clone(),
        1,
        1,
        vec![ring.one()],
    )];
    let depth = l.len().min(p.len());
    for i in 1..=depth {
        let target = p.differential(i);
        let solver = ModuleSolver::new(target, limits)?;
        // rhs = φ_(i−1) ∘ ∂^L_i
        let rhs = phi[i - 1].compose(l.differential(i));
        let mut entries = vec![Poly::zero(); p.rank(i) * l.rank(i)];
        for c in 0..l.rank(i) {
            let col: Vec<Poly> = (0..rhs.rows()).map(|r| rhs.entry(r, c).clone()).collect();
            let sol = solver
                .solve(&col)
                .expect("resolution is exact; chain map lift must exist");
            for (r, v) in sol.into_iter().enumerate() {
                entries[r * l.rank(i) + c] = v;
            }
        }
        phi.push(ModuleMatrix::new(ring.clone(), p.rank(i), l.rank(i), entries));
    }
    Ok(phi)
}

fn transport_witness(
    from_system: &TotalComplexSystem<'_>,
    to_system: &TotalComplexSystem<'_>,
    phi: &[ModuleMatrix],
    witness: &Witness,
) -> Witness {
    let model = from_system.model();
    let mut stages = Vec::new();
    for (i, stage) in witness.stages.iter().enumerate() {
        let mut new_stage = std::collections::BTreeMap::new();
        for (gamma, v) in stage {
            let ring = model.section(gamma).ring.clone();
            let new_v: Vec<Poly> = if i + 1 < phi.len() {
                let map = &phi[i + 1];
                (0..map.rows())
                    .map(|r| {
                        let mut acc = Poly::zero();
                        for (c, p) in v.iter().enumerate() {
                            if !p.is_zero() && !map.entry(r, c).is_zero() {
                                let e = model.base_to_section(gamma, map.entry(r, c));
                                acc = ring.add(&acc, &ring.mul(&e, p));
                            }
                        }
                        acc
                    })
                    .collect()
            } else {
                // beyond the resolution: the stage must be trivial there
                Vec::new()
            };
            new_stage.insert(gamma.clone(), new_v);
        }
        stages.push(new_stage);
    }
    let _ = to_system;
    Witness { stages }
}

/// The elliptic×ℙ¹ counterexample: derives the presentation by elimination,
/// validates it against the cached fixture, certifies
/// `h = (xu)(yu)²(zu) ∈ closure(J²)` through `J' = ((xu)², (xu)(zu), (zu)²)`
/// with `h³ ∈ J'⁶`, and reports that `h ∉ J`: the containment FAILS on this
/// non-Cohen-Macaulay base.
pub fn counterexample_suite(limits: &GbLimits) -> Result<BsReport, WorkbenchError> {
    let limits = GbLimits {
        max_pairs: limits.max_pairs.max(GbLimits::relaxed(4).max_pairs),
        max_degree: limits.max_degree.max(GbLimits::relaxed(2).max_degree),
    };
    let derived = crate::fixtures::derive_elliptic_presentation(&limits)?;
    let ambient = crate::fixtures::elliptic_ambient();
    let derived_ideal = Ideal::new(ambient.clone(), derived.clone());
    let cached_ideal = Ideal::new(ambient.clone(), crate::fixtures::cached_elliptic_presentation());
    if !derived_ideal.equal(&cached_ideal, &limits)? {
        return Err(WorkbenchError::Precondition(
            "derived presentation disagrees with the cached fixture".into(),
        ));
    }
    let ring = crate::ring::RingPresentation::quotient(&ambient, &derived, &limits)?;
    let j: Vec<Poly> = ["a^2", "e^2"]
        .iter()
        .map(|s| parse_poly(s, &ring).unwrap())
        .collect();
    let j_ideal = Ideal::new(ring.clone(), j);
    let spec = ClosureGenSpec {
        expr: "a*c^2*e".to_string(),
        power_s: Some(3),
        via: Some(vec![
            "a^2".to_string(),
            "a*e".to_string(),
            "e^2".to_string(),
        ]),
    };
    let caps = ClosureCaps::default();
    let mut report = bs_check(&j_ideal, 1, Some(std::slice::from_ref(&spec)), &caps, &limits)?;
    report.instance.n = 2;
    Ok(report)
}

/// Build (ring, J, h) from an instance file.
pub fn load_instance_parts(
    inst: &Instance,
    limits: &GbLimits,
) -> Result<(Ring, Ideal, Option<Poly>), WorkbenchError> {
    let ring = ring_from_descriptor(&inst.ring, limits)
        .map_err(WorkbenchError::BadInstance)?;
    let gens: Result<Vec<Poly>, _> = inst.j.iter().map(|s| parse_poly(s, &ring)).collect();
    let gens = gens.map_err(|e| WorkbenchError::BadInstance(e.to_string()))?;
    if inst.n != gens.len() {
        return Err(WorkbenchError::BadInstance(format!(
            "instance declares n = {} but J has {} generators",
            inst.n,
            gens.len()
        )));
    }
    let j = Ideal::new(ring.clone(), gens);
    let h = match &inst.h {
        None => None,
        Some(s) => Some(
            parse_poly(s, &ring).map_err(|e| WorkbenchError::BadInstance(e.to_string()))?,
        ),
    };
    Ok((ring, j, h))
}
