//! Command implementations. Every command prints its result to stdout
//! (deterministic JSON with --json, terse text otherwise) and maps errors to
//! the documented exit codes.

use crate::{EXIT_CAP, EXIT_FALSIFICATION, EXIT_OK, EXIT_USAGE};
use serde::Serialize;
use skoda_core::closure::{power_certificate, reduction_member, ClosureVerdict};
use skoda_core::ideal::Ideal;
use skoda_core::newton::MonomialIdeal;
use skoda_core::parser::{parse_poly, parse_poly_list};
use skoda_core::ring::{ring_from_descriptor, Ring, RingDescriptor};
use skoda_core::workbench::{
    bir_preclosure_member, bs_check, counterexample_suite, load_instance_parts,
    main_theorem_verify, theorem_model_in, Instance, Verdict, WorkbenchError,
};
use skoda_core::{CapExceeded, Config, Poly};
use std::path::{Path, PathBuf};

fn fail(msg: &str, code: u8) -> u8 {
    eprintln!("error: {msg}");
    code
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).unwrap());
}

fn read_ring(path: &Path, config: &Config) -> Result<Ring, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read ring file {}: {e}", path.display()))?;
    let desc: RingDescriptor =
        serde_json::from_str(&text).map_err(|e| format!("bad ring descriptor: {e}"))?;
    ring_from_descriptor(&desc, &config.gb_limits())
}

fn read_instance(path: &Path) -> Result<Instance, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read instance {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad instance file: {e}"))
}

fn exit_for(err: &WorkbenchError) -> u8 {
    match err {
        WorkbenchError::Cap(_) => EXIT_CAP,
        WorkbenchError::Falsification(_) => EXIT_FALSIFICATION,
        _ => EXIT_USAGE,
    }
}

pub fn cmd_gb(ring_path: &Path, exprs: &str, config: &Config, json: bool) -> u8 {
    let ring = match read_ring(ring_path, config) {
        Ok(r) => r,
        Err(e) => return fail(&e, EXIT_USAGE),
    };
    let gens = match parse_poly_list(exprs, &ring) {
        Ok(g) => g,
        Err(e) => return fail(&e.to_string(), EXIT_USAGE),
    };
    let ideal = Ideal::new(ring.clone(), gens);
    match ideal.groebner_basis(&config.gb_limits()) {
        Ok(gb) => {
            let basis: Vec<String> = gb.iter().map(|p| ring.render(p)).collect();
            if json {
                print_json(&serde_json::json!({ "basis": basis }));
            } else {
                for b in &basis {
                    println!("{b}");
                }
            }
            EXIT_OK
        }
        Err(e) => fail(&e.to_string(), EXIT_CAP),
    }
}

pub fn cmd_member(
    ring_path: &Path,
    element: &str,
    exprs: &str,
    config: &Config,
    json: bool,
) -> u8 {
    let ring = match read_ring(ring_path, config) {
        Ok(r) => r,
        Err(e) => return fail(&e, EXIT_USAGE),
    };
    let (h, gens) = match (parse_poly(element, &ring), parse_poly_list(exprs, &ring)) {
        (Ok(h), Ok(g)) => (h, g),
        (Err(e), _) | (_, Err(e)) => return fail(&e.to_string(), EXIT_USAGE),
    };
    let ideal = Ideal::new(ring, gens);
    match ideal.member(&h, &config.gb_limits()) {
        Ok(member) => {
            if json {
                print_json(&serde_json::json!({ "member": member }));
            } else {
                println!("member: {member}");
            }
            EXIT_OK
        }
        Err(e) => fail(&e.to_string(), EXIT_CAP),
    }
}

pub fn cmd_icl(
    ring_path: &Path,
    ideal_exprs: &str,
    m: u32,
    element: Option<&str>,
    config: &Config,
    json: bool,
) -> u8 {
    let ring = match read_ring(ring_path, config) {
        Ok(r) => r,
        Err(e) => return fail(&e, EXIT_USAGE),
    };
    let gens = match parse_poly_list(ideal_exprs, &ring) {
        Ok(g) => g,
        Err(e) => return fail(&e.to_string(), EXIT_USAGE),
    };
    let j = Ideal::new(ring.clone(), gens);
    let limits = config.gb_limits();
    let caps = config.closure_caps();
    match element {
        Some(expr) => {
            let h = match parse_poly(expr, &ring) {
                Ok(h) => h,
                Err(e) => return fail(&e.to_string(), EXIT_USAGE),
            };
            let verdict = (|| -> Result<ClosureVerdict, CapExceeded> {
                for s in 1..=caps.max_power_s {
                    let v = power_certificate(&h, &j, m, s, &limits)?;
                    if v.is_member() {
                        return Ok(v);
                    }
                }
                reduction_member(&h, &j, m, caps.max_reduction_n, &limits)
            })();
            match verdict {
                Ok(v) => {
                    if json {
                        print_json(&v);
                    } else {
                        println!("status: {:?}", v.status);
                        if let Some(c) = &v.certificate {
                            println!("certificate: {}", serde_json::to_string(c).unwrap());
                        }
                    }
                    EXIT_OK
                }
                Err(e) => fail(&e.to_string(), EXIT_CAP),
            }
        }
        None => {
            if MonomialIdeal::from_ideal(&j).is_none() {
                return fail(
                    "closure generator listing requires a monomial ideal; \
                     pass --element to test a single element",
                    EXIT_USAGE,
                );
            }
            match skoda_core::closure::closure_generators(&j, m, None, &caps, &limits) {
                Ok(gens) => {
                    let list: Vec<_> = gens.iter().map(|(_, c)| c).collect();
                    if json {
                        print_json(&serde_json::json!({ "generators": list }));
                    } else {
                        for (_, c) in &gens {
                            println!("{}", c.expr);
                        }
                    }
                    EXIT_OK
                }
                Err(e) => fail(&e.to_string(), EXIT_CAP),
            }
        }
    }
}

pub fn cmd_lcomplex(
    ring_path: &Path,
    generators: &str,
    k: u32,
    config: &Config,
    json: bool,
) -> u8 {
    let ring = match read_ring(ring_path, config) {
        Ok(r) => r,
        Err(e) => return fail(&e, EXIT_USAGE),
    };
    let f = match parse_poly_list(generators, &ring) {
        Ok(g) => g,
        Err(e) => return fail(&e.to_string(), EXIT_USAGE),
    };
    if f.is_empty() || k == 0 {
        return fail("need at least one generator and k >= 1", EXIT_USAGE);
    }
    let complex = skoda_core::bs::l_complex(&ring, &f, k);
    if json {
        print_json(&complex.to_json());
    } else {
        println!("ranks: {:?}", complex.ranks());
        for i in 1..=complex.len() {
            println!("d{i}:");
            for row in complex.differential(i).render() {
                println!("  [{}]", row.join(", "));
            }
        }
    }
    EXIT_OK
}

pub fn cmd_blowup(
    ring_path: &Path,
    center: &str,
    charts: &str,
    power: u32,
    config: &Config,
    json: bool,
) -> u8 {
    let ring = match read_ring(ring_path, config) {
        Ok(r) => r,
        Err(e) => return fail(&e, EXIT_USAGE),
    };
    let (center, charts) = match (
        parse_poly_list(center, &ring),
        parse_poly_list(charts, &ring),
    ) {
        (Ok(c), Ok(f)) => (c, f),
        (Err(e), _) | (_, Err(e)) => return fail(&e.to_string(), EXIT_USAGE),
    };
    match skoda_core::blowup::build_blowup(&ring, &center, &charts, power, &config.gb_limits()) {
        Ok(model) => {
            let j = model.to_json();
            if json {
                print_json(&j);
            } else {
                println!("charts: {}", j.charts.len());
                for c in &j.charts {
                    println!(
                        "  chart {}: {} relations, exceptional {}",
                        c.index + 1,
                        c.ring.relations.len(),
                        c.exceptional
                    );
                }
                println!("overlaps: {}", j.overlaps.len());
            }
            EXIT_OK
        }
        Err(skoda_core::blowup::BlowupError::Cap(e)) => fail(&e.to_string(), EXIT_CAP),
        Err(e) => fail(&e.to_string(), EXIT_USAGE),
    }
}

pub fn cmd_bs_check(path: &Path, config: &Config, json: bool) -> u8 {
    let inst = match read_instance(path) {
        Ok(i) => i,
        Err(e) => return fail(&e, EXIT_USAGE),
    };
    run_bs_check(&inst, config, json, true)
}

fn run_bs_check(inst: &Instance, config: &Config, json: bool, print: bool) -> u8 {
    let limits = config.gb_limits();
    let caps = config.closure_caps();
    let (_, j, _) = match load_instance_parts(inst, &limits) {
        Ok(p) => p,
        Err(e) => return fail(&e.to_string(), exit_for(&e)),
    };
    match bs_check(&j, inst.k, inst.closure_gens.as_deref(), &caps, &limits) {
        Ok(report) => {
            if print {
                if json {
                    print_json(&report);
                } else {
                    println!("verdict: {:?}", report.verdict);
                    for c in &report.containment {
                        println!("  {} in J^k: {}", c.generator, c.member);
                    }
                }
            }
            match inst.expected {
                Some(expected) if expected != report.verdict => {
                    eprintln!(
                        "unexpected verdict: expected {:?}, got {:?}",
                        expected, report.verdict
                    );
                    EXIT_FALSIFICATION
                }
                _ => EXIT_OK,
            }
        }
        Err(e) => fail(&e.to_string(), exit_for(&e)),
    }
}

pub fn cmd_verify_main(path: &Path, config: &Config, json: bool) -> u8 {
    let inst = match read_instance(path) {
        Ok(i) => i,
        Err(e) => return fail(&e, EXIT_USAGE),
    };
    run_verify_main(&inst, config, json, true)
}

fn run_verify_main(inst: &Instance, config: &Config, json: bool, print: bool) -> u8 {
    let limits = config.gb_limits();
    let caps = config.closure_caps();
    let (ring, j, h) = match load_instance_parts(inst, &limits) {
        Ok(p) => p,
        Err(e) => return fail(&e.to_string(), exit_for(&e)),
    };
    let h = match h {
        Some(h) => h,
        None => return fail("verify-main requires an \"h\" field", EXIT_USAGE),
    };
    let spec = find_spec_for(&ring, inst, &h);
    match main_theorem_verify(&ring, j.gens(), inst.k, &h, spec.as_ref(), &caps, &limits) {
        Ok(report) => {
            if print {
                if json {
                    print_json(&report);
                } else {
                    println!(
                        "witness for {}: {} stage vectors, verified: {}",
                        report.h,
                        report.witness.stages.len(),
                        report.verified
                    );
                }
            }
            if report.verified {
                EXIT_OK
            } else {
                EXIT_FALSIFICATION
            }
        }
        Err(WorkbenchError::Falsification(dump)) => {
            if json {
                print_json(&dump);
            }
            fail("falsification alarm: certified element has no witness", EXIT_FALSIFICATION)
        }
        Err(e) => fail(&e.to_string(), exit_for(&e)),
    }
}

fn find_spec_for(
    ring: &Ring,
    inst: &Instance,
    h: &Poly,
) -> Option<skoda_core::workbench::ClosureGenSpec> {
    let specs = inst.closure_gens.as_ref()?;
    specs
        .iter()
        .find(|s| match parse_poly(&s.expr, ring) {
            Ok(p) => ring.normalize(&p) == ring.normalize(h),
            Err(_) => false,
        })
        .cloned()
}

pub fn cmd_bir_member(path: &Path, config: &Config, json: bool) -> u8 {
    let inst = match read_instance(path) {
        Ok(i) => i,
        Err(e) => return fail(&e, EXIT_USAGE),
    };
    run_bir_member(&inst, config, json, true)
}

fn run_bir_member(inst: &Instance, config: &Config, json: bool, print: bool) -> u8 {
    let limits = config.gb_limits();
    let caps = config.closure_caps();
    let (ring, j, h) = match load_instance_parts(inst, &limits) {
        Ok(p) => p,
        Err(e) => return fail(&e.to_string(), exit_for(&e)),
    };
    let h = match h {
        Some(h) => h,
        None => return fail("bir-member requires an \"h\" field", EXIT_USAGE),
    };
    // include h among the center generators only when it certifies as
    // integral; the model must not silently change otherwise
    let n = j.gens().len() as u32;
    let m = n + inst.k - 1;
    let spec = find_spec_for(&ring, inst, &h);
    let cand = vec![(
        h.clone(),
        spec.as_ref().and_then(|s| s.power_s),
        spec.as_ref().and_then(|s| {
            s.via.as_ref().map(|v| {
                v.iter()
                    .filter_map(|t| parse_poly(t, &ring).ok())
                    .collect::<Vec<_>>()
            })
        }),
    )];
    let certified = match skoda_core::closure::closure_generators(&j, m, Some(&cand), &caps, &limits)
    {
        Ok(c) => c,
        Err(e) => return fail(&e.to_string(), EXIT_CAP),
    };
    let extra: Vec<Poly> = if certified[0].1.verdict.is_member() {
        vec![h.clone()]
    } else {
        Vec::new()
    };
    let model = match theorem_model_in(&ring, j.gens(), inst.k, &extra, &limits) {
        Ok(m) => m,
        Err(e) => return fail(&e.to_string(), exit_for(&e)),
    };
    match bir_preclosure_member(&ring, &j, inst.k, &h, &model, &limits) {
        Ok(member) => {
            if print {
                if json {
                    print_json(&serde_json::json!({
                        "h": ring.render(&h),
                        "member": member,
                    }));
                } else {
                    println!("bir pre-closure member: {member}");
                }
            }
            match inst.expected {
                Some(Verdict::HOLDS) if !member => EXIT_FALSIFICATION,
                Some(Verdict::FAILS) if member => EXIT_FALSIFICATION,
                _ => EXIT_OK,
            }
        }
        Err(e) => fail(&e.to_string(), exit_for(&e)),
    }
}

#[derive(Debug, Clone, serde::Deserialize)]
#[serde(untagged)]
enum ManifestEntry {
    Plain(String),
    Tagged {
        path: String,
        #[serde(default = "default_check")]
        check: String,
    },
}

fn default_check() -> String {
    "bs-check".to_string()
}

#[derive(Debug, Serialize)]
struct CorpusResult {
    path: String,
    check: String,
    exit: u8,
}

pub fn cmd_corpus(manifest_path: &Path, config: &Config, json: bool) -> u8 {
    let text = match std::fs::read_to_string(manifest_path) {
        Ok(t) => t,
        Err(e) => return fail(&format!("cannot read manifest: {e}"), EXIT_USAGE),
    };
    let entries: Vec<ManifestEntry> = match serde_json::from_str(&text) {
        Ok(e) => e,
        Err(e) => return fail(&format!("bad manifest: {e}"), EXIT_USAGE),
    };
    let base_dir = manifest_path.parent().unwrap_or(Path::new("."));
    let jobs: Vec<(PathBuf, String)> = entries
        .iter()
        .map(|e| match e {
            ManifestEntry::Plain(p) => (base_dir.join(p), default_check()),
            ManifestEntry::Tagged { path, check } => (base_dir.join(path), check.clone()),
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .expect("worker pool");
    let results: Vec<CorpusResult> = pool.install(|| {
        use rayon::prelude::*;
        jobs.par_iter()
            .map(|(path, check)| {
                let exit = match read_instance(path) {
                    Err(e) => {
                        eprintln!("{}: {e}", path.display());
                        EXIT_USAGE
                    }
                    Ok(inst) => match check.as_str() {
                        "bs-check" => run_bs_check(&inst, config, false, false),
                        "verify-main" => run_verify_main(&inst, config, false, false),
                        "bir-member" => run_bir_member(&inst, config, false, false),
                        other => {
                            eprintln!("{}: unknown check {other:?}", path.display());
                            EXIT_USAGE
                        }
                    },
                };
                CorpusResult {
                    path: path.display().to_string(),
                    check: check.clone(),
                    exit,
                }
            })
            .collect()
    });

    let total = results.len();
    let as_expected = results.iter().filter(|r| r.exit == EXIT_OK).count();
    let falsifications = results
        .iter()
        .filter(|r| r.exit == EXIT_FALSIFICATION)
        .count();
    let caps = results.iter().filter(|r| r.exit == EXIT_CAP).count();
    let errors = results.iter().filter(|r| r.exit == EXIT_USAGE).count();
    if json {
        print_json(&serde_json::json!({
            "results": results,
            "summary": {
                "total": total,
                "as_expected": as_expected,
                "falsifications": falsifications,
                "caps": caps,
                "errors": errors,
            }
        }));
    } else {
        for r in &results {
            println!(
                "{} [{}]: {}",
                r.path,
                r.check,
                if r.exit == EXIT_OK { "as expected" } else { "FAILED" }
            );
        }
        println!("{as_expected}/{total} as expected");
    }
    if falsifications > 0 {
        EXIT_FALSIFICATION
    } else if caps > 0 {
        EXIT_CAP
    } else if errors > 0 {
        EXIT_USAGE
    } else {
        EXIT_OK
    }
}

pub fn cmd_counterexample(config: &Config, json: bool) -> u8 {
    match counterexample_suite(&config.gb_limits()) {
        Ok(report) => {
            if json {
                print_json(&report);
            } else {
                println!("verdict: {:?}", report.verdict);
                for w in &report.witnesses {
                    println!("  {w} lies in closure(J^2) but not in J");
                }
            }
            // the failure is the expected outcome here
            if report.verdict == Verdict::FAILS {
                EXIT_OK
            } else {
                eprintln!("counterexample unexpectedly reported HOLDS");
                EXIT_FALSIFICATION
            }
        }
        Err(e) => fail(&e.to_string(), exit_for(&e)),
    }
}
