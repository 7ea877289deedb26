//! Membership tests and certificates for `h ∈ closure(J^m)`.
//!
//! A power certificate exhibits `h^s ∈ (J^m)^s`, giving the integral
//! equation `X^s − h^s`. A reduction certificate exhibits
//! `J^m·(J^m,h)^N = (J^m,h)^(N+1)`. Both are sufficient, not necessary, so
//! failing every search yields `UndecidedAtCap`, never a false negative.
//! Certified non-membership is only issued in the monomial regime, where the
//! Newton-polyhedron oracle is exact. A certificate may route through an
//! intermediate generator list ("via"): auxiliary certificates show each via
//! generator integral over J, and the power step runs against the via ideal;
//! closures of `J` and of the via ideal then coincide.

use crate::ideal::Ideal;
use crate::limits::{CapExceeded, GbLimits};
use crate::newton::{
    monomial_integral_closure, newton_hull_member_with_weights, weights_denominator, MonomialIdeal,
};
use crate::poly::Poly;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosureStatus {
    Member,
    NonMemberCertified,
    UndecidedAtCap,
}

/// Re-checkable certificate payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `h^s ∈ (V^m)^s` where V is `via` (defaulting to J); each via
    /// generator carries its own auxiliary power certificate over J.
    Power {
        s: u32,
        #[serde(skip_serializing_if = "Option::is_none")]
        via: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Vec::is_empty", default)]
        aux: Vec<AuxCertificate>,
    },
    /// `J^m · (J^m,h)^N = (J^m,h)^(N+1)`.
    Reduction { n_steps: u32 },
    /// Exponent vector lies in the Newton polyhedron; weights recorded.
    Newton { weights: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxCertificate {
    pub generator: String,
    pub s: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureVerdict {
    pub status: ClosureStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl ClosureVerdict {
    pub fn member(certificate: Certificate) -> Self {
        ClosureVerdict {
            status: ClosureStatus::Member,
            certificate: Some(certificate),
        }
    }

    pub fn undecided() -> Self {
        ClosureVerdict {
            status: ClosureStatus::UndecidedAtCap,
            certificate: None,
        }
    }

    pub fn is_member(&self) -> bool {
        self.status == ClosureStatus::Member
    }
}

/// Search caps for certificates.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClosureCaps {
    /// Maximum exponent for power certificates.
    pub max_power_s: u32,
    /// Maximum iteration count for the reduction criterion.
    pub max_reduction_n: u32,
}

impl Default for ClosureCaps {
    fn default() -> Self {
        ClosureCaps {
            max_power_s: 8,
            max_reduction_n: 6,
        }
    }
}

/// Test `h^s ∈ (J^m)^s` for one fixed `s`.
pub fn power_certificate(
    h: &Poly,
    j: &Ideal,
    m: u32,
    s: u32,
    limits: &GbLimits,
) -> Result<ClosureVerdict, CapExceeded> {
    assert!(s >= 1 && m >= 1);
    let ring = j.ring();
    let hs = ring.pow(h, s);
    if j.power(m * s).member(&hs, limits)? {
        Ok(ClosureVerdict::member(Certificate::Power {
            s,
            via: None,
            aux: Vec::new(),
        }))
    } else {
        Ok(ClosureVerdict::undecided())
    }
}

/// Power certificate through an intermediate generator list: each `via`
/// generator must admit an auxiliary power certificate over `J` (so the via
/// ideal sits inside closure(J) and closures of powers agree), then
/// `h^s ∈ (via^m)^s` is tested.
pub fn power_certificate_via(
    h: &Poly,
    j: &Ideal,
    m: u32,
    s: u32,
    via: &[Poly],
    caps: &ClosureCaps,
    limits: &GbLimits,
) -> Result<ClosureVerdict, CapExceeded> {
    let ring = j.ring();
    let mut aux = Vec::new();
    for v in via {
        let mut found = None;
        for sv in 1..=caps.max_power_s {
            if power_certificate(v, j, 1, sv, limits)?.is_member() {
                found = Some(sv);
                break;
            }
        }
        match found {
            Some(sv) => aux.push(AuxCertificate {
                generator: ring.render(v),
                s: sv,
            }),
            None => return Ok(ClosureVerdict::undecided()),
        }
    }
    let via_ideal = Ideal::new(ring.clone(), via.to_vec());
    let hs = ring.pow(h, s);
    if via_ideal.power(m * s).member(&hs, limits)? {
        Ok(ClosureVerdict::member(Certificate::Power {
            s,
            via: Some(via.iter().map(|v| ring.render(v)).collect()),
            aux,
        }))
    } else {
        Ok(ClosureVerdict::undecided())
    }
}

/// Iterate the reduction criterion `J^m·(J^m,h)^N = (J^m,h)^(N+1)` for
/// N = 0..=cap. Member on first success; never certifies non-membership.
pub fn reduction_member(
    h: &Poly,
    j: &Ideal,
    m: u32,
    cap: u32,
    limits: &GbLimits,
) -> Result<ClosureVerdict, CapExceeded> {
    let jm = j.power(m);
    let jmh = jm.with_element(h);
    for n in 0..=cap {
        let lhs = if n == 0 {
            jm.clone()
        } else {
            jm.product(&jmh.power(n))
        };
        let rhs = jmh.power(n + 1);
        if lhs.equal(&rhs, limits)? {
            return Ok(ClosureVerdict::member(Certificate::Reduction { n_steps: n }));
        }
    }
    Ok(ClosureVerdict::undecided())
}

/// Re-verify a Member verdict by direct substitution of its certificate.
pub fn verify_certificate(
    h: &Poly,
    j: &Ideal,
    m: u32,
    cert: &Certificate,
    limits: &GbLimits,
) -> Result<bool, CapExceeded> {
    let ring = j.ring();
    match cert {
        Certificate::Power { s, via, aux } => {
            let target = match via {
                None => j.clone(),
                Some(texts) => {
                    let mut gens = Vec::new();
                    for (t, a) in texts.iter().zip(aux) {
                        let v = match crate::parser::parse_poly(t, ring) {
                            Ok(v) => v,
                            Err(_) => return Ok(false),
                        };
                        let vs = ring.pow(&v, a.s);
                        if !j.power(a.s).member(&vs, limits)? {
                            return Ok(false);
                        }
                        gens.push(v);
                    }
                    Ideal::new(ring.clone(), gens)
                }
            };
            let hs = ring.pow(h, *s);
            target.power(m * s).member(&hs, limits)
        }
        Certificate::Reduction { n_steps } => {
            let jm = j.power(m);
            let jmh = jm.with_element(h);
            let lhs = if *n_steps == 0 {
                jm.clone()
            } else {
                jm.product(&jmh.power(*n_steps))
            };
            lhs.equal(&jmh.power(n_steps + 1), limits)
        }
        Certificate::Newton { .. } => {
            // re-derive from the hull oracle
            match (MonomialIdeal::from_ideal(j), monomial_of(h)) {
                (Some(mi), Some(e)) => {
                    Ok(newton_hull_member_with_weights(&e, &mi, m).is_some())
                }
                _ => Ok(false),
            }
        }
    }
}

fn monomial_of(h: &Poly) -> Option<Vec<u16>> {
    if h.n_terms() == 1 {
        Some(h.leading_monomial().unwrap().exponents().to_vec())
    } else {
        None
    }
}

/// Outcome of validating one candidate closure generator.
#[derive(Debug, Clone, Serialize)]
pub struct CertifiedGenerator {
    pub expr: String,
    pub verdict: ClosureVerdict,
}

/// Generators of `closure(J^m)` with certificates.
///
/// Monomial case: exact generators from the Newton oracle, each certified by
/// a power certificate (the hull weights suggest the exponent; small s are
/// searched as a fallback). User-supplied case: each candidate is validated
/// by power or reduction search; failed candidates are reported with an
/// `UndecidedAtCap` verdict and excluded by the caller.
pub fn closure_generators(
    j: &Ideal,
    m: u32,
    candidates: Option<&[(Poly, Option<u32>, Option<Vec<Poly>>)]>,
    caps: &ClosureCaps,
    limits: &GbLimits,
) -> Result<Vec<(Poly, CertifiedGenerator)>, CapExceeded> {
    let ring = j.ring();
    let mut out = Vec::new();
    match candidates {
        None => {
            let mi = MonomialIdeal::from_ideal(j).expect(
                "closure_generators without candidates requires a monomial ideal",
            );
            let closure = monomial_integral_closure(&mi, m);
            // ascending power search with (J^m)^s built once per s and
            // shared across all generators
            let mut pending: Vec<(usize, Poly)> = closure
                .exponents()
                .iter()
                .enumerate()
                .map(|(i, e)| (i, crate::newton::monomial_poly(ring, e)))
                .collect();
            let mut verdicts: Vec<Option<ClosureVerdict>> =
                vec![None; closure.exponents().len()];
            for s in 1..=caps.max_power_s {
                if pending.is_empty() {
                    break;
                }
                let jms = j.power(m * s);
                let mut still = Vec::new();
                for (i, g) in pending {
                    let gs = ring.pow(&g, s);
                    if jms.member(&gs, limits)? {
                        verdicts[i] = Some(ClosureVerdict::member(Certificate::Power {
                            s,
                            via: None,
                            aux: Vec::new(),
                        }));
                    } else {
                        still.push((i, g));
                    }
                }
                pending = still;
            }
            for (i, g) in pending {
                // the hull weights may suggest an exponent past the cap
                let weights = newton_hull_member_with_weights(
                    closure.exponents()[i].as_slice(),
                    &mi,
                    m,
                )
                .expect("closure generator must lie in its own hull");
                let denom = weights_denominator(&weights);
                if denom > caps.max_power_s as u64 && denom <= 64 {
                    let v = power_certificate(&g, j, m, denom as u32, limits)?;
                    if v.is_member() {
                        verdicts[i] = Some(v);
                        continue;
                    }
                }
                let v = reduction_member(&g, j, m, caps.max_reduction_n, limits)?;
                if v.is_member() {
                    verdicts[i] = Some(v);
                }
            }
            for (e, verdict) in closure.exponents().iter().zip(verdicts) {
                let g = crate::newton::monomial_poly(ring, e);
                out.push((
                    g.clone(),
                    CertifiedGenerator {
                        expr: ring.render(&g),
                        verdict: verdict.unwrap_or_else(ClosureVerdict::undecided),
                    },
                ));
            }
        }
        Some(cands) => {
            for (g, s_hint, via) in cands {
                let g = ring.normalize(g);
                let mut verdict = None;
                let s_range: Vec<u32> = match s_hint {
                    Some(s) => vec![*s],
                    None => (1..=caps.max_power_s).collect(),
                };
                for &s in &s_range {
                    let v = match via {
                        Some(vgens) => {
                            power_certificate_via(&g, j, m, s, vgens, caps, limits)?
                        }
                        None => power_certificate(&g, j, m, s, limits)?,
                    };
                    if v.is_member() {
                        verdict = Some(v);
                        break;
                    }
                }
                if verdict.is_none() {
                    let v = reduction_member(&g, j, m, caps.max_reduction_n, limits)?;
                    if v.is_member() {
                        verdict = Some(v);
                    }
                }
                let verdict = verdict.unwrap_or_else(ClosureVerdict::undecided);
                out.push((
                    g.clone(),
                    CertifiedGenerator {
                        expr: ring.render(&g),
                        verdict,
                    },
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDesc;
    use crate::monomial::MonomialOrder;
    use crate::parser::{parse_poly, parse_poly_list};
    use crate::ring::{Ring, RingPresentation};

    fn ring2() -> Ring {
        RingPresentation::polynomial(
            FieldDesc::Q,
            vec!["x".into(), "y".into()],
            MonomialOrder::Grevlex,
        )
    }

    fn ideal_of(r: &Ring, s: &str) -> Ideal {
        Ideal::new(r.clone(), parse_poly_list(s, r).unwrap())
    }

    #[test]
    fn power_certificate_examples() {
        let r = ring2();
        let lim = GbLimits::default();
        let j = ideal_of(&r, "x^2, y^2");
        // xy: (xy)^2 = x^2·y^2 ∈ (x^2,y^2)^2
        let h = parse_poly("x*y", &r).unwrap();
        let v = power_certificate(&h, &j, 1, 2, &lim).unwrap();
        assert!(v.is_member());
        assert!(verify_certificate(&h, &j, 1, v.certificate.as_ref().unwrap(), &lim).unwrap());
        // x: x^4 ∉ (x^2,y^2)^4
        let h = parse_poly("x", &r).unwrap();
        let v = power_certificate(&h, &j, 1, 4, &lim).unwrap();
        assert_eq!(v.status, ClosureStatus::UndecidedAtCap);
    }

    #[test]
    fn reduction_member_examples() {
        let r = ring2();
        let lim = GbLimits::default();
        let j = ideal_of(&r, "x^2, y^2");
        let h = parse_poly("x*y", &r).unwrap();
        let v = reduction_member(&h, &j, 1, 6, &lim).unwrap();
        assert!(v.is_member());
        assert_eq!(
            v.certificate,
            Some(Certificate::Reduction { n_steps: 1 })
        );
        // h ∈ J^m gives N = 0
        let jx = ideal_of(&r, "x^2");
        let h = parse_poly("x^2", &r).unwrap();
        let v = reduction_member(&h, &jx, 1, 6, &lim).unwrap();
        assert_eq!(v.certificate, Some(Certificate::Reduction { n_steps: 0 }));
        // x is not integral over (x^2, y^2)
        let h = parse_poly("x", &r).unwrap();
        let v = reduction_member(&h, &j, 1, 4, &lim).unwrap();
        assert_eq!(v.status, ClosureStatus::UndecidedAtCap);
    }

    #[test]
    fn monomial_closure_generators_certified() {
        let r = ring2();
        let lim = GbLimits::default();
        let caps = ClosureCaps::default();
        let j = ideal_of(&r, "x^2, y^2");
        let gens = closure_generators(&j, 2, None, &caps, &lim).unwrap();
        let exprs: Vec<&str> = gens.iter().map(|(_, c)| c.expr.as_str()).collect();
        assert_eq!(exprs, vec!["y^4", "x*y^3", "x^2*y^2", "x^3*y", "x^4"]);
        for (g, c) in &gens {
            assert!(c.verdict.is_member(), "{} uncertified", c.expr);
            assert!(verify_certificate(
                g,
                &j,
                2,
                c.verdict.certificate.as_ref().unwrap(),
                &lim
            )
            .unwrap());
        }
    }

    #[test]
    fn trivial_closure_of_maximal_ideal() {
        let r = ring2();
        let lim = GbLimits::default();
        let caps = ClosureCaps::default();
        let j = ideal_of(&r, "x, y");
        let gens = closure_generators(&j, 1, None, &caps, &lim).unwrap();
        assert_eq!(gens.len(), 2);
        for (_, c) in &gens {
            match &c.verdict.certificate {
                Some(Certificate::Power { s, .. }) => assert_eq!(*s, 1),
                other => panic!("expected s=1 power certificate, got {other:?}"),
            }
        }
    }

    #[test]
    fn oracle_agreement_on_monomial_fixtures() {
        // power and reduction searches return Member exactly on Newton
        // members; never on a Newton non-member
        let r = ring2();
        let lim = GbLimits::default();
        let j = ideal_of(&r, "x^2, y^2");
        let mi = MonomialIdeal::from_ideal(&j).unwrap();
        for a in 0..=4u16 {
            for b in 0..=4u16 {
                let e = vec![a, b];
                let newton = crate::newton::newton_hull_member(&e, &mi);
                let g = crate::newton::monomial_poly(&r, &e);
                let mut power_found = false;
                for s in 1..=8 {
                    if power_certificate(&g, &j, 1, s, &lim).unwrap().is_member() {
                        power_found = true;
                        break;
                    }
                }
                let red = reduction_member(&g, &j, 1, 6, &lim).unwrap().is_member();
                assert_eq!(power_found, newton, "power vs newton at {e:?}");
                assert_eq!(red, newton, "reduction vs newton at {e:?}");
            }
        }
    }
}
