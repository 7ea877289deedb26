//! Derived fixtures: the cone over (elliptic curve) × ℙ¹.
//!
//! The presentation ideal of `Q[xu, xv, yu, yv, zu, zv]` inside
//! `Q[x,y,z,u,v]/(x³+y³+z³)` is computed by elimination, not hard-coded; the
//! cached generator list below is validated against the derivation by a test
//! and by the counterexample suite.

use crate::field::FieldDesc;
use crate::ideal::{eliminate, Ideal};
use crate::limits::{CapExceeded, GbLimits};
use crate::monomial::MonomialOrder;
use crate::parser::parse_poly;
use crate::poly::Poly;
use crate::ring::{project_to_subring, Ring, RingPresentation};

/// Variable names of the presented cone ring, in order: a=xu, b=xv, c=yu,
/// d=yv, e=zu, g=zv.
pub const ELLIPTIC_VARS: [&str; 6] = ["a", "b", "c", "d", "e", "g"];

/// Cached generators of the presentation ideal, as expression strings in the
/// variables above. Derived by `derive_elliptic_presentation`; the
/// counterexample suite re-derives and compares.
pub const ELLIPTIC_PRESENTATION: [&str; 7] = [
    "d*e - c*g",
    "b*e - a*g",
    "b*c - a*d",
    "a^3 + c^3 + e^3",
    "a^2*b + c^2*d + e^2*g",
    "a*b^2 + c*d^2 + e*g^2",
    "b^3 + d^3 + g^3",
];

/// The ambient polynomial ring `Q[a,b,c,d,e,g]` (grevlex).
pub fn elliptic_ambient() -> Ring {
    RingPresentation::polynomial(
        FieldDesc::Q,
        ELLIPTIC_VARS.iter().map(|s| s.to_string()).collect(),
        MonomialOrder::Grevlex,
    )
}

/// Compute the kernel of `Q[a..g] → Q[x,y,z,u,v]/(x³+y³+z³)` sending
/// a↦xu, b↦xv, c↦yu, d↦yv, e↦zu, g↦zv, by eliminating x,y,z,u,v.
pub fn derive_elliptic_presentation(limits: &GbLimits) -> Result<Vec<Poly>, CapExceeded> {
    let mut vars: Vec<String> = ELLIPTIC_VARS.iter().map(|s| s.to_string()).collect();
    for v in ["x", "y", "z", "u", "v"] {
        vars.push(v.to_string());
    }
    let big = RingPresentation::polynomial(FieldDesc::Q, vars, MonomialOrder::Grevlex);
    let gens = [
        "a - x*u",
        "b - x*v",
        "c - y*u",
        "d - y*v",
        "e - z*u",
        "g - z*v",
        "x^3 + y^3 + z^3",
    ]
    .iter()
    .map(|s| parse_poly(s, &big).unwrap())
    .collect();
    let ideal = Ideal::new(big, gens);
    let kept: Vec<usize> = (0..6).collect();
    let eliminated = eliminate(&ideal, &kept, limits)?;
    let ambient = elliptic_ambient();
    Ok(eliminated
        .gens()
        .iter()
        .map(|p| project_to_subring(p, &kept, &ambient))
        .collect())
}

/// The cached presentation as polynomials of the ambient ring.
pub fn cached_elliptic_presentation() -> Vec<Poly> {
    let ambient = elliptic_ambient();
    ELLIPTIC_PRESENTATION
        .iter()
        .map(|s| parse_poly(s, &ambient).unwrap())
        .collect()
}

/// The presented cone ring `Q[a..g]/I` from the cached fixture.
pub fn elliptic_ring(limits: &GbLimits) -> Result<Ring, CapExceeded> {
    let ambient = elliptic_ambient();
    RingPresentation::quotient(&ambient, &cached_elliptic_presentation(), limits)
}
