//! Exact coefficient arithmetic: arbitrary-precision rationals and prime fields.
//!
//! `Scalar` is the coefficient type used throughout: either a `BigRational`
//! (always in lowest terms with positive denominator, which `num` maintains)
//! or a residue in `[0, p)` for a prime `p`. Mixing scalars from different
//! fields is a caller bug and panics.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Coefficient field descriptor: the rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldDesc {
    #[serde(rename = "Q")]
    Q,
    Fp(u64),
}

impl FieldDesc {
    pub fn validate(&self) -> Result<(), String> {
        match self {
            FieldDesc::Q => Ok(()),
            FieldDesc::Fp(p) => {
                if *p < 2 || !is_prime(*p) {
                    Err(format!("{p} is not prime"))
                } else if *p >= (1u64 << 31) {
                    Err(format!("prime {p} too large (must be < 2^31)"))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldDesc::Q => Scalar::Q(BigRational::zero()),
            FieldDesc::Fp(p) => Scalar::Fp { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldDesc::Q => Scalar::Q(BigRational::one()),
            FieldDesc::Fp(p) => Scalar::Fp { v: 1, p: *p },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldDesc::Q => Scalar::Q(BigRational::from(BigInt::from(n))),
            FieldDesc::Fp(p) => Scalar::Fp {
                v: n.rem_euclid(*p as i64) as u64,
                p: *p,
            },
        }
    }

    /// Parse an integer or `a/b` rational literal.
    pub fn from_literal(&self, text: &str) -> Result<Scalar, String> {
        let (num_s, den_s) = match text.split_once('/') {
            Some((a, b)) => (a, b),
            None => (text, "1"),
        };
        let n: BigInt = num_s.parse().map_err(|_| format!("bad literal {text:?}"))?;
        let d: BigInt = den_s.parse().map_err(|_| format!("bad literal {text:?}"))?;
        if d.is_zero() {
            return Err("division by zero in literal".into());
        }
        match self {
            FieldDesc::Q => Ok(Scalar::Q(BigRational::new(n, d))),
            FieldDesc::Fp(p) => {
                let pb = BigInt::from(*p);
                let nv = ((&n % &pb) + &pb) % &pb;
                let dv = ((&d % &pb) + &pb) % &pb;
                let nv: u64 = nv.try_into().unwrap();
                let dv: u64 = dv.try_into().unwrap();
                if dv == 0 {
                    return Err(format!("literal denominator vanishes mod {p}"));
                }
                let inv = fp_inv(dv, *p);
                Ok(Scalar::Fp {
                    v: fp_mul(nv, inv, *p),
                    p: *p,
                })
            }
        }
    }
}

/// A field element: exact rational or prime-field residue.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Fp {
                    v: (a + b) % p,
                    p: *p,
                }
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Fp {
                    v: fp_mul(*a, *b, *p),
                    p: *p,
                }
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Q(a.recip())
            }
            Scalar::Fp { v, p } => {
                assert!(*v != 0, "inverse of zero");
                Scalar::Fp {
                    v: fp_inv(*v, *p),
                    p: *p,
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// For rationals: (numerator, denominator) as big integers. Residues map to (v, 1).
    pub fn as_ratio(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Q(r) => (r.numer().clone(), r.denom().clone()),
            Scalar::Fp { v, .. } => (BigInt::from(*v), BigInt::one()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// True if the rational is negative (used for sign-aware printing).
pub fn scalar_is_negative(s: &Scalar) -> bool {
    match s {
        Scalar::Q(r) => r.is_negative(),
        Scalar::Fp { .. } => false,
    }
}

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on signed 128-bit
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
