//! Exact arithmetic on the numerical Grothendieck lattice Z + ZL + Z of a
//! Picard-rank-one K3 surface: the Mukai pairing, distinguished vector
//! classes, spherical reflections and divisibility tests.
//!
//! All components are arbitrary-precision integers; pairings of user-supplied
//! vectors may exceed any fixed-width range. Every value is immutable and
//! every operation is a pure function.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};

/// The surface parameter: an ample generator L with L^2 = 2d, d >= 1.
///
/// Fixing Picard rank one means the transverse part of every first Chern
/// class vanishes, so the whole theory lives on integer multiples of L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceContext {
    d: BigInt,
}

impl SurfaceContext {
    pub fn new(d: impl Into<BigInt>) -> Result<Self> {
        let d = d.into();
        if d < BigInt::one() {
            return Err(Error::InvalidHalfDegree(d.to_string()));
        }
        Ok(Self { d })
    }

    /// Half of the self-intersection of the ample generator.
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// L^2 = 2d.
    pub fn degree(&self) -> BigInt {
        2 * &self.d
    }
}

impl fmt::Display for SurfaceContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}", self.d)
    }
}

impl FromStr for SurfaceContext {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().strip_prefix("d=").unwrap_or(s.trim());
        let d = BigInt::from_str(body)
            .map_err(|_| Error::Parse(format!("invalid surface parameter {s:?}")))?;
        SurfaceContext::new(d)
    }
}

/// A class r + nL + s in the lattice Z + ZL + Z.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MukaiVector {
    pub r: BigInt,
    pub n: BigInt,
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: impl Into<BigInt>, n: impl Into<BigInt>, s: impl Into<BigInt>) -> Self {
        Self {
            r: r.into(),
            n: n.into(),
            s: s.into(),
        }
    }

    /// The class of a point.
    pub fn point_class() -> Self {
        Self::new(0, 0, 1)
    }

    /// The class of the trivial line bundle.
    pub fn structure_sheaf() -> Self {
        Self::new(1, 0, 1)
    }

    /// v(O_X(-m)) = (1, -m, d m^2 + 1).
    pub fn line_bundle_dual(m: &BigInt, ctx: &SurfaceContext) -> Self {
        Self {
            r: BigInt::one(),
            n: -m,
            s: ctx.d() * m * m + 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.n.is_zero() && self.s.is_zero()
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        Self {
            r: k * &self.r,
            n: k * &self.n,
            s: k * &self.s,
        }
    }
}

impl Add for &MukaiVector {
    type Output = MukaiVector;

    fn add(self, rhs: &MukaiVector) -> MukaiVector {
        MukaiVector {
            r: &self.r + &rhs.r,
            n: &self.n + &rhs.n,
            s: &self.s + &rhs.s,
        }
    }
}

impl Sub for &MukaiVector {
    type Output = MukaiVector;

    fn sub(self, rhs: &MukaiVector) -> MukaiVector {
        MukaiVector {
            r: &self.r - &rhs.r,
            n: &self.n - &rhs.n,
            s: &self.s - &rhs.s,
        }
    }
}

impl Neg for &MukaiVector {
    type Output = MukaiVector;

    fn neg(self) -> MukaiVector {
        MukaiVector {
            r: -&self.r,
            n: -&self.n,
            s: -&self.s,
        }
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.r, self.n, self.s)
    }
}

impl FromStr for MukaiVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "expected three comma-separated integers, got {s:?}"
            )));
        }
        let parse = |p: &str| {
            BigInt::from_str(p.trim())
                .map_err(|_| Error::Parse(format!("invalid integer component {p:?}")))
        };
        Ok(MukaiVector {
            r: parse(parts[0])?,
            n: parse(parts[1])?,
            s: parse(parts[2])?,
        })
    }
}

/// The Mukai pairing <v, w> = 2d n_v n_w - r_v s_w - r_w s_v.
///
/// Symmetric, bilinear, and even on the diagonal.
pub fn mukai_pairing(v: &MukaiVector, w: &MukaiVector, ctx: &SurfaceContext) -> BigInt {
    ctx.degree() * &v.n * &w.n - &v.r * &w.s - &w.r * &v.s
}

/// <v, v>.
pub fn self_pairing(v: &MukaiVector, ctx: &SurfaceContext) -> BigInt {
    mukai_pairing(v, v, ctx)
}

/// The Euler form chi(v, w) = -<v, w>.
pub fn euler_form(v: &MukaiVector, w: &MukaiVector, ctx: &SurfaceContext) -> BigInt {
    -mukai_pairing(v, w, ctx)
}

/// True iff <v, v> = -2.
pub fn is_spherical(v: &MukaiVector, ctx: &SurfaceContext) -> bool {
    self_pairing(v, ctx) == BigInt::from(-2)
}

/// True iff <v, v> = 0.
pub fn is_isotropic(v: &MukaiVector, ctx: &SurfaceContext) -> bool {
    self_pairing(v, ctx).is_zero()
}

/// Reflection in a spherical class: v -> v + <v, a> a.
///
/// An involutive isometry of the pairing; rejects non-spherical a.
pub fn spherical_reflect(
    v: &MukaiVector,
    a: &MukaiVector,
    ctx: &SurfaceContext,
) -> Result<MukaiVector> {
    if !is_spherical(a, ctx) {
        return Err(Error::NotSpherical(a.clone()));
    }
    let c = mukai_pairing(v, a, ctx);
    Ok(v + &a.scaled(&c))
}

/// gcd(|r|, |n| L^2, |s|), the divisibility test for fineness of the moduli
/// space attached to v. The all-zero vector returns 0 and is rejected by the
/// downstream classifiers.
pub fn fine_moduli_gcd(v: &MukaiVector, ctx: &SurfaceContext) -> BigInt {
    let a = v.r.abs();
    let b = (&v.n * ctx.degree()).abs();
    let c = v.s.abs();
    a.gcd(&b).gcd(&c)
}
