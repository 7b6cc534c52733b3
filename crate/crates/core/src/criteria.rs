//! Decidable certificates for the stability theorems, the chamber predicates
//! attached to a class, the fine-moduli classifier for isotropic vectors and
//! the vector-level boundary decompositions of the point class.
//!
//! Sheaf-level premises (Gieseker stability, slope stability, local freeness,
//! torsion freeness) are not decidable from a lattice vector. Callers assert
//! them through [`Assumptions`]; every certificate records verbatim which
//! assertions it consumed and proves only the numerical implications.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::charge::{fmt_rational, in_vx, lambda, StabilityPoint, VxVerdict};
use crate::error::{Error, Result};
use crate::lattice::{
    euler_form, fine_moduli_gcd, is_spherical, self_pairing, MukaiVector, SurfaceContext,
};

/// Identifier of the certificate family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    /// Non-strict bound 2d lambda (v^2/(2r) + 1) <= d y^2 for lambda > 0.
    A4,
    /// Rank-one strengthening of A4: lambda (v^2/(2r) + 1) <= d y^2.
    A5,
    /// Strict bound -2d lambda (v^2/(2r) + 1) < d y^2 for lambda < 0.
    A10,
    /// Rank-one strengthening of A10: -lambda (v^2/(2r) + 1) < d y^2.
    A11,
    /// Phase-zero statement on the wall lambda = 0.
    A6,
    /// Region of points where every twisted point class stays stable.
    VlPos,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremId::A4 => "A4",
            TheoremId::A5 => "A5",
            TheoremId::A10 => "A10",
            TheoremId::A11 => "A11",
            TheoremId::A6 => "A6",
            TheoremId::VlPos => "VL_POS",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    SemistablePhase0,
    StableIffMuStableLocallyFree,
    NotApplicable,
    /// Reserved in the serialized vocabulary for wall-adjacent reporting.
    /// The certifiers map strict-bound equality to `NotApplicable` with the
    /// failed bound named, so this value is never produced by them.
    OnBoundary,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Stable => "Stable",
            Verdict::SemistablePhase0 => "SemistablePhase0",
            Verdict::StableIffMuStableLocallyFree => "StableIffMuStableLocallyFree",
            Verdict::NotApplicable => "NotApplicable",
            Verdict::OnBoundary => "OnBoundary",
        };
        f.write_str(s)
    }
}

/// Sheaf-level assertions supplied by the caller.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assumptions {
    /// The vector belongs to a Gieseker-stable torsion-free sheaf.
    pub gieseker_stable: bool,
    /// The vector belongs to a slope-stable locally free sheaf.
    pub mu_stable_locally_free: bool,
    /// The vector belongs to a slope-semistable torsion-free sheaf.
    pub mu_semistable: bool,
}

impl Assumptions {
    pub fn gieseker() -> Self {
        Self {
            gieseker_stable: true,
            ..Self::default()
        }
    }

    pub fn mu_stable_locally_free() -> Self {
        Self {
            mu_stable_locally_free: true,
            ..Self::default()
        }
    }

    pub fn mu_semistable() -> Self {
        Self {
            mu_semistable: true,
            ..Self::default()
        }
    }

    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.gieseker_stable {
            out.push("gieseker-stable");
        }
        if self.mu_stable_locally_free {
            out.push("mu-stable-locally-free");
        }
        if self.mu_semistable {
            out.push("mu-semistable");
        }
        out
    }
}

/// One checked hypothesis: a name, the exact inequality instance, and whether
/// it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: &'static str,
    pub instance: String,
    pub holds: bool,
}

impl Hypothesis {
    fn new(name: &'static str, instance: String, holds: bool) -> Self {
        Self {
            name,
            instance,
            holds,
        }
    }
}

/// The recorded geometric-chamber check of a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VxCheck {
    pub holds: bool,
    pub witness: Option<MukaiVector>,
}

/// Verdict of a theorem-based stability test together with every hypothesis
/// it checked at exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub theorem: TheoremId,
    pub verdict: Verdict,
    pub hypotheses: Vec<Hypothesis>,
    pub assumptions: Vec<&'static str>,
    pub vx: VxCheck,
    pub conclusions: Vec<String>,
}

impl Certificate {
    pub fn failed_hypotheses(&self) -> impl Iterator<Item = &Hypothesis> {
        self.hypotheses.iter().filter(|h| !h.holds)
    }
}

fn rat(i: &BigInt) -> BigRational {
    BigRational::from_integer(i.clone())
}

fn d_y_squared(sigma: &StabilityPoint, ctx: &SurfaceContext) -> BigRational {
    rat(ctx.d()) * sigma.y_squared()
}

fn vx_hypothesis(vx: &VxVerdict, sigma: &StabilityPoint) -> Hypothesis {
    let instance = match &vx.witness {
        Some(w) => format!("sigma = ({sigma}) is excluded by the spherical class {w}"),
        None => format!("sigma = ({sigma}) lies in the geometric chamber"),
    };
    Hypothesis::new("sigma_in_geometric_chamber", instance, vx.holds)
}

struct SlopeBoundFamily {
    id: TheoremId,
    /// Bound carries the full 2d factor instead of the rank-one reduction.
    full_degree: bool,
    /// Positive side tests lambda > 0, negative side lambda < 0.
    positive_side: bool,
    strict: bool,
}

fn certify_slope_bound(
    v: &MukaiVector,
    sigma: &StabilityPoint,
    ctx: &SurfaceContext,
    assume: &Assumptions,
    family: SlopeBoundFamily,
) -> Certificate {
    let mut hyps = Vec::new();

    let rank_ok = v.r.is_positive();
    hyps.push(Hypothesis::new(
        "rank_positive",
        format!("r = {} > 0", v.r),
        rank_ok,
    ));

    let (flag_name, flag_set, flag_text) = if family.positive_side {
        (
            "assumed_gieseker_stable",
            assume.gieseker_stable,
            "caller asserts a Gieseker-stable torsion-free sheaf of this class",
        )
    } else {
        (
            "assumed_mu_stable_locally_free",
            assume.mu_stable_locally_free,
            "caller asserts a slope-stable locally free sheaf of this class",
        )
    };
    hyps.push(Hypothesis::new(flag_name, flag_text.to_string(), flag_set));

    let lam = lambda(v, sigma);
    if family.positive_side {
        hyps.push(Hypothesis::new(
            "lambda_positive",
            format!("lambda = {} > 0", fmt_rational(&lam)),
            lam.is_positive(),
        ));
    } else {
        hyps.push(Hypothesis::new(
            "lambda_negative",
            format!("lambda = {} < 0", fmt_rational(&lam)),
            lam.is_negative(),
        ));
    }

    let square = self_pairing(v, ctx);
    let minus_two = BigInt::from(-2);
    hyps.push(Hypothesis::new(
        "self_pairing_at_least_minus_two",
        format!("<v,v> = {square} >= -2"),
        square >= minus_two,
    ));

    let vx = in_vx(sigma, ctx);
    hyps.push(vx_hypothesis(&vx, sigma));

    if rank_ok && square >= minus_two {
        let base = if family.positive_side {
            lam.clone()
        } else {
            -lam.clone()
        };
        let mut lhs = base;
        let mut label = String::from("lambda");
        if !family.positive_side {
            label = format!("-{label}");
        }
        if family.full_degree {
            lhs *= BigRational::from_integer(ctx.degree());
            label = format!("2d*{label}");
        }
        if !square.is_negative() {
            // v^2 >= 0 case has the excess factor v^2/(2r) + 1
            let factor = rat(&square) / (BigRational::from_integer(2.into()) * rat(&v.r))
                + BigRational::one();
            lhs *= &factor;
            label = format!("{label} * (<v,v>/(2r) + 1)");
        }
        let rhs = d_y_squared(sigma, ctx);
        let (cmp, holds) = if family.strict {
            ("<", lhs < rhs)
        } else {
            ("<=", lhs <= rhs)
        };
        hyps.push(Hypothesis::new(
            "slope_bound",
            format!(
                "{label} = {} {cmp} d*y^2 = {}",
                fmt_rational(&lhs),
                fmt_rational(&rhs)
            ),
            holds,
        ));
    }

    let all_hold = hyps.iter().all(|h| h.holds) && vx.holds;
    let verdict = if all_hold {
        Verdict::Stable
    } else {
        Verdict::NotApplicable
    };
    let conclusions = if all_hold {
        vec!["the class is stable at sigma under the asserted sheaf hypotheses".to_string()]
    } else {
        Vec::new()
    };

    Certificate {
        theorem: family.id,
        verdict,
        hypotheses: hyps,
        assumptions: assume.labels(),
        vx: VxCheck {
            holds: vx.holds,
            witness: vx.witness,
        },
        conclusions,
    }
}

/// Non-strict certificate on the lambda > 0 side with the full-degree bound
/// 2d lambda (v^2/(2r) + 1) <= d y^2 (the excess factor drops when the class
/// is spherical).
pub fn certify_a4(
    v: &MukaiVector,
    sigma: &StabilityPoint,
    ctx: &SurfaceContext,
    assume: &Assumptions,
) -> Certificate {
    certify_slope_bound(
        v,
        sigma,
        ctx,
        assume,
        SlopeBoundFamily {
            id: TheoremId::A4,
            full_degree: true,
            positive_side: true,
            strict: false,
        },
    )
}

/// Rank-one strengthening of [`certify_a4`]: lambda (v^2/(2r) + 1) <= d y^2.
pub fn certify_a5(
    v: &MukaiVector,
    sigma: &StabilityPoint,
    ctx: &SurfaceContext,
    assume: &Assumptions,
) -> Certificate {
    certify_slope_bound(
        v,
        sigma,
        ctx,
        assume,
        SlopeBoundFamily {
            id: TheoremId::A5,
            full_degree: false,
            positive_side: true,
            strict: false,
        },
    )
}

/// Strict certificate on the lambda < 0 side with the full-degree bound
/// -2d lambda (v^2/(2r) + 1) < d y^2. Equality reports `NotApplicable` with
/// the failed bound named; the strictness is part of the statement.
pub fn certify_a10(
    v: &MukaiVector,
    sigma: &StabilityPoint,
    ctx: &SurfaceContext,
    assume: &Assumptions,
) -> Certificate {
    certify_slope_bound(
        v,
        sigma,
        ctx,
        assume,
        SlopeBoundFamily {
            id: TheoremId::A10,
            full_degree: true,
            positive_side: false,
            strict: true,
        },
    )
}

/// Rank-one strengthening of [`certify_a10`]: -lambda (v^2/(2r) + 1) < d y^2.
pub fn certify_a11(
    v: &MukaiVector,
    sigma: &StabilityPoint,
    ctx: &SurfaceContext,
    assume: &Assumptions,
) -> Certificate {
    certify_slope_bound(
        v,
        sigma,
        ctx,
        assume,
        SlopeBoundFamily {
            id: TheoremId::A11,
            full_degree: false,
            positive_side: false,
            strict: true,
        },
    )
}

/// Phase-zero certificate on the wall lambda = 0 for nonzero-rank classes.
///
/// With the slope-semistability flag asserted the verdict is
/// `SemistablePhase0`. The biconditional needs no flag: stability with phase
/// zero is equivalent to slope stability plus local freeness, which the
/// lattice cannot decide, so the certificate states the equivalence instead.
pub fn certify_a6(
    v: &MukaiVector,
    sigma: &StabilityPoint,
    ctx: &SurfaceContext,
    assume: &Assumptions,
) -> Certificate {
    let mut hyps = Vec::new();

    let rank_ok = !v.r.is_zero();
    hyps.push(Hypothesis::new(
        "rank_nonzero",
        format!("r = {} != 0", v.r),
        rank_ok,
    ));

    let lam = lambda(v, sigma);
    hyps.push(Hypothesis::new(
        "lambda_zero",
        format!("lambda = {} = 0", fmt_rational(&lam)),
        lam.is_zero(),
    ));

    let vx = in_vx(sigma, ctx);
    hyps.push(vx_hypothesis(&vx, sigma));

    if assume.mu_semistable {
        hyps.push(Hypothesis::new(
            "assumed_mu_semistable",
            "caller asserts a slope-semistable torsion-free sheaf of this class".to_string(),
            true,
        ));
    }

    let structural_ok = hyps.iter().all(|h| h.holds);
    let mut conclusions = Vec::new();
    let verdict = if !structural_ok {
        Verdict::NotApplicable
    } else if assume.mu_semistable {
        conclusions.push("the class is semistable with phase 0 at sigma".to_string());
        conclusions.push(
            "stability with phase 0 holds iff the sheaf is slope-stable and locally free"
                .to_string(),
        );
        Verdict::SemistablePhase0
    } else {
        conclusions.push(
            "stability with phase 0 holds iff the sheaf is slope-stable and locally free"
                .to_string(),
        );
        Verdict::StableIffMuStableLocallyFree
    };

    Certificate {
        theorem: TheoremId::A6,
        verdict,
        hypotheses: hyps,
        assumptions: assume.labels(),
        vx: VxCheck {
            holds: vx.holds,
            witness: vx.witness,
        },
        conclusions,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    VPlus,
    VZero,
    VMinus,
    Outside,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::VPlus => "V_plus",
            Region::VZero => "V_zero",
            Region::VMinus => "V_minus",
            Region::Outside => "Outside",
        };
        f.write_str(s)
    }
}

/// Chamber verdict for a class at a point, with the defining inequalities at
/// exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionVerdict {
    pub region: Region,
    pub inequalities: Vec<Hypothesis>,
    pub vx_witness: Option<MukaiVector>,
}

/// Locate a stability point relative to the chamber walls of a positive-rank
/// class with <v,v> >= -2. Both side bounds are non-strict; the zero wall is
/// exactly lambda = 0. Points outside the geometric chamber report `Outside`
/// with the excluding spherical witness.
pub fn region_of(
    v: &MukaiVector,
    sigma: &StabilityPoint,
    ctx: &SurfaceContext,
) -> Result<RegionVerdict> {
    if !v.r.is_positive() {
        return Err(Error::RankNotPositive(v.r.to_string()));
    }
    let square = self_pairing(v, ctx);
    if square < BigInt::from(-2) {
        return Err(Error::NotSpherical(v.clone()));
    }

    let vx = in_vx(sigma, ctx);
    let mut ineqs = vec![vx_hypothesis(&vx, sigma)];
    if !vx.holds {
        return Ok(RegionVerdict {
            region: Region::Outside,
            inequalities: ineqs,
            vx_witness: vx.witness,
        });
    }

    let lam = lambda(v, sigma);
    if lam.is_zero() {
        ineqs.push(Hypothesis::new(
            "lambda_zero",
            "lambda = 0".to_string(),
            true,
        ));
        return Ok(RegionVerdict {
            region: Region::VZero,
            inequalities: ineqs,
            vx_witness: None,
        });
    }

    let base = lam.abs();
    let lhs = if square.is_negative() {
        base
    } else {
        let factor =
            rat(&square) / (BigRational::from_integer(2.into()) * rat(&v.r)) + BigRational::one();
        base * factor
    };
    let rhs = d_y_squared(sigma, ctx);
    let holds = lhs <= rhs;
    ineqs.push(Hypothesis::new(
        "side_bound",
        format!(
            "|lambda|-bound {} <= d*y^2 = {}",
            fmt_rational(&lhs),
            fmt_rational(&rhs)
        ),
        holds,
    ));

    let region = match (holds, lam.is_positive()) {
        (true, true) => Region::VPlus,
        (true, false) => Region::VMinus,
        (false, _) => Region::Outside,
    };
    Ok(RegionVerdict {
        region,
        inequalities: ineqs,
        vx_witness: None,
    })
}

/// Membership of sigma in the twist region of the ample generator:
/// 2(1 - x) <= y^2 inside the geometric chamber. On success every twisted
/// point class is stable at sigma, so sigma lies in the image of the
/// geometric chamber under the spherical twist by the generator.
pub fn region_vl_pos(sigma: &StabilityPoint, ctx: &SurfaceContext) -> Certificate {
    let two = BigRational::from_integer(2.into());
    let lhs = &two * (BigRational::one() - sigma.x());
    let rhs = sigma.y_squared();
    let bound = lhs <= rhs;

    let vx = in_vx(sigma, ctx);
    let hyps = vec![
        Hypothesis::new(
            "twist_bound",
            format!(
                "2(1 - x) = {} <= y^2 = {}",
                fmt_rational(&lhs),
                fmt_rational(&rhs)
            ),
            bound,
        ),
        vx_hypothesis(&vx, sigma),
    ];

    let holds = bound && vx.holds;
    let conclusions = if holds {
        vec![
            "every twisted point class is stable at sigma".to_string(),
            "sigma lies in the spherical-twist image of the geometric chamber".to_string(),
        ]
    } else {
        Vec::new()
    };

    Certificate {
        theorem: TheoremId::VlPos,
        verdict: if holds {
            Verdict::Stable
        } else {
            Verdict::NotApplicable
        },
        hypotheses: hyps,
        assumptions: Vec::new(),
        vx: VxCheck {
            holds: vx.holds,
            witness: vx.witness,
        },
        conclusions,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuliVerdict {
    MuStableLocallyFree,
    SquareAmbiguous,
    NotFine,
    NotApplicable,
}

impl fmt::Display for ModuliVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModuliVerdict::MuStableLocallyFree => "MuStableLocallyFree",
            ModuliVerdict::SquareAmbiguous => "SquareAmbiguous",
            ModuliVerdict::NotFine => "NotFine",
            ModuliVerdict::NotApplicable => "NotApplicable",
        };
        f.write_str(s)
    }
}

/// Classification of the fine moduli space attached to an isotropic vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliClassification {
    pub verdict: ModuliVerdict,
    /// gcd(|r|, |n| L^2, |s|); fineness is gcd = 1.
    pub gcd: BigInt,
    pub fine: bool,
    pub rank_square: bool,
    /// For square rank l^2: the spherical class w with l w = v + (0,0,1),
    /// when its components are integral.
    pub witness: Option<MukaiVector>,
}

/// Classify the fine moduli space of a positive-rank isotropic class.
///
/// Non-square rank always yields the locally free description. For rank l^2
/// the alternative description through a point sheaf on the surface itself
/// exists only when the spherical class w = (r/l, n/l, (s+1)/l) is integral;
/// the classifier then reports `SquareAmbiguous` since the lattice cannot
/// decide which of the two descriptions occurs. Integrality failures
/// obstruct the alternative and the locally free description wins.
pub fn classify_fine_moduli(v: &MukaiVector, ctx: &SurfaceContext) -> ModuliClassification {
    let gcd = fine_moduli_gcd(v, ctx);
    let fine = gcd.is_one();

    if !fine {
        return ModuliClassification {
            verdict: ModuliVerdict::NotFine,
            gcd,
            fine,
            rank_square: false,
            witness: None,
        };
    }
    if !v.r.is_positive() || !self_pairing(v, ctx).is_zero() {
        return ModuliClassification {
            verdict: ModuliVerdict::NotApplicable,
            gcd,
            fine,
            rank_square: false,
            witness: None,
        };
    }

    let l = v.r.sqrt();
    let rank_square = &l * &l == v.r;
    if !rank_square {
        return ModuliClassification {
            verdict: ModuliVerdict::MuStableLocallyFree,
            gcd,
            fine,
            rank_square,
            witness: None,
        };
    }

    let witness = square_rank_witness(v, &l, ctx);
    let verdict = if witness.is_some() {
        ModuliVerdict::SquareAmbiguous
    } else {
        ModuliVerdict::MuStableLocallyFree
    };
    ModuliClassification {
        verdict,
        gcd,
        fine,
        rank_square,
        witness,
    }
}

fn square_rank_witness(v: &MukaiVector, l: &BigInt, ctx: &SurfaceContext) -> Option<MukaiVector> {
    let s_plus: BigInt = &v.s + 1;
    if !(&v.n % l).is_zero() || !(&s_plus % l).is_zero() {
        return None;
    }
    let w = MukaiVector {
        r: l.clone(),
        n: &v.n / l,
        s: s_plus / l,
    };
    // re-check independently of the construction
    let target = v + &MukaiVector::point_class();
    if is_spherical(&w, ctx) && w.scaled(l) == target {
        Some(w)
    } else {
        None
    }
}

/// One stable factor of a boundary decomposition at the vector level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryFactor {
    /// Vector of the unshifted stable object.
    pub vector: MukaiVector,
    pub multiplicity: BigInt,
    /// Homological shift the factor carries inside the filtration.
    pub shift: u8,
    /// Sign of the factor's contribution to the vector sum: (-1)^shift.
    pub sign: i8,
    pub label: &'static str,
}

impl BoundaryFactor {
    fn contribution(&self) -> MukaiVector {
        let signed = if self.sign < 0 {
            -(&self.vector)
        } else {
            self.vector.clone()
        };
        signed.scaled(&self.multiplicity)
    }
}

/// Vector-level stable factors of the point class on the two boundary types
/// attached to a positive-rank spherical class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDecomposition {
    pub plus_factors: Vec<BoundaryFactor>,
    pub minus_factors: Vec<BoundaryFactor>,
    /// The shift convention the factor signs follow.
    pub sign_convention: &'static str,
}

impl BoundaryDecomposition {
    pub fn plus_sum(&self) -> MukaiVector {
        sum_factors(&self.plus_factors)
    }

    pub fn minus_sum(&self) -> MukaiVector {
        sum_factors(&self.minus_factors)
    }
}

fn sum_factors(factors: &[BoundaryFactor]) -> MukaiVector {
    factors
        .iter()
        .fold(MukaiVector::new(0, 0, 0), |acc, f| &acc + &f.contribution())
}

/// Both filtrations of the point class across the two boundary types: the
/// spherical class with multiplicity r together with the twisted point class
/// (0,0,1) - r a. On the minus side the spherical copies carry an even shift,
/// so every factor contributes with sign +1 and both signed sums equal the
/// point class.
pub fn boundary_decomposition(
    a: &MukaiVector,
    ctx: &SurfaceContext,
) -> Result<BoundaryDecomposition> {
    if !a.r.is_positive() {
        return Err(Error::RankNotPositive(a.r.to_string()));
    }
    if !is_spherical(a, ctx) {
        return Err(Error::NotSpherical(a.clone()));
    }

    let point = MukaiVector::point_class();
    // <(0,0,1), a> = -r, so the reflection of the point class is e - r a.
    let twisted = &point - &a.scaled(&a.r);

    let plus_factors = vec![
        BoundaryFactor {
            vector: a.clone(),
            multiplicity: a.r.clone(),
            shift: 0,
            sign: 1,
            label: "spherical subobject",
        },
        BoundaryFactor {
            vector: twisted.clone(),
            multiplicity: BigInt::one(),
            shift: 0,
            sign: 1,
            label: "twisted point class",
        },
    ];
    let minus_factors = vec![
        BoundaryFactor {
            vector: twisted,
            multiplicity: BigInt::one(),
            shift: 0,
            sign: 1,
            label: "inverse-twisted point class",
        },
        BoundaryFactor {
            vector: a.clone(),
            multiplicity: a.r.clone(),
            shift: 2,
            sign: 1,
            label: "spherical quotient, double shift",
        },
    ];

    Ok(BoundaryDecomposition {
        plus_factors,
        minus_factors,
        sign_convention:
            "factor vectors are of unshifted objects; a factor contributes (-1)^shift times its \
             vector, and only even shifts occur here",
    })
}

/// The Euler form of a spherical class against an isotropic class, both of
/// positive rank, together with the closed form
/// chi/(r_a r_e) = d (n_a/r_a - n_e/r_e)^2 + 1/r_a^2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiIdentity {
    pub chi: BigInt,
    pub closed_form: BigRational,
}

/// chi(a, e) > 0 for spherical a and isotropic e of positive rank, verified
/// through the exact closed form.
pub fn chi_positivity(
    a: &MukaiVector,
    e: &MukaiVector,
    ctx: &SurfaceContext,
) -> Result<ChiIdentity> {
    if !a.r.is_positive() {
        return Err(Error::RankNotPositive(a.r.to_string()));
    }
    if !e.r.is_positive() {
        return Err(Error::RankNotPositive(e.r.to_string()));
    }
    if !is_spherical(a, ctx) {
        return Err(Error::NotSpherical(a.clone()));
    }
    if !self_pairing(e, ctx).is_zero() {
        return Err(Error::NotIsotropic(e.clone()));
    }

    let chi = euler_form(a, e, ctx);
    let ra = rat(&a.r);
    let re = rat(&e.r);
    let slope_gap = rat(&a.n) / &ra - rat(&e.n) / &re;
    let closed_form = rat(ctx.d()) * &slope_gap * &slope_gap + BigRational::one() / (&ra * &ra);

    assert_eq!(
        rat(&chi),
        &ra * &re * &closed_form,
        "euler form must match the closed form exactly"
    );
    assert!(chi.is_positive(), "euler form must be positive");
    Ok(ChiIdentity { chi, closed_form })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(d: i64) -> SurfaceContext {
        SurfaceContext::new(d).unwrap()
    }

    fn v(r: i64, n: i64, s: i64) -> MukaiVector {
        MukaiVector::new(r, n, s)
    }

    fn pt(x: (i64, i64), y: (i64, i64)) -> StabilityPoint {
        StabilityPoint::new(
            BigRational::new(x.0.into(), x.1.into()),
            BigRational::new(y.0.into(), y.1.into()),
        )
        .unwrap()
    }

    fn bound_row(cert: &Certificate) -> &Hypothesis {
        cert.hypotheses
            .iter()
            .find(|h| h.name == "slope_bound")
            .unwrap()
    }

    #[test]
    fn a4_raw_bound_fails_where_the_strengthened_one_passes() {
        let c = ctx(3);
        let e = v(12, 10, 25);
        let sigma = pt((0, 1), (2, 1));
        let cert = certify_a4(&e, &sigma, &c, &Assumptions::gieseker());
        assert_eq!(cert.verdict, Verdict::NotApplicable);
        assert!(bound_row(&cert).instance.contains("60 <= d*y^2 = 12"));
        assert!(!bound_row(&cert).holds);

        let cert = certify_a5(&e, &sigma, &c, &Assumptions::gieseker());
        assert_eq!(cert.verdict, Verdict::Stable);
        assert!(bound_row(&cert).instance.contains("10 <= d*y^2 = 12"));
    }

    #[test]
    fn a4_stable_examples() {
        let cert = certify_a4(
            &v(12, 10, 25),
            &pt((0, 1), (5, 1)),
            &ctx(3),
            &Assumptions::gieseker(),
        );
        assert_eq!(cert.verdict, Verdict::Stable);
        assert!(bound_row(&cert).instance.contains("60 <= d*y^2 = 75"));

        let cert = certify_a4(
            &v(1, 0, 1),
            &pt((-1, 1), (2, 1)),
            &ctx(1),
            &Assumptions::gieseker(),
        );
        assert_eq!(cert.verdict, Verdict::Stable);
        assert!(bound_row(&cert).instance.contains("2 <= d*y^2 = 4"));
    }

    #[test]
    fn a5_bound_failure_gives_no_conclusion() {
        let cert = certify_a5(
            &v(12, 10, 25),
            &pt((0, 1), (1, 1)),
            &ctx(3),
            &Assumptions::gieseker(),
        );
        assert_eq!(cert.verdict, Verdict::NotApplicable);
        assert!(cert.failed_hypotheses().any(|h| h.name == "slope_bound"));
    }

    // The bound of the strengthened non-strict certificate accepts exact
    // equality; this point keeps the chamber test valid as well.
    #[test]
    fn a5_accepts_the_non_strict_boundary_inside_the_chamber() {
        let cert = certify_a5(
            &v(1, 0, 1),
            &pt((-1, 4), (1, 2)),
            &ctx(1),
            &Assumptions::gieseker(),
        );
        assert_eq!(cert.verdict, Verdict::Stable);
        assert!(bound_row(&cert).instance.contains("1/4 <= d*y^2 = 1/4"));
    }

    // At (-1, 1) on the degree-two surface the bound also holds with
    // equality, but the spherical class (1,-1,2) has charge zero there, so
    // the chamber check fails and no conclusion is drawn.
    #[test]
    fn a5_rejects_boundary_points_outside_the_chamber() {
        let cert = certify_a5(
            &v(1, 0, 1),
            &pt((-1, 1), (1, 1)),
            &ctx(1),
            &Assumptions::gieseker(),
        );
        assert_eq!(cert.verdict, Verdict::NotApplicable);
        assert!(bound_row(&cert).holds);
        assert_eq!(cert.vx.witness, Some(v(1, -1, 2)));
    }

    #[test]
    fn missing_assumption_blocks_a_stable_verdict() {
        let cert = certify_a5(
            &v(12, 10, 25),
            &pt((0, 1), (2, 1)),
            &ctx(3),
            &Assumptions::default(),
        );
        assert_eq!(cert.verdict, Verdict::NotApplicable);
        assert!(cert
            .failed_hypotheses()
            .any(|h| h.name == "assumed_gieseker_stable"));
    }

    #[test]
    fn a11_stable_example() {
        let cert = certify_a11(
            &v(1, 0, 1),
            &pt((1, 1), (1, 1)),
            &ctx(3),
            &Assumptions::mu_stable_locally_free(),
        );
        assert_eq!(cert.verdict, Verdict::Stable);
        assert!(bound_row(&cert).instance.contains("1 < d*y^2 = 3"));
    }

    #[test]
    fn a11_strict_bound_rejects_equality() {
        let cert = certify_a11(
            &v(1, 0, 1),
            &pt((1, 1), (1, 1)),
            &ctx(1),
            &Assumptions::mu_stable_locally_free(),
        );
        assert_eq!(cert.verdict, Verdict::NotApplicable);
        assert!(cert.failed_hypotheses().any(|h| h.name == "slope_bound"));
    }

    #[test]
    fn a11_failed_bound_example() {
        let cert = certify_a11(
            &v(4, 2, 1),
            &pt((3, 1), (2, 1)),
            &ctx(1),
            &Assumptions::mu_stable_locally_free(),
        );
        assert_eq!(cert.verdict, Verdict::NotApplicable);
        assert!(bound_row(&cert).instance.contains("10 < d*y^2 = 4"));
    }

    #[test]
    fn a10_full_degree_bound_is_stricter() {
        let sigma = pt((1, 1), (1, 1));
        let c = ctx(3);
        let flags = Assumptions::mu_stable_locally_free();
        // -2d lambda = 6 < 3 fails while -lambda = 1 < 3 holds
        assert_eq!(
            certify_a10(&v(1, 0, 1), &sigma, &c, &flags).verdict,
            Verdict::NotApplicable
        );
        assert_eq!(
            certify_a11(&v(1, 0, 1), &sigma, &c, &flags).verdict,
            Verdict::Stable
        );
    }

    #[test]
    fn a6_examples() {
        let c = ctx(3);
        let flags = Assumptions::mu_semistable();

        let cert = certify_a6(&v(12, 10, 25), &pt((5, 6), (3, 1)), &c, &flags);
        assert_eq!(cert.verdict, Verdict::SemistablePhase0);
        assert_eq!(cert.conclusions.len(), 2);

        let cert = certify_a6(&v(1, 0, 1), &pt((0, 1), (2, 1)), &c, &flags);
        assert_eq!(cert.verdict, Verdict::SemistablePhase0);

        let cert = certify_a6(&v(0, 0, 1), &pt((0, 1), (2, 1)), &c, &flags);
        assert_eq!(cert.verdict, Verdict::NotApplicable);

        // without the flag only the biconditional is certified
        let cert = certify_a6(
            &v(1, 0, 1),
            &pt((0, 1), (2, 1)),
            &c,
            &Assumptions::default(),
        );
        assert_eq!(cert.verdict, Verdict::StableIffMuStableLocallyFree);
    }

    #[test]
    fn region_examples() {
        let c = ctx(3);
        let e = v(12, 10, 25);
        assert_eq!(
            region_of(&e, &pt((0, 1), (2, 1)), &c).unwrap().region,
            Region::VPlus
        );
        assert_eq!(
            region_of(&e, &pt((5, 6), (1, 1)), &c).unwrap().region,
            Region::VZero
        );
        assert_eq!(
            region_of(&e, &pt((2, 1), (2, 1)), &c).unwrap().region,
            Region::Outside
        );
        assert_eq!(
            region_of(&e, &pt((2, 1), (3, 1)), &c).unwrap().region,
            Region::VMinus
        );

        assert!(region_of(&v(0, 0, 1), &pt((0, 1), (1, 1)), &c).is_err());
        assert!(region_of(&v(1, 0, 2), &pt((0, 1), (1, 1)), &ctx(1)).is_err());
    }

    #[test]
    fn region_outside_the_chamber_carries_a_witness() {
        let r = region_of(&v(12, 10, 25), &pt((0, 1), (1, 2)), &ctx(3)).unwrap();
        assert_eq!(r.region, Region::Outside);
        assert_eq!(r.vx_witness, Some(v(1, 0, 1)));
    }

    #[test]
    fn twist_region_examples() {
        let c = ctx(3);
        assert_eq!(
            region_vl_pos(&pt((1, 1), (2, 1)), &c).verdict,
            Verdict::Stable
        );
        assert_eq!(
            region_vl_pos(&pt((0, 1), (2, 1)), &c).verdict,
            Verdict::Stable
        );
        let cert = region_vl_pos(&pt((0, 1), (1, 1)), &c);
        assert_eq!(cert.verdict, Verdict::NotApplicable);
        assert!(cert.hypotheses[0].instance.contains("2 <= y^2 = 1"));
    }

    #[test]
    fn moduli_classification_examples() {
        let m = classify_fine_moduli(&v(12, 10, 25), &ctx(3));
        assert_eq!(m.verdict, ModuliVerdict::MuStableLocallyFree);
        assert!(m.fine && !m.rank_square);

        let m = classify_fine_moduli(&v(4, 2, 1), &ctx(1));
        assert_eq!(m.verdict, ModuliVerdict::SquareAmbiguous);
        assert_eq!(m.witness, Some(v(2, 1, 1)));

        let m = classify_fine_moduli(&v(9, 3, 2), &ctx(1));
        assert_eq!(m.verdict, ModuliVerdict::NotApplicable);

        let m = classify_fine_moduli(&v(12, 10, 24), &ctx(3));
        assert_eq!(m.verdict, ModuliVerdict::NotFine);
        assert_eq!(m.gcd, BigInt::from(12));
    }

    #[test]
    fn square_rank_without_integral_witness_is_locally_free() {
        // rank 9, witness needs 3 | s + 1 = 2, impossible
        let m = classify_fine_moduli(&v(9, 3, 1), &ctx(1));
        assert_eq!(m.verdict, ModuliVerdict::MuStableLocallyFree);
        assert!(m.rank_square && m.witness.is_none());

        // rank 25 with witness (5, 2, 1)
        let m = classify_fine_moduli(&v(25, 10, 4), &ctx(1));
        assert_eq!(m.verdict, ModuliVerdict::SquareAmbiguous);
        assert_eq!(m.witness, Some(v(5, 2, 1)));
    }

    #[test]
    fn boundary_decomposition_examples() {
        let c = ctx(2);
        let dec = boundary_decomposition(&v(1, 0, 1), &c).unwrap();
        assert_eq!(dec.plus_factors[0].vector, v(1, 0, 1));
        assert_eq!(dec.plus_factors[1].vector, v(-1, 0, 0));
        assert_eq!(dec.plus_sum(), MukaiVector::point_class());
        assert_eq!(dec.minus_sum(), MukaiVector::point_class());

        let dec = boundary_decomposition(&v(2, 1, 1), &ctx(1)).unwrap();
        assert_eq!(dec.plus_sum(), MukaiVector::point_class());
        assert_eq!(dec.minus_sum(), MukaiVector::point_class());

        assert!(boundary_decomposition(&v(0, 0, 1), &c).is_err());
    }

    #[test]
    fn chi_positivity_examples() {
        let c = ctx(1);
        let id = chi_positivity(&v(2, 1, 1), &v(4, 2, 1), &c).unwrap();
        assert_eq!(id.chi, BigInt::from(2));
        assert_eq!(id.closed_form, BigRational::new(1.into(), 4.into()));

        let id = chi_positivity(&v(1, 0, 1), &v(4, 2, 1), &c).unwrap();
        assert_eq!(id.chi, BigInt::from(5));
        assert_eq!(id.closed_form, BigRational::new(5.into(), 4.into()));

        assert!(chi_positivity(&v(1, 0, 1), &v(1, 0, 1), &c).is_err());
    }

    fn admissible_vec() -> impl Strategy<Value = (i64, MukaiVector)> {
        (1i64..=3, 1i64..=5, -6i64..=6, -6i64..=6).prop_filter_map(
            "needs <v,v> >= -2",
            |(d, r, n, s)| {
                let sq = 2 * d * n * n - 2 * r * s;
                (sq >= -2).then(|| (d, MukaiVector::new(r, n, s)))
            },
        )
    }

    fn small_point() -> impl Strategy<Value = StabilityPoint> {
        (-12i64..=12, 1i64..=4, 1i64..=12, 1i64..=4).prop_map(|(xn, xd, yn, yd)| {
            StabilityPoint::new(
                BigRational::new(xn.into(), xd.into()),
                BigRational::new(yn.into(), yd.into()),
            )
            .unwrap()
        })
    }

    proptest! {
        // region membership and the certificates are two views of one bound
        #[test]
        fn plus_region_matches_the_non_strict_certificate(
            dv in admissible_vec(), sigma in small_point()
        ) {
            let (d, a) = dv;
            let c = ctx(d);
            let region = region_of(&a, &sigma, &c).unwrap();
            if region.region == Region::VPlus {
                let cert = certify_a5(&a, &sigma, &c, &Assumptions::gieseker());
                prop_assert_eq!(cert.verdict, Verdict::Stable);
            }
            if region.region == Region::VMinus {
                let cert = certify_a11(&a, &sigma, &c, &Assumptions::mu_stable_locally_free());
                let strict = bound_row(&cert).holds;
                prop_assert_eq!(cert.verdict == Verdict::Stable, strict);
            }
        }

        #[test]
        fn stable_verdicts_are_monotone_in_y(
            dv in admissible_vec(), sigma in small_point(), bump in 1i64..=6
        ) {
            let (d, a) = dv;
            let c = ctx(d);
            let cert = certify_a5(&a, &sigma, &c, &Assumptions::gieseker());
            if cert.verdict == Verdict::Stable {
                let higher = StabilityPoint::new(
                    sigma.x().clone(),
                    sigma.y() + BigRational::from_integer(bump.into()),
                ).unwrap();
                prop_assert!(in_vx(&higher, &c).holds);
                let cert2 = certify_a5(&a, &higher, &c, &Assumptions::gieseker());
                prop_assert_eq!(cert2.verdict, Verdict::Stable);
            }
        }

        #[test]
        fn non_square_rank_never_reports_ambiguity(
            k in 1i64..=4, t in 1i64..=5, u in -5i64..=5, d in 1i64..=3
        ) {
            let c = ctx(d);
            // (k t^2, k t u, d k u^2) is isotropic of positive rank
            let a = MukaiVector::new(k * t * t, k * t * u, d * k * u * u);
            let m = classify_fine_moduli(&a, &c);
            if m.verdict == ModuliVerdict::SquareAmbiguous {
                prop_assert!(m.rank_square);
                let w = m.witness.unwrap();
                prop_assert!(is_spherical(&w, &c));
                let l = a.r.sqrt();
                prop_assert_eq!(w.scaled(&l), &a + &MukaiVector::point_class());
            }
        }

        #[test]
        fn boundary_factor_sums_hit_the_point_class(
            sph in (1i64..=3).prop_flat_map(|d| {
                (1i64..=6, -8i64..=8).prop_filter_map("needs integral s", move |(r, n)| {
                    let num = d * n * n + 1;
                    (num % r == 0).then(|| (d, MukaiVector::new(r, n, num / r)))
                })
            })
        ) {
            let (d, a) = sph;
            let c = ctx(d);
            let dec = boundary_decomposition(&a, &c).unwrap();
            prop_assert_eq!(dec.plus_sum(), MukaiVector::point_class());
            prop_assert_eq!(dec.minus_sum(), MukaiVector::point_class());
        }
    }
}
