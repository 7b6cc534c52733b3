//! Independent brute-force verification: bounded enumeration of numerical
//! destabilizer candidates, wall curves cut out by the N-function, and grid
//! scans suitable for CSV and SVG emission.
//!
//! The enumeration checks necessary numerical conditions for destabilization.
//! An empty result is consistency evidence, never a proof: a numerical
//! candidate need not come from an actual subobject, and conversely the
//! vocabulary of a clean run is "no numerical destabilizer found".

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use rayon::prelude::*;

use crate::charge::{compare_gieseker, in_vx, lambda, n_function_at, re_charge_at, StabilityPoint};
use crate::criteria::{
    certify_a10, certify_a11, certify_a4, certify_a5, certify_a6, region_of, Assumptions,
    Certificate, Region, TheoremId, Verdict,
};
use crate::error::{Error, Result};
use crate::lattice::{mukai_pairing, MukaiVector, SurfaceContext};

/// Bounds for the destabilizer search.
///
/// Only the rank range is prescribed; the ranges for the remaining two
/// components are derived per query from the lambda window and from the
/// monotonicity of Re Z in the last component, and are never cached across
/// queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest candidate rank, inclusive.
    pub max_rank: u32,
    /// Keep only candidates that could underlie a subobject of a classically
    /// stable sheaf: on the lambda > 0 side the reduced twisted polynomial of
    /// the candidate must compare strictly below the target's, and on the
    /// lambda < 0 side quotient slopes must strictly exceed the target's.
    /// Both constraints restate the quoted subobject and quotient
    /// inequalities; disable for a raw phase-only search.
    pub subobject_filter: bool,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self {
            max_rank: 20,
            subobject_filter: true,
        }
    }
}

impl SearchBounds {
    pub fn with_max_rank(max_rank: u32) -> Self {
        Self {
            max_rank,
            ..Self::default()
        }
    }
}

/// A candidate class violating (or exactly matching) the phase of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestabilizerCandidate {
    pub vector: MukaiVector,
    /// The exact value of N(candidate, target) at the query point.
    pub n_value: BigRational,
    /// N = 0: the candidate sits on a wall through the point rather than
    /// strictly violating the phase inequality.
    pub on_wall: bool,
}

impl DestabilizerCandidate {
    pub fn is_strict(&self) -> bool {
        !self.on_wall
    }
}

fn rat(i: &BigInt) -> BigRational {
    BigRational::from_integer(i.clone())
}

/// Enumerate every integer class w with 1 <= r_w <= max_rank, <w,w> >= -2,
/// lambda(w) in the half-open window pinned by lambda(v), and a non-strict
/// phase violation N(w, v) <= 0 on the upper side (>= 0 on the lower side).
///
/// The n-range per rank follows from the lambda window. The s-range is
/// finite because <w,w> >= -2 bounds s from above while the phase inequality
/// bounds it from below (Re Z is strictly decreasing in s). Output is sorted
/// lexicographically by (r, n, s) regardless of the execution schedule.
pub fn enumerate_destabilizers(
    v: &MukaiVector,
    sigma: &StabilityPoint,
    bounds: &SearchBounds,
    ctx: &SurfaceContext,
) -> Result<Vec<DestabilizerCandidate>> {
    let lam_v = lambda(v, sigma);
    if lam_v.is_zero() {
        return Err(Error::LambdaZero);
    }
    let vx = in_vx(sigma, ctx);
    if !vx.holds {
        return Err(Error::OutsideGeometricChamber(vx.witness.unwrap()));
    }

    let upper = lam_v.is_positive();
    let x = sigma.x().clone();
    let y_sq = sigma.y_squared();
    let re_v = re_charge_at(v, &x, &y_sq, ctx);

    let per_rank: Vec<Vec<DestabilizerCandidate>> = (1..=i64::from(bounds.max_rank))
        .into_par_iter()
        .map(|r| {
            let r_big = BigInt::from(r);
            let rx = rat(&r_big) * &x;
            let (n_lo, n_hi) = if upper {
                // r x < n <= r x + lambda_v
                (
                    rx.floor().to_integer() + 1,
                    (&rx + &lam_v).floor().to_integer(),
                )
            } else {
                // r x + lambda_v <= n < r x
                (
                    (&rx + &lam_v).ceil().to_integer(),
                    rx.ceil().to_integer() - 1,
                )
            };

            let mut found = Vec::new();
            let mut n = n_lo.clone();
            while n <= n_hi {
                let column = column_filter(&r_big, &n, v, upper, bounds);
                if matches!(column, ColumnFilter::RejectAll) {
                    n += 1;
                    continue;
                }
                let lam_w = rat(&n) - &rx;
                // <w,w> >= -2 caps s at (d n^2 + 1) / r
                let mut s_hi = ((rat(ctx.d()) * rat(&n) * rat(&n) + BigRational::one())
                    / rat(&r_big))
                .floor()
                .to_integer();
                if let ColumnFilter::CapS(cap) = &column {
                    s_hi = s_hi.min(cap.clone());
                }
                // phase violation floors s: Re Z(w) <= lambda_w Re Z(v) / lambda_v
                let head = BigRational::from_integer(ctx.degree()) * rat(&n) * &x
                    - rat(&r_big) * rat(ctx.d()) * (&x * &x - &y_sq);
                let s_lo = (&head - &lam_w * &re_v / &lam_v).ceil().to_integer();

                let mut s = s_lo.clone();
                while s <= s_hi {
                    let w = MukaiVector {
                        r: r_big.clone(),
                        n: n.clone(),
                        s: s.clone(),
                    };
                    if &w != v {
                        let n_val = n_function_at(&w, v, &x, &y_sq, ctx);
                        let on_wall = n_val.is_zero();
                        found.push(DestabilizerCandidate {
                            vector: w,
                            n_value: n_val,
                            on_wall,
                        });
                    }
                    s += 1;
                }
                n += 1;
            }
            found
        })
        .collect();

    Ok(per_rank.into_iter().flatten().collect())
}

enum ColumnFilter {
    AcceptAll,
    RejectAll,
    /// Accept only the last component up to this inclusive cap.
    CapS(BigInt),
}

/// The subobject-shape filter resolved per (rank, slope) column. The reduced
/// polynomial comparison at beta = 0, omega = L is lexicographic in (slope,
/// s/r), so a whole column is decided by the slope cross term alone unless
/// the slopes tie, in which case the filter caps s at the largest integer
/// with s_w / r_w < s_v / r_v.
fn column_filter(
    r_w: &BigInt,
    n_w: &BigInt,
    v: &MukaiVector,
    upper: bool,
    bounds: &SearchBounds,
) -> ColumnFilter {
    if !bounds.subobject_filter || !v.r.is_positive() {
        return ColumnFilter::AcceptAll;
    }
    // positive iff slope of the candidate is strictly below slope of v
    let cross = r_w * &v.n - &v.r * n_w;
    if upper {
        if cross.is_positive() {
            ColumnFilter::AcceptAll
        } else if cross.is_negative() {
            ColumnFilter::RejectAll
        } else {
            let cap = (BigRational::new(&v.s * r_w, v.r.clone()).ceil()
                - BigRational::one())
            .to_integer();
            ColumnFilter::CapS(cap)
        }
    } else if cross.is_negative() {
        // quotients carry strictly larger slope
        ColumnFilter::AcceptAll
    } else {
        ColumnFilter::RejectAll
    }
}

/// The same filter in its definitional per-candidate form, used by the naive
/// reference enumerator.
fn admits_subobject_shape(
    w: &MukaiVector,
    v: &MukaiVector,
    upper: bool,
    bounds: &SearchBounds,
    ctx: &SurfaceContext,
) -> bool {
    if !bounds.subobject_filter || !v.r.is_positive() {
        return true;
    }
    if upper {
        // subobjects of a classically stable class compare strictly below it
        matches!(
            compare_gieseker(w, v, &BigRational::zero(), &BigRational::one(), ctx),
            Ok(std::cmp::Ordering::Less)
        )
    } else {
        // quotients carry strictly larger slope
        (&w.n * &v.r - &v.n * &w.r).is_positive()
    }
}

/// Outcome of cross-checking a Stable certificate against the enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    /// No strict violator in bounds and the certificate re-derives cleanly.
    /// Wall contacts (N = 0) are listed; they do not falsify a non-strict
    /// certificate.
    NoNumericalDestabilizer { on_wall: Vec<DestabilizerCandidate> },
    /// A candidate with a strict phase violation falsifies the verdict.
    StrictViolator { candidate: DestabilizerCandidate },
    /// The certificate does not re-derive (a forged or stale verdict) and no
    /// in-bounds candidate witnesses the failure.
    Unconfirmed { reason: String },
}

impl VerifyOutcome {
    pub fn confirmed(&self) -> bool {
        matches!(self, VerifyOutcome::NoNumericalDestabilizer { .. })
    }
}

impl fmt::Display for VerifyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyOutcome::NoNumericalDestabilizer { on_wall } => {
                if on_wall.is_empty() {
                    write!(f, "no numerical destabilizer found")
                } else {
                    write!(
                        f,
                        "no numerical destabilizer found ({} wall contact(s))",
                        on_wall.len()
                    )
                }
            }
            VerifyOutcome::StrictViolator { candidate } => {
                write!(
                    f,
                    "falsified by {} with N = {}",
                    candidate.vector,
                    crate::charge::fmt_rational(&candidate.n_value)
                )
            }
            VerifyOutcome::Unconfirmed { reason } => write!(f, "unconfirmed: {reason}"),
        }
    }
}

/// Cross-check a Stable certificate of one of the slope-bound families
/// against the destabilizer search: re-derive the certificate, then demand
/// that no in-bounds candidate violates the phase inequality strictly.
pub fn verify_certificate(
    v: &MukaiVector,
    sigma: &StabilityPoint,
    cert: &Certificate,
    bounds: &SearchBounds,
    ctx: &SurfaceContext,
) -> Result<VerifyOutcome> {
    if cert.verdict != Verdict::Stable {
        return Err(Error::CertificateNotStable(cert.verdict.to_string()));
    }
    let assume = assumptions_from_labels(&cert.assumptions);
    let rederived = match cert.theorem {
        TheoremId::A4 => certify_a4(v, sigma, ctx, &assume),
        TheoremId::A5 => certify_a5(v, sigma, ctx, &assume),
        TheoremId::A10 => certify_a10(v, sigma, ctx, &assume),
        TheoremId::A11 => certify_a11(v, sigma, ctx, &assume),
        other => return Err(Error::CertificateNotSearchable(other.to_string())),
    };
    let forged = rederived.verdict != Verdict::Stable;

    let candidates = match enumerate_destabilizers(v, sigma, bounds, ctx) {
        Ok(c) => c,
        Err(e) if forged => {
            return Ok(VerifyOutcome::Unconfirmed {
                reason: format!("certificate does not re-derive and the search is undefined: {e}"),
            });
        }
        Err(e) => return Err(e),
    };

    if let Some(strict) = candidates.iter().find(|c| c.is_strict()) {
        return Ok(VerifyOutcome::StrictViolator {
            candidate: strict.clone(),
        });
    }
    if forged {
        let failed: Vec<&str> = rederived.failed_hypotheses().map(|h| h.name).collect();
        return Ok(VerifyOutcome::Unconfirmed {
            reason: format!(
                "certificate does not re-derive (failed: {}) and no in-bounds candidate was found",
                failed.join(", ")
            ),
        });
    }
    Ok(VerifyOutcome::NoNumericalDestabilizer {
        on_wall: candidates.into_iter().filter(|c| c.on_wall).collect(),
    })
}

fn assumptions_from_labels(labels: &[&str]) -> Assumptions {
    Assumptions {
        gieseker_stable: labels.contains(&"gieseker-stable"),
        mu_stable_locally_free: labels.contains(&"mu-stable-locally-free"),
        mu_semistable: labels.contains(&"mu-semistable"),
    }
}

/// The zero locus of N(a, e) as an exact quadratic curve
/// xx x^2 + xy xy + yy y^2 + cx x + cy y + c0 = 0.
///
/// On the ample line the expansion never produces cross or linear-y terms,
/// and the two quadratic coefficients agree, so every wall is a circle
/// centered on the real axis or a vertical line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCurve {
    pub a: MukaiVector,
    pub e: MukaiVector,
    pub xx: BigRational,
    pub xy: BigRational,
    pub yy: BigRational,
    pub cx: BigRational,
    pub cy: BigRational,
    pub c0: BigRational,
}

/// One exact point of a wall. The curve depends on y only through y^2, so a
/// point is stored as (x, y^2); y itself is included when it is rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallSample {
    pub x: BigRational,
    pub y_squared: BigRational,
    pub y: Option<BigRational>,
}

impl WallCurve {
    /// Evaluate the curve polynomial at a point given by (x, y^2).
    pub fn eval_at(&self, x: &BigRational, y_squared: &BigRational) -> BigRational {
        debug_assert!(self.xy.is_zero() && self.cy.is_zero());
        &self.xx * x * x + &self.yy * y_squared + &self.cx * x + &self.c0
    }

    pub fn is_line(&self) -> bool {
        self.xx.is_zero()
    }

    /// Center and squared radius when the wall is a proper circle.
    pub fn circle(&self) -> Option<(BigRational, BigRational)> {
        if self.xx.is_zero() {
            return None;
        }
        let two = BigRational::from_integer(2.into());
        let center = -&self.cx / (&two * &self.xx);
        let r_squared = &center * &center - &self.c0 / &self.xx;
        Some((center, r_squared))
    }

    /// Up to k exact points on the wall inside the upper half plane. Empty
    /// when the locus misses it (negative squared radius, or a constant
    /// nonzero N). Every returned point satisfies N = 0 exactly.
    pub fn sample(&self, k: usize, ctx: &SurfaceContext) -> Vec<WallSample> {
        let mut out = Vec::new();
        if k == 0 {
            return out;
        }
        if let Some((center, r_squared)) = self.circle() {
            if !r_squared.is_positive() {
                return out;
            }
            // |x - center| <= delta < sqrt(r^2) keeps y^2 positive
            let delta = &r_squared / (&r_squared + BigRational::one());
            for i in 0..k {
                let t = if k == 1 {
                    BigRational::zero()
                } else {
                    BigRational::new(
                        BigInt::from(2 * i as i64 - (k as i64 - 1)),
                        (k as i64 - 1).into(),
                    )
                };
                let x = &center + &delta * &t;
                let off = &x - &center;
                let y_squared = &r_squared - &off * &off;
                out.push(self.make_sample(x, y_squared, ctx));
            }
        } else if !self.cx.is_zero() {
            let x = -&self.c0 / &self.cx;
            for i in 1..=k {
                let y = BigRational::from_integer(BigInt::from(i as i64));
                out.push(self.make_sample(x.clone(), &y * &y, ctx));
            }
        }
        out
    }

    fn make_sample(
        &self,
        x: BigRational,
        y_squared: BigRational,
        ctx: &SurfaceContext,
    ) -> WallSample {
        debug_assert!(y_squared.is_positive());
        let n = n_function_at(&self.a, &self.e, &x, &y_squared, ctx);
        assert!(n.is_zero(), "wall sample must satisfy N = 0 exactly");
        let y = rational_sqrt(&y_squared);
        WallSample { x, y_squared, y }
    }
}

/// Exact square root of a nonnegative rational, when it exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let ns = q.numer().sqrt();
    let ds = q.denom().sqrt();
    (&ns * &ns == *q.numer() && &ds * &ds == *q.denom()).then(|| BigRational::new(ns, ds))
}

/// Expand N(a, e) symbolically into its wall curve. Rejects proportional
/// pairs, whose N vanishes identically.
pub fn wall_locus(a: &MukaiVector, e: &MukaiVector, ctx: &SurfaceContext) -> Result<WallCurve> {
    // the three 2x2 minors of the component matrix
    let k = &a.r * &e.n - &e.r * &a.n;
    let dm = &e.r * &a.s - &a.r * &e.s;
    let fm = &a.n * &e.s - &e.n * &a.s;
    if k.is_zero() && dm.is_zero() && fm.is_zero() {
        return Err(Error::ProportionalPair);
    }
    let quad = rat(&(ctx.d() * &k));
    Ok(WallCurve {
        a: a.clone(),
        e: e.clone(),
        xx: quad.clone(),
        xy: BigRational::zero(),
        yy: quad,
        cx: rat(&dm),
        cy: BigRational::zero(),
        c0: rat(&fm),
    })
}

/// A rectangular rational grid with y strictly positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanGrid {
    pub x0: BigRational,
    pub x1: BigRational,
    pub y0: BigRational,
    pub y1: BigRational,
    pub step: BigRational,
}

impl ScanGrid {
    fn axis(from: &BigRational, to: &BigRational, step: &BigRational) -> Vec<BigRational> {
        let mut out = Vec::new();
        let mut t = from.clone();
        while &t <= to {
            out.push(t.clone());
            t += step;
        }
        out
    }
}

/// One grid point with every verdict attached to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanCell {
    pub x: BigRational,
    pub y: BigRational,
    pub in_vx: bool,
    pub vx_witness: Option<MukaiVector>,
    pub region: Region,
    pub certificates: Vec<(TheoremId, Verdict)>,
}

/// A completed region scan of one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scan {
    pub vector: MukaiVector,
    pub grid: ScanGrid,
    pub cells: Vec<ScanCell>,
}

/// Evaluate chamber membership, the region verdict and the applicable
/// certificates on every grid point. The certificate column asserts the
/// matching sheaf hypothesis for its side of the wall, so the scan shows the
/// numerical bounds only.
pub fn scan_region(v: &MukaiVector, grid: &ScanGrid, ctx: &SurfaceContext) -> Result<Scan> {
    if !grid.y0.is_positive() {
        return Err(Error::GridNotPositive);
    }
    if !grid.step.is_positive() {
        return Err(Error::GridStepNotPositive);
    }
    // fail fast on classes the region predicate rejects
    let probe = StabilityPoint::new(grid.x0.clone(), grid.y0.clone())?;
    region_of(v, &probe, ctx)?;

    let xs = ScanGrid::axis(&grid.x0, &grid.x1, &grid.step);
    let ys = ScanGrid::axis(&grid.y0, &grid.y1, &grid.step);

    let cells: Vec<Vec<ScanCell>> = xs
        .par_iter()
        .map(|x| {
            ys.iter()
                .map(|y| {
                    let sigma = StabilityPoint::new(x.clone(), y.clone()).expect("y > 0 on grid");
                    let vx = in_vx(&sigma, ctx);
                    let region = region_of(v, &sigma, ctx).expect("preconditions checked above");
                    let lam = lambda(v, &sigma);
                    let certificates = if lam.is_positive() {
                        let f = Assumptions::gieseker();
                        vec![
                            (TheoremId::A4, certify_a4(v, &sigma, ctx, &f).verdict),
                            (TheoremId::A5, certify_a5(v, &sigma, ctx, &f).verdict),
                        ]
                    } else if lam.is_negative() {
                        let f = Assumptions::mu_stable_locally_free();
                        vec![
                            (TheoremId::A10, certify_a10(v, &sigma, ctx, &f).verdict),
                            (TheoremId::A11, certify_a11(v, &sigma, ctx, &f).verdict),
                        ]
                    } else {
                        let f = Assumptions::mu_semistable();
                        vec![(TheoremId::A6, certify_a6(v, &sigma, ctx, &f).verdict)]
                    };
                    ScanCell {
                        x: x.clone(),
                        y: y.clone(),
                        in_vx: vx.holds,
                        vx_witness: vx.witness,
                        region: region.region,
                        certificates,
                    }
                })
                .collect()
        })
        .collect();

    Ok(Scan {
        vector: v.clone(),
        grid: grid.clone(),
        cells: cells.into_iter().flatten().collect(),
    })
}

/// Naive full-box reference enumerator used by the suites: scan every triple
/// with 1 <= r <= box_bound and |n|, |s| <= box_bound and apply the defining
/// predicates directly, with no derived windows.
pub fn enumerate_destabilizers_naive(
    v: &MukaiVector,
    sigma: &StabilityPoint,
    box_bound: i64,
    subobject_filter: bool,
    ctx: &SurfaceContext,
) -> Result<Vec<DestabilizerCandidate>> {
    let lam_v = lambda(v, sigma);
    if lam_v.is_zero() {
        return Err(Error::LambdaZero);
    }
    let vx = in_vx(sigma, ctx);
    if !vx.holds {
        return Err(Error::OutsideGeometricChamber(vx.witness.unwrap()));
    }
    let upper = lam_v.is_positive();
    let bounds = SearchBounds {
        max_rank: box_bound as u32,
        subobject_filter,
    };
    let x = sigma.x().clone();
    let y_sq = sigma.y_squared();

    let mut out = Vec::new();
    for r in 1..=box_bound {
        for n in -box_bound..=box_bound {
            for s in -box_bound..=box_bound {
                let w = MukaiVector::new(r, n, s);
                if &w == v {
                    continue;
                }
                if mukai_pairing(&w, &w, ctx) < BigInt::from(-2) {
                    continue;
                }
                let lam_w = lambda(&w, sigma);
                let in_window = if upper {
                    lam_w.is_positive() && lam_w <= lam_v
                } else {
                    lam_w.is_negative() && lam_v <= lam_w
                };
                if !in_window {
                    continue;
                }
                let n_val = n_function_at(&w, v, &x, &y_sq, ctx);
                let violates = if upper {
                    !n_val.is_positive()
                } else {
                    !n_val.is_negative()
                };
                if !violates {
                    continue;
                }
                if !admits_subobject_shape(&w, v, upper, &bounds, ctx) {
                    continue;
                }
                let on_wall = n_val.is_zero();
                out.push(DestabilizerCandidate {
                    vector: w,
                    n_value: n_val,
                    on_wall,
                });
            }
        }
    }
    Ok(out)
}
