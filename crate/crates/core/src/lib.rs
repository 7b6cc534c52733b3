//! Exact-arithmetic stability computations on the numerical Grothendieck
//! lattice of a projective K3 surface of Picard rank one.
//!
//! The surface enters only through its half-degree d (the ample generator L
//! has L^2 = 2d), classes are integer triples in Z + ZL + Z, and stability
//! parameters are rational points (x, y) with y > 0 on the ample line. On
//! this data the crate computes, with no floating point anywhere:
//!
//! - the Mukai pairing, spherical reflections and divisibility tests
//!   ([`lattice`]);
//! - central charges, phase comparisons, twisted Hilbert polynomials and the
//!   geometric-chamber test ([`charge`]);
//! - certificates for the stability theorems, chamber predicates, the
//!   fine-moduli classifier and boundary decompositions ([`criteria`]);
//! - a brute-force destabilizer search, wall curves and region scans that
//!   cross-check the certificates ([`oracle`]);
//! - CSV/JSON/SVG emission of all results ([`emit`]).
//!
//! ```
//! use k3stab::{certify_a5, Assumptions, MukaiVector, StabilityPoint, SurfaceContext, Verdict};
//! use num::BigRational;
//!
//! let ctx = SurfaceContext::new(3)?;
//! let v = MukaiVector::new(12, 10, 25);
//! let sigma = StabilityPoint::new(
//!     BigRational::new(0.into(), 1.into()),
//!     BigRational::new(2.into(), 1.into()),
//! )?;
//! let cert = certify_a5(&v, &sigma, &ctx, &Assumptions::gieseker());
//! assert_eq!(cert.verdict, Verdict::Stable);
//! # Ok::<(), k3stab::Error>(())
//! ```

pub mod charge;
pub mod criteria;
pub mod emit;
pub mod error;
pub mod lattice;
pub mod oracle;

pub use charge::{
    central_charge, compare_gieseker, compare_phases, fmt_rational, in_vx, in_vx_brute_force,
    lambda, n_function, n_function_at, parse_rational, twisted_polynomial,
    twisted_polynomial_via_pairing, ExactComplex, StabilityPoint, TwistedPolynomial, VxVerdict,
};
pub use criteria::{
    boundary_decomposition, certify_a10, certify_a11, certify_a4, certify_a5, certify_a6,
    chi_positivity, classify_fine_moduli, region_of, region_vl_pos, Assumptions,
    BoundaryDecomposition, Certificate, ChiIdentity, Hypothesis, ModuliClassification,
    ModuliVerdict, Region, RegionVerdict, TheoremId, Verdict,
};
pub use error::{Error, Result};
pub use lattice::{
    euler_form, fine_moduli_gcd, is_isotropic, is_spherical, mukai_pairing, self_pairing,
    spherical_reflect, MukaiVector, SurfaceContext,
};
pub use oracle::{
    enumerate_destabilizers, scan_region, verify_certificate, wall_locus, DestabilizerCandidate,
    Scan, ScanCell, ScanGrid, SearchBounds, VerifyOutcome, WallCurve, WallSample,
};
