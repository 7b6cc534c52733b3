//! Shared fixtures for the benchmark suite.

use num::BigRational;

use k3stab::{MukaiVector, StabilityPoint, SurfaceContext};

pub fn degree_six() -> SurfaceContext {
    SurfaceContext::new(3).expect("valid half-degree")
}

pub fn moduli_vector() -> MukaiVector {
    MukaiVector::new(12, 10, 25)
}

pub fn interior_point() -> StabilityPoint {
    StabilityPoint::new(
        BigRational::new(0.into(), 1.into()),
        BigRational::new(2.into(), 1.into()),
    )
    .expect("y > 0")
}

/// A deterministic batch of lattice classes with components in [-bound, bound].
pub fn class_batch(bound: i64, count: usize) -> Vec<MukaiVector> {
    let mut state = 0x2545f4914f6cdd1du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % (2 * bound as u64 + 1)) as i64 - bound
    };
    (0..count)
        .map(|_| MukaiVector::new(next(), next(), next()))
        .collect()
}
