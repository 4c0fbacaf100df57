//! Real quadratic fields, Frobenius data in k(ζ₁₂₀)/k and ramification sets
//! of quaternion algebras whose unit groups act freely on the bidisk.

mod cyclotomic;
mod field;
mod ramification;

use std::collections::BTreeSet;

use thiserror::Error;

pub use cyclotomic::{generated_subgroup, CyclotomicContext, ResidueSet, SubgroupHandle, MODULUS};
pub use field::{split_prime, PrimeIdeal, RealQuadraticField, Splitting};
pub use ramification::{
    class_tag, construct_s, construct_s_with, enumerate_classes, enumerate_classes_with,
    verify_torsion_free, ClassTag, Construction, EnumerationOptions, FieldScope, RamificationSet,
    TorsionCheck, DEFAULT_MAX_EXTRA, SCAN_CAP,
};

use crate::arith::{euler_phi, lcm_all};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuaternionError {
    #[error("d={0} does not define a real quadratic field (need squarefree d > 1)")]
    InvalidField(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{ideal} is not a prime ideal of Q(sqrt {d})")]
    InvalidIdeal { d: i64, ideal: PrimeIdeal },
    #[error("prime {0} divides 120")]
    BadPrime(u64),
    #[error("prime {0} ramifies in k")]
    RamifiedPrime(u64),
    #[error("ramification set has odd cardinality {0}")]
    OddCardinality(usize),
    #[error("ramification set is empty")]
    Empty,
    #[error("no witness prime below {0}")]
    ScanExhausted(u64),
    #[error("prime bound {0} is below 7")]
    BoundTooSmall(u64),
    #[error("cannot parse class tag: {0}")]
    Parse(String),
}

/// The orders m ≥ 3 with φ(m) | 4, i.e. the possible orders of torsion
/// elements in a quaternion algebra over a real quadratic field.
pub fn torsion_orders() -> BTreeSet<u64> {
    // φ(m) ≥ √(m/2), so nothing beyond m = 32 can qualify.
    (3..=32).filter(|&m| 4 % euler_phi(m) == 0).collect()
}

/// lcm of [`torsion_orders`]; the conductor of the cyclotomic field used in
/// the construction.
pub fn torsion_lcm() -> u64 {
    lcm_all(torsion_orders().into_iter().map(|m| m as i64)) as u64
}
