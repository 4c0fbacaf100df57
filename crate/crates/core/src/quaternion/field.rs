use std::fmt;

use serde::Serialize;

use super::QuaternionError;
use crate::arith::{is_prime, is_squarefree, kronecker};

/// A real quadratic field ℚ(√d), d squarefree and greater than one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RealQuadraticField {
    d: i64,
    discriminant: i64,
}

impl RealQuadraticField {
    pub fn new(d: i64) -> Result<Self, QuaternionError> {
        if d <= 1 || !is_squarefree(d) {
            return Err(QuaternionError::InvalidField(d));
        }
        let discriminant = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(Self { d, discriminant })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// Whether the field sits inside ℚ(ζ₁₂₀), i.e. its conductor divides 120.
    pub fn contained_in_z120(&self) -> bool {
        120 % self.discriminant == 0
    }

    pub fn splitting(&self, p: u64) -> Splitting {
        match kronecker(self.discriminant, p) {
            1 => Splitting::Split,
            -1 => Splitting::Inert,
            _ => Splitting::Ramified,
        }
    }
}

impl fmt::Display for RealQuadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt {})", self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A nonzero prime ideal of the ring of integers of a real quadratic field,
/// identified by the rational prime below it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub residue_degree: u8,
    pub conjugate_index: u8,
    pub ramified: bool,
}

impl PrimeIdeal {
    pub fn split(p: u64, conjugate_index: u8) -> Self {
        Self {
            p,
            residue_degree: 1,
            conjugate_index,
            ramified: false,
        }
    }

    pub fn inert(p: u64) -> Self {
        Self {
            p,
            residue_degree: 2,
            conjugate_index: 0,
            ramified: false,
        }
    }

    pub fn ramified(p: u64) -> Self {
        Self {
            p,
            residue_degree: 1,
            conjugate_index: 0,
            ramified: true,
        }
    }

    /// Checks the ideal against the actual decomposition of `p` in `field`.
    pub fn validate(&self, field: &RealQuadraticField) -> Result<(), QuaternionError> {
        if !is_prime(self.p) {
            return Err(QuaternionError::NotPrime(self.p));
        }
        let ok = split_prime(field, self.p)?.contains(self);
        if ok {
            Ok(())
        } else {
            Err(QuaternionError::InvalidIdeal {
                d: field.d(),
                ideal: *self,
            })
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.residue_degree, self.ramified) {
            (2, _) => write!(f, "({},f2)", self.p),
            (_, true) => write!(f, "({},f1)", self.p),
            _ => write!(f, "({},f1,#{})", self.p, self.conjugate_index),
        }
    }
}

/// Decomposition of the rational prime `p` in `field`, ordered by conjugate index.
pub fn split_prime(field: &RealQuadraticField, p: u64) -> Result<Vec<PrimeIdeal>, QuaternionError> {
    if !is_prime(p) {
        return Err(QuaternionError::NotPrime(p));
    }
    Ok(match field.splitting(p) {
        Splitting::Split => vec![PrimeIdeal::split(p, 0), PrimeIdeal::split(p, 1)],
        Splitting::Inert => vec![PrimeIdeal::inert(p)],
        Splitting::Ramified => vec![PrimeIdeal::ramified(p)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_d() {
        for d in [-5, 0, 1, 4, 12, 18] {
            assert!(RealQuadraticField::new(d).is_err(), "d={d}");
        }
    }

    #[test]
    fn discriminants() {
        assert_eq!(RealQuadraticField::new(5).unwrap().discriminant(), 5);
        assert_eq!(RealQuadraticField::new(7).unwrap().discriminant(), 28);
        assert_eq!(RealQuadraticField::new(2).unwrap().discriminant(), 8);
        let inside: Vec<i64> = (2..40)
            .filter_map(|d| RealQuadraticField::new(d).ok())
            .filter(|k| k.contained_in_z120())
            .map(|k| k.d())
            .collect();
        assert_eq!(inside, vec![2, 3, 5, 6, 10, 15, 30]);
    }

    #[test]
    fn splitting_examples() {
        let k = RealQuadraticField::new(5).unwrap();
        assert_eq!(
            split_prime(&k, 11).unwrap(),
            vec![PrimeIdeal::split(11, 0), PrimeIdeal::split(11, 1)]
        );
        assert_eq!(split_prime(&k, 2).unwrap(), vec![PrimeIdeal::inert(2)]);
        assert_eq!(split_prime(&k, 5).unwrap(), vec![PrimeIdeal::ramified(5)]);
        assert!(split_prime(&k, 9).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(PrimeIdeal::inert(7).to_string(), "(7,f2)");
        assert_eq!(PrimeIdeal::split(11, 0).to_string(), "(11,f1,#0)");
        assert_eq!(PrimeIdeal::ramified(5).to_string(), "(5,f1)");
    }
}
