//! Galois data of k(ζ₁₂₀)/k expressed through residues modulo 120.
//!
//! Every field between k and k(ζ₁₂₀) is the fixed field of a subgroup of
//! Gal(k(ζ₁₂₀)/k), which embeds into (ℤ/120)^*. Subgroups are stored as bit
//! masks over the residues 0..120, so membership tests are a single shift.

use std::collections::BTreeSet;
use std::fmt;

use super::field::{PrimeIdeal, RealQuadraticField};
use super::QuaternionError;
use crate::arith::{gcd, kronecker, mod_pow};

pub const MODULUS: u32 = 120;

/// A set of residues modulo 120.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueSet(u128);

impl ResidueSet {
    pub const EMPTY: ResidueSet = ResidueSet(0);

    pub fn from_residues<I: IntoIterator<Item = u32>>(residues: I) -> Self {
        let mut bits = 0u128;
        for r in residues {
            bits |= 1u128 << (r % MODULUS);
        }
        ResidueSet(bits)
    }

    pub fn contains(&self, r: u32) -> bool {
        self.0 >> (r % MODULUS) & 1 == 1
    }

    pub fn insert(&mut self, r: u32) {
        self.0 |= 1u128 << (r % MODULUS);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..MODULUS).filter(move |&r| self.contains(r))
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

fn mul(a: u32, b: u32) -> u32 {
    a * b % MODULUS
}

/// Subgroup of (ℤ/120)^* generated by `gens`.
pub fn generated_subgroup(gens: &[u32]) -> ResidueSet {
    let mut set = ResidueSet::from_residues([1]);
    let mut frontier = vec![1u32];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = mul(x, g);
            if !set.contains(y) {
                set.insert(y);
                frontier.push(y);
            }
        }
    }
    set
}

/// The handle of an intermediate field k ⊂ K′ ⊂ k(ζ₁₂₀): the subgroup of the
/// Galois group fixing K′.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupHandle {
    pub elements: ResidueSet,
}

impl SubgroupHandle {
    pub fn contains(&self, r: u32) -> bool {
        self.elements.contains(r)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Clone, Debug)]
pub struct CyclotomicContext {
    field: RealQuadraticField,
    unit_group: ResidueSet,
    galois_subgroup: ResidueSet,
}

impl CyclotomicContext {
    pub fn new(field: RealQuadraticField) -> Self {
        let units: Vec<u32> = (1..MODULUS)
            .filter(|&r| gcd(r as i64, MODULUS as i64) == 1)
            .collect();
        let unit_group = ResidueSet::from_residues(units.iter().copied());
        let galois_subgroup = if field.contained_in_z120() {
            ResidueSet::from_residues(
                units
                    .iter()
                    .copied()
                    .filter(|&u| kronecker(field.discriminant(), u as u64) == 1),
            )
        } else {
            unit_group
        };
        Self {
            field,
            unit_group,
            galois_subgroup,
        }
    }

    pub fn modulus(&self) -> u32 {
        MODULUS
    }

    pub fn field(&self) -> &RealQuadraticField {
        &self.field
    }

    pub fn unit_group(&self) -> ResidueSet {
        self.unit_group
    }

    pub fn galois_subgroup(&self) -> ResidueSet {
        self.galois_subgroup
    }

    pub fn galois_index(&self) -> usize {
        self.unit_group.len() / self.galois_subgroup.len()
    }

    /// Frobenius of an unramified prime of k in Gal(k(ζ₁₂₀)/k).
    pub fn frobenius(&self, prime: &PrimeIdeal) -> Result<u32, QuaternionError> {
        if gcd(prime.p as i64, MODULUS as i64) != 1 {
            return Err(QuaternionError::BadPrime(prime.p));
        }
        if prime.ramified {
            return Err(QuaternionError::RamifiedPrime(prime.p));
        }
        let frob = mod_pow(prime.p, prime.residue_degree as u64, MODULUS as u64) as u32;
        debug_assert!(self.galois_subgroup.contains(frob));
        Ok(frob)
    }

    /// All index-two subgroups of the Galois group, i.e. the quadratic
    /// extensions K′/k inside k(ζ₁₂₀), in a fixed order.
    pub fn quadratic_intermediate_fields(&self) -> Vec<SubgroupHandle> {
        let group: Vec<u32> = self.galois_subgroup.iter().collect();
        let squares = ResidueSet::from_residues(group.iter().map(|&g| mul(g, g)));

        // A basis of the 𝔽₂-space G/G².
        let mut basis: Vec<u32> = Vec::new();
        let mut span = squares;
        for &g in &group {
            if !span.contains(g) {
                basis.push(g);
                let mut gens: Vec<u32> = squares.iter().collect();
                gens.extend(basis.iter().copied());
                span = generated_subgroup(&gens);
            }
        }

        // Coordinates of each element in that basis.
        let rank = basis.len();
        let mut coords = [0u32; MODULUS as usize];
        for mask in 0..(1u32 << rank) {
            let rep = (0..rank)
                .filter(|i| mask >> i & 1 == 1)
                .fold(1, |acc, i| mul(acc, basis[i]));
            for s in squares.iter() {
                coords[mul(rep, s) as usize] = mask;
            }
        }

        let mut handles: Vec<SubgroupHandle> = (1..(1u32 << rank))
            .map(|functional| {
                let kernel = group
                    .iter()
                    .copied()
                    .filter(|&g| (coords[g as usize] & functional).count_ones() % 2 == 0);
                SubgroupHandle {
                    elements: ResidueSet::from_residues(kernel),
                }
            })
            .collect();
        handles.sort();
        handles
    }

    /// Every proper subgroup of the Galois group (one per intermediate field
    /// K′ ≠ k, including k(ζ₁₂₀) itself).
    pub fn all_intermediate_fields(&self) -> Vec<SubgroupHandle> {
        let group: Vec<u32> = self.galois_subgroup.iter().collect();
        let mut seen: BTreeSet<ResidueSet> = BTreeSet::new();
        let trivial = ResidueSet::from_residues([1]);
        seen.insert(trivial);
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for &g in &group {
                if h.contains(g) {
                    continue;
                }
                let mut gens: Vec<u32> = h.iter().collect();
                gens.push(g);
                let bigger = generated_subgroup(&gens);
                if seen.insert(bigger) {
                    frontier.push(bigger);
                }
            }
        }
        seen.remove(&self.galois_subgroup);
        seen.into_iter()
            .map(|elements| SubgroupHandle { elements })
            .collect()
    }

    /// True iff more than one prime of the fixed field of `handle` lies over
    /// `prime`, i.e. ⟨H, Frob⟩ is a proper subgroup. For index-two H this is
    /// plain membership of Frobenius in H.
    pub fn splits_nonprimary(
        &self,
        handle: &SubgroupHandle,
        prime: &PrimeIdeal,
    ) -> Result<bool, QuaternionError> {
        let frob = self.frobenius(prime)?;
        if handle.order() * 2 == self.galois_subgroup.len() {
            return Ok(handle.contains(frob));
        }
        let mut gens: Vec<u32> = handle.elements.iter().collect();
        gens.push(frob);
        Ok(generated_subgroup(&gens) != self.galois_subgroup)
    }
}
