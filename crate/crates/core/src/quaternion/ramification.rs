use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::cyclotomic::{CyclotomicContext, SubgroupHandle, MODULUS};
use super::field::{split_prime, PrimeIdeal, RealQuadraticField};
use super::{torsion_orders, QuaternionError};
use crate::arith::{euler_phi, gcd, mod_pow, primes_from};

/// Witness scans give up at this rational prime.
pub const SCAN_CAP: u64 = 1_000_000;

pub const DEFAULT_MAX_EXTRA: usize = 2;

/// A finite, even, nonempty set of prime ideals of a real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RamificationSet {
    field: RealQuadraticField,
    primes: BTreeSet<PrimeIdeal>,
}

impl RamificationSet {
    pub fn new<I: IntoIterator<Item = PrimeIdeal>>(
        field: RealQuadraticField,
        primes: I,
    ) -> Result<Self, QuaternionError> {
        let primes: BTreeSet<PrimeIdeal> = primes.into_iter().collect();
        if primes.is_empty() {
            return Err(QuaternionError::Empty);
        }
        if primes.len() % 2 == 1 {
            return Err(QuaternionError::OddCardinality(primes.len()));
        }
        for p in &primes {
            p.validate(&field)?;
        }
        Ok(Self { field, primes })
    }

    pub fn field(&self) -> &RealQuadraticField {
        &self.field
    }

    pub fn primes(&self) -> &BTreeSet<PrimeIdeal> {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Which intermediate fields k ⊊ K′ ⊆ k(ζ₁₂₀) need a non-primary prime.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FieldScope {
    /// Quadratic extensions of k only.
    #[default]
    Quadratic,
    /// Every intermediate field.
    FullLattice,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub set: RamificationSet,
    /// 𝒮′: the union of the witnesses, before padding.
    pub core: BTreeSet<PrimeIdeal>,
    pub witnesses: Vec<(SubgroupHandle, PrimeIdeal)>,
    pub padding: Option<PrimeIdeal>,
}

/// Primes admissible in scans: at least 7 and prime to 120·disc.
fn scan_ideals(field: RealQuadraticField) -> impl Iterator<Item = PrimeIdeal> {
    let disc = field.discriminant();
    primes_from(7)
        .filter(move |&p| gcd(p as i64, MODULUS as i64) == 1 && disc % p as i64 != 0)
        .flat_map(move |p| split_prime(&field, p).expect("scan yields primes"))
}

pub fn construct_s(k: &RealQuadraticField) -> Result<RamificationSet, QuaternionError> {
    construct_s_with(k, FieldScope::Quadratic, SCAN_CAP).map(|c| c.set)
}

pub fn construct_s_with(
    k: &RealQuadraticField,
    scope: FieldScope,
    cap: u64,
) -> Result<Construction, QuaternionError> {
    let ctx = CyclotomicContext::new(*k);
    let handles = match scope {
        FieldScope::Quadratic => ctx.quadratic_intermediate_fields(),
        FieldScope::FullLattice => ctx.all_intermediate_fields(),
    };
    let mut found: Vec<Option<PrimeIdeal>> = vec![None; handles.len()];
    let mut missing = handles.len();
    for ideal in scan_ideals(*k) {
        if missing == 0 {
            break;
        }
        if ideal.p >= cap {
            return Err(QuaternionError::ScanExhausted(cap));
        }
        for (slot, h) in found.iter_mut().zip(&handles) {
            if slot.is_none() && ctx.splits_nonprimary(h, &ideal)? {
                *slot = Some(ideal);
                missing -= 1;
            }
        }
    }
    let witnesses: Vec<(SubgroupHandle, PrimeIdeal)> = handles
        .into_iter()
        .zip(found)
        .map(|(h, p)| (h, p.expect("all handles witnessed")))
        .collect();
    let core: BTreeSet<PrimeIdeal> = witnesses.iter().map(|(_, p)| *p).collect();

    let mut primes = core.clone();
    let padding = if primes.len() % 2 == 1 {
        let pad = scan_ideals(*k)
            .find(|p| !primes.contains(p))
            .expect("infinitely many primes");
        primes.insert(pad);
        Some(pad)
    } else {
        None
    };
    Ok(Construction {
        set: RamificationSet::new(*k, primes)?,
        core,
        witnesses,
        padding,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorsionCheck {
    Ok,
    FailingTorsion(u64),
}

impl TorsionCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, TorsionCheck::Ok)
    }
}

/// [k(ζ_m) : k].
fn cyclotomic_degree(k: &RealQuadraticField, m: u64) -> u64 {
    let phi = euler_phi(m);
    if m as i64 % k.discriminant() == 0 {
        phi / 2
    } else {
        phi
    }
}

/// Checks that for every torsion order m with [k(ζ_m):k] = 2 some prime of
/// `s` splits in k(ζ_m), so that k(ζ_m) does not embed in the algebra.
pub fn verify_torsion_free(s: &RamificationSet) -> TorsionCheck {
    let k = s.field();
    for m in torsion_orders() {
        if cyclotomic_degree(k, m) != 2 {
            continue;
        }
        let witnessed = s.primes().iter().any(|ideal| {
            !ideal.ramified
                && m % ideal.p != 0
                && mod_pow(ideal.p, ideal.residue_degree as u64, m) == 1
        });
        if !witnessed {
            return TorsionCheck::FailingTorsion(m);
        }
    }
    TorsionCheck::Ok
}

/// The invariant (k, 𝒮) in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassTag {
    pub d: i64,
    pub primes: Vec<PrimeIdeal>,
}

pub fn class_tag(s: &RamificationSet) -> ClassTag {
    ClassTag {
        d: s.field().d(),
        primes: s.primes().iter().copied().collect(),
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} S={{", self.d)?;
        for (i, p) in self.primes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for ClassTag {
    type Err = QuaternionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || QuaternionError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = compact.strip_prefix("d=").ok_or_else(bad)?;
        let (d, rest) = rest.split_once("S={").ok_or_else(bad)?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        let body = rest.strip_suffix('}').ok_or_else(bad)?;
        let field = RealQuadraticField::new(d)?;
        let mut primes = Vec::new();
        for item in body.split("),").filter(|t| !t.is_empty()) {
            let item = item.trim_start_matches('(').trim_end_matches(')');
            let parts: Vec<&str> = item.split(',').collect();
            let p: u64 = parts.first().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            let ideal = match parts.as_slice() {
                [_, "f2"] => PrimeIdeal::inert(p),
                [_, "f1"] => PrimeIdeal::ramified(p),
                [_, "f1", idx] => {
                    let i: u8 = idx
                        .strip_prefix('#')
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(bad)?;
                    PrimeIdeal::split(p, i)
                }
                _ => return Err(bad()),
            };
            primes.push(ideal);
        }
        let set = RamificationSet::new(field, primes)?;
        Ok(class_tag(&set))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    /// Largest number of primes added to the core.
    pub max_extra: usize,
    pub scope: FieldScope,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            max_extra: DEFAULT_MAX_EXTRA,
            scope: FieldScope::Quadratic,
        }
    }
}

pub fn enumerate_classes(
    k: &RealQuadraticField,
    prime_bound: u64,
) -> Result<Vec<ClassTag>, QuaternionError> {
    enumerate_classes_with(k, prime_bound, EnumerationOptions::default())
}

/// Class tags of the even sets 𝒮′ ∪ T, T a set of at most `max_extra`
/// admissible prime ideals below `prime_bound`, that pass
/// [`verify_torsion_free`]. Sorted and duplicate free.
pub fn enumerate_classes_with(
    k: &RealQuadraticField,
    prime_bound: u64,
    opts: EnumerationOptions,
) -> Result<Vec<ClassTag>, QuaternionError> {
    if prime_bound < 7 {
        return Err(QuaternionError::BoundTooSmall(prime_bound));
    }
    let core = construct_s_with(k, opts.scope, SCAN_CAP)?.core;
    let pool: Vec<PrimeIdeal> = scan_ideals(*k)
        .take_while(|p| p.p < prime_bound)
        .filter(|p| !core.contains(p))
        .collect();

    let mut extras: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    collect_subsets(pool.len(), opts.max_extra, 0, &mut stack, &mut extras);

    let mut tags: Vec<ClassTag> = extras
        .par_iter()
        .filter(|t| (core.len() + t.len()) % 2 == 0 && core.len() + t.len() > 0)
        .filter_map(|t| {
            let set =
                RamificationSet::new(*k, core.iter().copied().chain(t.iter().map(|&i| pool[i])))
                    .ok()?;
            verify_torsion_free(&set).is_ok().then(|| class_tag(&set))
        })
        .collect();
    tags.sort();
    tags.dedup();
    Ok(tags)
}

fn collect_subsets(
    n: usize,
    max: usize,
    start: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    out.push(stack.clone());
    if stack.len() == max {
        return;
    }
    for i in start..n {
        stack.push(i);
        collect_subsets(n, max, i + 1, stack, out);
        stack.pop();
    }
}
