//! Orbifold fundamental groups of elliptic fibrations and finite quotients
//! that keep the local monodromy orders intact.

mod groups;
mod search;
mod smith;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use groups::{GroupImage, LinearKind, TargetGroup};
pub use search::{
    find_good_quotient, verify_witness, QuotientWitness, SearchBound, DEFAULT_ORDER_BOUND,
};
pub use smith::{smith_diagonal, AbelianInvariants};

use crate::arith::gcd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbifoldError {
    #[error("multiplicity {0} is below 2")]
    BadMultiplicity(i64),
    #[error("signature is exceptional ({0:?}); no good quotient exists")]
    ExceptionalInput(Exceptional),
    #[error("no good quotient of order at most {0} in the searched families")]
    NotFoundWithinBound(String),
    #[error("witness does not verify: {0}")]
    BadWitness(String),
}

/// Base genus and multiple-fibre multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrbifoldSignature {
    pub base_genus: u32,
    pub multiplicities: Vec<u32>,
}

impl OrbifoldSignature {
    pub fn new(base_genus: u32, multiplicities: Vec<u32>) -> Result<Self, OrbifoldError> {
        if let Some(&m) = multiplicities.iter().find(|&&m| m < 2) {
            return Err(OrbifoldError::BadMultiplicity(m as i64));
        }
        Ok(Self {
            base_genus,
            multiplicities,
        })
    }

    pub fn r(&self) -> usize {
        self.multiplicities.len()
    }

    /// Orbifold Euler characteristic 2 − 2g − Σ(1 − 1/m_j) as a reduced
    /// fraction (numerator, denominator).
    pub fn euler_characteristic(&self) -> (i64, i64) {
        let den = crate::arith::lcm_all(self.multiplicities.iter().map(|&m| m as i64));
        let mut num = (2 - 2 * self.base_genus as i64) * den;
        for &m in &self.multiplicities {
            num -= den - den / m as i64;
        }
        let g = gcd(num, den).max(1);
        (num / g, den / g)
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.multiplicities.iter().map(|m| m.to_string()).collect();
        write!(f, "g={} m=[{}]", self.base_genus, m.join(","))
    }
}

/// A letter of a word: generator index and exponent sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize) -> Self {
        Self {
            generator,
            inverse: false,
        }
    }

    pub fn inv(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

pub type Word = Vec<Letter>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitePresentation {
    pub generator_names: Vec<String>,
    pub relators: Vec<Word>,
}

impl FinitePresentation {
    pub fn is_well_formed(&self) -> bool {
        self.relators
            .iter()
            .flatten()
            .all(|l| l.generator < self.generator_names.len())
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        // Runs of one letter are printed as powers.
        let mut parts = Vec::new();
        let mut i = 0;
        while i < word.len() {
            let mut j = i;
            while j < word.len() && word[j] == word[i] {
                j += 1;
            }
            let name = &self.generator_names[word[i].generator];
            let exp = (j - i) as i64 * if word[i].inverse { -1 } else { 1 };
            parts.push(if exp == 1 {
                name.clone()
            } else {
                format!("{name}^{exp}")
            });
            i = j;
        }
        parts.join(" ")
    }

    /// Free reduction: cancels adjacent inverse pairs.
    pub fn reduce(word: &[Letter]) -> Word {
        let mut out: Word = Vec::with_capacity(word.len());
        for &l in word {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        let n = self.generator_names.len();
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|w| {
                let mut row = vec![0i64; n];
                for l in w {
                    row[l.generator] += if l.inverse { -1 } else { 1 };
                }
                row
            })
            .collect();
        AbelianInvariants::from_relation_matrix(n, &rows)
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators: {}", self.generator_names.join(" "))?;
        for (i, r) in self.relators.iter().enumerate() {
            writeln!(f, "relator {}: {}", i + 1, self.format_word(r))?;
        }
        Ok(())
    }
}

/// Generators a₁,b₁,…,a_g,b_g,γ₁,…,γ_r; relators ∏[a_i,b_i]·∏γ_j and γ_j^{m_j}.
pub fn presentation(sig: &OrbifoldSignature) -> FinitePresentation {
    let g = sig.base_genus as usize;
    let mut names = Vec::new();
    for i in 1..=g {
        names.push(format!("a{i}"));
        names.push(format!("b{i}"));
    }
    for j in 1..=sig.r() {
        names.push(format!("g{j}"));
    }
    let mut surface = Vec::new();
    for i in 0..g {
        let (a, b) = (Letter::new(2 * i), Letter::new(2 * i + 1));
        surface.extend([a, b, a.inv(), b.inv()]);
    }
    surface.extend((0..sig.r()).map(|j| Letter::new(2 * g + j)));
    let mut relators = vec![surface];
    for (j, &m) in sig.multiplicities.iter().enumerate() {
        relators.push(vec![Letter::new(2 * g + j); m as usize]);
    }
    FinitePresentation {
        generator_names: names,
        relators,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Exceptional {
    NonExceptional,
    TrivialGroup,
    CyclicOfOrder(u32),
}

pub fn exceptional_case(sig: &OrbifoldSignature) -> Exceptional {
    match (sig.base_genus, sig.multiplicities.as_slice()) {
        (0, []) | (0, [_]) => Exceptional::TrivialGroup,
        (0, [m1, m2]) => match gcd(*m1 as i64, *m2 as i64) as u32 {
            1 => Exceptional::TrivialGroup,
            n => Exceptional::CyclicOfOrder(n),
        },
        _ => Exceptional::NonExceptional,
    }
}

/// Signature of ℙ¹ after the cyclic base cover of degree gcd(m₁, m₂).
pub fn coprime_reduction(m1: u32, m2: u32) -> OrbifoldSignature {
    let d = gcd(m1 as i64, m2 as i64).max(1) as u32;
    let multiplicities = [m1 / d, m2 / d].into_iter().filter(|&m| m >= 2).collect();
    OrbifoldSignature {
        base_genus: 0,
        multiplicities,
    }
}
