//! Q.E.D. moves, the lemma table that justifies them, certificate chains,
//! and an independent verifier.

mod chains;
mod format;
mod lemmas;
mod tchain;
mod verify;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::invariants::{InvariantError, SurfaceDescriptor};
use crate::orbifold::OrbifoldError;

pub use chains::{
    chain_kod0, chain_kod1, chain_kod1_with, chain_kod_minus_infty, chain_kodaira,
    decide_equivalence, decide_equivalence_with, reference, Decision, Obstruction,
};
pub use format::{descriptor_hash, parse_certificate, CertificateParseError};
pub use lemmas::{family, lemma, Family, Lemma, Premise, Side, FAMILIES, LEMMAS};
pub use tchain::{
    t_chain, t_chain_length, verify_t_chain, verify_t_step, TChainStep, TMove, Variety,
};
pub use verify::{verify_certificate, verify_move, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("wrong Kodaira dimension: expected {expected}, got {got}")]
    WrongKodairaDim { expected: String, got: String },
    #[error("non-Kähler input ({0})")]
    NonKahlerInput(String),
    #[error("no fibration data")]
    MissingFibrationData,
    #[error("odd first Betti number")]
    OddB1,
    #[error("missing cover data: {0}")]
    MissingCoverData(String),
    #[error("fibration outside the supported cases: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
    #[error(transparent)]
    Invalid(#[from] InvariantError),
    #[error("certificates do not chain: {0}")]
    Mismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BirationalKind {
    MinimalModel,
    BlowUp,
    BlowDown,
    SmallContraction,
}

impl BirationalKind {
    pub fn reversed(self) -> Self {
        match self {
            BirationalKind::BlowUp => BirationalKind::BlowDown,
            BirationalKind::BlowDown => BirationalKind::BlowUp,
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MoveKind {
    Birational(BirationalKind),
    Deformation { family_id: String },
    QuasiEtaleCover { degree: u32, group: String },
    QuasiEtaleQuotient { degree: u32, group: String },
}

impl MoveKind {
    pub fn name(&self) -> &'static str {
        match self {
            MoveKind::Birational(_) => "Birational",
            MoveKind::Deformation { .. } => "Deformation",
            MoveKind::QuasiEtaleCover { .. } => "QuasiEtaleCover",
            MoveKind::QuasiEtaleQuotient { .. } => "QuasiEtaleQuotient",
        }
    }
}

/// A citation justifying a move; the id must be present in [`LEMMAS`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LemmaTag {
    pub id: String,
    pub statement: String,
}

impl LemmaTag {
    /// Looks the id up in the lemma table; unknown ids keep an empty statement
    /// and are rejected by the verifier.
    pub fn new(id: &str) -> Self {
        let statement = lemma(id)
            .map(|l| l.statement.to_string())
            .unwrap_or_default();
        Self {
            id: id.to_string(),
            statement,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QedMove {
    pub kind: MoveKind,
    pub justification: LemmaTag,
    /// Extra parameters recorded for the lemma, e.g. (pg, m1, m2).
    pub params: Vec<(String, String)>,
}

impl QedMove {
    pub fn new(kind: MoveKind, lemma_id: &str) -> Self {
        Self {
            kind,
            justification: LemmaTag::new(lemma_id),
            params: Vec::new(),
        }
    }

    pub fn birational(sub: BirationalKind, lemma_id: &str) -> Self {
        Self::new(MoveKind::Birational(sub), lemma_id)
    }

    pub fn deformation(family_id: &str, lemma_id: &str) -> Self {
        Self::new(
            MoveKind::Deformation {
                family_id: family_id.to_string(),
            },
            lemma_id,
        )
    }

    pub fn cover(degree: u32, group: &str, lemma_id: &str) -> Self {
        Self::new(
            MoveKind::QuasiEtaleCover {
                degree,
                group: group.to_string(),
            },
            lemma_id,
        )
    }

    pub fn quotient(degree: u32, group: &str, lemma_id: &str) -> Self {
        Self::new(
            MoveKind::QuasiEtaleQuotient {
                degree,
                group: group.to_string(),
            },
            lemma_id,
        )
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// The move read in the opposite direction.
    pub fn reversed(&self) -> Self {
        let kind = match &self.kind {
            MoveKind::Birational(b) => MoveKind::Birational(b.reversed()),
            MoveKind::Deformation { family_id } => MoveKind::Deformation {
                family_id: family_id.clone(),
            },
            MoveKind::QuasiEtaleCover { degree, group } => MoveKind::QuasiEtaleQuotient {
                degree: *degree,
                group: group.clone(),
            },
            MoveKind::QuasiEtaleQuotient { degree, group } => MoveKind::QuasiEtaleCover {
                degree: *degree,
                group: group.clone(),
            },
        };
        Self {
            kind,
            justification: self.justification.clone(),
            params: self.params.clone(),
        }
    }

    /// Whether the cited lemma is an algebraic (rather than complex-analytic)
    /// statement.
    pub fn is_algebraic(&self) -> bool {
        lemma(&self.justification.id).is_some_and(|l| l.algebraic)
    }

    /// `kind,params,lemma` as used inside `--move[...]`.
    pub fn render(&self) -> String {
        let mut params: Vec<String> = match &self.kind {
            MoveKind::Birational(b) => vec![format!("sub={b:?}")],
            MoveKind::Deformation { family_id } => vec![format!("family={family_id}")],
            MoveKind::QuasiEtaleCover { degree, group }
            | MoveKind::QuasiEtaleQuotient { degree, group } => {
                vec![format!("d={degree}"), format!("group={group}")]
            }
        };
        params.extend(self.params.iter().map(|(k, v)| format!("{k}={v}")));
        format!(
            "{},{},{}",
            self.kind.name(),
            params.join(";"),
            self.justification.id
        )
    }
}

impl fmt::Display for QedMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "--move[{}]-->", self.render())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub src: SurfaceDescriptor,
    pub mv: QedMove,
    pub dst: SurfaceDescriptor,
}

impl Step {
    pub fn reversed(&self) -> Self {
        Self {
            src: self.dst.clone(),
            mv: self.mv.reversed(),
            dst: self.src.clone(),
        }
    }
}

/// A chain of moves starting at `start`. Zero steps is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub start: SurfaceDescriptor,
    pub steps: Vec<Step>,
}

impl Certificate {
    pub fn identity(start: SurfaceDescriptor) -> Self {
        Self {
            start,
            steps: Vec::new(),
        }
    }

    pub fn end(&self) -> &SurfaceDescriptor {
        self.steps.last().map_or(&self.start, |s| &s.dst)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Appends a move from the current end to `dst`.
    pub fn push(&mut self, mv: QedMove, dst: SurfaceDescriptor) {
        let src = self.end().clone();
        self.steps.push(Step { src, mv, dst });
    }

    pub fn reversed(&self) -> Self {
        Self {
            start: self.end().clone(),
            steps: self.steps.iter().rev().map(Step::reversed).collect(),
        }
    }

    /// `self` followed by `other`; the end of `self` must be the start of `other`.
    pub fn concat(&self, other: &Certificate) -> Result<Self, EngineError> {
        if self.end() != &other.start {
            return Err(EngineError::Mismatch(format!(
                "{} vs {}",
                descriptor_hash(self.end()),
                descriptor_hash(&other.start)
            )));
        }
        let mut out = self.clone();
        out.steps.extend(other.steps.iter().cloned());
        Ok(out)
    }

    /// True when every move cites an algebraic lemma.
    pub fn is_algebraic(&self) -> bool {
        self.steps.iter().all(|s| s.mv.is_algebraic())
    }
}
