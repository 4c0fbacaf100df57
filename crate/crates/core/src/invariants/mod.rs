//! Discrete invariants of compact complex surfaces and the numeric relations
//! between them.
//!
//! A descriptor records the invariants of one named model. For a surface with
//! rational double points the numeric fields (K², e, χ) are those of the
//! minimal resolution, which is crepant, so K² and χ agree with the singular
//! model; [`SurfaceDescriptor::singular_euler`] recovers e of the singular
//! model itself.

mod text;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::quaternion::ClassTag;

pub use text::{parse_descriptor, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("descriptor is not minimal")]
    NonMinimalInput,
    #[error("{0} is not divisible by 12")]
    NotDivisible(i64),
    #[error("no kappa=0 class matches b1={b1} q={q} pg={pg}")]
    Inconsistent { b1: u32, q: u32, pg: u32 },
    #[error("invariant violation ({field}): {message}")]
    Violation {
        field: &'static str,
        message: String,
    },
    #[error("descriptor has no exceptional curve to contract")]
    NothingToBlowDown,
}

fn violation(field: &'static str, message: impl Into<String>) -> InvariantError {
    InvariantError::Violation {
        field,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum KodairaDim {
    MinusInfinity,
    Zero,
    One,
    Two,
}

impl fmt::Display for KodairaDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KodairaDim::MinusInfinity => "-inf",
            KodairaDim::Zero => "0",
            KodairaDim::One => "1",
            KodairaDim::Two => "2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassKind {
    Ruled,
    Torus,
    K3,
    Enriques,
    Hyperelliptic,
    KodairaPrimary,
    KodairaSecondary,
    ProperlyElliptic,
    GeneralType,
    PolydiskQuotient(ClassTag),
}

impl ClassKind {
    /// The Kodaira dimension forced by the class.
    pub fn kodaira_dim(&self) -> KodairaDim {
        match self {
            ClassKind::Ruled => KodairaDim::MinusInfinity,
            ClassKind::Torus
            | ClassKind::K3
            | ClassKind::Enriques
            | ClassKind::Hyperelliptic
            | ClassKind::KodairaPrimary
            | ClassKind::KodairaSecondary => KodairaDim::Zero,
            ClassKind::ProperlyElliptic => KodairaDim::One,
            ClassKind::GeneralType | ClassKind::PolydiskQuotient(_) => KodairaDim::Two,
        }
    }

    pub fn is_kodaira(&self) -> bool {
        matches!(
            self,
            ClassKind::KodairaPrimary | ClassKind::KodairaSecondary
        )
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::PolydiskQuotient(tag) => write!(f, "PolydiskQuotient({tag})"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// Rational double point types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RdpType {
    A(u32),
    D(u32),
    E(u32),
}

impl RdpType {
    pub fn new_checked(self) -> Result<Self, InvariantError> {
        let ok = match self {
            RdpType::A(n) => n >= 1,
            RdpType::D(n) => n >= 4,
            RdpType::E(n) => (6..=8).contains(&n),
        };
        if ok {
            Ok(self)
        } else {
            Err(violation(
                "singularities",
                format!("{self} is not a rational double point"),
            ))
        }
    }

    /// Number of exceptional curves in the minimal resolution.
    pub fn rank(&self) -> u32 {
        match *self {
            RdpType::A(n) | RdpType::D(n) | RdpType::E(n) => n,
        }
    }
}

impl fmt::Display for RdpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RdpType::A(n) => write!(f, "A{n}"),
            RdpType::D(n) => write!(f, "D{n}"),
            RdpType::E(n) => write!(f, "E{n}"),
        }
    }
}

/// Singular fibre types recorded by a fibration, by extended Dynkin diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FiberType {
    D(u32),
    E(u32),
    Other,
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::D(n) => write!(f, "D{n}"),
            FiberType::E(n) => write!(f, "E{n}"),
            FiberType::Other => f.write_str("Other"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FibrationData {
    pub base_genus: u32,
    /// Multiplicities of the multiple fibres, sorted.
    pub multiplicities: Vec<u32>,
    pub has_section: bool,
    pub singular_fibers: Vec<FiberType>,
    pub euler_contribution: i64,
}

impl FibrationData {
    pub fn new(base_genus: u32, mut multiplicities: Vec<u32>) -> Self {
        multiplicities.sort_unstable();
        Self {
            base_genus,
            multiplicities,
            has_section: false,
            singular_fibers: Vec::new(),
            euler_contribution: 0,
        }
    }

    pub fn r(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn validate(&self) -> Result<(), InvariantError> {
        if let Some(m) = self.multiplicities.iter().find(|&&m| m < 2) {
            return Err(violation(
                "multiplicity >= 2",
                format!("multiple fibre of multiplicity {m}"),
            ));
        }
        if !self.multiplicities.windows(2).all(|w| w[0] <= w[1]) {
            return Err(violation("multiplicities", "not sorted"));
        }
        for f in &self.singular_fibers {
            let ok = match *f {
                FiberType::D(n) => n >= 4,
                FiberType::E(n) => (6..=8).contains(&n),
                FiberType::Other => true,
            };
            if !ok {
                return Err(violation(
                    "fibers",
                    format!("{f} is not an admissible fibre type"),
                ));
            }
        }
        Ok(())
    }
}

/// A finite étale cover recorded alongside a descriptor: the canonical cover
/// of an Enriques, hyperelliptic or secondary Kodaira surface, or a product
/// covering an elliptic bundle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CoverData {
    pub degree: u32,
    pub surface: Box<SurfaceDescriptor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceDescriptor {
    /// Optional label, part of the identity of the descriptor.
    pub name: Option<String>,
    pub kodaira_dim: KodairaDim,
    pub b1: u32,
    pub q: u32,
    pub pg: u32,
    pub k_squared: i64,
    pub euler: i64,
    pub minimal: bool,
    /// Blow-ups performed on top of the model the numbers came from.
    pub blowups: u32,
    pub class_tag: ClassKind,
    pub fibration: Option<FibrationData>,
    pub singularities: Vec<RdpType>,
    pub cover: Option<CoverData>,
}

impl SurfaceDescriptor {
    /// A minimal smooth descriptor with κ taken from the class; call
    /// [`SurfaceDescriptor::validate`] after filling in the rest.
    pub fn minimal(
        class_tag: ClassKind,
        b1: u32,
        q: u32,
        pg: u32,
        k_squared: i64,
        euler: i64,
    ) -> Self {
        Self {
            name: None,
            kodaira_dim: class_tag.kodaira_dim(),
            b1,
            q,
            pg,
            k_squared,
            euler,
            minimal: true,
            blowups: 0,
            class_tag,
            fibration: None,
            singularities: Vec::new(),
            cover: None,
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn with_fibration(mut self, fibration: FibrationData) -> Self {
        self.fibration = Some(fibration);
        self
    }

    pub fn with_singularities(mut self, mut sing: Vec<RdpType>) -> Self {
        sing.sort_unstable();
        self.singularities = sing;
        self
    }

    pub fn with_cover(mut self, degree: u32, surface: SurfaceDescriptor) -> Self {
        self.cover = Some(CoverData {
            degree,
            surface: Box::new(surface),
        });
        self
    }

    pub fn chi(&self) -> i64 {
        chi(self)
    }

    pub fn is_smooth(&self) -> bool {
        self.singularities.is_empty()
    }

    /// Euler number of the singular model: each RDP of rank n replaces a
    /// chain of n smooth rational curves by a point.
    pub fn singular_euler(&self) -> i64 {
        self.euler
            - self
                .singularities
                .iter()
                .map(|s| s.rank() as i64)
                .sum::<i64>()
    }

    /// Even b₁ and not a Kodaira surface.
    pub fn is_kahler(&self) -> bool {
        self.b1.is_multiple_of(2) && !self.class_tag.is_kodaira()
    }

    pub fn multiplicities(&self) -> &[u32] {
        self.fibration
            .as_ref()
            .map(|f| f.multiplicities.as_slice())
            .unwrap_or(&[])
    }

    /// Checks every structural invariant; the first failure is reported.
    pub fn validate(&self) -> Result<(), InvariantError> {
        if self.kodaira_dim != self.class_tag.kodaira_dim() {
            return Err(violation(
                "kodaira_dim",
                format!(
                    "class {} has kappa={}, descriptor says {}",
                    self.class_tag,
                    self.class_tag.kodaira_dim(),
                    self.kodaira_dim
                ),
            ));
        }
        if self.blowups > 0 && self.minimal {
            return Err(violation("minimal", "a blown-up model is not minimal"));
        }
        if self.minimal && 12 * self.chi() != self.k_squared + self.euler {
            return Err(violation(
                "noether",
                format!(
                    "12*chi = {} but K^2 + e = {}",
                    12 * self.chi(),
                    self.k_squared + self.euler
                ),
            ));
        }
        match &self.class_tag {
            ClassKind::KodairaPrimary if self.b1 != 3 => {
                return Err(violation("b1", "primary Kodaira surfaces have b1 = 3"))
            }
            ClassKind::KodairaSecondary if self.b1 != 1 => {
                return Err(violation("b1", "secondary Kodaira surfaces have b1 = 1"))
            }
            ClassKind::PolydiskQuotient(_) => {
                if self.b1 != 0 {
                    return Err(violation("b1", "polydisk quotients have b1 = 0"));
                }
                if self.euler != 4 * (1 + self.pg as i64) {
                    return Err(violation("euler", "polydisk quotients have e = 4(1 + pg)"));
                }
            }
            _ => {}
        }
        for s in &self.singularities {
            s.new_checked()?;
        }
        if !self.singularities.windows(2).all(|w| w[0] <= w[1]) {
            return Err(violation("singularities", "not sorted"));
        }
        if let Some(f) = &self.fibration {
            f.validate()?;
        }
        if let Some(c) = &self.cover {
            c.surface.validate()?;
            let expected = match self.class_tag {
                ClassKind::Enriques => ClassKind::K3,
                ClassKind::Hyperelliptic => ClassKind::Torus,
                ClassKind::KodairaSecondary => ClassKind::KodairaPrimary,
                ClassKind::ProperlyElliptic => ClassKind::ProperlyElliptic,
                _ => {
                    return Err(violation(
                        "cover",
                        format!("class {} carries no canonical cover", self.class_tag),
                    ))
                }
            };
            if c.surface.class_tag != expected {
                return Err(violation(
                    "cover",
                    format!("cover of a {} surface must be {expected}", self.class_tag),
                ));
            }
            if c.degree < 2 {
                return Err(violation("cover", "cover degree must be at least 2"));
            }
        }
        Ok(())
    }
}

/// χ(𝒪) = 1 − q + p_g.
pub fn chi(d: &SurfaceDescriptor) -> i64 {
    1 - d.q as i64 + d.pg as i64
}

/// 12χ = K² + e, for minimal descriptors.
pub fn check_noether(d: &SurfaceDescriptor) -> Result<bool, InvariantError> {
    if !d.minimal {
        return Err(InvariantError::NonMinimalInput);
    }
    Ok(12 * chi(d) == d.k_squared + d.euler)
}

/// The same relation without the minimality precondition; it holds on every
/// smooth model.
pub fn noether_holds(d: &SurfaceDescriptor) -> bool {
    12 * chi(d) == d.k_squared + d.euler
}

/// p_g = e/12 − 1 for the exceptional elliptic surfaces over ℙ¹.
pub fn exceptional_pg(e: i64) -> Result<i64, InvariantError> {
    if e <= 0 || e % 12 != 0 {
        return Err(InvariantError::NotDivisible(e));
    }
    Ok(e / 12 - 1)
}

/// (e, b₁, K²) of a compact quotient of the bidisk with the given p_g.
pub fn polydisk_relations(pg: u32) -> (i64, u32, i64) {
    let chi = 1 + pg as i64;
    (4 * chi, 0, 8 * chi)
}

/// The κ = 0 class determined by (b₁, q, p_g).
pub fn classify_kod0(d: &SurfaceDescriptor) -> Result<ClassKind, InvariantError> {
    if d.kodaira_dim != KodairaDim::Zero {
        return Err(violation(
            "kodaira_dim",
            format!("expected kappa=0, got {}", d.kodaira_dim),
        ));
    }
    if !d.minimal {
        return Err(InvariantError::NonMinimalInput);
    }
    match (d.b1, d.pg) {
        (4, _) => Ok(ClassKind::Torus),
        (0, 1) => Ok(ClassKind::K3),
        (0, 0) => Ok(ClassKind::Enriques),
        (2, _) => Ok(ClassKind::Hyperelliptic),
        (3, _) => Ok(ClassKind::KodairaPrimary),
        (1, _) => Ok(ClassKind::KodairaSecondary),
        _ => Err(InvariantError::Inconsistent {
            b1: d.b1,
            q: d.q,
            pg: d.pg,
        }),
    }
}

/// Blow up a smooth point: K² drops by one, e rises by one.
pub fn blow_up(d: &SurfaceDescriptor) -> SurfaceDescriptor {
    let mut out = d.clone();
    out.k_squared -= 1;
    out.euler += 1;
    out.blowups += 1;
    out.minimal = false;
    out
}

/// Contract one exceptional curve introduced by [`blow_up`].
pub fn blow_down(d: &SurfaceDescriptor) -> Result<SurfaceDescriptor, InvariantError> {
    if d.blowups == 0 {
        return Err(InvariantError::NothingToBlowDown);
    }
    let mut out = d.clone();
    out.k_squared += 1;
    out.euler -= 1;
    out.blowups -= 1;
    if out.blowups == 0 {
        out.minimal = true;
    }
    Ok(out)
}

/// A small catalog of standard minimal models.
pub mod standard {
    use super::*;

    pub fn p1_x_p1() -> SurfaceDescriptor {
        SurfaceDescriptor::minimal(ClassKind::Ruled, 0, 0, 0, 8, 4).named("P1xP1")
    }

    pub fn p2() -> SurfaceDescriptor {
        SurfaceDescriptor::minimal(ClassKind::Ruled, 0, 0, 0, 9, 3).named("P2")
    }

    /// C × ℙ¹ with g(C) = g.
    pub fn ruled(g: u32) -> SurfaceDescriptor {
        let g = g as i64;
        SurfaceDescriptor::minimal(
            ClassKind::Ruled,
            2 * g as u32,
            g as u32,
            0,
            8 * (1 - g),
            4 * (1 - g),
        )
    }

    pub fn torus() -> SurfaceDescriptor {
        SurfaceDescriptor::minimal(ClassKind::Torus, 4, 2, 1, 0, 0)
    }

    pub fn e_x_e() -> SurfaceDescriptor {
        torus().named("ExE")
    }

    pub fn k3() -> SurfaceDescriptor {
        SurfaceDescriptor::minimal(ClassKind::K3, 0, 0, 1, 0, 24)
    }

    pub fn enriques() -> SurfaceDescriptor {
        SurfaceDescriptor::minimal(ClassKind::Enriques, 0, 0, 0, 0, 12)
    }

    pub fn hyperelliptic() -> SurfaceDescriptor {
        SurfaceDescriptor::minimal(ClassKind::Hyperelliptic, 2, 1, 0, 0, 0)
    }

    pub fn kodaira_primary() -> SurfaceDescriptor {
        SurfaceDescriptor::minimal(ClassKind::KodairaPrimary, 3, 2, 1, 0, 0)
    }

    pub fn kodaira_secondary() -> SurfaceDescriptor {
        SurfaceDescriptor::minimal(ClassKind::KodairaSecondary, 1, 1, 0, 0, 0)
    }

    /// B × F with g(B) = g ≥ 2 and F elliptic.
    pub fn product_elliptic(g: u32) -> SurfaceDescriptor {
        let mut fib = FibrationData::new(g, Vec::new());
        fib.has_section = true;
        SurfaceDescriptor::minimal(ClassKind::ProperlyElliptic, 2 * g + 2, g + 1, g, 0, 0)
            .with_fibration(fib)
    }

    /// A minimal elliptic surface over a genus-g base with χ = 1 − q + p_g and
    /// the given multiple fibres.
    pub fn elliptic(g: u32, mult: Vec<u32>, q: u32, pg: u32) -> SurfaceDescriptor {
        let chi = 1 - q as i64 + pg as i64;
        let mut fib = FibrationData::new(g, mult);
        fib.euler_contribution = 12 * chi;
        SurfaceDescriptor::minimal(ClassKind::ProperlyElliptic, 2 * q, q, pg, 0, 12 * chi)
            .with_fibration(fib)
    }

    pub fn polydisk(tag: ClassTag, pg: u32) -> SurfaceDescriptor {
        let (e, b1, k2) = polydisk_relations(pg);
        SurfaceDescriptor::minimal(ClassKind::PolydiskQuotient(tag), b1, 0, pg, k2, e)
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&p1_x_p1()), 1);
        assert_eq!(chi(&k3()), 2);
        assert_eq!(chi(&torus()), 0);
    }

    #[test]
    fn noether_examples() {
        assert_eq!(check_noether(&k3()), Ok(true));
        assert_eq!(check_noether(&torus()), Ok(true));
        let mut bad = p1_x_p1();
        bad.k_squared = 0;
        bad.euler = 11;
        assert_eq!(check_noether(&bad), Ok(false));
        assert_eq!(
            check_noether(&blow_up(&k3())),
            Err(InvariantError::NonMinimalInput)
        );
    }

    #[test]
    fn exceptional_pg_examples() {
        assert_eq!(exceptional_pg(12), Ok(0));
        assert_eq!(exceptional_pg(24), Ok(1));
        assert_eq!(exceptional_pg(13), Err(InvariantError::NotDivisible(13)));
        assert!(exceptional_pg(0).is_err());
    }

    #[test]
    fn polydisk_examples() {
        assert_eq!(polydisk_relations(0), (4, 0, 8));
        assert_eq!(polydisk_relations(1), (8, 0, 16));
        assert_eq!(polydisk_relations(2), (12, 0, 24));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_kod0(&kodaira_primary()),
            Ok(ClassKind::KodairaPrimary)
        );
        assert_eq!(
            classify_kod0(&kodaira_secondary()),
            Ok(ClassKind::KodairaSecondary)
        );
        assert_eq!(classify_kod0(&k3()), Ok(ClassKind::K3));
        assert_eq!(classify_kod0(&enriques()), Ok(ClassKind::Enriques));
        assert_eq!(classify_kod0(&torus()), Ok(ClassKind::Torus));
        assert_eq!(
            classify_kod0(&hyperelliptic()),
            Ok(ClassKind::Hyperelliptic)
        );
        let mut odd = k3();
        odd.b1 = 6;
        assert!(matches!(
            classify_kod0(&odd),
            Err(InvariantError::Inconsistent { .. })
        ));
        assert!(classify_kod0(&p1_x_p1()).is_err());
    }

    #[test]
    fn standard_models_validate() {
        for d in [
            p1_x_p1(),
            p2(),
            ruled(3),
            torus(),
            k3(),
            enriques(),
            hyperelliptic(),
            kodaira_primary(),
            kodaira_secondary(),
        ] {
            d.validate().unwrap();
        }
        product_elliptic(2).validate().unwrap();
        elliptic(0, vec![2, 3], 0, 0).validate().unwrap();
    }

    #[test]
    fn validation_catches_violations() {
        let mut d = kodaira_primary();
        d.b1 = 1;
        assert!(matches!(
            d.validate(),
            Err(InvariantError::Violation { field: "b1", .. })
        ));
        let mut d = k3();
        d.euler = 23;
        assert!(matches!(
            d.validate(),
            Err(InvariantError::Violation {
                field: "noether",
                ..
            })
        ));
        let mut d = k3();
        d.kodaira_dim = KodairaDim::One;
        assert!(matches!(
            d.validate(),
            Err(InvariantError::Violation {
                field: "kodaira_dim",
                ..
            })
        ));
        let d = elliptic(0, vec![1, 3], 0, 0);
        assert!(matches!(
            d.validate(),
            Err(InvariantError::Violation {
                field: "multiplicity >= 2",
                ..
            })
        ));
        let d = k3().with_singularities(vec![RdpType::D(3)]);
        assert!(d.validate().is_err());
        let d = k3().with_cover(2, torus());
        assert!(matches!(
            d.validate(),
            Err(InvariantError::Violation { field: "cover", .. })
        ));
        enriques().with_cover(2, k3()).validate().unwrap();
    }

    #[test]
    fn singular_euler_subtracts_ranks() {
        let d = k3().with_singularities(vec![RdpType::A(1); 16]);
        assert_eq!(d.singular_euler(), 8);
    }

    fn arb_minimal() -> impl Strategy<Value = SurfaceDescriptor> {
        (0u32..6, 0u32..6, -20i64..20).prop_map(|(q, pg, k2)| {
            let e = 12 * (1 - q as i64 + pg as i64) - k2;
            SurfaceDescriptor::minimal(ClassKind::GeneralType, 2 * q, q, pg, k2, e)
        })
    }

    proptest! {
        #[test]
        fn blow_up_round_trips(d in arb_minimal(), n in 1usize..5) {
            let mut x = d.clone();
            for _ in 0..n {
                x = blow_up(&x);
                prop_assert!(noether_holds(&x));
                prop_assert!(!x.minimal);
            }
            for _ in 0..n {
                x = blow_down(&x).unwrap();
            }
            prop_assert_eq!(&x, &d);
            prop_assert_eq!(check_noether(&x), check_noether(&d));
        }

        #[test]
        fn classify_ignores_unrelated_fields(b1 in 0u32..5, pg in 0u32..2, k2 in -5i64..5, e in 0i64..30, name in "[a-z]{0,4}") {
            let base = SurfaceDescriptor::minimal(ClassKind::K3, b1, b1 / 2, pg, 0, 0);
            let mut other = base.clone();
            other.k_squared = k2;
            other.euler = e;
            other.name = Some(name);
            other.singularities = vec![RdpType::A(1)];
            prop_assert_eq!(classify_kod0(&base), classify_kod0(&other));
        }

        #[test]
        fn polydisk_satisfies_noether(pg in 0u32..=100) {
            let (e, b1, k2) = polydisk_relations(pg);
            prop_assert_eq!(b1, 0);
            prop_assert_eq!(12 * (1 + pg as i64), k2 + e);
            prop_assert_eq!(e, 4 * (1 + pg as i64));
        }
    }
}
