//! The lemma and deformation-family tables. Entries are data; the verifier
//! interprets the premises.

use serde::Serialize;

use crate::invariants::KodairaDim;

/// Which endpoint a premise constrains. Quasi-étale premises speak of the
/// `Lower` (target) and `Upper` (source of the finite map) surfaces,
/// whatever the direction of the move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Lower,
    Upper,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Premise {
    Kappa(KodairaDim),
    Tag(Side, &'static str),
    Smooth(Side),
    /// Nonempty singular locus consisting of A1 points only.
    OnlyNodes(Side),
    /// One endpoint smooth, the other with A1 points only.
    SmoothAndNodal,
    Fibred(Side),
    NoMultipleFibres(Side),
    PositiveEuler(Side),
    ZeroEuler(Side),
    /// κ = −∞ and q = 0.
    Rational(Side),
    /// B × F with g(B) ≥ 2: q = g(B) + 1, e = 0, no multiple fibres.
    Product(Side),
    EqualQPg,
    Degree(u32),
    DegreeDivides(u32),
    DegreeIn(&'static [u32]),
    Group(&'static str),
    /// Base ℙ¹ with two multiple fibres, degree gcd(m₁, m₂), upper carries
    /// the reduced multiplicities.
    GcdCover,
    /// Upper base genus from Riemann–Hurwitz for the lower multiplicities.
    OrbifoldCover,
    /// Products with d·(g(B_lower) − 1) = g(B_upper) − 1.
    CurveCover,
    /// Exceptional fibration over ℙ¹ deformed to one with 3 − r fibres of
    /// type D̃/Ẽ; params pg, m1, m2 match the endpoints.
    DTildeDeformation,
    /// n fibres of type D̃₄ traded for 4n A1 points and n extra
    /// multiplicity-2 orbifold points.
    DTildeContraction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MoveClass {
    Birational,
    Deformation,
    QuasiEtale,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Lemma {
    pub id: &'static str,
    pub statement: &'static str,
    /// Algebraic statement (A.Q.E.D.) rather than complex-analytic.
    pub algebraic: bool,
    pub applies_to: MoveClass,
    pub premises: &'static [Premise],
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Family {
    pub id: &'static str,
    pub description: &'static str,
    pub premises: &'static [Premise],
}

use KodairaDim::{MinusInfinity, One};
use MoveClass::*;
use Premise::*;
use Side::*;

pub static LEMMAS: &[Lemma] = &[
    Lemma {
        id: "Noether",
        statement: "a rational surface is birational to P1 x P1",
        algebraic: true,
        applies_to: Birational,
        premises: &[Rational(Both)],
    },
    Lemma {
        id: "Ruled-birational",
        statement: "a surface of Kodaira dimension -inf is birational to C x P1",
        algebraic: true,
        applies_to: Birational,
        premises: &[Kappa(MinusInfinity)],
    },
    Lemma {
        id: "Castelnuovo",
        statement: "a smooth rational curve of self-intersection -1 can be contracted",
        algebraic: true,
        applies_to: Birational,
        premises: &[],
    },
    Lemma {
        id: "RDP-contraction",
        statement: "disjoint (-2)-curve configurations contract to rational double points",
        algebraic: true,
        applies_to: Birational,
        premises: &[SmoothAndNodal],
    },
    Lemma {
        id: "Step-VI-contraction",
        statement: "removing the reduced components of D4-tilde fibres leaves double fibres on the open surface",
        algebraic: true,
        applies_to: Birational,
        premises: &[Kappa(One), DTildeContraction],
    },
    Lemma {
        id: "curves-genus-g",
        statement: "smooth curves of the same genus are deformation equivalent",
        algebraic: true,
        applies_to: Deformation,
        premises: &[],
    },
    Lemma {
        id: "tori",
        statement: "all complex tori of dimension 2 are deformation equivalent",
        algebraic: false,
        applies_to: Deformation,
        premises: &[],
    },
    Lemma {
        id: "K3-family",
        statement: "every K3 surface is deformation equivalent to a smooth quartic surface",
        algebraic: false,
        applies_to: Deformation,
        premises: &[],
    },
    Lemma {
        id: "FM-II.7.17",
        statement: "every primary Kodaira surface is a deformation of S0",
        algebraic: false,
        applies_to: Deformation,
        premises: &[],
    },
    Lemma {
        id: "FM-7.6",
        statement: "elliptic surfaces without multiple fibres, with e > 0 and the same q, pg, are deformation equivalent",
        algebraic: false,
        applies_to: Deformation,
        premises: &[],
    },
    Lemma {
        id: "Seiler",
        statement: "Jacobian elliptic fibrations with the same q, pg form an irreducible algebraic family",
        algebraic: true,
        applies_to: Deformation,
        premises: &[],
    },
    Lemma {
        id: "Kodaira-11.5",
        statement: "an algebraic elliptic fibration without multiple fibres has torsion class and deforms algebraically to constant moduli",
        algebraic: true,
        applies_to: Deformation,
        premises: &[],
    },
    Lemma {
        id: "Step-VI-D4",
        statement: "an exceptional elliptic fibration deforms to one with 3 - r singular fibres of type D4-tilde",
        algebraic: true,
        applies_to: Deformation,
        premises: &[],
    },
    Lemma {
        id: "Product-quotient",
        statement: "a double cover of C x P1 branched on a smooth curve deforms to the nodal quotient (B x F)/(Z/2)",
        algebraic: true,
        applies_to: Deformation,
        premises: &[],
    },
    Lemma {
        id: "elliptic-products",
        statement: "products B x F with g(B) fixed are deformation equivalent",
        algebraic: true,
        applies_to: Deformation,
        premises: &[],
    },
    Lemma {
        id: "Hyperelliptic-involution",
        statement: "iota x j on C x P1 has isolated fixed points and a rational quotient",
        algebraic: true,
        applies_to: QuasiEtale,
        premises: &[Kappa(MinusInfinity), Degree(2), Smooth(Upper), OnlyNodes(Lower), Rational(Lower), Tag(Upper, "Ruled")],
    },
    Lemma {
        id: "Kummer",
        statement: "the quotient of a torus by -1 is a Kummer surface with 16 nodes",
        algebraic: true,
        applies_to: QuasiEtale,
        premises: &[Degree(2), Group("±1"), Tag(Upper, "Torus"), Tag(Lower, "K3"), Smooth(Upper), OnlyNodes(Lower)],
    },
    Lemma {
        id: "Enriques-cover",
        statement: "an Enriques surface has an unramified double cover by a K3 surface",
        algebraic: true,
        applies_to: QuasiEtale,
        premises: &[Degree(2), Tag(Lower, "Enriques"), Tag(Upper, "K3")],
    },
    Lemma {
        id: "Hyperelliptic-cover",
        statement: "a hyperelliptic surface has an unramified cover of degree dividing 12 by a product of elliptic curves",
        algebraic: true,
        applies_to: QuasiEtale,
        premises: &[DegreeDivides(12), Tag(Lower, "Hyperelliptic"), Tag(Upper, "Torus")],
    },
    Lemma {
        id: "Kodaira-secondary-cover",
        statement: "a secondary Kodaira surface is a cyclic unramified quotient of a primary one",
        algebraic: false,
        applies_to: QuasiEtale,
        premises: &[DegreeIn(&[2, 3, 4, 6]), Tag(Lower, "KodairaSecondary"), Tag(Upper, "KodairaPrimary")],
    },
    Lemma {
        id: "Step-I-orbifold",
        statement: "a finite quotient of the orbifold group keeping each gamma_j of order m_j yields an unramified cover without multiple fibres",
        algebraic: true,
        applies_to: QuasiEtale,
        premises: &[Kappa(One), OrbifoldCover, NoMultipleFibres(Upper), Smooth(Upper)],
    },
    Lemma {
        id: "Step-I-gcd",
        statement: "the cyclic base cover of order gcd(m1, m2) branched at the two multiple fibres",
        algebraic: true,
        applies_to: QuasiEtale,
        premises: &[Kappa(One), GcdCover],
    },
    Lemma {
        id: "Step-IV-bundle",
        statement: "an elliptic bundle with even b1 has an unramified cover which is a product",
        algebraic: true,
        applies_to: QuasiEtale,
        premises: &[Kappa(One), NoMultipleFibres(Lower), ZeroEuler(Lower), Product(Upper)],
    },
    Lemma {
        id: "Product-quotient-cover",
        statement: "B x F covers (B x F)/(Z/2) for a double cover B -> C and -1 on F",
        algebraic: true,
        applies_to: QuasiEtale,
        premises: &[Kappa(One), Degree(2), Product(Upper), OnlyNodes(Lower), Fibred(Lower)],
    },
    Lemma {
        id: "Curve-cover",
        statement: "an unramified cover of curves B' -> B induces B' x F -> B x F",
        algebraic: true,
        applies_to: QuasiEtale,
        premises: &[Kappa(One), CurveCover],
    },
];

pub static FAMILIES: &[Family] = &[
    Family {
        id: "tori",
        description: "complex tori",
        premises: &[Tag(Both, "Torus")],
    },
    Family {
        id: "K3-family",
        description: "K3 surfaces, possibly with nodes",
        premises: &[Tag(Both, "K3")],
    },
    Family {
        id: "curves-genus-g",
        description: "C x P1 with C of fixed genus",
        premises: &[Tag(Both, "Ruled"), Smooth(Both)],
    },
    Family {
        id: "Kodaira-S0",
        description: "primary Kodaira surfaces",
        premises: &[Tag(Both, "KodairaPrimary")],
    },
    Family {
        id: "FM-7.6",
        description: "elliptic surfaces without multiple fibres, e > 0, fixed (q, pg)",
        premises: &[
            Kappa(One),
            Fibred(Both),
            NoMultipleFibres(Both),
            PositiveEuler(Both),
            Smooth(Both),
            EqualQPg,
        ],
    },
    Family {
        id: "Step-VI-D4",
        description: "exceptional elliptic fibrations over P1 with fixed (pg, m1, m2)",
        premises: &[Kappa(One), Smooth(Both), DTildeDeformation],
    },
    Family {
        id: "Product-quotient",
        description: "double covers of C x P1 of bidegree (2g+2, 4) and their nodal degenerations",
        premises: &[
            Kappa(One),
            Fibred(Both),
            NoMultipleFibres(Both),
            SmoothAndNodal,
        ],
    },
    Family {
        id: "elliptic-products",
        description: "B x F with g(B) fixed",
        premises: &[Product(Both)],
    },
];

pub fn lemma(id: &str) -> Option<&'static Lemma> {
    LEMMAS.iter().find(|l| l.id == id)
}

pub fn family(id: &str) -> Option<&'static Family> {
    FAMILIES.iter().find(|f| f.id == id)
}
