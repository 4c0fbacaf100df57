//! Certificate constructors: every Kähler surface of Kodaira dimension ≤ 1
//! is walked to a fixed reference surface of its Kodaira dimension, and two
//! surfaces are linked through that reference.

use std::fmt;

use serde::Serialize;

use super::{BirationalKind, Certificate, EngineError, QedMove};
use crate::arith::lcm_all;
use crate::invariants::standard::{
    e_x_e, elliptic, k3, kodaira_primary, p1_x_p1, product_elliptic, ruled,
};
use crate::invariants::{blow_down, ClassKind, FiberType, KodairaDim, RdpType, SurfaceDescriptor};
use crate::orbifold::{
    exceptional_case, find_good_quotient, Exceptional, OrbifoldSignature, SearchBound,
    DEFAULT_ORDER_BOUND,
};

/// The node every chain of the given Kodaira dimension ends at.
pub fn reference(kappa: KodairaDim) -> Option<SurfaceDescriptor> {
    match kappa {
        KodairaDim::MinusInfinity => Some(p1_x_p1()),
        KodairaDim::Zero => Some(e_x_e()),
        KodairaDim::One => Some(product_elliptic(2).named("B2xF")),
        KodairaDim::Two => None,
    }
}

fn s0() -> SurfaceDescriptor {
    kodaira_primary().named("S0")
}

fn expect_kappa(d: &SurfaceDescriptor, k: KodairaDim) -> Result<(), EngineError> {
    d.validate()?;
    if d.kodaira_dim != k {
        return Err(EngineError::WrongKodairaDim {
            expected: k.to_string(),
            got: d.kodaira_dim.to_string(),
        });
    }
    Ok(())
}

/// Chain to ℙ¹×ℙ¹ for a Kähler surface with κ = −∞.
pub fn chain_kod_minus_infty(d: &SurfaceDescriptor) -> Result<Certificate, EngineError> {
    expect_kappa(d, KodairaDim::MinusInfinity)?;
    if !d.is_kahler() {
        return Err(EngineError::NonKahlerInput(format!("b1 = {}", d.b1)));
    }
    let target = p1_x_p1();
    let mut c = Certificate::identity(d.clone());
    if *d == target {
        return Ok(c);
    }
    if d.q == 0 {
        c.push(
            QedMove::birational(BirationalKind::MinimalModel, "Noether"),
            target,
        );
        return Ok(c);
    }
    let g = d.q;
    let product = ruled(g).named(&format!("C'xP1[g={g}]"));
    if *d != product {
        c.push(
            QedMove::birational(BirationalKind::MinimalModel, "Ruled-birational"),
            product,
        );
    }
    let hyperelliptic = ruled(g).named(&format!("CxP1[g={g},hyperelliptic]"));
    c.push(
        QedMove::deformation("curves-genus-g", "curves-genus-g"),
        hyperelliptic,
    );

    // ι×j fixes (2g+2)·2 points, each giving a node on the quotient.
    let k = 4 * g + 4;
    let mut quotient = SurfaceDescriptor::minimal(
        ClassKind::Ruled,
        0,
        0,
        0,
        4 - 4 * g as i64,
        4 * g as i64 + 8,
    )
    .named("(CxP1)/(Z/2)");
    quotient.minimal = false;
    let quotient = quotient.with_singularities(vec![RdpType::A(1); k as usize]);
    c.push(
        QedMove::quotient(2, "Z/2", "Hyperelliptic-involution"),
        quotient,
    );
    c.push(
        QedMove::birational(BirationalKind::MinimalModel, "Noether"),
        target,
    );
    Ok(c)
}

/// Contracts the recorded exceptional curves one at a time.
fn push_blow_downs(c: &mut Certificate) -> Result<(), EngineError> {
    while c.end().blowups > 0 {
        let down = blow_down(c.end())?;
        c.push(
            QedMove::birational(BirationalKind::BlowDown, "Castelnuovo"),
            down,
        );
    }
    if !c.end().minimal {
        return Err(EngineError::Unsupported(
            "non-minimal model without blow-up record".into(),
        ));
    }
    Ok(())
}

fn kummer_resolved() -> SurfaceDescriptor {
    k3().named("Km(ExE)~")
}

fn kummer() -> SurfaceDescriptor {
    k3().named("Km(ExE)")
        .with_singularities(vec![RdpType::A(1); 16])
}

fn push_k3_tail(c: &mut Certificate) {
    let (resolved, nodal) = (kummer_resolved(), kummer());
    if *c.end() != nodal {
        if *c.end() != resolved {
            c.push(QedMove::deformation("K3-family", "K3-family"), resolved);
        }
        c.push(
            QedMove::birational(BirationalKind::SmallContraction, "RDP-contraction"),
            nodal,
        );
    }
    c.push(QedMove::cover(2, "±1", "Kummer"), e_x_e());
}

fn push_torus_tail(c: &mut Certificate) {
    if *c.end() != e_x_e() {
        c.push(QedMove::deformation("tori", "tori"), e_x_e());
    }
}

/// Chain to E×E for a Kähler surface with κ = 0.
pub fn chain_kod0(d: &SurfaceDescriptor) -> Result<Certificate, EngineError> {
    expect_kappa(d, KodairaDim::Zero)?;
    if d.class_tag.is_kodaira() {
        return Err(EngineError::NonKahlerInput(d.class_tag.to_string()));
    }
    let mut c = Certificate::identity(d.clone());
    push_blow_downs(&mut c)?;
    match d.class_tag {
        ClassKind::Torus => push_torus_tail(&mut c),
        ClassKind::K3 => push_k3_tail(&mut c),
        ClassKind::Enriques => {
            let (deg, cover) = match &d.cover {
                Some(cv) => (cv.degree, (*cv.surface).clone()),
                None => (2, k3()),
            };
            c.push(QedMove::cover(deg, "Z/2", "Enriques-cover"), cover);
            push_k3_tail(&mut c);
        }
        ClassKind::Hyperelliptic => {
            let cv = d
                .cover
                .as_ref()
                .ok_or_else(|| EngineError::MissingCoverData("hyperelliptic surface".into()))?;
            c.push(
                QedMove::cover(
                    cv.degree,
                    &format!("order-{}", cv.degree),
                    "Hyperelliptic-cover",
                ),
                (*cv.surface).clone(),
            );
            push_torus_tail(&mut c);
        }
        _ => unreachable!("kappa = 0 classes are exhausted above"),
    }
    Ok(c)
}

/// Chain to S₀ for a primary or secondary Kodaira surface.
pub fn chain_kodaira(d: &SurfaceDescriptor) -> Result<Certificate, EngineError> {
    expect_kappa(d, KodairaDim::Zero)?;
    let mut c = Certificate::identity(d.clone());
    push_blow_downs(&mut c)?;
    match d.class_tag {
        ClassKind::KodairaPrimary => {}
        ClassKind::KodairaSecondary => {
            let cv = d
                .cover
                .as_ref()
                .ok_or_else(|| EngineError::MissingCoverData("secondary Kodaira surface".into()))?;
            c.push(
                QedMove::cover(
                    cv.degree,
                    &format!("Z/{}", cv.degree),
                    "Kodaira-secondary-cover",
                ),
                (*cv.surface).clone(),
            );
        }
        _ => {
            return Err(EngineError::Unsupported(format!(
                "{} is not a Kodaira surface",
                d.class_tag
            )))
        }
    }
    if *c.end() != s0() {
        c.push(QedMove::deformation("Kodaira-S0", "FM-II.7.17"), s0());
    }
    Ok(c)
}

pub fn chain_kod1(d: &SurfaceDescriptor) -> Result<Certificate, EngineError> {
    chain_kod1_with(d, SearchBound::Limited(DEFAULT_ORDER_BOUND))
}

/// 2g − 2 + χ + Σ(1 − 1/m_j) > 0, the degree condition for κ = 1.
fn canonical_degree_positive(g: u32, chi: i64, mult: &[u32]) -> bool {
    let l = lcm_all(mult.iter().map(|&m| m as i64));
    let total = (2 * g as i64 - 2 + chi) * l + mult.iter().map(|&m| l - l / m as i64).sum::<i64>();
    total > 0
}

fn a1_count(d: &SurfaceDescriptor) -> Result<i64, EngineError> {
    if d.singularities.iter().all(|s| *s == RdpType::A(1)) {
        Ok(d.singularities.len() as i64)
    } else {
        Err(EngineError::Unsupported(
            "singularities other than nodes".into(),
        ))
    }
}

/// Upper surface of a degree-d unramified cover killing every multiple fibre.
fn orbifold_cover_of(
    lower: &SurfaceDescriptor,
    degree: u64,
) -> Result<SurfaceDescriptor, EngineError> {
    let fib = lower
        .fibration
        .as_ref()
        .ok_or(EngineError::MissingFibrationData)?;
    let d = degree as i64;
    let k = a1_count(lower)?;
    let twice_e = 2 * d * lower.euler - 3 * d * k;
    if twice_e % 24 != 0 {
        return Err(EngineError::Unsupported(format!(
            "cover of degree {d} gives non-integral chi"
        )));
    }
    let chi = twice_e / 24;
    let twice_g_minus_2 = d * (2 * fib.base_genus as i64 - 2)
        + fib
            .multiplicities
            .iter()
            .map(|&m| d - d / m as i64)
            .sum::<i64>();
    let g = (twice_g_minus_2 + 2) / 2;
    let pg = chi - 1 + g;
    if g < 0 || pg < 0 {
        return Err(EngineError::Unsupported(
            "cover invariants out of range".into(),
        ));
    }
    Ok(elliptic(g as u32, Vec::new(), g as u32, pg as u32).named("StepI-cover"))
}

fn push_product_tail(c: &mut Certificate) {
    let g = c.end().fibration.as_ref().map_or(2, |f| f.base_genus);
    let target = reference(KodairaDim::One).expect("kappa 1 has a reference");
    if g > 2 {
        c.push(
            QedMove::quotient(g - 1, &format!("Z/{}", g - 1), "Curve-cover"),
            target,
        );
    } else if *c.end() != target {
        c.push(
            QedMove::deformation("elliptic-products", "elliptic-products"),
            target,
        );
    }
}

fn is_product(d: &SurfaceDescriptor) -> bool {
    d.fibration
        .as_ref()
        .is_some_and(|f| f.multiplicities.is_empty() && d.q == f.base_genus + 1 && d.euler == 0)
}

/// Steps III–V: deform to the product-quotient model and lift to B×F.
fn push_positive_euler_tail(c: &mut Certificate) -> Result<(), EngineError> {
    let cur = c.end().clone();
    let (q, pg) = (cur.q, cur.pg);
    let g = pg + q;
    if pg < q || g < 2 {
        return Err(EngineError::Unsupported(format!(
            "(q, pg) = ({q}, {pg}) has no product model"
        )));
    }
    let model = elliptic(q, Vec::new(), q, pg).named("S_III");
    if cur != model {
        c.push(QedMove::deformation("FM-7.6", "FM-7.6"), model.clone());
    }
    // The involution on B fixes 2g + 2 − 4q points, −1 on F fixes 4.
    let nodes = 4 * (2 * g + 2 - 4 * q);
    let nodal = model
        .named("(BxF)/(Z/2)")
        .with_singularities(vec![RdpType::A(1); nodes as usize]);
    c.push(
        QedMove::deformation("Product-quotient", "Product-quotient"),
        nodal,
    );
    c.push(
        QedMove::cover(2, "Z/2", "Product-quotient-cover"),
        product_elliptic(g).named(&format!("B{g}xF")),
    );
    push_product_tail(c);
    Ok(())
}

/// Chain to B₂×F for a minimal Kähler properly elliptic surface.
pub fn chain_kod1_with(
    d: &SurfaceDescriptor,
    bound: SearchBound,
) -> Result<Certificate, EngineError> {
    expect_kappa(d, KodairaDim::One)?;
    let fib = d
        .fibration
        .as_ref()
        .ok_or(EngineError::MissingFibrationData)?;
    if d.b1 % 2 == 1 {
        return Err(EngineError::OddB1);
    }
    if !canonical_degree_positive(fib.base_genus, d.chi(), &fib.multiplicities) {
        return Err(EngineError::Unsupported(
            "canonical bundle formula gives kappa < 1".into(),
        ));
    }
    let mut c = Certificate::identity(d.clone());
    push_blow_downs(&mut c)?;
    loop {
        let cur = c.end().clone();
        let fib = cur
            .fibration
            .clone()
            .ok_or(EngineError::MissingFibrationData)?;
        let m = fib.multiplicities.clone();
        if m.is_empty() {
            if cur.euler > 0 {
                push_positive_euler_tail(&mut c)?;
            } else if is_product(&cur) {
                push_product_tail(&mut c);
            } else {
                let cv = cur
                    .cover
                    .as_ref()
                    .ok_or_else(|| EngineError::MissingCoverData("elliptic bundle".into()))?;
                c.push(
                    QedMove::cover(cv.degree, &format!("order-{}", cv.degree), "Step-IV-bundle"),
                    (*cv.surface).clone(),
                );
                if !is_product(c.end()) {
                    return Err(EngineError::Unsupported(
                        "bundle cover is not a product".into(),
                    ));
                }
                push_product_tail(&mut c);
            }
            return Ok(c);
        }
        let sig = OrbifoldSignature::new(fib.base_genus, m.clone())?;
        match exceptional_case(&sig) {
            Exceptional::NonExceptional => {
                let w = find_good_quotient(&sig, bound)?;
                let upper = orbifold_cover_of(&cur, w.target_order)?;
                let group = w.target.to_string().replace(' ', "");
                c.push(
                    QedMove::cover(w.target_order as u32, &group, "Step-I-orbifold"),
                    upper,
                );
            }
            Exceptional::CyclicOfOrder(n) => {
                let reduced = crate::orbifold::coprime_reduction(m[0], m[1]);
                let chi = n as i64 * cur.chi();
                let upper = elliptic(0, reduced.multiplicities, 0, (chi - 1) as u32)
                    .named("StepI-gcd-cover");
                c.push(QedMove::cover(n, &format!("Z/{n}"), "Step-I-gcd"), upper);
            }
            Exceptional::TrivialGroup => {
                // Step VI: deform to 3 − r fibres of type D̃₄, contract their
                // reduced components, then remove the new double fibres.
                let r = m.len();
                let n = 3 - r;
                let (m1, m2) = if r == 1 { (1, m[0]) } else { (m[0], m[1]) };
                let mut deformed = cur.clone().named("StepVI-D4");
                let f = deformed.fibration.as_mut().expect("fibred");
                f.singular_fibers = vec![FiberType::D(4); n];
                c.push(
                    QedMove::deformation("Step-VI-D4", "Step-VI-D4")
                        .with_param("pg", cur.pg)
                        .with_param("m1", m1)
                        .with_param("m2", m2),
                    deformed.clone(),
                );
                let mut contracted = deformed
                    .named("StepVI-contracted")
                    .with_singularities(vec![RdpType::A(1); 4 * n]);
                let f = contracted.fibration.as_mut().expect("fibred");
                f.singular_fibers.clear();
                f.multiplicities.extend(std::iter::repeat_n(2, n));
                f.multiplicities.sort_unstable();
                c.push(
                    QedMove::birational(BirationalKind::SmallContraction, "Step-VI-contraction"),
                    contracted,
                );
            }
        }
    }
}

/// Why two surfaces cannot be Q.E.D. equivalent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Obstruction {
    /// Kodaira dimension is a Q.E.D. invariant.
    KodairaDimension,
    /// Kodaira surfaces are only equivalent to Kodaira surfaces.
    KodairaSurface,
    /// Quaternionic polydisk quotients with different (k, 𝒮).
    ClassTag,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Obstruction::KodairaDimension => "Siu invariance",
            Obstruction::KodairaSurface => "Kodaira surface class",
            Obstruction::ClassTag => "quaternionic class tag",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Decision {
    Equivalent(Certificate),
    Obstructed(Obstruction),
    Unknown(String),
}

fn chain_to_reference(
    d: &SurfaceDescriptor,
    bound: SearchBound,
) -> Result<Certificate, EngineError> {
    match d.kodaira_dim {
        KodairaDim::MinusInfinity => chain_kod_minus_infty(d),
        KodairaDim::Zero => chain_kod0(d),
        KodairaDim::One => chain_kod1_with(d, bound),
        KodairaDim::Two => Err(EngineError::Unsupported(
            "no chains for general type".into(),
        )),
    }
}

fn link(a: Result<Certificate, EngineError>, b: Result<Certificate, EngineError>) -> Decision {
    match (a, b) {
        (Ok(mut a), Ok(mut b)) => {
            // Drop the common tail of the two chains to the reference.
            while let (Some(x), Some(y)) = (a.steps.last(), b.steps.last()) {
                if x != y {
                    break;
                }
                a.steps.pop();
                b.steps.pop();
            }
            match a.concat(&b.reversed()) {
                Ok(c) => Decision::Equivalent(c),
                Err(e) => Decision::Unknown(e.to_string()),
            }
        }
        (Err(e), _) | (_, Err(e)) => Decision::Unknown(e.to_string()),
    }
}

pub fn decide_equivalence(a: &SurfaceDescriptor, b: &SurfaceDescriptor) -> Decision {
    decide_equivalence_with(a, b, SearchBound::Limited(DEFAULT_ORDER_BOUND))
}

pub fn decide_equivalence_with(
    a: &SurfaceDescriptor,
    b: &SurfaceDescriptor,
    bound: SearchBound,
) -> Decision {
    for d in [a, b] {
        if let Err(e) = d.validate() {
            return Decision::Unknown(format!("invalid descriptor: {e}"));
        }
    }
    if a.kodaira_dim != b.kodaira_dim {
        return Decision::Obstructed(Obstruction::KodairaDimension);
    }
    let (ka, kb) = (a.class_tag.is_kodaira(), b.class_tag.is_kodaira());
    if ka != kb {
        return Decision::Obstructed(Obstruction::KodairaSurface);
    }
    if ka {
        return link(chain_kodaira(a), chain_kodaira(b));
    }
    if a.kodaira_dim != KodairaDim::Two && a.is_kahler() && b.is_kahler() {
        return link(chain_to_reference(a, bound), chain_to_reference(b, bound));
    }
    if let (ClassKind::PolydiskQuotient(ta), ClassKind::PolydiskQuotient(tb)) =
        (&a.class_tag, &b.class_tag)
    {
        if ta != tb {
            return Decision::Obstructed(Obstruction::ClassTag);
        }
    }
    Decision::Unknown("no chain or obstruction applies".into())
}
