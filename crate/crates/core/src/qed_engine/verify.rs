//! Move and certificate checking. Nothing here calls into the chain
//! constructors; the rules are re-derived from the descriptors alone.

use std::fmt;

use serde::Serialize;

use super::lemmas::{family, lemma, MoveClass, Premise, Side};
use super::{BirationalKind, Certificate, MoveKind, QedMove};
use crate::invariants::{ClassKind, FiberType, KodairaDim, RdpType, SurfaceDescriptor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Step index within a certificate, when known.
    pub step: Option<usize>,
    pub rule: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {i}: {}: {}", self.rule, self.detail),
            None => write!(f, "{}: {}", self.rule, self.detail),
        }
    }
}

struct Report(Vec<Violation>);

impl Report {
    fn check(&mut self, ok: bool, rule: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.0.push(Violation {
                step: None,
                rule: rule.to_string(),
                detail: detail(),
            });
        }
    }
}

fn tag_name(c: &ClassKind) -> &'static str {
    match c {
        ClassKind::Ruled => "Ruled",
        ClassKind::Torus => "Torus",
        ClassKind::K3 => "K3",
        ClassKind::Enriques => "Enriques",
        ClassKind::Hyperelliptic => "Hyperelliptic",
        ClassKind::KodairaPrimary => "KodairaPrimary",
        ClassKind::KodairaSecondary => "KodairaSecondary",
        ClassKind::ProperlyElliptic => "ProperlyElliptic",
        ClassKind::GeneralType => "GeneralType",
        ClassKind::PolydiskQuotient(_) => "PolydiskQuotient",
    }
}

fn chi(d: &SurfaceDescriptor) -> i64 {
    1 - d.q as i64 + d.pg as i64
}

fn nodes(d: &SurfaceDescriptor) -> Option<usize> {
    let all_a1 = d.singularities.iter().all(|s| *s == RdpType::A(1));
    (all_a1 && !d.singularities.is_empty()).then_some(d.singularities.len())
}

fn mults(d: &SurfaceDescriptor) -> Vec<u32> {
    d.fibration
        .as_ref()
        .map(|f| f.multiplicities.clone())
        .unwrap_or_default()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_product(d: &SurfaceDescriptor) -> bool {
    let Some(f) = &d.fibration else { return false };
    d.class_tag == ClassKind::ProperlyElliptic
        && f.multiplicities.is_empty()
        && f.base_genus >= 2
        && d.q == f.base_genus + 1
        && d.euler == 0
        && d.k_squared == 0
        && d.singularities.is_empty()
}

fn d4_count(d: &SurfaceDescriptor) -> usize {
    d.fibration.as_ref().map_or(0, |f| {
        f.singular_fibers
            .iter()
            .filter(|t| **t == FiberType::D(4))
            .count()
    })
}

fn dtilde_count(d: &SurfaceDescriptor) -> usize {
    d.fibration.as_ref().map_or(0, |f| {
        f.singular_fibers
            .iter()
            .filter(|t| matches!(t, FiberType::D(n) if *n >= 4) || matches!(t, FiberType::E(_)))
            .count()
    })
}

struct Ctx<'a> {
    lower: &'a SurfaceDescriptor,
    upper: &'a SurfaceDescriptor,
    mv: &'a QedMove,
    degree: Option<u32>,
    group: Option<&'a str>,
}

impl Ctx<'_> {
    fn sides(&self, side: Side) -> Vec<&SurfaceDescriptor> {
        match side {
            Side::Lower => vec![self.lower],
            Side::Upper => vec![self.upper],
            Side::Both => vec![self.lower, self.upper],
        }
    }

    fn all(&self, side: Side, pred: impl Fn(&SurfaceDescriptor) -> bool) -> bool {
        self.sides(side).into_iter().all(pred)
    }

    fn holds(&self, p: &Premise) -> bool {
        let d = self.degree.unwrap_or(0);
        match *p {
            Premise::Kappa(k) => self.all(Side::Both, |s| s.kodaira_dim == k),
            Premise::Tag(side, name) => self.all(side, |s| tag_name(&s.class_tag) == name),
            Premise::Smooth(side) => self.all(side, |s| s.singularities.is_empty()),
            Premise::OnlyNodes(side) => self.all(side, |s| nodes(s).is_some()),
            Premise::SmoothAndNodal => {
                let (a, b) = (self.lower, self.upper);
                (a.singularities.is_empty() && nodes(b).is_some())
                    || (b.singularities.is_empty() && nodes(a).is_some())
            }
            Premise::Fibred(side) => self.all(side, |s| s.fibration.is_some()),
            Premise::NoMultipleFibres(side) => self.all(side, |s| mults(s).is_empty()),
            Premise::PositiveEuler(side) => self.all(side, |s| s.euler > 0),
            Premise::ZeroEuler(side) => self.all(side, |s| s.euler == 0),
            Premise::Rational(side) => self.all(side, |s| {
                s.kodaira_dim == KodairaDim::MinusInfinity && s.q == 0
            }),
            Premise::Product(side) => self.all(side, is_product),
            Premise::EqualQPg => self.lower.q == self.upper.q && self.lower.pg == self.upper.pg,
            Premise::Degree(n) => d == n,
            Premise::DegreeDivides(n) => d > 0 && n % d == 0,
            Premise::DegreeIn(list) => list.contains(&d),
            Premise::Group(g) => self.group == Some(g),
            Premise::GcdCover => self.gcd_cover(d),
            Premise::OrbifoldCover => self.orbifold_cover(d),
            Premise::CurveCover => {
                let (Some(fl), Some(fu)) = (&self.lower.fibration, &self.upper.fibration) else {
                    return false;
                };
                is_product(self.lower)
                    && is_product(self.upper)
                    && d as i64 * (fl.base_genus as i64 - 1) == fu.base_genus as i64 - 1
            }
            Premise::DTildeDeformation => self.dtilde_deformation(),
            Premise::DTildeContraction => self.dtilde_contraction(),
        }
    }

    fn gcd_cover(&self, d: u32) -> bool {
        let (Some(fl), Some(fu)) = (&self.lower.fibration, &self.upper.fibration) else {
            return false;
        };
        let [m1, m2] = fl.multiplicities[..] else {
            return false;
        };
        let n = gcd(m1, m2);
        let mut reduced: Vec<u32> = [m1 / n, m2 / n].into_iter().filter(|&m| m >= 2).collect();
        reduced.sort_unstable();
        fl.base_genus == 0 && fu.base_genus == 0 && n > 1 && d == n && fu.multiplicities == reduced
    }

    fn orbifold_cover(&self, d: u32) -> bool {
        let (Some(fl), Some(fu)) = (&self.lower.fibration, &self.upper.fibration) else {
            return false;
        };
        if fl.multiplicities.is_empty() || fl.multiplicities.iter().any(|&m| !d.is_multiple_of(m)) {
            return false;
        }
        let d = d as i64;
        let branch: i64 = fl.multiplicities.iter().map(|&m| d - d / m as i64).sum();
        2 * fu.base_genus as i64 - 2 == d * (2 * fl.base_genus as i64 - 2) + branch
    }

    fn dtilde_deformation(&self) -> bool {
        let (a, b) = (self.lower, self.upper);
        let (Some(fa), Some(fb)) = (&a.fibration, &b.fibration) else {
            return false;
        };
        let m = &fa.multiplicities;
        let r = m.len();
        let coprime = match m[..] {
            [_] => true,
            [m1, m2] => gcd(m1, m2) == 1,
            _ => false,
        };
        let (m1, m2) = if r == 1 {
            (1, m[0])
        } else {
            (
                m.first().copied().unwrap_or(0),
                m.last().copied().unwrap_or(0),
            )
        };
        let params_ok = self.mv.param("pg") == Some(a.pg.to_string().as_str())
            && self.mv.param("m1") == Some(m1.to_string().as_str())
            && self.mv.param("m2") == Some(m2.to_string().as_str());
        fa.base_genus == 0
            && fb.base_genus == 0
            && fa.multiplicities == fb.multiplicities
            && coprime
            && params_ok
            && (dtilde_count(a) >= 3 - r || dtilde_count(b) >= 3 - r)
    }

    fn dtilde_contraction(&self) -> bool {
        let (smooth, sing) = if self.lower.singularities.is_empty() {
            (self.lower, self.upper)
        } else {
            (self.upper, self.lower)
        };
        let n = d4_count(smooth);
        let (Some(fs), Some(fc)) = (&smooth.fibration, &sing.fibration) else {
            return false;
        };
        let mut expected = fs.multiplicities.clone();
        expected.extend(std::iter::repeat_n(2, n));
        expected.sort_unstable();
        n > 0
            && smooth.singularities.is_empty()
            && nodes(sing) == Some(4 * n)
            && d4_count(sing) == 0
            && fc.multiplicities == expected
            && fc.base_genus == fs.base_genus
    }
}

fn is_sub_multiset(small: &[RdpType], big: &[RdpType]) -> bool {
    let mut rest = big.to_vec();
    for s in small {
        match rest.iter().position(|x| x == s) {
            Some(i) => {
                rest.remove(i);
            }
            None => return false,
        }
    }
    true
}

/// Checks a single move; all violations are reported, not just the first.
pub fn verify_move(
    src: &SurfaceDescriptor,
    mv: &QedMove,
    dst: &SurfaceDescriptor,
) -> Result<(), Vec<Violation>> {
    let mut r = Report(Vec::new());
    for (label, d) in [("src", src), ("dst", dst)] {
        if let Err(e) = d.validate() {
            r.check(false, "descriptor", || format!("{label}: {e}"));
        }
    }
    r.check(
        src.kodaira_dim == dst.kodaira_dim,
        "kodaira-dimension",
        || format!("kappa {} vs {}", src.kodaira_dim, dst.kodaira_dim),
    );

    let class = match mv.kind {
        MoveKind::Birational(_) => MoveClass::Birational,
        MoveKind::Deformation { .. } => MoveClass::Deformation,
        _ => MoveClass::QuasiEtale,
    };
    let entry = lemma(&mv.justification.id);
    r.check(entry.is_some(), "lemma-table", || {
        format!("unknown lemma '{}'", mv.justification.id)
    });
    if let Some(l) = entry {
        r.check(l.applies_to == class, "lemma-kind", || {
            format!("lemma '{}' does not justify {} moves", l.id, mv.kind.name())
        });
    }

    let mut ctx = Ctx {
        lower: src,
        upper: dst,
        mv,
        degree: None,
        group: None,
    };
    match &mv.kind {
        MoveKind::Birational(sub) => {
            r.check(
                src.q == dst.q && src.pg == dst.pg && src.b1 == dst.b1,
                "birational-invariants",
                || "q, pg and b1 are birational invariants".into(),
            );
            match sub {
                BirationalKind::BlowUp | BirationalKind::BlowDown => {
                    let (low, high) = if *sub == BirationalKind::BlowUp {
                        (src, dst)
                    } else {
                        (dst, src)
                    };
                    let ok = high.k_squared == low.k_squared - 1
                        && high.euler == low.euler + 1
                        && high.blowups == low.blowups + 1
                        && !high.minimal
                        && high.singularities == low.singularities;
                    r.check(ok, "blow-up", || {
                        "blow-up changes (K^2, e) by (-1, +1) and adds one exceptional curve".into()
                    });
                }
                BirationalKind::MinimalModel => {
                    r.check(src.minimal || dst.minimal, "minimal-model", || {
                        "neither endpoint is minimal".into()
                    });
                    r.check(
                        src.k_squared + src.euler == dst.k_squared + dst.euler,
                        "minimal-model",
                        || "K^2 + e = 12 chi must agree".into(),
                    );
                    if src.kodaira_dim != KodairaDim::MinusInfinity && src.minimal && dst.minimal {
                        r.check(
                            src.k_squared == dst.k_squared && src.euler == dst.euler,
                            "minimal-model",
                            || "minimal models of non-ruled surfaces are unique".into(),
                        );
                    }
                }
                BirationalKind::SmallContraction => {
                    r.check(
                        src.k_squared == dst.k_squared && src.euler == dst.euler,
                        "small-contraction",
                        || "resolution invariants must agree".into(),
                    );
                    let nested = (is_sub_multiset(&src.singularities, &dst.singularities)
                        || is_sub_multiset(&dst.singularities, &src.singularities))
                        && src.singularities != dst.singularities;
                    r.check(nested, "small-contraction", || {
                        "one side must gain rational double points".into()
                    });
                }
            }
        }
        MoveKind::Deformation { family_id } => {
            let same = src.b1 == dst.b1
                && src.q == dst.q
                && src.pg == dst.pg
                && src.k_squared == dst.k_squared
                && src.euler == dst.euler;
            r.check(same, "deformation-invariants", || {
                "b1, q, pg, K^2, e are constant in a family".into()
            });
            match family(family_id) {
                None => r.check(false, "family-table", || {
                    format!("unknown family '{family_id}'")
                }),
                Some(f) => {
                    for p in f.premises {
                        r.check(ctx.holds(p), "family-premise", || {
                            format!("{}: {p:?}", f.id)
                        });
                    }
                }
            }
        }
        MoveKind::QuasiEtaleCover { degree, group }
        | MoveKind::QuasiEtaleQuotient { degree, group } => {
            let (lower, upper) = if matches!(mv.kind, MoveKind::QuasiEtaleCover { .. }) {
                (src, dst)
            } else {
                (dst, src)
            };
            ctx = Ctx {
                lower,
                upper,
                mv,
                degree: Some(*degree),
                group: Some(group),
            };
            let d = *degree as i64;
            r.check(*degree >= 2, "degree", || {
                format!("degree {degree} is below 2")
            });
            if lower.singularities.is_empty() {
                // Quasi-étale onto a smooth surface is étale.
                r.check(upper.singularities.is_empty(), "etale-over-smooth", || {
                    "a quasi-etale cover of a smooth surface is smooth".into()
                });
                if upper.singularities.is_empty() {
                    r.check(
                        upper.euler == d * lower.euler,
                        "euler-multiplicativity",
                        || {
                            format!(
                                "e(upper) = {} but {d} * e(lower) = {}",
                                upper.euler,
                                d * lower.euler
                            )
                        },
                    );
                    r.check(
                        upper.k_squared == d * lower.k_squared,
                        "k2-multiplicativity",
                        || {
                            format!(
                                "K^2(upper) = {} but {d} * K^2(lower) = {}",
                                upper.k_squared,
                                d * lower.k_squared
                            )
                        },
                    );
                    r.check(chi(upper) == d * chi(lower), "chi-multiplicativity", || {
                        format!(
                            "chi(upper) = {} but {d} * chi(lower) = {}",
                            chi(upper),
                            d * chi(lower)
                        )
                    });
                }
            } else if let (Some(k), true) = (nodes(lower), upper.singularities.is_empty()) {
                let k = k as i64;
                r.check(
                    2 * upper.euler == 2 * d * lower.euler - 3 * d * k,
                    "nodal-euler",
                    || {
                        format!(
                            "e(upper) = {} but d*e(lower) - 3dk/2 = {}/2",
                            upper.euler,
                            2 * d * lower.euler - 3 * d * k
                        )
                    },
                );
            }
        }
    }

    if let Some(l) = entry {
        for p in l.premises {
            r.check(ctx.holds(p), "lemma-premise", || format!("{}: {p:?}", l.id));
        }
    }
    if r.0.is_empty() {
        Ok(())
    } else {
        Err(r.0)
    }
}

/// Checks chaining and every move of a certificate.
pub fn verify_certificate(c: &Certificate) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if let Err(e) = c.start.validate() {
        out.push(Violation {
            step: None,
            rule: "descriptor".into(),
            detail: format!("start: {e}"),
        });
    }
    let mut prev = &c.start;
    for (i, s) in c.steps.iter().enumerate() {
        let n = i + 1;
        if &s.src != prev {
            out.push(Violation {
                step: Some(n),
                rule: "chain".into(),
                detail: "source differs from previous target".into(),
            });
        }
        if let Err(vs) = verify_move(&s.src, &s.mv, &s.dst) {
            out.extend(vs.into_iter().map(|v| Violation { step: Some(n), ..v }));
        }
        prev = &s.dst;
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::standard::*;

    #[test]
    fn enriques_to_k3_is_legal() {
        let mv = QedMove::cover(2, "Z/2", "Enriques-cover");
        assert_eq!(verify_move(&enriques(), &mv, &k3()), Ok(()));
        assert_eq!(verify_move(&k3(), &mv.reversed(), &enriques()), Ok(()));
    }

    #[test]
    fn hyperelliptic_degree_five_is_rejected() {
        let mv = QedMove::cover(5, "Z/5", "Hyperelliptic-cover");
        let errs = verify_move(&hyperelliptic(), &mv, &torus()).unwrap_err();
        assert!(errs
            .iter()
            .any(|v| v.rule == "lemma-premise" && v.detail.contains("DegreeDivides")));
        let mv = QedMove::cover(4, "Z/4", "Hyperelliptic-cover");
        assert_eq!(verify_move(&hyperelliptic(), &mv, &torus()), Ok(()));
    }

    #[test]
    fn tori_deform() {
        let mv = QedMove::deformation("tori", "tori");
        assert_eq!(verify_move(&torus(), &mv, &e_x_e()), Ok(()));
        assert!(verify_move(&torus(), &mv, &k3()).is_err());
    }

    #[test]
    fn kappa_must_agree() {
        let mv = QedMove::deformation("tori", "tori");
        let errs = verify_move(&torus(), &mv, &product_elliptic(2)).unwrap_err();
        assert!(errs.iter().any(|v| v.rule == "kodaira-dimension"));
    }

    #[test]
    fn unknown_lemma_and_family() {
        let mv = QedMove::deformation("nope", "nope");
        let errs = verify_move(&torus(), &mv, &torus()).unwrap_err();
        assert!(errs.iter().any(|v| v.rule == "lemma-table"));
        assert!(errs.iter().any(|v| v.rule == "family-table"));
    }

    #[test]
    fn lemma_kind_must_match() {
        let mv = QedMove::deformation("tori", "Enriques-cover");
        let errs = verify_move(&torus(), &mv, &e_x_e()).unwrap_err();
        assert!(errs.iter().any(|v| v.rule == "lemma-kind"));
    }

    #[test]
    fn blow_up_bookkeeping() {
        let up = crate::invariants::blow_up(&p2());
        let mv = QedMove::birational(BirationalKind::BlowUp, "Noether");
        assert_eq!(verify_move(&p2(), &mv, &up), Ok(()));
        assert_eq!(verify_move(&up, &mv.reversed(), &p2()), Ok(()));
        assert!(verify_move(&up, &mv, &p2()).is_err());
    }

    #[test]
    fn etale_euler_is_enforced() {
        let mut bad = k3();
        bad.name = Some("x".into());
        let mv = QedMove::cover(3, "Z/3", "Enriques-cover");
        let errs = verify_move(&enriques(), &mv, &bad).unwrap_err();
        assert!(errs.iter().any(|v| v.rule == "euler-multiplicativity"));
    }

    #[test]
    fn kummer_nodal_euler() {
        let km = k3().with_singularities(vec![RdpType::A(1); 16]);
        let mv = QedMove::cover(2, "±1", "Kummer");
        assert_eq!(verify_move(&km, &mv, &e_x_e()), Ok(()));
        let km15 = k3().with_singularities(vec![RdpType::A(1); 15]);
        let errs = verify_move(&km15, &mv, &e_x_e()).unwrap_err();
        assert!(errs.iter().any(|v| v.rule == "nodal-euler"));
    }
}
