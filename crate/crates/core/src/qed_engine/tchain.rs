//! Symbolic chains showing that every n-dimensional variety is linked to ℙⁿ
//! by birational maps and deformations alone, with a checker based on
//! birational and deformation normal forms.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Variety {
    /// An n-fold given only through a birational model of degree d.
    Arbitrary {
        n: u32,
        d: u32,
    },
    /// Smooth hypersurface of degree d in ℙⁿ⁺¹.
    Hypersurface {
        n: u32,
        d: u32,
    },
    /// Cone over a smooth hypersurface V^{n−1}_d; dimension n.
    Cone {
        n: u32,
        d: u32,
    },
    Product(Vec<Variety>),
    ProjectiveSpace(u32),
    PlaneCurve(u32),
    /// Rational plane curve of degree d with only nodes.
    NodalRationalCurve(u32),
}

impl Variety {
    pub fn dimension(&self) -> u32 {
        match self {
            Variety::Arbitrary { n, .. }
            | Variety::Hypersurface { n, .. }
            | Variety::Cone { n, .. } => *n,
            Variety::Product(fs) => fs.iter().map(Variety::dimension).sum(),
            Variety::ProjectiveSpace(n) => *n,
            Variety::PlaneCurve(_) | Variety::NodalRationalCurve(_) => 1,
        }
    }

    fn hypersurface(n: u32, d: u32) -> Variety {
        if n == 1 {
            Variety::PlaneCurve(d)
        } else {
            Variety::Hypersurface { n, d }
        }
    }

    /// ℙᵖ × self, or self when p = 0.
    fn times_projective(self, p: u32) -> Variety {
        if p == 0 {
            self
        } else {
            Variety::Product(vec![Variety::ProjectiveSpace(p), self])
        }
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variety::Arbitrary { n, .. } => write!(f, "Z^{n}"),
            Variety::Hypersurface { n, d } => write!(f, "V^{n}_{d}"),
            Variety::Cone { n, d } => write!(f, "C(V^{}_{d})", n - 1),
            Variety::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|v| v.to_string()).collect();
                f.write_str(&parts.join(" x "))
            }
            Variety::ProjectiveSpace(n) => write!(f, "P^{n}"),
            Variety::PlaneCurve(d) => write!(f, "C_{d}"),
            Variety::NodalRationalCurve(d) => write!(f, "C'_{d}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TMove {
    Birational,
    Deformation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TChainStep {
    pub src: Variety,
    pub mv: TMove,
    pub dst: Variety,
}

impl fmt::Display for TChainStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} --{:?}--> {}", self.src, self.mv, self.dst)
    }
}

/// Steps in [`t_chain`] for dimension n.
pub fn t_chain_length(n: u32) -> usize {
    2 * n as usize + 1
}

pub fn t_chain(n: u32, d: u32) -> Vec<TChainStep> {
    assert!(n >= 1 && d >= 1, "t_chain needs n >= 1 and d >= 1");
    let mut steps = Vec::with_capacity(t_chain_length(n));
    let mut cur = Variety::Arbitrary { n, d };
    let mut go = |mv: TMove, dst: Variety, cur: &mut Variety| {
        steps.push(TChainStep {
            src: cur.clone(),
            mv,
            dst: dst.clone(),
        });
        *cur = dst;
    };
    go(TMove::Birational, Variety::hypersurface(n, d), &mut cur);
    for k in (2..=n).rev() {
        go(
            TMove::Deformation,
            Variety::Cone { n: k, d }.times_projective(n - k),
            &mut cur,
        );
        go(
            TMove::Birational,
            Variety::hypersurface(k - 1, d).times_projective(n - k + 1),
            &mut cur,
        );
    }
    go(
        TMove::Deformation,
        Variety::NodalRationalCurve(d).times_projective(n - 1),
        &mut cur,
    );
    go(TMove::Birational, Variety::ProjectiveSpace(n), &mut cur);
    steps
}

/// Rational dimension plus the sorted non-rational pieces.
fn birational_form(v: &Variety) -> (u32, Vec<(u32, u32)>) {
    fn walk(v: &Variety, rational: &mut u32, pieces: &mut Vec<(u32, u32)>) {
        match v {
            Variety::Arbitrary { n, d } | Variety::Hypersurface { n, d } => {
                if *d <= 2 {
                    *rational += n;
                } else {
                    pieces.push((*n, *d));
                }
            }
            Variety::PlaneCurve(d) => {
                walk(&Variety::Hypersurface { n: 1, d: *d }, rational, pieces)
            }
            Variety::Cone { n, d } => {
                *rational += 1;
                walk(&Variety::Hypersurface { n: n - 1, d: *d }, rational, pieces);
            }
            Variety::Product(fs) => fs.iter().for_each(|f| walk(f, rational, pieces)),
            Variety::ProjectiveSpace(n) => *rational += n,
            Variety::NodalRationalCurve(_) => *rational += 1,
        }
    }
    let (mut rational, mut pieces) = (0, Vec::new());
    walk(v, &mut rational, &mut pieces);
    pieces.sort_unstable();
    (rational, pieces)
}

/// Sorted factors after replacing each degenerate member by the general one.
fn deformation_form(v: &Variety) -> Vec<Variety> {
    fn walk(v: &Variety, out: &mut Vec<Variety>) {
        match v {
            Variety::Cone { n, d } => out.push(Variety::hypersurface(*n, *d)),
            Variety::Hypersurface { n, d } => out.push(Variety::hypersurface(*n, *d)),
            Variety::NodalRationalCurve(d) => out.push(Variety::PlaneCurve(*d)),
            Variety::Product(fs) => fs.iter().for_each(|f| walk(f, out)),
            Variety::ProjectiveSpace(0) => {}
            other => out.push(other.clone()),
        }
    }
    let mut out = Vec::new();
    walk(v, &mut out);
    out.sort();
    out
}

pub fn verify_t_step(step: &TChainStep) -> Result<(), String> {
    let (a, b) = (step.src.dimension(), step.dst.dimension());
    if a != b {
        return Err(format!("dimension changes from {a} to {b}"));
    }
    match step.mv {
        TMove::Birational if birational_form(&step.src) != birational_form(&step.dst) => {
            Err(format!("{} and {} are not birational", step.src, step.dst))
        }
        TMove::Deformation if deformation_form(&step.src) != deformation_form(&step.dst) => {
            Err(format!(
                "{} and {} are not deformation equivalent",
                step.src, step.dst
            ))
        }
        _ => Ok(()),
    }
}

/// Checks chaining, every step, and that the chain ends at ℙⁿ.
pub fn verify_t_chain(n: u32, steps: &[TChainStep]) -> Result<(), String> {
    for (i, s) in steps.iter().enumerate() {
        verify_t_step(s).map_err(|e| format!("step {}: {e}", i + 1))?;
        if let Some(next) = steps.get(i + 1) {
            if next.src != s.dst {
                return Err(format!(
                    "step {} does not start where step {} ends",
                    i + 2,
                    i + 1
                ));
            }
        }
    }
    match steps.last() {
        Some(s) if s.dst == Variety::ProjectiveSpace(n) => Ok(()),
        _ => Err(format!("chain does not end at P^{n}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_chain() {
        let c = t_chain(1, 3);
        assert_eq!(c.len(), 3);
        assert_eq!(c[1].dst, Variety::NodalRationalCurve(3));
        verify_t_chain(1, &c).unwrap();
    }

    #[test]
    fn surface_chain_passes_through_the_cone() {
        let c = t_chain(2, 2);
        assert_eq!(c[1].dst, Variety::Cone { n: 2, d: 2 });
        assert_eq!(
            c[2].dst,
            Variety::Product(vec![Variety::ProjectiveSpace(1), Variety::PlaneCurve(2)])
        );
        assert_eq!(c.last().unwrap().dst, Variety::ProjectiveSpace(2));
        verify_t_chain(2, &c).unwrap();
    }

    #[test]
    fn wrong_moves_are_rejected() {
        let bad = TChainStep {
            src: Variety::PlaneCurve(3),
            mv: TMove::Birational,
            dst: Variety::ProjectiveSpace(1),
        };
        assert!(verify_t_step(&bad).is_err());
        let bad = TChainStep {
            src: Variety::Hypersurface { n: 2, d: 4 },
            mv: TMove::Deformation,
            dst: Variety::Hypersurface { n: 2, d: 5 },
        };
        assert!(verify_t_step(&bad).is_err());
        let mut c = t_chain(3, 4);
        c.pop();
        assert!(verify_t_chain(3, &c).is_err());
    }
}
