//! Affine transformation groups of primary Kodaira surfaces, computed exactly
//! over ℚ(ζ₁₂).
//!
//! Sign convention: the pairing of two translation parts is
//! `pairing(x, y) = y·x̄ − x·ȳ`, and valid data satisfies
//! `pairing(α₃, α₄) = m·β₂`. With this sign the reference surface S₀ has
//! m = 1 and [g₃, g₄] = g₂ exactly; the opposite sign would force m = −1.

mod cyclo;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

pub use cyclo::{Cyclo12, ExactComplex, LiteralError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KodairaError {
    #[error("alpha{0} must be 0")]
    NonzeroAlpha(usize),
    #[error("beta1, beta2 are real-linearly dependent")]
    DegenerateBeta,
    #[error("m must be nonzero")]
    ZeroM,
    #[error("pairing of alpha3, alpha4 is {pairing}, expected m*beta2 = {expected}")]
    PairingMismatch { pairing: String, expected: String },
    #[error("pairing of alpha3, alpha4 vanishes")]
    DegenerateAlpha,
    #[error("commutator [g{0},g{1}] is {2}")]
    Presentation(usize, usize, String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("sigma = {0} is not a 12th root of unity")]
    NotRootOfUnity(String),
}

/// The affine map (z₁, z₂) ↦ (z₁ + a, z₂ + ā·z₁ + b).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: ExactComplex,
    pub b: ExactComplex,
}

impl GroupElement {
    pub fn new(a: ExactComplex, b: ExactComplex) -> Self {
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self::new(ExactComplex::zero(), ExactComplex::zero())
    }

    pub fn translation(b: ExactComplex) -> Self {
        Self::new(ExactComplex::zero(), b)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn apply(&self, z1: &ExactComplex, z2: &ExactComplex) -> (ExactComplex, ExactComplex) {
        (
            z1.clone() + self.a.clone(),
            z2.clone() + self.a.conj() * z1.clone() + self.b.clone(),
        )
    }

    pub fn inverse(&self) -> Self {
        Self::new(
            -self.a.clone(),
            self.a.conj() * self.a.clone() - self.b.clone(),
        )
    }

    /// gⁿ for any integer n.
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| compose(&acc, &base))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// The element h∘g (first g, then h).
pub fn compose(g: &GroupElement, h: &GroupElement) -> GroupElement {
    GroupElement::new(
        g.a.clone() + h.a.clone(),
        g.b.clone() + h.b.clone() + h.a.conj() * g.a.clone(),
    )
}

/// g∘h∘g⁻¹∘h⁻¹. Its a-slot is 0 and its b-slot is `pairing(a_g, a_h)`.
pub fn commutator(g: &GroupElement, h: &GroupElement) -> GroupElement {
    let first = compose(&h.inverse(), &g.inverse());
    compose(&compose(&first, h), g)
}

/// y·x̄ − x·ȳ.
pub fn pairing(x: &ExactComplex, y: &ExactComplex) -> ExactComplex {
    y.clone() * x.conj() - x.clone() * y.conj()
}

/// Generator data (α₁..α₄, β₁..β₄, m) of g_i = (α_i, β_i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KodairaGroupData {
    pub alpha: [ExactComplex; 4],
    pub beta: [ExactComplex; 4],
    pub m: i64,
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Solves target = x·u + y·v over ℚ, coordinate-wise in ℚ(ζ₁₂).
fn solve_in_span(
    u: &ExactComplex,
    v: &ExactComplex,
    target: &ExactComplex,
) -> Option<(BigRational, BigRational)> {
    let (u, v, t) = (u.coords(), v.coords(), target.coords());
    for i in 0..4 {
        for j in i + 1..4 {
            let det = u[i] * v[j] - u[j] * v[i];
            if det.is_zero() {
                continue;
            }
            let x = (t[i] * v[j] - t[j] * v[i]) / &det;
            let y = (u[i] * t[j] - u[j] * t[i]) / &det;
            let ok = (0..4).all(|k| &(&x * u[k] + &y * v[k]) == t[k]);
            return ok.then_some((x, y));
        }
    }
    None
}

fn integral(q: &BigRational) -> Option<i64> {
    use num_traits::ToPrimitive;
    q.is_integer().then(|| q.to_integer().to_i64()).flatten()
}

impl KodairaGroupData {
    pub fn new(
        alpha: [ExactComplex; 4],
        beta: [ExactComplex; 4],
        m: i64,
    ) -> Result<Self, KodairaError> {
        let d = Self { alpha, beta, m };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), KodairaError> {
        for i in 0..2 {
            if !self.alpha[i].is_zero() {
                return Err(KodairaError::NonzeroAlpha(i + 1));
            }
        }
        if pairing(&self.beta[1], &self.beta[0]).is_zero() {
            return Err(KodairaError::DegenerateBeta);
        }
        if self.m == 0 {
            return Err(KodairaError::ZeroM);
        }
        let p = pairing(&self.alpha[2], &self.alpha[3]);
        if p.is_zero() {
            return Err(KodairaError::DegenerateAlpha);
        }
        let expected = self.beta[1].scale(&rational(self.m));
        if p != expected {
            return Err(KodairaError::PairingMismatch {
                pairing: p.to_string(),
                expected: expected.to_string(),
            });
        }
        Ok(())
    }

    pub fn generators(&self) -> [GroupElement; 4] {
        std::array::from_fn(|i| GroupElement::new(self.alpha[i].clone(), self.beta[i].clone()))
    }

    /// Membership in the group generated by the data (which must be valid).
    /// Every element is g₃^{n₃}∘g₄^{n₄} followed by a translation in
    /// ℤβ₁ + ℤβ₂.
    pub fn contains(&self, x: &GroupElement) -> bool {
        let Some((n3, n4)) = solve_in_span(&self.alpha[2], &self.alpha[3], &x.a) else {
            return false;
        };
        let (Some(n3), Some(n4)) = (integral(&n3), integral(&n4)) else {
            return false;
        };
        let g = self.generators();
        let e = compose(&g[3].pow(n4), &g[2].pow(n3));
        let rest = compose(x, &e.inverse());
        debug_assert!(rest.a.is_zero());
        match solve_in_span(&self.beta[0], &self.beta[1], &rest.b) {
            Some((k1, k2)) => k1.is_integer() && k2.is_integer(),
            None => false,
        }
    }
}

impl fmt::Display for KodairaGroupData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.alpha.iter().enumerate() {
            writeln!(f, "alpha{} = {a}", i + 1)?;
        }
        for (i, b) in self.beta.iter().enumerate() {
            writeln!(f, "beta{} = {b}", i + 1)?;
        }
        writeln!(f, "m = {}", self.m)
    }
}

/// Parses `key = value` lines (alpha1..alpha4, beta1..beta4, m); `#` starts
/// a comment. The result is not validated.
pub fn parse_data(text: &str) -> Result<KodairaGroupData, KodairaError> {
    let mut alpha: [Option<ExactComplex>; 4] = Default::default();
    let mut beta: [Option<ExactComplex>; 4] = Default::default();
    let mut m: Option<i64> = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let err = |message: String| KodairaError::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("expected key = value".into()))?;
        let (key, value) = (key.trim(), value.trim());
        let slot = match key {
            "m" => {
                if m.replace(
                    value
                        .parse()
                        .map_err(|_| err(format!("bad integer {value:?}")))?,
                )
                .is_some()
                {
                    return Err(err("duplicate key m".into()));
                }
                continue;
            }
            k if k.starts_with("alpha") => k[5..]
                .parse::<usize>()
                .ok()
                .filter(|i| (1..=4).contains(i))
                .map(|i| &mut alpha[i - 1]),
            k if k.starts_with("beta") => k[4..]
                .parse::<usize>()
                .ok()
                .filter(|i| (1..=4).contains(i))
                .map(|i| &mut beta[i - 1]),
            _ => None,
        }
        .ok_or_else(|| err(format!("unknown key {key:?}")))?;
        let z: ExactComplex = value
            .parse()
            .map_err(|e: LiteralError| err(e.to_string()))?;
        if slot.replace(z).is_some() {
            return Err(err(format!("duplicate key {key}")));
        }
    }
    let last = text.lines().count().max(1);
    let missing = |name: String| KodairaError::Parse {
        line: last,
        message: format!("missing key {name}"),
    };
    let take =
        |arr: [Option<ExactComplex>; 4], name: &str| -> Result<[ExactComplex; 4], KodairaError> {
            let mut out: [ExactComplex; 4] = Default::default();
            for (i, v) in arr.into_iter().enumerate() {
                out[i] = v.ok_or_else(|| missing(format!("{name}{}", i + 1)))?;
            }
            Ok(out)
        };
    Ok(KodairaGroupData {
        alpha: take(alpha, "alpha")?,
        beta: take(beta, "beta")?,
        m: m.ok_or_else(|| missing("m".into()))?,
    })
}

/// α = (0, 0, 1, i), β = (1, 2i, 0, 0), m = 1.
pub fn s0_data() -> KodairaGroupData {
    let z = ExactComplex::zero;
    KodairaGroupData {
        alpha: [z(), z(), ExactComplex::one(), ExactComplex::i()],
        beta: [
            ExactComplex::one(),
            ExactComplex::from_ints(0, 2, 0, 0),
            z(),
            z(),
        ],
        m: 1,
    }
}

/// Conjugates every α and β; m is unchanged since the pairing is odd under
/// conjugation.
pub fn conjugate_data(d: &KodairaGroupData) -> KodairaGroupData {
    KodairaGroupData {
        alpha: d.alpha.clone().map(|z| z.conj()),
        beta: d.beta.clone().map(|z| z.conj()),
        m: d.m,
    }
}

/// α₃ ↦ α₃/m, m ↦ 1.
pub fn rescale(d: &KodairaGroupData) -> KodairaGroupData {
    let mut out = d.clone();
    out.alpha[2] = d.alpha[2].scale(&(BigRational::one() / rational(d.m)));
    out.m = 1;
    out
}

/// Whether two valid data sets generate the same subgroup of Aff(ℂ²).
pub fn same_group(x: &KodairaGroupData, y: &KodairaGroupData) -> bool {
    x.generators().iter().all(|g| y.contains(g)) && y.generators().iter().all(|g| x.contains(g))
}

/// Checks [g_i, g_j] = g₂^{±1} for (i, j) = (3, 4) and the identity for every
/// other pair. Returns the sign of the exponent.
pub fn verify_presentation(d: &KodairaGroupData) -> Result<i8, KodairaError> {
    let g = d.generators();
    let g2 = GroupElement::translation(d.beta[1].clone());
    let mut sign = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            let c = commutator(&g[i], &g[j]);
            let ok = if (i, j) == (2, 3) {
                if c == g2 {
                    sign = 1;
                    true
                } else if c == g2.inverse() {
                    sign = -1;
                    true
                } else {
                    false
                }
            } else {
                c.is_identity()
            };
            if !ok {
                return Err(KodairaError::Presentation(i + 1, j + 1, c.to_string()));
            }
        }
    }
    Ok(sign)
}

/// φ(z₁, z₂) = (σz₁ + h₁z₂ + h₀, z₂ + h₂).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineAuto {
    pub sigma: ExactComplex,
    pub h1: ExactComplex,
    pub h0: ExactComplex,
    pub h2: ExactComplex,
}

impl AffineAuto {
    pub fn new(
        sigma: ExactComplex,
        h1: ExactComplex,
        h0: ExactComplex,
        h2: ExactComplex,
    ) -> Result<Self, KodairaError> {
        if sigma.pow(12) != ExactComplex::one() {
            return Err(KodairaError::NotRootOfUnity(sigma.to_string()));
        }
        Ok(Self { sigma, h1, h0, h2 })
    }

    pub fn apply(&self, z1: &ExactComplex, z2: &ExactComplex) -> (ExactComplex, ExactComplex) {
        (
            self.sigma.clone() * z1.clone() + self.h1.clone() * z2.clone() + self.h0.clone(),
            z2.clone() + self.h2.clone(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FixedPointSet {
    Empty,
    IsolatedPoints,
    Codim1Line,
    AllOfC2,
}

/// Solutions of (σ−1)z₁ + h₁z₂ + h₀ = 0, h₂ = 0.
pub fn fixed_point_set(phi: &AffineAuto) -> FixedPointSet {
    if !phi.h2.is_zero() {
        return FixedPointSet::Empty;
    }
    let s = phi.sigma.clone() - ExactComplex::one();
    if !s.is_zero() || !phi.h1.is_zero() {
        FixedPointSet::Codim1Line
    } else if phi.h0.is_zero() {
        FixedPointSet::AllOfC2
    } else {
        FixedPointSet::Empty
    }
}

/// Twelfth roots of unity ζ₁₂^k, k = 0..12.
pub fn roots_of_unity() -> Vec<ExactComplex> {
    (0..12).map(|k| ExactComplex::zeta12().pow(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z(a: i64, b: i64, c: i64, e: i64) -> ExactComplex {
        ExactComplex::from_ints(a, b, c, e)
    }

    fn random_exact(rng: &mut ChaCha8Rng) -> ExactComplex {
        let mut q = || {
            BigRational::new(
                BigInt::from(rng.gen_range(-6..7)),
                BigInt::from(rng.gen_range(1..4)),
            )
        };
        ExactComplex::new(q(), q(), q(), q())
    }

    #[test]
    fn compose_examples() {
        let g = GroupElement::new(z(1, 0, 0, 0), z(0, 0, 0, 0));
        let h = GroupElement::new(z(0, 1, 0, 0), z(0, 0, 0, 0));
        assert_eq!(compose(&g, &GroupElement::identity()), g);
        let gh = compose(&g, &h);
        let hg = compose(&h, &g);
        // ī·1 − 1̄·i = −2i
        assert_eq!(gh.b.clone() - hg.b.clone(), z(0, -2, 0, 0));
        assert_eq!(compose(&g, &g.inverse()), GroupElement::identity());
    }

    #[test]
    fn compose_matches_function_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = GroupElement::new(random_exact(&mut rng), random_exact(&mut rng));
            let h = GroupElement::new(random_exact(&mut rng), random_exact(&mut rng));
            let (z1, z2) = (random_exact(&mut rng), random_exact(&mut rng));
            let (w1, w2) = g.apply(&z1, &z2);
            assert_eq!(h.apply(&w1, &w2), compose(&g, &h).apply(&z1, &z2));
            let c = commutator(&g, &h);
            assert!(c.a.is_zero());
            assert_eq!(c.b, pairing(&g.a, &h.a));
        }
    }

    #[test]
    fn s0_commutator_and_validity() {
        let d = s0_data();
        assert_eq!(pairing(&d.beta[1], &d.beta[0]), z(0, -4, 0, 0));
        d.validate().unwrap();
        let g = d.generators();
        assert_eq!(
            commutator(&g[2], &g[3]),
            GroupElement::translation(z(0, 2, 0, 0))
        );
        assert_eq!(verify_presentation(&rescale(&d)), Ok(1));
        // The printed sign, α₃ᾱ₄ − α₄ᾱ₃, gives −β₂.
        let printed =
            d.alpha[2].clone() * d.alpha[3].conj() - d.alpha[3].clone() * d.alpha[2].conj();
        assert_eq!(printed, -d.beta[1].clone());
    }

    #[test]
    fn s0_is_self_conjugate() {
        let d = s0_data();
        let c = conjugate_data(&d);
        c.validate().unwrap();
        assert_ne!(c, d);
        assert!(same_group(&d, &c));
        assert_eq!(conjugate_data(&c), d);
    }

    #[test]
    fn conjugation_can_change_the_group() {
        // α₃ = 1, α₄ = 1/3 + i: the lattice ℤ + ℤα₄ is not closed under conjugation.
        let third = ExactComplex::from_real(BigRational::new(1.into(), 3.into()));
        let d = KodairaGroupData::new(
            [
                z(0, 0, 0, 0),
                z(0, 0, 0, 0),
                z(1, 0, 0, 0),
                third + z(0, 1, 0, 0),
            ],
            [z(1, 0, 0, 0), z(0, 2, 0, 0), z(0, 0, 0, 0), z(0, 0, 0, 0)],
            1,
        )
        .unwrap();
        let c = conjugate_data(&d);
        c.validate().unwrap();
        assert!(!same_group(&d, &c));
    }

    #[test]
    fn membership_basics() {
        let d = s0_data();
        let g = d.generators();
        assert!(d.contains(&GroupElement::identity()));
        assert!(d.contains(&compose(&g[2].pow(3), &g[3].pow(-2))));
        assert!(!d.contains(&GroupElement::new(z(0, 0, 0, 0), z(0, 1, 0, 0))));
        let half = ExactComplex::from_real(BigRational::new(1.into(), 2.into()));
        assert!(!d.contains(&GroupElement::new(half, z(0, 0, 0, 0))));
    }

    #[test]
    fn rescale_examples() {
        let d = s0_data();
        assert_eq!(rescale(&d), d);
        let d2 = KodairaGroupData::new(
            [z(0, 0, 0, 0), z(0, 0, 0, 0), z(2, 0, 0, 0), z(0, 1, 0, 0)],
            [z(1, 0, 0, 0), z(0, 2, 0, 0), z(0, 0, 0, 0), z(0, 0, 0, 0)],
            2,
        )
        .unwrap();
        let r = rescale(&d2);
        assert_eq!(r.alpha[2], z(1, 0, 0, 0));
        assert_eq!(pairing(&r.alpha[2], &r.alpha[3]), r.beta[1]);
        r.validate().unwrap();
        assert_eq!(rescale(&r), r);
    }

    #[test]
    fn perturbed_beta_fails_on_pair_3_4() {
        let mut d = s0_data();
        d.beta[1] = z(1, 2, 0, 0);
        assert!(matches!(
            verify_presentation(&d),
            Err(KodairaError::Presentation(3, 4, _))
        ));
        assert!(d.validate().is_err());
    }

    #[test]
    fn validation_errors() {
        let mut d = s0_data();
        d.alpha[0] = z(1, 0, 0, 0);
        assert_eq!(d.validate(), Err(KodairaError::NonzeroAlpha(1)));
        let mut d = s0_data();
        d.beta[1] = z(3, 0, 0, 0);
        assert_eq!(d.validate(), Err(KodairaError::DegenerateBeta));
        let mut d = s0_data();
        d.m = -1;
        assert!(matches!(
            d.validate(),
            Err(KodairaError::PairingMismatch { .. })
        ));
    }

    #[test]
    fn data_file_round_trip() {
        let d = s0_data();
        let text = d.to_string();
        assert!(text.contains("beta2 = 2*I"));
        assert_eq!(parse_data(&text).unwrap(), d);
        let with_comments = format!("# reference surface\n{text}\n");
        assert_eq!(parse_data(&with_comments).unwrap(), d);
        assert!(matches!(
            parse_data("alpha5 = 1"),
            Err(KodairaError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_data("alpha1 = 0\nalpha1 = 0"),
            Err(KodairaError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_data("alpha1 = 0"),
            Err(KodairaError::Parse { .. })
        ));
        assert!(matches!(
            parse_data("alpha1 = 2*Q"),
            Err(KodairaError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn fixed_point_examples() {
        let zero = ExactComplex::zero();
        let one = ExactComplex::one();
        let t = AffineAuto::new(one.clone(), zero.clone(), one.clone(), zero.clone()).unwrap();
        assert_eq!(fixed_point_set(&t), FixedPointSet::Empty);
        let r = AffineAuto::new(-one.clone(), zero.clone(), zero.clone(), zero.clone()).unwrap();
        assert_eq!(fixed_point_set(&r), FixedPointSet::Codim1Line);
        // Every point of z₁ = 0 is fixed.
        assert_eq!(
            r.apply(&zero, &z(3, 1, 0, 0)),
            (zero.clone(), z(3, 1, 0, 0))
        );
        let id = AffineAuto::new(one.clone(), zero.clone(), zero.clone(), zero.clone()).unwrap();
        assert_eq!(fixed_point_set(&id), FixedPointSet::AllOfC2);
        assert!(AffineAuto::new(z(2, 0, 0, 0), zero.clone(), zero.clone(), zero).is_err());
        assert_eq!(roots_of_unity().len(), 12);
    }
}
