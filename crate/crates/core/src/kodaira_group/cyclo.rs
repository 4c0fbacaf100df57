//! The cyclotomic field ℚ(ζ₁₂) in the basis {1, i, ω, iω}, ω² + ω + 1 = 0.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

/// a + b·i + c·ω + e·iω with coefficients in `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Cyclo12<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub e: T,
}

/// Exact elements of ℚ(ζ₁₂).
pub type ExactComplex = Cyclo12<BigRational>;

/// Product in ℚ(ω): (a₁ + c₁ω)(a₂ + c₂ω).
fn omega_mul<T: Clone + Num>(a1: &T, c1: &T, a2: &T, c2: &T) -> (T, T) {
    let cc = c1.clone() * c2.clone();
    (
        a1.clone() * a2.clone() - cc.clone(),
        a1.clone() * c2.clone() + a2.clone() * c1.clone() - cc,
    )
}

impl<T: Clone + Num + Neg<Output = T>> Cyclo12<T> {
    pub fn new(a: T, b: T, c: T, e: T) -> Self {
        Self { a, b, c, e }
    }

    pub fn from_real(a: T) -> Self {
        Self::new(a, T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn omega() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    /// ζ₁₂ = e^{iπ/6} = −iω.
    pub fn zeta12() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), -T::one())
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(
            self.a.clone() * k.clone(),
            self.b.clone() * k.clone(),
            self.c.clone() * k.clone(),
            self.e.clone() * k.clone(),
        )
    }

    /// Complex conjugation: i ↦ −i, ω ↦ ω̄ = −1 − ω.
    pub fn conj(&self) -> Self {
        Self::new(
            self.a.clone() - self.c.clone(),
            self.e.clone() - self.b.clone(),
            -self.c.clone(),
            self.e.clone(),
        )
    }

    /// The automorphism fixing i and sending ω to ω̄.
    pub fn sigma(&self) -> Self {
        Self::new(
            self.a.clone() - self.c.clone(),
            self.b.clone() - self.e.clone(),
            -self.c.clone(),
            -self.e.clone(),
        )
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // N = z z̄ lies in ℚ(√3) and N·σ(N) in ℚ.
        let n = self.clone() * self.conj();
        let ns = n.sigma();
        let q = (n * ns.clone()).a;
        Some((self.conj() * ns).scale(&(T::one() / q)))
    }
}

impl<T: Clone + Num + Neg<Output = T>> Add for Cyclo12<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.e + o.e)
    }
}

impl<T: Clone + Num + Neg<Output = T>> Sub for Cyclo12<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.e - o.e)
    }
}

impl<T: Clone + Num + Neg<Output = T>> Neg for Cyclo12<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.e)
    }
}

impl<T: Clone + Num + Neg<Output = T>> Mul for Cyclo12<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // (x₁ + y₁i)(x₂ + y₂i) with x, y ∈ ℚ(ω).
        let (xx_a, xx_c) = omega_mul(&self.a, &self.c, &o.a, &o.c);
        let (yy_a, yy_c) = omega_mul(&self.b, &self.e, &o.b, &o.e);
        let (xy_a, xy_c) = omega_mul(&self.a, &self.c, &o.b, &o.e);
        let (yx_a, yx_c) = omega_mul(&self.b, &self.e, &o.a, &o.c);
        Self::new(xx_a - yy_a, xy_a + yx_a, xx_c - yy_c, xy_c + yx_c)
    }
}

impl<T: Clone + Num + Neg<Output = T>> Zero for Cyclo12<T> {
    fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.e.is_zero()
    }
}

impl<T: Clone + Num + Neg<Output = T>> One for Cyclo12<T> {
    fn one() -> Self {
        Self::from_real(T::one())
    }
}

impl Cyclo12<BigRational> {
    pub fn from_ints(a: i64, b: i64, c: i64, e: i64) -> Self {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        Self::new(q(a), q(b), q(c), q(e))
    }

    pub fn coords(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.e]
    }

    /// Floating-point image under the embedding ω ↦ e^{2πi/3}.
    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let [a, b, c, e] = self.coords().map(|x| x.to_f64().unwrap_or(f64::NAN));
        let s = 3f64.sqrt() / 2.0;
        (a - c / 2.0 - e * s, b + c * s - e / 2.0)
    }
}

impl Cyclo12<f64> {
    /// The complex number this element denotes.
    pub fn to_complex(&self) -> (f64, f64) {
        let s = 3f64.sqrt() / 2.0;
        (
            self.a - self.c / 2.0 - self.e * s,
            self.b + self.c * s - self.e / 2.0,
        )
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Cyclo12<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (coef, unit) in [
            (&self.a, ""),
            (&self.b, "I"),
            (&self.c, "W"),
            (&self.e, "IW"),
        ] {
            if coef.is_zero() {
                continue;
            }
            let sign = if coef.is_negative() {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = fmt_rational(&coef.abs());
            let term = match (unit, mag.as_str()) {
                ("", m) => m.to_string(),
                (u, "1") => u.to_string(),
                (u, m) => format!("{m}*{u}"),
            };
            out.push_str(sign);
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad complex literal {text:?} at column {column}")]
pub struct LiteralError {
    pub text: String,
    pub column: usize,
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl FromStr for Cyclo12<BigRational> {
    type Err = LiteralError;

    /// Parses sums of terms `q`, `q*I`, `q*W`, `q*IW` (or bare `I`, `W`,
    /// `IW`) with rational q such as `-3/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: Vec<(usize, char)> = s
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let err = |column: usize| LiteralError {
            text: s.to_string(),
            column: column + 1,
        };
        if compact.is_empty() {
            return Err(err(0));
        }
        let mut z = Self::zero();
        let mut i = 0;
        while i < compact.len() {
            let start = compact[i].0;
            let mut negative = false;
            if compact[i].1 == '+' || compact[i].1 == '-' {
                negative = compact[i].1 == '-';
                i += 1;
            }
            let mut j = i;
            while j < compact.len() && !(j > i && (compact[j].1 == '+' || compact[j].1 == '-')) {
                j += 1;
            }
            let term: String = compact[i..j].iter().map(|(_, c)| *c).collect();
            let (coef, unit) = match term.rsplit_once('*') {
                Some((q, u)) => (parse_rational(q).ok_or_else(|| err(start))?, u.to_string()),
                None if term.chars().all(|c| c.is_ascii_digit() || c == '/') => (
                    parse_rational(&term).ok_or_else(|| err(start))?,
                    String::new(),
                ),
                None => (BigRational::one(), term.clone()),
            };
            let coef = if negative { -coef } else { coef };
            match unit.as_str() {
                "" => z.a += coef,
                "I" => z.b += coef,
                "W" => z.c += coef,
                "IW" => z.e += coef,
                _ => return Err(err(start)),
            }
            i = j;
        }
        Ok(z)
    }
}
