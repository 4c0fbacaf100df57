//! Concrete finite groups used as quotient targets.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::arith::{gcd, lcm};

/// A finite group from one of the searched families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TargetGroup {
    /// (ℤ/exponent)^rank.
    Abelian { exponent: u32, rank: u32 },
    /// ⟨x, y | x^{2n}, y² = x^n, y x y⁻¹ = x⁻¹⟩, order 4n; n = 2 is Q₈.
    Dicyclic { n: u32 },
    /// ℤ/n ⋊ ℤ/k with y x y⁻¹ = x^r; r = n − 1, k = 2 is the dihedral group.
    Metacyclic { n: u32, k: u32, r: u32 },
    /// 2×2 matrix groups over 𝔽_p.
    Linear { p: u32, kind: LinearKind },
    /// Subgroups of the symmetric group on `degree` points.
    Symmetric { degree: u8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LinearKind {
    SL,
    PSL,
    GL,
    PGL,
}

/// An element of a [`TargetGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupImage {
    Abelian(Vec<u32>),
    /// x^x · y^y.
    Pair {
        x: u32,
        y: u32,
    },
    /// Images of 0..degree.
    Perm(Vec<u8>),
    /// Row-major entries (a, b, c, d) of [[a, b], [c, d]].
    Matrix([u32; 4]),
}

impl fmt::Display for GroupImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupImage::Abelian(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupImage::Pair { x, y } => write!(f, "x^{x} y^{y}"),
            GroupImage::Perm(p) => write!(f, "{}", cycle_notation(p)),
            GroupImage::Matrix([a, b, c, d]) => write!(f, "[[{a},{b}],[{c},{d}]]"),
        }
    }
}

fn cycle_notation(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(i + 1).to_string());
            first = false;
            i = p[i] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

impl fmt::Display for TargetGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TargetGroup::Abelian { rank: 0, .. } => write!(f, "trivial"),
            TargetGroup::Abelian { exponent, rank } => write!(f, "(Z/{exponent})^{rank}"),
            TargetGroup::Dicyclic { n: 2 } => write!(f, "Q8"),
            TargetGroup::Dicyclic { n } => write!(f, "Dic{n}"),
            TargetGroup::Metacyclic { n, k: 2, r } if r == (n - 1) % n => {
                write!(f, "Dih{n}")
            }
            TargetGroup::Metacyclic { n, k, r } => write!(f, "Z/{n} x|{r} Z/{k}"),
            TargetGroup::Linear { p, kind } => write!(f, "{kind:?}(2,{p})"),
            TargetGroup::Symmetric { degree } => write!(f, "S{degree}"),
        }
    }
}

fn mat_mul([a, b, c, d]: [u32; 4], [e, f, g, h]: [u32; 4], p: u32) -> [u32; 4] {
    [
        (a * e + b * g) % p,
        (a * f + b * h) % p,
        (c * e + d * g) % p,
        (c * f + d * h) % p,
    ]
}

fn det([a, b, c, d]: [u32; 4], p: u32) -> u32 {
    (a * d % p + p - b * c % p) % p
}

/// Representative of a matrix modulo the scalars of `kind`.
fn canonical(m: [u32; 4], p: u32, kind: LinearKind) -> [u32; 4] {
    match kind {
        LinearKind::SL | LinearKind::GL => m,
        LinearKind::PSL => m.min(m.map(|x| (p - x) % p)),
        LinearKind::PGL => {
            let lead = *m.iter().find(|&&x| x != 0).expect("invertible matrix");
            let inv = crate::arith::mod_pow(lead as u64, p as u64 - 2, p as u64) as u32;
            m.map(|x| x * inv % p)
        }
    }
}

fn pow_mod(base: u32, exp: u32, m: u32) -> u32 {
    crate::arith::mod_pow(base as u64, exp as u64, m as u64) as u32
}

impl TargetGroup {
    pub fn dihedral(n: u32) -> Self {
        TargetGroup::Metacyclic {
            n,
            k: 2,
            r: (n - 1) % n.max(1),
        }
    }

    pub fn order(&self) -> u64 {
        match *self {
            TargetGroup::Abelian { exponent, rank } => (exponent as u64).pow(rank),
            TargetGroup::Dicyclic { n } => 4 * n as u64,
            TargetGroup::Metacyclic { n, k, .. } => n as u64 * k as u64,
            TargetGroup::Linear { p, kind } => {
                let p = p as u64;
                let sl = p * (p * p - 1);
                match kind {
                    LinearKind::SL | LinearKind::PGL => sl,
                    LinearKind::PSL => sl / gcd(2, p as i64 - 1) as u64,
                    LinearKind::GL => sl * (p - 1),
                }
            }
            TargetGroup::Symmetric { degree } => (1..=degree as u64).product(),
        }
    }

    /// Checks the defining parameters.
    pub fn is_valid(&self) -> bool {
        match *self {
            TargetGroup::Abelian { exponent, .. } => exponent >= 1,
            TargetGroup::Dicyclic { n } => n >= 2,
            TargetGroup::Metacyclic { n, k, r } => {
                n >= 1
                    && k >= 1
                    && r < n.max(2)
                    && gcd(r as i64, n as i64) == 1
                    && pow_mod(r, k, n) == 1 % n
            }
            TargetGroup::Linear { p, .. } => crate::arith::is_prime(p as u64) && p < 64,
            TargetGroup::Symmetric { degree } => (1..=8).contains(&degree),
        }
    }

    pub fn contains(&self, g: &GroupImage) -> bool {
        match (*self, g) {
            (TargetGroup::Abelian { exponent, rank }, GroupImage::Abelian(c)) => {
                c.len() == rank as usize && c.iter().all(|&v| v < exponent)
            }
            (TargetGroup::Dicyclic { n }, GroupImage::Pair { x, y }) => *x < 2 * n && *y < 2,
            (TargetGroup::Metacyclic { n, k, .. }, GroupImage::Pair { x, y }) => *x < n && *y < k,
            (TargetGroup::Symmetric { degree }, GroupImage::Perm(p)) => {
                let mut seen = vec![false; degree as usize];
                p.len() == degree as usize
                    && p.iter().all(|&i| {
                        (i as usize) < seen.len() && !std::mem::replace(&mut seen[i as usize], true)
                    })
            }
            (TargetGroup::Linear { p, kind }, GroupImage::Matrix(m)) => {
                let d = det(*m, p);
                m.iter().all(|&x| x < p)
                    && d != 0
                    && (d == 1 || matches!(kind, LinearKind::GL | LinearKind::PGL))
                    && canonical(*m, p, kind) == *m
            }
            _ => false,
        }
    }

    pub fn identity(&self) -> GroupImage {
        match *self {
            TargetGroup::Abelian { rank, .. } => GroupImage::Abelian(vec![0; rank as usize]),
            TargetGroup::Dicyclic { .. } | TargetGroup::Metacyclic { .. } => {
                GroupImage::Pair { x: 0, y: 0 }
            }
            TargetGroup::Linear { .. } => GroupImage::Matrix([1, 0, 0, 1]),
            TargetGroup::Symmetric { degree } => GroupImage::Perm((0..degree).collect()),
        }
    }

    /// The product g·h. Permutations compose as functions: (g·h)(i) = g(h(i)).
    pub fn multiply(&self, g: &GroupImage, h: &GroupImage) -> GroupImage {
        match (*self, g, h) {
            (
                TargetGroup::Abelian { exponent, .. },
                GroupImage::Abelian(a),
                GroupImage::Abelian(b),
            ) => GroupImage::Abelian(a.iter().zip(b).map(|(u, v)| (u + v) % exponent).collect()),
            (
                TargetGroup::Dicyclic { n },
                GroupImage::Pair { x: a, y: s },
                GroupImage::Pair { x: b, y: t },
            ) => {
                let m = 2 * n;
                match (s, t) {
                    (0, _) => GroupImage::Pair {
                        x: (a + b) % m,
                        y: *t,
                    },
                    (_, 0) => GroupImage::Pair {
                        x: (a + m - b) % m,
                        y: 1,
                    },
                    _ => GroupImage::Pair {
                        x: (a + m - b + n) % m,
                        y: 0,
                    },
                }
            }
            (
                TargetGroup::Metacyclic { n, k, r },
                GroupImage::Pair { x: a, y: b },
                GroupImage::Pair { x: c, y: d },
            ) => {
                let twisted = (pow_mod(r, *b, n) as u64 * *c as u64 % n as u64) as u32;
                GroupImage::Pair {
                    x: (a + twisted) % n,
                    y: (b + d) % k,
                }
            }
            (TargetGroup::Symmetric { .. }, GroupImage::Perm(p), GroupImage::Perm(q)) => {
                GroupImage::Perm(q.iter().map(|&i| p[i as usize]).collect())
            }
            (TargetGroup::Linear { p, kind }, GroupImage::Matrix(a), GroupImage::Matrix(b)) => {
                GroupImage::Matrix(canonical(mat_mul(*a, *b, p), p, kind))
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn inverse(&self, g: &GroupImage) -> GroupImage {
        match (*self, g) {
            (TargetGroup::Abelian { exponent, .. }, GroupImage::Abelian(a)) => {
                GroupImage::Abelian(a.iter().map(|&u| (exponent - u) % exponent).collect())
            }
            (TargetGroup::Dicyclic { n }, GroupImage::Pair { x, y: 0 }) => GroupImage::Pair {
                x: (2 * n - x) % (2 * n),
                y: 0,
            },
            (TargetGroup::Dicyclic { n }, GroupImage::Pair { x, .. }) => GroupImage::Pair {
                x: (x + n) % (2 * n),
                y: 1,
            },
            (TargetGroup::Metacyclic { n, k, r }, GroupImage::Pair { x, y }) => {
                let back = pow_mod(r, (k - y % k) % k, n) as u64;
                let x = (n as u64 - back * *x as u64 % n as u64) % n as u64;
                GroupImage::Pair {
                    x: x as u32,
                    y: (k - y) % k,
                }
            }
            (TargetGroup::Symmetric { .. }, GroupImage::Perm(p)) => {
                let mut inv = vec![0u8; p.len()];
                for (i, &j) in p.iter().enumerate() {
                    inv[j as usize] = i as u8;
                }
                GroupImage::Perm(inv)
            }
            (TargetGroup::Linear { p, kind }, GroupImage::Matrix(m)) => {
                let [a, b, c, d] = *m;
                let di = crate::arith::mod_pow(det(*m, p) as u64, p as u64 - 2, p as u64) as u32;
                let adj = [d, (p - b) % p, (p - c) % p, a];
                GroupImage::Matrix(canonical(adj.map(|x| x * di % p), p, kind))
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Order of an element by repeated multiplication.
    pub fn element_order(&self, g: &GroupImage) -> u64 {
        let id = self.identity();
        let mut acc = g.clone();
        let mut k = 1;
        while acc != id {
            acc = self.multiply(&acc, g);
            k += 1;
        }
        k
    }

    /// Order of the subgroup generated by `gens`, or `None` once it exceeds `cap`.
    pub fn generated_order(&self, gens: &[GroupImage], cap: u64) -> Option<u64> {
        let id = self.identity();
        let mut seen: HashSet<GroupImage> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.multiply(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() as u64 > cap {
                        return None;
                    }
                    queue.push_back(y);
                }
            }
        }
        Some(seen.len() as u64)
    }

    /// Elements in table order, identity first. Abelian coordinates vary
    /// first coordinate fastest.
    pub(crate) fn elements(&self) -> Vec<GroupImage> {
        match *self {
            TargetGroup::Abelian { exponent, rank } => (0..self.order() as u32)
                .map(|index| {
                    let mut i = index;
                    GroupImage::Abelian(
                        (0..rank)
                            .map(|_| {
                                let c = i % exponent;
                                i /= exponent;
                                c
                            })
                            .collect(),
                    )
                })
                .collect(),
            TargetGroup::Dicyclic { n } => (0..4 * n)
                .map(|i| GroupImage::Pair {
                    x: i % (2 * n),
                    y: i / (2 * n),
                })
                .collect(),
            TargetGroup::Metacyclic { n, k, .. } => (0..n * k)
                .map(|i| GroupImage::Pair { x: i % n, y: i / n })
                .collect(),
            TargetGroup::Linear { p, kind } => {
                let mut out = vec![self.identity()];
                for code in 0..p.pow(4) {
                    let m = [
                        code % p,
                        code / p % p,
                        code / (p * p) % p,
                        code / (p * p * p),
                    ];
                    let g = GroupImage::Matrix(m);
                    if m != [1, 0, 0, 1] && self.contains(&g) {
                        out.push(g);
                    }
                }
                debug_assert_eq!(out.len() as u64, self.order(), "{kind:?}");
                out
            }
            TargetGroup::Symmetric { .. } => unreachable!("symmetric groups are not tabulated"),
        }
    }

    /// Orders of all elements by closed formula, in table order. `None` for
    /// families without one.
    pub(crate) fn element_orders(&self) -> Option<Vec<u32>> {
        Some(match *self {
            TargetGroup::Abelian { exponent, .. } => self
                .elements()
                .iter()
                .map(|e| match e {
                    GroupImage::Abelian(c) => c.iter().fold(1, |acc, &v| {
                        lcm(acc, exponent as i64 / gcd(v as i64, exponent as i64))
                    }) as u32,
                    _ => unreachable!(),
                })
                .collect(),
            TargetGroup::Dicyclic { n } => (0..4 * n)
                .map(|i| {
                    if i >= 2 * n {
                        4
                    } else {
                        2 * n / gcd(i as i64, 2 * n as i64) as u32
                    }
                })
                .collect(),
            TargetGroup::Metacyclic { n, k, r } => {
                // (x^a y^b)^t = x^{a(1 + r^b + … + r^{b(t−1)})} with t the order of y^b.
                let mut out = Vec::with_capacity((n * k) as usize);
                for b in 0..k {
                    let t = k / gcd(b as i64, k as i64) as u32;
                    let step = pow_mod(r, b, n) as u64;
                    let mut s = 0u64;
                    let mut p = 1 % n as u64;
                    for _ in 0..t {
                        s = (s + p) % n as u64;
                        p = p * step % n as u64;
                    }
                    for a in 0..n {
                        let z = (a as u64 * s % n as u64) as i64;
                        out.push(t * (n / gcd(z, n as i64) as u32));
                    }
                }
                out
            }
            _ => return None,
        })
    }
}

/// Multiplication table of a tabulated group; index 0 is the identity.
pub(crate) struct TableGroup {
    pub elems: Vec<GroupImage>,
    pub n: usize,
    pub mul: Vec<u16>,
    pub inv: Vec<u16>,
    pub orders: Vec<u32>,
}

impl TableGroup {
    pub fn new(target: TargetGroup) -> Self {
        let elems = target.elements();
        let n = elems.len();
        let mut mul = vec![0u16; n * n];
        match target {
            TargetGroup::Metacyclic { n: m, k, r } => {
                let pw: Vec<u32> = (0..k).map(|b| pow_mod(r, b, m)).collect();
                for i in 0..n {
                    let (a, b) = (i as u32 % m, i as u32 / m);
                    for j in 0..n {
                        let (c, d) = (j as u32 % m, j as u32 / m);
                        mul[i * n + j] = ((a + pw[b as usize] * c) % m + m * ((b + d) % k)) as u16;
                    }
                }
            }
            _ => {
                let index: std::collections::HashMap<&GroupImage, u16> = elems
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (e, i as u16))
                    .collect();
                for (i, a) in elems.iter().enumerate() {
                    for (j, b) in elems.iter().enumerate() {
                        mul[i * n + j] = index[&target.multiply(a, b)];
                    }
                }
            }
        }
        let mut inv = vec![0u16; n];
        for i in 0..n {
            for j in 0..n {
                if mul[i * n + j] == 0 {
                    inv[i] = j as u16;
                    break;
                }
            }
        }
        let orders = (0..n)
            .map(|i| {
                let (mut x, mut k) = (i, 1);
                while x != 0 {
                    x = mul[x * n + i] as usize;
                    k += 1;
                }
                k
            })
            .collect();
        Self {
            elems,
            n,
            mul,
            inv,
            orders,
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }
}
