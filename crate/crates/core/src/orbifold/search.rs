//! Search for finite quotients G of π₁^orb in which every γ_j has order
//! exactly m_j.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::groups::{GroupImage, LinearKind, TableGroup, TargetGroup};
use super::{exceptional_case, presentation, Exceptional, OrbifoldError, OrbifoldSignature};
use crate::arith::{gcd, lcm_all};

pub const DEFAULT_ORDER_BOUND: u64 = 512;

/// Indexed families are not tried beyond this order when the bound is unlimited.
const UNLIMITED_TABLE_CAP: u64 = 1024;

const MAX_DEGREE: u8 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchBound {
    Limited(u64),
    Unlimited,
}

impl SearchBound {
    fn cap(self) -> u64 {
        match self {
            SearchBound::Limited(n) => n,
            SearchBound::Unlimited => u64::MAX,
        }
    }
}

impl fmt::Display for SearchBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchBound::Limited(n) => write!(f, "{n}"),
            SearchBound::Unlimited => f.write_str("unlimited"),
        }
    }
}

/// A homomorphism π₁^orb → G onto the subgroup generated by `images`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientWitness {
    pub signature: OrbifoldSignature,
    pub target: TargetGroup,
    /// Order of the subgroup generated by the images.
    pub target_order: u64,
    /// Images of a₁, b₁, …, a_g, b_g, γ₁, …, γ_r.
    pub images: Vec<GroupImage>,
    pub orders_of_gamma: Vec<u64>,
}

impl fmt::Display for QuotientWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pres = presentation(&self.signature);
        writeln!(
            f,
            "witness group={} order={}",
            self.target, self.target_order
        )?;
        for (name, img) in pres.generator_names.iter().zip(&self.images) {
            writeln!(f, "  {name} -> {img}")?;
        }
        let orders: Vec<String> = self.orders_of_gamma.iter().map(|o| o.to_string()).collect();
        writeln!(f, "orders of gamma: [{}]", orders.join(","))
    }
}

/// Re-checks a witness from scratch using element arithmetic only.
pub fn verify_witness(sig: &OrbifoldSignature, w: &QuotientWitness) -> Result<(), OrbifoldError> {
    let bad = |msg: String| Err(OrbifoldError::BadWitness(msg));
    let t = w.target;
    if !t.is_valid() {
        return bad(format!("invalid target {t}"));
    }
    let pres = presentation(sig);
    if w.images.len() != pres.generator_names.len() {
        return bad(format!(
            "{} images for {} generators",
            w.images.len(),
            pres.generator_names.len()
        ));
    }
    if let Some(img) = w.images.iter().find(|g| !t.contains(g)) {
        return bad(format!("{img} is not an element of {t}"));
    }
    let id = t.identity();
    for (i, rel) in pres.relators.iter().enumerate() {
        let value = rel.iter().fold(id.clone(), |acc, l| {
            let g = &w.images[l.generator];
            if l.inverse {
                t.multiply(&acc, &t.inverse(g))
            } else {
                t.multiply(&acc, g)
            }
        });
        if value != id {
            return bad(format!("relator {} evaluates to {value}", i + 1));
        }
    }
    let g = sig.base_genus as usize;
    if w.orders_of_gamma.len() != sig.r() {
        return bad("wrong number of gamma orders".into());
    }
    for (j, &m) in sig.multiplicities.iter().enumerate() {
        let o = t.element_order(&w.images[2 * g + j]);
        if o != m as u64 || w.orders_of_gamma[j] != o {
            return bad(format!("gamma{} has order {o}, expected {m}", j + 1));
        }
    }
    match t.generated_order(&w.images, w.target_order) {
        Some(n) if n == w.target_order => Ok(()),
        _ => bad(format!(
            "images do not generate a group of order {}",
            w.target_order
        )),
    }
}

pub fn find_good_quotient(
    sig: &OrbifoldSignature,
    bound: SearchBound,
) -> Result<QuotientWitness, OrbifoldError> {
    match exceptional_case(sig) {
        Exceptional::NonExceptional => {}
        e => return Err(OrbifoldError::ExceptionalInput(e)),
    }
    let cap = bound.cap();
    let table_cap = cap.min(UNLIMITED_TABLE_CAP);
    for target in indexed_candidates(sig, table_cap) {
        if let Some(orders) = target.element_orders() {
            if !sig.multiplicities.iter().all(|m| orders.contains(m)) {
                continue;
            }
        }
        let table = TableGroup::new(target);
        if let Some(indices) = solve_in_table(&table, sig) {
            let images: Vec<GroupImage> = indices.iter().map(|&i| table.elems[i].clone()).collect();
            return Ok(build_witness(sig, target, images, cap)
                .expect("subgroup of a group within the bound"));
        }
    }
    if sig.base_genus == 0 {
        for degree in 3..=MAX_DEGREE {
            if let Some(w) = search_symmetric(sig, degree, cap) {
                return Ok(w);
            }
        }
    }
    Err(OrbifoldError::NotFoundWithinBound(bound.to_string()))
}

fn build_witness(
    sig: &OrbifoldSignature,
    target: TargetGroup,
    images: Vec<GroupImage>,
    cap: u64,
) -> Option<QuotientWitness> {
    let target_order = target.generated_order(&images, cap)?;
    let g = sig.base_genus as usize;
    let orders_of_gamma = images[2 * g..]
        .iter()
        .map(|x| target.element_order(x))
        .collect();
    Some(QuotientWitness {
        signature: sig.clone(),
        target,
        target_order,
        images,
        orders_of_gamma,
    })
}

fn divisors(n: u32) -> impl Iterator<Item = u32> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

/// Tabulated targets of order ≤ cap, by order then family: abelian,
/// dicyclic, dihedral, other metacyclic, linear.
fn indexed_candidates(sig: &OrbifoldSignature, cap: u64) -> Vec<TargetGroup> {
    let l = lcm_all(sig.multiplicities.iter().map(|&m| m as i64)) as u32;
    let mut out: Vec<(u64, u8, TargetGroup)> = Vec::new();
    let push = |out: &mut Vec<(u64, u8, TargetGroup)>, rank: u8, t: TargetGroup| {
        if t.order() <= cap {
            out.push((t.order(), rank, t));
        }
    };

    if l == 1 {
        push(
            &mut out,
            0,
            TargetGroup::Abelian {
                exponent: 1,
                rank: 0,
            },
        );
    } else {
        let mut rank = 1;
        while (l as u64).pow(rank) <= cap && rank <= sig.r().max(1) as u32 + 2 * sig.base_genus {
            push(&mut out, 0, TargetGroup::Abelian { exponent: l, rank });
            rank += 1;
        }
    }
    let mut n = 2;
    while 4 * n as u64 <= cap {
        push(&mut out, 1, TargetGroup::Dicyclic { n });
        n += 1;
    }
    // The quotient by ⟨x⟩ is generated by the γ's when g = 0, so k | lcm(m).
    let mut ks: Vec<u32> = divisors(l).filter(|&k| k >= 2).collect();
    if sig.base_genus > 0 && !ks.contains(&2) {
        ks.push(2);
    }
    for k in ks {
        let mut n = 3;
        while n as u64 * k as u64 <= cap {
            // r and r^u give isomorphic groups for u prime to k; keep the least.
            let mut seen = HashSet::new();
            for r in 2..n {
                let t = TargetGroup::Metacyclic { n, k, r };
                if !t.is_valid() || seen.contains(&r) {
                    continue;
                }
                for u in (1..k).filter(|&u| gcd(u as i64, k as i64) == 1) {
                    seen.insert(crate::arith::mod_pow(r as u64, u as u64, n as u64) as u32);
                }
                push(&mut out, if k == 2 && r == n - 1 { 2 } else { 3 }, t);
            }
            n += 1;
        }
    }
    for p in [2, 3, 5, 7] {
        for kind in [
            LinearKind::SL,
            LinearKind::PSL,
            LinearKind::GL,
            LinearKind::PGL,
        ] {
            push(&mut out, 4, TargetGroup::Linear { p, kind });
        }
    }
    out.sort_by_key(|&(order, rank, t)| (order, rank, param_key(t)));
    out.into_iter().map(|(_, _, t)| t).collect()
}

fn param_key(t: TargetGroup) -> (u32, u32, u32) {
    match t {
        TargetGroup::Abelian { exponent, rank } => (exponent, rank, 0),
        TargetGroup::Dicyclic { n } => (n, 0, 0),
        TargetGroup::Metacyclic { n, k, r } => (k, n, r),
        TargetGroup::Linear { p, kind } => (p, kind as u32, 0),
        TargetGroup::Symmetric { degree } => (degree as u32, 0, 0),
    }
}

/// Reachability table: `pred[x]` records how x was first reached.
struct Layer {
    pred: Vec<Option<(u16, u16, u16)>>,
    order: Vec<u16>,
}

impl Layer {
    fn seed(n: usize) -> Self {
        let mut pred = vec![None; n];
        pred[0] = Some((0, 0, 0));
        Layer {
            pred,
            order: vec![0],
        }
    }

    fn insert(&mut self, x: usize, how: (u16, u16, u16)) {
        if self.pred[x].is_none() {
            self.pred[x] = Some(how);
            self.order.push(x as u16);
        }
    }
}

/// Finds images with [a₁,b₁]⋯[a_g,b_g]·γ₁⋯γ_r = 1 and ord γ_j = m_j.
fn solve_in_table(t: &TableGroup, sig: &OrbifoldSignature) -> Option<Vec<usize>> {
    let n = t.n;
    let g = sig.base_genus as usize;

    // Products γ₁⋯γ_j, layer by layer.
    let mut gamma_layers = vec![Layer::seed(n)];
    for &m in &sig.multiplicities {
        let choices: Vec<usize> = (0..n).filter(|&x| t.orders[x] == m).collect();
        let prev = gamma_layers.last().unwrap();
        let mut next = Layer {
            pred: vec![None; n],
            order: Vec::new(),
        };
        for &s in &prev.order {
            for &e in &choices {
                next.insert(t.mul(s as usize, e), (s, e as u16, 0));
            }
        }
        gamma_layers.push(next);
    }

    // Products of g commutators.
    let mut comm_layers = vec![Layer::seed(n)];
    if g > 0 {
        let mut commutators = Layer {
            pred: vec![None; n],
            order: Vec::new(),
        };
        for a in 0..n {
            for b in 0..n {
                let c = t.mul(t.mul(a, b), t.mul(t.inv[a] as usize, t.inv[b] as usize));
                commutators.insert(c, (0, a as u16, b as u16));
            }
        }
        for _ in 0..g {
            let prev = comm_layers.last().unwrap();
            let mut next = Layer {
                pred: vec![None; n],
                order: Vec::new(),
            };
            for &s in &prev.order {
                for &c in &commutators.order {
                    let (_, a, b) = commutators.pred[c as usize].unwrap();
                    next.insert(t.mul(s as usize, c as usize), (s, a, b));
                }
            }
            comm_layers.push(next);
        }
    }

    let last = gamma_layers.last().unwrap();
    let top = comm_layers.last().unwrap();
    let &p = last
        .order
        .iter()
        .find(|&&p| top.pred[t.inv[p as usize] as usize].is_some())?;

    let mut images = vec![0usize; 2 * g + sig.r()];
    let mut x = t.inv[p as usize] as usize;
    for i in (0..g).rev() {
        let (s, a, b) = comm_layers[i + 1].pred[x].unwrap();
        images[2 * i] = a as usize;
        images[2 * i + 1] = b as usize;
        x = s as usize;
    }
    let mut x = p as usize;
    for j in (0..sig.r()).rev() {
        let (s, e, _) = gamma_layers[j + 1].pred[x].unwrap();
        images[2 * g + j] = e as usize;
        x = s as usize;
    }
    Some(images)
}

type Perm = [u8; MAX_DEGREE as usize];

fn perm_mul(p: &Perm, q: &Perm) -> Perm {
    let mut out = [0u8; MAX_DEGREE as usize];
    for i in 0..MAX_DEGREE as usize {
        out[i] = p[q[i] as usize];
    }
    out
}

fn perm_inv(p: &Perm) -> Perm {
    let mut out = [0u8; MAX_DEGREE as usize];
    for i in 0..MAX_DEGREE as usize {
        out[p[i] as usize] = i as u8;
    }
    out
}

fn perm_order(p: &Perm) -> u32 {
    let mut seen = [false; MAX_DEGREE as usize];
    let mut order = 1i64;
    for s in 0..MAX_DEGREE as usize {
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        if len > 0 {
            order = order / gcd(order, len) * len;
        }
    }
    order as u32
}

/// All permutations of 0..degree (padded with fixed points).
fn all_perms(degree: u8) -> Vec<Perm> {
    let mut base: Perm = [0, 1, 2, 3, 4, 5, 6, 7];
    let mut out = Vec::new();
    fn rec(k: usize, n: usize, p: &mut Perm, out: &mut Vec<Perm>) {
        if k == n {
            out.push(*p);
            return;
        }
        for i in k..n {
            p.swap(k, i);
            rec(k + 1, n, p, out);
            p.swap(k, i);
        }
    }
    rec(0, degree as usize, &mut base, &mut out);
    out.sort();
    out
}

/// Cycle type (sorted cycle lengths) of a permutation.
fn cycle_type(p: &Perm) -> Vec<u8> {
    let mut seen = [false; MAX_DEGREE as usize];
    let mut lens = Vec::new();
    for s in 0..MAX_DEGREE as usize {
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        if len > 0 {
            lens.push(len);
        }
    }
    lens.sort();
    lens
}

fn closure_order(gens: &[Perm], cap: u64) -> Option<u64> {
    let id: Perm = [0, 1, 2, 3, 4, 5, 6, 7];
    let mut seen: HashSet<Perm> = HashSet::from([id]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = perm_mul(&x, g);
            if seen.insert(y) {
                if seen.len() as u64 > cap {
                    return None;
                }
                stack.push(y);
            }
        }
    }
    Some(seen.len() as u64)
}

/// Genus-zero search in S_degree. γ₁ runs over one representative per
/// conjugacy class, the last γ is forced by the product relation.
fn search_symmetric(sig: &OrbifoldSignature, degree: u8, cap: u64) -> Option<QuotientWitness> {
    let m = &sig.multiplicities;
    let r = m.len();
    if r > 4 || (r == 4 && degree > 6) {
        return None;
    }
    let perms = all_perms(degree);
    let by_order = |k: u32| -> Vec<Perm> {
        perms
            .iter()
            .copied()
            .filter(|p| perm_order(p) == k)
            .collect()
    };
    let mut reps: Vec<Perm> = Vec::new();
    let mut seen_types = HashSet::new();
    for p in by_order(m[0]) {
        if seen_types.insert(cycle_type(&p)) {
            reps.push(p);
        }
    }
    let middle: Vec<Vec<Perm>> = m[1..r - 1].iter().map(|&k| by_order(k)).collect();
    let last = m[r - 1];

    let mut tried: HashSet<Vec<Perm>> = HashSet::new();
    for g1 in reps {
        let mut stack: Vec<(Vec<Perm>, Perm)> = vec![(vec![g1], g1)];
        while let Some((chosen, prod)) = stack.pop() {
            if chosen.len() == r - 1 {
                let gr = perm_inv(&prod);
                if perm_order(&gr) != last {
                    continue;
                }
                let mut gens = chosen.clone();
                gens.push(gr);
                if !tried.insert(gens.clone()) {
                    continue;
                }
                if closure_order(&gens, cap).is_some() {
                    let target = TargetGroup::Symmetric { degree };
                    let images = gens
                        .iter()
                        .map(|p| GroupImage::Perm(p[..degree as usize].to_vec()))
                        .collect();
                    return build_witness(sig, target, images, cap);
                }
                continue;
            }
            for p in middle[chosen.len() - 1].iter().rev() {
                let mut next = chosen.clone();
                next.push(*p);
                stack.push((next, perm_mul(&prod, p)));
            }
        }
    }
    None
}
