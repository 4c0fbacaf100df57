//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Runs without the libtest harness so the report is always printed.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qed_cert::invariants::standard::*;
use qed_cert::invariants::{
    blow_up, check_noether, exceptional_pg, polydisk_relations, KodairaDim, RdpType,
    SurfaceDescriptor,
};
use qed_cert::kodaira_group::{
    commutator, compose, conjugate_data, fixed_point_set, roots_of_unity, s0_data, same_group,
    AffineAuto, ExactComplex, FixedPointSet, GroupElement,
};
use qed_cert::orbifold::{
    exceptional_case, find_good_quotient, verify_witness, Exceptional, OrbifoldError,
    OrbifoldSignature, SearchBound,
};
use qed_cert::qed_engine::{
    decide_equivalence, t_chain, verify_certificate, verify_t_chain, Decision,
};
use qed_cert::quaternion::{
    construct_s_with, enumerate_classes, split_prime, torsion_lcm, torsion_orders,
    verify_torsion_free, ClassTag, CyclotomicContext, FieldScope, PrimeIdeal, RamificationSet,
    RealQuadraticField, SCAN_CAP,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent <= budget, || {
        format!("took {spent:?}, budget {budget:?}")
    })
}

// ---------------------------------------------------------------- oracles

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

fn is_squarefree(n: i64) -> bool {
    (2..).take_while(|k| k * k <= n).all(|k| n % (k * k) != 0)
}

fn phi(m: u64) -> u64 {
    (1..=m).filter(|&k| num_integer::gcd(k, m) == 1).count() as u64
}

/// Distinct roots mod p of the minimal polynomial of the ring of integers of Q(√d).
fn integer_ring_roots(d: i64, p: u64) -> usize {
    let p = p as i64;
    let f = |x: i64| {
        if d.rem_euclid(4) == 1 {
            (x * x - x - (d - 1) / 4).rem_euclid(p)
        } else {
            (x * x - d).rem_euclid(p)
        }
    };
    (0..p).filter(|&x| f(x) == 0).count()
}

/// Arithmetic in F_{p^n} = F_p[x]/(g) for a monic irreducible g of degree n.
struct FiniteField {
    p: u64,
    g: Vec<u64>,
}

type Elem = Vec<u64>;

impl FiniteField {
    fn degree(&self) -> usize {
        self.g.len() - 1
    }

    fn reduce(&self, mut a: Vec<u64>) -> Elem {
        let n = self.degree();
        for i in (n..a.len()).rev() {
            let c = a[i] % self.p;
            if c != 0 {
                for j in 0..=n {
                    a[i - n + j] = (a[i - n + j] + self.p - c * self.g[j] % self.p) % self.p;
                }
            }
        }
        a.resize(n, 0);
        a.iter().map(|c| c % self.p).collect()
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = vec![0u64; a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        self.reduce(out)
    }

    fn pow(&self, a: &Elem, mut e: u128) -> Elem {
        let (mut base, mut acc) = (a.clone(), self.constant(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect()
    }

    fn constant(&self, c: u64) -> Elem {
        self.reduce(vec![c])
    }

    fn x(&self) -> Elem {
        self.reduce(vec![0, 1])
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    (1..p).find(|&x| a * x % p == 1).expect("p is prime")
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd of two polynomials over F_p, coefficients low to high.
fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = mod_inverse(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let c = a.last().unwrap() * inv % p;
            let shift = a.len() - b.len();
            for (j, y) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + p - c * y % p) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    let inv = mod_inverse(*a.last().unwrap(), p);
    a.iter().map(|c| c * inv % p).collect()
}

/// x^{p^k} − x reduced mod g.
fn frobenius_minus_x(f: &FiniteField, k: u32) -> Elem {
    f.sub(&f.pow(&f.x(), (f.p as u128).pow(k)), &f.x())
}

/// The first monic irreducible polynomial of degree n over F_p, by Rabin's test.
fn field_of_degree(p: u64, n: usize) -> FiniteField {
    for code in 0..p.pow(n as u32) {
        let mut g: Vec<u64> = (0..n).map(|i| code / p.pow(i as u32) % p).collect();
        g.push(1);
        let f = FiniteField { p, g: g.clone() };
        if n == 1 {
            return f;
        }
        if g[0] == 0 || frobenius_minus_x(&f, n as u32).iter().any(|&c| c != 0) {
            continue;
        }
        let coprime = [2u32, 3]
            .iter()
            .filter(|&&q| (n as u32).is_multiple_of(q))
            .all(|&q| poly_gcd(frobenius_minus_x(&f, n as u32 / q), g.clone(), p).len() == 1);
        if coprime {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Independent check that a prime ideal splits in the fixed field K′ of
/// `subgroup` ⊂ (Z/120)^×, worked out in F_{p^N} from a primitive 120th root
/// of unity.
fn splits_by_resolvent(subgroup: &BTreeSet<u32>, ideal: &PrimeIdeal) -> Option<bool> {
    let p = ideal.p;
    let n = (1..=4u32).find(|&k| (p.pow(k) - 1) % 120 == 0)? as usize;
    let f = field_of_degree(p, n);
    let order = (p as u128).pow(n as u32) - 1;
    let candidates = (1..p.pow(n as u32))
        .map(|code| (0..n).map(|i| code / p.pow(i as u32) % p).collect::<Elem>());
    let zeta = candidates.map(|a| f.pow(&a, order / 120)).find(|t| {
        [60u128, 40, 24]
            .iter()
            .all(|&e| f.pow(t, e) != f.constant(1))
    })?;
    // P(X) = Π_{h∈H} (X − ζ^h) has distinct roots, so Frobenius fixes its
    // coefficients exactly when it lies in H.
    let mut poly = vec![f.constant(1)];
    for &h in subgroup {
        let root = f.pow(&zeta, h as u128);
        let mut next = vec![f.constant(0); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = f.add(&next[i + 1], c);
            next[i] = f.sub(&next[i], &f.mul(c, &root));
        }
        poly = next;
    }
    let q = (p as u128).pow(ideal.residue_degree as u32);
    Some(poly.iter().all(|c| f.pow(c, q) == *c))
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi(a: i64, n: i64) -> i64 {
    let (mut a, mut n, mut t) = (a.rem_euclid(n), n, 1);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

fn field_discriminant(delta: i64) -> i64 {
    if delta.rem_euclid(4) == 1 {
        delta
    } else {
        4 * delta
    }
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_exact(rng: &mut ChaCha8Rng) -> ExactComplex {
    let mut r = || rational(rng.gen_range(-9..=9), rng.gen_range(1..=5));
    ExactComplex::new(r(), r(), r(), r())
}

/// Steps of the t-chain counted by unrolling the recursion on the dimension.
fn t_chain_depth(n: u32) -> usize {
    fn rec(k: u32) -> usize {
        if k == 1 {
            2
        } else {
            2 + rec(k - 1)
        }
    }
    1 + rec(n)
}

// ---------------------------------------------------------------- catalog

fn catalog() -> Vec<SurfaceDescriptor> {
    let mut c = vec![
        p1_x_p1(),
        p2(),
        blow_up(&p2()),
        blow_up(&blow_up(&p1_x_p1())),
        p1_x_p1().named("F3"),
        ruled(1),
        ruled(2),
        ruled(3),
        blow_up(&ruled(2)),
        torus(),
        e_x_e(),
        k3(),
        k3().named("quartic with two nodes")
            .with_singularities(vec![RdpType::A(1); 2]),
        blow_up(&k3()),
        enriques(),
        enriques()
            .named("Enriques'")
            .with_cover(2, k3().named("K3'")),
    ];
    for deg in [2, 3, 4, 6] {
        c.push(
            hyperelliptic()
                .named(&format!("bielliptic-{deg}"))
                .with_cover(deg, torus()),
        );
    }
    c.extend([
        // r = 0
        elliptic(1, vec![], 1, 2),
        elliptic(0, vec![], 0, 2),
        elliptic(0, vec![], 0, 3),
        product_elliptic(2),
        product_elliptic(3),
        elliptic(2, vec![], 2, 1).with_cover(2, product_elliptic(3)),
        // r = 1
        elliptic(0, vec![5], 0, 1),
        elliptic(0, vec![3], 0, 2),
        elliptic(1, vec![2], 1, 1),
        // r = 2
        elliptic(0, vec![2, 3], 0, 0),
        elliptic(0, vec![4, 6], 0, 0),
        elliptic(0, vec![2, 2], 0, 1),
        elliptic(1, vec![2, 3], 1, 1),
        blow_up(&elliptic(0, vec![2, 5], 0, 0)),
        // r = 3, 4
        elliptic(0, vec![2, 3, 7], 0, 0),
        elliptic(0, vec![2, 2, 2], 0, 1),
        elliptic(1, vec![2, 2, 3], 1, 1),
        elliptic(0, vec![2, 2, 2, 2], 0, 0),
        // Kodaira surfaces
        kodaira_primary(),
        kodaira_primary().named("S0'"),
        kodaira_secondary().with_cover(2, kodaira_primary()),
        kodaira_secondary()
            .named("secondary-3")
            .with_cover(3, kodaira_primary()),
    ]);
    c
}

fn polydisk_catalog() -> Vec<SurfaceDescriptor> {
    let tags: Vec<ClassTag> = ["d=5 S={(7,f2),(11,f1,#0)}", "d=5 S={(7,f2),(11,f1,#1)}"]
        .iter()
        .map(|t| t.parse().expect("tag"))
        .collect();
    vec![
        polydisk(tags[0].clone(), 0),
        polydisk(tags[0].clone(), 3),
        polydisk(tags[1].clone(), 0),
    ]
}

// ---------------------------------------------------------------- criteria

fn criterion_1() -> Check {
    let start = Instant::now();
    let brute: BTreeSet<u64> = (3..=1000).filter(|&m| 4 % phi(m) == 0).collect();
    ensure(torsion_orders() == brute, || {
        format!("{:?} vs brute force {brute:?}", torsion_orders())
    })?;
    ensure(brute == BTreeSet::from([3, 4, 5, 6, 8, 10, 12]), || {
        format!("{brute:?}")
    })?;
    ensure(torsion_lcm() == 120, || format!("lcm {}", torsion_lcm()))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("orders {brute:?}, lcm 120"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut summary = Vec::new();
    for d in [2, 3, 5, 7, 13] {
        let k = RealQuadraticField::new(d).map_err(|e| e.to_string())?;
        let c = construct_s_with(&k, FieldScope::Quadratic, SCAN_CAP)
            .map_err(|e| format!("d={d}: {e}"))?;
        ensure(c.set.len() % 2 == 0, || format!("d={d}: odd set"))?;
        ensure(verify_torsion_free(&c.set).is_ok(), || {
            format!("d={d}: torsion check fails")
        })?;
        // Gal(Q(ζ₁₂₀)/k) as units mod 120, computed from the Kronecker character of k.
        let disc = field_discriminant(d);
        let galois: Vec<u32> = (1..120u32)
            .filter(|&a| num_integer::gcd(a, 120) == 1)
            .filter(|&a| 120 % disc != 0 || jacobi(disc, a as i64) == 1)
            .collect();
        // Index-two subgroups: 2^r − 1 where 2^r = |G/G²|.
        let squares: BTreeSet<u32> = galois.iter().map(|&a| a * a % 120).collect();
        let expected_fields = galois.len() / squares.len() - 1;
        ensure(c.witnesses.len() == expected_fields, || {
            format!("d={d}: {} witnesses", c.witnesses.len())
        })?;
        for (handle, ideal) in &c.witnesses {
            // The ideal is a prime of k ...
            let roots = integer_ring_roots(d, ideal.p);
            let expected = if ideal.residue_degree == 2 { 0 } else { 2 };
            ensure(roots == expected, || {
                format!("d={d}: {ideal} is not a prime ideal of k")
            })?;
            // ... the handle is an index-two subgroup ...
            let subgroup: BTreeSet<u32> = galois
                .iter()
                .copied()
                .filter(|&a| handle.contains(a))
                .collect();
            ensure(subgroup.len() * 2 == galois.len(), || {
                format!("d={d}: handle of order {}", subgroup.len())
            })?;
            // ... and the ideal splits in its fixed field.
            let splits = splits_by_resolvent(&subgroup, ideal)
                .ok_or_else(|| format!("d={d}: no separating period for {ideal}"))?;
            ensure(splits, || {
                format!("d={d}: {ideal} does not split in its field")
            })?;
        }
        // The oracle also reproduces non-splitting: full agreement on small primes.
        let ctx = CyclotomicContext::new(k);
        for p in (7..150u64).filter(|&p| is_prime(p) && 120 % p != 0 && disc % p as i64 != 0) {
            for ideal in split_prime(&k, p).map_err(|e| e.to_string())? {
                for handle in ctx.quadratic_intermediate_fields() {
                    let subgroup: BTreeSet<u32> = galois
                        .iter()
                        .copied()
                        .filter(|&a| handle.contains(a))
                        .collect();
                    let lib = ctx
                        .splits_nonprimary(&handle, &ideal)
                        .map_err(|e| e.to_string())?;
                    ensure(splits_by_resolvent(&subgroup, &ideal) == Some(lib), || {
                        format!("d={d}: oracle disagrees on {ideal}")
                    })?;
                }
            }
        }
        summary.push(format!("d={d}:{}", c.set.len()));
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("set sizes {}", summary.join(" ")))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let k = RealQuadraticField::new(5).map_err(|e| e.to_string())?;
    let tags = enumerate_classes(&k, 100).map_err(|e| e.to_string())?;
    let distinct: BTreeSet<&ClassTag> = tags.iter().collect();
    ensure(distinct.len() == tags.len(), || "duplicate tags".into())?;
    ensure(tags.len() >= 10, || format!("only {} tags", tags.len()))?;
    for t in &tags {
        ensure(t.primes.len() % 2 == 0, || format!("{t}: odd"))?;
        let s = RamificationSet::new(k, t.primes.clone()).map_err(|e| format!("{t}: {e}"))?;
        ensure(verify_torsion_free(&s).is_ok(), || {
            format!("{t}: not torsion free")
        })?;
        // Independent check: each m with [k(ζ_m):k] = 2 has a prime of S over
        // which Φ_m splits completely.
        for m in [3u64, 4, 5, 6, 8, 10, 12] {
            // φ(m) = 4 gives degree 2 only when √5 ∈ Q(ζ_m).
            if !(phi(m) == 2 || m == 5 || m == 10) {
                continue;
            }
            let ok = t
                .primes
                .iter()
                .any(|p| !p.ramified && (p.p.pow(p.residue_degree as u32) - 1) % m == 0);
            ensure(ok, || format!("{t}: k(zeta_{m}) embeds"))?;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{} distinct tags", tags.len()))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for d in (2..50).filter(|&d| is_squarefree(d)) {
        let k = RealQuadraticField::new(d).map_err(|e| e.to_string())?;
        for p in (2..1000).filter(|&p| is_prime(p)) {
            let got = split_prime(&k, p).map_err(|e| e.to_string())?;
            let expected = match integer_ring_roots(d, p) {
                0 => vec![PrimeIdeal::inert(p)],
                1 => vec![PrimeIdeal::ramified(p)],
                _ => vec![PrimeIdeal::split(p, 0), PrimeIdeal::split(p, 1)],
            };
            ensure(got == expected, || {
                format!("d={d} p={p}: {got:?} vs {expected:?}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} (d, p) pairs agree in {:?}",
        start.elapsed()
    ))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let cat = catalog();
    ensure(cat.len() >= 30, || {
        format!("catalog has {} entries", cat.len())
    })?;
    let kappas: BTreeSet<KodairaDim> = cat.iter().map(|d| d.kodaira_dim).collect();
    ensure(kappas.len() == 3, || format!("catalog covers {kappas:?}"))?;
    let pairs: Vec<(usize, usize)> = (0..cat.len())
        .flat_map(|i| (0..cat.len()).map(move |j| (i, j)))
        .collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (a, b) = (&cat[i], &cat[j]);
            let decision = decide_equivalence(a, b);
            let kodaira = a.class_tag.is_kodaira() || b.class_tag.is_kodaira();
            let fail = |why: String| Some(format!("({i}, {j}): {why}"));
            if a.kodaira_dim != b.kodaira_dim
                || a.class_tag.is_kodaira() != b.class_tag.is_kodaira()
            {
                return match decision {
                    Decision::Obstructed(_) => None,
                    other => fail(format!("expected Obstructed, got {other:?}")),
                };
            }
            match decision {
                Decision::Equivalent(c) => {
                    if c.start != *a || c.end() != b {
                        return fail("certificate endpoints".into());
                    }
                    match verify_certificate(&c) {
                        Ok(()) => None,
                        Err(vs) => fail(
                            vs.iter()
                                .map(|v| v.to_string())
                                .collect::<Vec<_>>()
                                .join("; "),
                        ),
                    }
                }
                other if kodaira => fail(format!("Kodaira pair: {other:?}")),
                other => fail(format!("expected Equivalent, got {other:?}")),
            }
        })
        .collect();
    ensure(failures.is_empty(), || {
        failures[..failures.len().min(5)].join(" | ")
    })?;
    let mut obstructed = 0;
    for p in polydisk_catalog() {
        for d in &cat {
            ensure(
                matches!(decide_equivalence(&p, d), Decision::Obstructed(_)),
                || format!("{p} vs {d}"),
            )?;
            obstructed += 1;
        }
    }
    Ok(format!(
        "{} descriptors, {} pairs (+{obstructed} polydisk pairs) in {:?}",
        cat.len(),
        pairs.len(),
        start.elapsed()
    ))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    for n in 1..=5 {
        for d in 2..=6 {
            let steps = t_chain(n, d);
            ensure(steps.len() == t_chain_depth(n), || {
                format!("n={n} d={d}: {} steps", steps.len())
            })?;
            verify_t_chain(n, &steps).map_err(|e| format!("n={n} d={d}: {e}"))?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok("25 chains end at P^n".into())
}

fn multisets(r: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return vec![vec![]];
    }
    (lo..=hi)
        .flat_map(|m| {
            multisets(r - 1, m, hi).into_iter().map(move |mut rest| {
                rest.insert(0, m);
                rest
            })
        })
        .collect()
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let sigs: Vec<(u32, Vec<u32>)> = (0..=2)
        .flat_map(|g| {
            (0..=4).flat_map(move |r| multisets(r, 2, 6).into_iter().map(move |m| (g, m)))
        })
        .collect();
    let results: Vec<Result<bool, String>> = sigs
        .par_iter()
        .map(|(g, m)| {
            let sig = OrbifoldSignature::new(*g, m.clone()).map_err(|e| e.to_string())?;
            let expected = match (*g, m.as_slice()) {
                (0, []) | (0, [_]) => Some(Exceptional::TrivialGroup),
                (0, [a, b]) => match num_integer::gcd(*a, *b) {
                    1 => Some(Exceptional::TrivialGroup),
                    n => Some(Exceptional::CyclicOfOrder(n)),
                },
                _ => None,
            };
            match expected {
                Some(e) => {
                    ensure(exceptional_case(&sig) == e, || {
                        format!("{sig}: {:?}", exceptional_case(&sig))
                    })?;
                    let answer = find_good_quotient(&sig, SearchBound::Limited(512));
                    ensure(answer == Err(OrbifoldError::ExceptionalInput(e)), || {
                        format!("{sig}: {answer:?}")
                    })?;
                    Ok(true)
                }
                None => {
                    let w = find_good_quotient(&sig, SearchBound::Limited(512))
                        .map_err(|e| format!("{sig}: {e}"))?;
                    verify_witness(&sig, &w).map_err(|e| format!("{sig}: {e}"))?;
                    ensure(w.target_order <= 512, || {
                        format!("{sig}: order {}", w.target_order)
                    })?;
                    let orders: Vec<u64> = m.iter().map(|&x| x as u64).collect();
                    ensure(w.orders_of_gamma == orders, || {
                        format!("{sig}: gamma orders {:?}", w.orders_of_gamma)
                    })?;
                    Ok(false)
                }
            }
        })
        .collect();
    let mut exceptional = 0;
    for r in results {
        exceptional += r? as usize;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} signatures, {exceptional} exceptional, in {:?}",
        sigs.len(),
        start.elapsed()
    ))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let id = GroupElement::identity();
    for i in 0..10_000 {
        let mut el = || GroupElement::new(random_exact(&mut rng), random_exact(&mut rng));
        let (x, y, z) = (el(), el(), el());
        ensure(
            compose(&compose(&x, &y), &z) == compose(&x, &compose(&y, &z)),
            || format!("associativity at {i}"),
        )?;
        ensure(compose(&x, &id) == x && compose(&id, &x) == x, || {
            format!("identity at {i}")
        })?;
        ensure(compose(&x, &x.inverse()).is_identity(), || {
            format!("inverse at {i}")
        })?;
    }
    let s0 = s0_data();
    let g = s0.generators();
    let c = commutator(&g[2], &g[3]);
    let two_i = ExactComplex::from_ints(0, 2, 0, 0);
    ensure(s0.beta[1] == two_i, || format!("beta2 = {}", s0.beta[1]))?;
    let plus = GroupElement::translation(two_i.clone());
    ensure(c == plus || c == plus.inverse(), || {
        format!("[g3, g4] = {c}")
    })?;
    ensure(same_group(&conjugate_data(&s0), &s0), || {
        "conjugate of S0 data differs".into()
    })?;
    let mut sweep = 0;
    for sigma in roots_of_unity() {
        for _ in 0..50 {
            let mut h = || {
                if rng.gen_bool(0.3) {
                    ExactComplex::from_ints(0, 0, 0, 0)
                } else {
                    random_exact(&mut rng)
                }
            };
            let phi = AffineAuto::new(sigma.clone(), h(), h(), h()).map_err(|e| e.to_string())?;
            ensure(
                fixed_point_set(&phi) != FixedPointSet::IsolatedPoints,
                || format!("isolated fixed point for {phi:?}"),
            )?;
            sweep += 1;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "10^4 group-law triples, {sweep} automorphisms, no isolated fixed points"
    ))
}

fn criterion_9() -> Check {
    let mut checked = 0;
    for d in catalog().iter().chain(&polydisk_catalog()) {
        if d.minimal {
            ensure(check_noether(d) == Ok(true), || {
                format!("Noether fails on {d}")
            })?;
        }
        if let Some(f) = &d.fibration {
            let sig = OrbifoldSignature::new(f.base_genus, f.multiplicities.clone())
                .map_err(|e| e.to_string())?;
            if d.minimal && d.q == 0 && exceptional_case(&sig) != Exceptional::NonExceptional {
                ensure(exceptional_pg(d.euler) == Ok(d.pg as i64), || {
                    format!("exceptional pg on {d}")
                })?;
            }
        }
        if let qed_cert::invariants::ClassKind::PolydiskQuotient(_) = d.class_tag {
            ensure(
                polydisk_relations(d.pg) == (d.euler, d.b1, d.k_squared),
                || format!("polydisk relations on {d}"),
            )?;
        }
        checked += 1;
    }
    for pg in 0..=100 {
        let (e, b1, k2) = polydisk_relations(pg);
        ensure(b1 == 0 && 12 * (1 + pg as i64) == k2 + e, || {
            format!("pg={pg}")
        })?;
    }
    Ok(format!("{checked} catalog descriptors, pg 0..=100"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("torsion orders and lcm", criterion_1),
        ("construct_s for d in {2,3,5,7,13}", criterion_2),
        ("enumerate_classes(5, 100)", criterion_3),
        ("split_prime vs factorization oracle", criterion_4),
        ("catalog equivalences and obstructions", criterion_5),
        ("t_chain for n <= 5, 2 <= d <= 6", criterion_6),
        ("orbifold quotient sweep", criterion_7),
        ("Kodaira group suite", criterion_8),
        ("invariant formulas", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
