//! Exact counts of permutation group polynomials and brute-force oracles.
//!
//! The closed forms count every polynomial whose group is conjugate in `S_q`
//! to one of the two built-in groups, which equals `(q!)^2 / |N(G)|` with
//! `N(G)` the normalizer. The oracles below compute `N(G)`, the centralizer
//! and the constrained sets `{h : h g_k h⁻¹ = target_k}` by scanning all of
//! `S_q`, which is only feasible for tiny `q`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{validate_pgp_group, GroupError, KlenianParams, OrderedGroup, T31Params};

/// Largest `q` for which the oracles scan `S_q` unless told otherwise.
pub const DEFAULT_GUARD: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("p^(delta-1) does not divide the leading entry of V_{0}")]
    DivisibilityFails(usize),
    #[error("p^(n-2e) = {modulus} does not divide j = {j}")]
    PreconditionJ { j: u64, modulus: u64 },
    #[error("argument out of range: {0}")]
    BadRange(String),
    #[error("e = {e} is outside 1..=n/2 for n = {n}")]
    OutOfRangeE { n: u32, e: u32 },
    #[error("closed form did not divide exactly: {0}")]
    InternalInconsistency(String),
    #[error("brute force over S_{q} refused: q exceeds the guard {guard}")]
    GuardExceeded { q: usize, guard: usize },
    #[error("not a permutation group polynomial group: {0}")]
    InvalidGroup(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

type Result<T> = std::result::Result<T, EnumerateError>;

/// The exponents `(v_0, v_1, ..., v_(n-delta))` of a word in the generators
/// of the multi-generator family, with `v_0 < p^delta` and the rest `< p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector {
    pub entries: Vec<u32>,
}

impl ExponentVector {
    pub fn new(entries: Vec<u32>, params: &T31Params) -> Result<Self> {
        let bounds = params.bounds();
        if entries.len() != bounds.len() {
            return Err(EnumerateError::BadRange(format!(
                "expected {} entries, got {}",
                bounds.len(),
                entries.len()
            )));
        }
        if let Some((k, (&v, &b))) = entries.iter().zip(&bounds).enumerate().find(|(_, (v, b))| v >= b) {
            return Err(EnumerateError::BadRange(format!("entry {k} is {v}, bound {b}")));
        }
        Ok(ExponentVector { entries })
    }

    /// Position of the corresponding element in the ordered group.
    pub fn element_index(&self, params: &T31Params) -> u32 {
        params.index(&self.entries)
    }

    /// Every vector for the given parameters, in element-index order.
    pub fn all(params: &T31Params) -> Vec<ExponentVector> {
        (0..params.q())
            .map(|t| ExponentVector {
                entries: params.digits(t),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModpMatrix {
    pub p: u32,
    pub rows: Vec<Vec<u32>>,
}

impl ModpMatrix {
    pub fn new(p: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(EnumerateError::BadRange("matrix is not square".into()));
        }
        if rows.iter().flatten().any(|&x| x >= p) {
            return Err(EnumerateError::BadRange(format!("entries must be below {p}")));
        }
        Ok(ModpMatrix { p, rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Row 0 is `(v_00, v_01 p^(delta-1), ..., v_0r p^(delta-1))` and row `k >= 1`
/// is `(v_k0 / p^(delta-1), v_k1, ..., v_kr)`, all reduced mod `p`.
#[allow(non_snake_case)]
pub fn matrix_A(vs: &[ExponentVector], p: u32, delta: u32) -> Result<ModpMatrix> {
    let scale = p.pow(delta - 1);
    let mut rows = Vec::with_capacity(vs.len());
    for (k, v) in vs.iter().enumerate() {
        let row = if k == 0 {
            v.entries
                .iter()
                .enumerate()
                .map(|(m, &x)| if m == 0 { x % p } else { (x * scale) % p })
                .collect()
        } else {
            if v.entries[0] % scale != 0 {
                return Err(EnumerateError::DivisibilityFails(k));
            }
            v.entries
                .iter()
                .enumerate()
                .map(|(m, &x)| if m == 0 { (x / scale) % p } else { x % p })
                .collect()
        };
        rows.push(row);
    }
    ModpMatrix::new(p, rows)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse.
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Determinant modulo the prime `p` by Gaussian elimination.
pub fn det_mod_p(a: &ModpMatrix) -> u32 {
    let p = a.p as u64;
    let d = a.dim();
    let mut m: Vec<Vec<u64>> = a.rows.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
    let mut det = 1u64;
    for col in 0..d {
        let Some(pivot) = (col..d).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            m.swap(pivot, col);
            det = (p - det) % p;
        }
        det = det * m[col][col] % p;
        let inv = inv_mod(m[col][col], p);
        for r in col + 1..d {
            let factor = m[r][col] * inv % p;
            if factor == 0 {
                continue;
            }
            let (top, rest) = m.split_at_mut(r);
            for (x, &y) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = (*x + p * p - factor * y) % p;
            }
        }
    }
    det as u32
}

/// Whether some `h` conjugates each generator `a_k` to the element with
/// exponents `vs[k]`: the divisibility condition on `v_k0` for `k >= 1`
/// together with `det A != 0`.
pub fn nset_nonempty_t31(vs: &[ExponentVector], params: &T31Params) -> bool {
    if vs.len() != params.rank() {
        return false;
    }
    match matrix_A(vs, params.p, params.delta) {
        Ok(a) => det_mod_p(&a) != 0,
        Err(_) => false,
    }
}

/// Whether some `h` has `h a h⁻¹ = a^i b^j` and `h b h⁻¹ = a^u b^v` for the
/// two-generator family, which requires `p^(n-2e) | j` and `1 <= e <= n-e`.
///
/// The set is nonempty iff the induced map `a^s b^r -> a^(is+ur) b^(js+vr)`
/// is injective. A collision with `s` differing by `p^α x` (`p ∤ x`, `α < e`)
/// is the pair of congruences `i p^α ≡ β u (mod p^e)`, `j p^α ≡ β v
/// (mod p^(n-e))` for some `β`; both depend on `β` only modulo `p^(n-e)`, so
/// a finite scan suffices. Collisions with equal `s` reduce to `β u ≡ 0` and
/// `β v ≡ 0` for some `β ≢ 0 (mod p^(n-e))`, which can only happen when
/// `p | v`.
pub fn nset_nonempty_klenian(i: u32, j: u32, u: u32, v: u32, params: &KlenianParams) -> Result<bool> {
    let (p, n, e) = (params.p as u64, params.n, params.e);
    if e == 0 || e > n - e {
        return Err(EnumerateError::BadRange(format!("need 1 <= e <= n - e, got e = {e}, n = {n}")));
    }
    let ell = p.pow(e);
    let t = p.pow(n - e);
    let (i, j, u, v) = (i as u64, j as u64, u as u64, v as u64);
    if i >= ell || u >= ell || j >= t || v >= t {
        return Err(EnumerateError::BadRange(format!(
            "need i, u < {ell} and j, v < {t}"
        )));
    }
    let jmod = p.pow(n - 2 * e);
    if j % jmod != 0 {
        return Err(EnumerateError::PreconditionJ { j, modulus: jmod });
    }
    for alpha in 0..e {
        let pa = p.pow(alpha);
        for beta in 0..t {
            if (i * pa) % ell == (beta * u) % ell && (j * pa) % t == (beta * v) % t {
                return Ok(false);
            }
        }
    }
    for beta in 1..t {
        if (beta * u) % ell == 0 && (beta * v) % t == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn exact_div(num: &BigUint, den: &BigUint, what: &str) -> Result<BigUint> {
    if den.is_zero() || !(num % den).is_zero() {
        return Err(EnumerateError::InternalInconsistency(format!(
            "{what}: {den} does not divide {num}"
        )));
    }
    Ok(num / den)
}

fn big_pow(p: u32, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

/// `φ(p^k) = p^k - p^(k-1)` for `k >= 1`.
fn phi_prime_power(p: u32, k: u32) -> BigUint {
    big_pow(p, k) - big_pow(p, k - 1)
}

/// `q! (q-1)!`, the number of polynomials per conjugacy class of groups
/// scaled by the normalizer size.
fn numerator(q: u32) -> BigUint {
    let f = factorial(q as u64 - 1);
    &f * &f * q
}

/// Number of permutation group polynomials whose group is conjugate to the
/// multi-generator group with these parameters.
pub fn count_t31(params: &T31Params) -> Result<BigUint> {
    params.validate()?;
    let (p, n, d) = (params.p, params.n, params.delta);
    let mut den = big_pow(p, n) - big_pow(p, (d - 1) * (n - d + 1));
    for i in 1..=n - d {
        den *= big_pow(p, n - d + 1) - big_pow(p, i);
    }
    exact_div(&numerator(params.q()), &den, "count_t31")
}

/// Number of `e`-Klenian polynomials. `e` and `n - e` give the same count, so
/// `e > n/2` is folded onto `n - e`; `e = 0` is outside this formula.
pub fn count_klenian(params: &KlenianParams) -> Result<BigUint> {
    params.validate()?;
    let (p, n) = (params.p, params.n);
    let e = params.e.min(n - params.e);
    if e == 0 {
        return Err(EnumerateError::OutOfRangeE { n, e: params.e });
    }
    let den = if 2 * e < n {
        big_pow(p, 2 * e) * phi_prime_power(p, e) * phi_prime_power(p, n - e)
    } else {
        let phi = phi_prime_power(p, e);
        &phi * &phi * (big_pow(p, 2 * e) + big_pow(p, 2 * e - 1))
    };
    exact_div(&numerator(params.q()), &den, "count_klenian")
}

/// `q * q! / |C(G)|`, with the centralizer found by scanning `S_q`.
pub fn count_equivalents(g: &OrderedGroup, guard: usize) -> Result<BigUint> {
    let c = centralizer_bruteforce(g, guard)?;
    equivalents_from_centralizer(g.order() as u32, &c)
}

fn equivalents_from_centralizer(q: u32, centralizer: &BigUint) -> Result<BigUint> {
    exact_div(&(factorial(q as u64) * q), centralizer, "count_equivalents")
}

fn require_regular(g: &OrderedGroup) -> Result<()> {
    let report = validate_pgp_group(g);
    if !report.all_true() {
        return Err(EnumerateError::InvalidGroup(format!("{report:?}")));
    }
    Ok(())
}

fn check_guard(q: usize, guard: usize) -> Result<()> {
    if q > guard {
        return Err(EnumerateError::GuardExceeded { q, guard });
    }
    Ok(())
}

/// Rearranges `xs` into the next permutation in lexicographic order, or
/// returns `false` if it was the last one.
fn next_permutation(xs: &mut [u32]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs.iter().rposition(|&x| x > xs[i]).expect("xs[i + 1] > xs[i]");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

/// Visits every permutation of `{0, ..., q-1}`, split into `q` shards by the
/// image of 0 and scanned lexicographically within each shard. Returns one
/// accumulator per shard, in shard order.
fn scan_symmetric_group<T, I, F>(q: usize, guard: usize, init: I, visit: F) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[u32]) + Sync,
{
    check_guard(q, guard)?;
    Ok((0..q as u32)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let mut h: Vec<u32> = std::iter::once(first)
                .chain((0..q as u32).filter(|&x| x != first))
                .collect();
            loop {
                visit(&mut acc, &h);
                if !next_permutation(&mut h[1..]) {
                    break;
                }
            }
            acc
        })
        .collect())
}

/// Looks up `h g h⁻¹` in a regular group by the image of 0, which determines
/// an element of a regular group uniquely.
struct ConjugationTable<'a> {
    g: &'a OrderedGroup,
    by_image_of_zero: Vec<u32>,
}

impl<'a> ConjugationTable<'a> {
    fn new(g: &'a OrderedGroup) -> Result<Self> {
        require_regular(g)?;
        let mut by_image_of_zero = vec![0u32; g.q];
        for (t, el) in g.elements.iter().enumerate() {
            by_image_of_zero[el.apply(0) as usize] = t as u32;
        }
        Ok(ConjugationTable { g, by_image_of_zero })
    }

    /// Index of `h x h⁻¹` in the group, if it lies there.
    fn conjugate_index(&self, h: &[u32], x: &[u32], buf: &mut [u32]) -> Option<u32> {
        for (p, &xp) in x.iter().enumerate() {
            buf[h[p] as usize] = h[xp as usize];
        }
        let t = self.by_image_of_zero[buf[0] as usize];
        (self.g.elements[t as usize].images() == buf).then_some(t)
    }

    /// Target indices of every generator, or `None` as soon as one leaves G.
    fn targets(&self, h: &[u32], buf: &mut [u32]) -> Option<Vec<u32>> {
        self.g
            .gens
            .iter()
            .map(|gen| self.conjugate_index(h, gen.images(), buf))
            .collect()
    }
}

/// For every `h` in the normalizer, the indices of `h g_k h⁻¹`; maps each
/// target tuple to the number of `h` realizing it. Tuples not present have
/// no realizing `h`.
pub fn conjugation_histogram(g: &OrderedGroup, guard: usize) -> Result<BTreeMap<Vec<u32>, u64>> {
    let table = ConjugationTable::new(g)?;
    let shards = scan_symmetric_group(
        g.q,
        guard,
        || (HashMap::<Vec<u32>, u64>::new(), vec![0u32; g.q]),
        |(acc, buf), h| {
            if let Some(key) = table.targets(h, buf) {
                *acc.entry(key).or_default() += 1;
            }
        },
    )?;
    let mut out = BTreeMap::new();
    for (shard, _) in shards {
        for (k, c) in shard {
            *out.entry(k).or_default() += c;
        }
    }
    Ok(out)
}

fn count_matching(g: &OrderedGroup, guard: usize, targets: &[u32]) -> Result<BigUint> {
    let table = ConjugationTable::new(g)?;
    if targets.len() != g.gens.len() || targets.iter().any(|&t| t as usize >= g.q) {
        return Err(EnumerateError::BadRange(format!(
            "need {} target indices below {}",
            g.gens.len(),
            g.q
        )));
    }
    let gens: Vec<&[u32]> = g.gens.iter().map(|x| x.images()).collect();
    let shards = scan_symmetric_group(
        g.q,
        guard,
        || (0u64, vec![0u32; g.q]),
        |(acc, buf), h| {
            let all = gens
                .iter()
                .zip(targets)
                .all(|(gen, &t)| table.conjugate_index(h, gen, buf) == Some(t));
            *acc += all as u64;
        },
    )?;
    Ok(shards.into_iter().map(|(c, _)| BigUint::from(c)).sum())
}

/// `|{h in S_q : h G h⁻¹ = G}|` by full scan.
pub fn normalizer_bruteforce(g: &OrderedGroup, guard: usize) -> Result<BigUint> {
    let table = ConjugationTable::new(g)?;
    let gens: Vec<&[u32]> = g.gens.iter().map(|x| x.images()).collect();
    let shards = scan_symmetric_group(
        g.q,
        guard,
        || (0u64, vec![0u32; g.q]),
        |(acc, buf), h| {
            let all = gens.iter().all(|gen| table.conjugate_index(h, gen, buf).is_some());
            *acc += all as u64;
        },
    )?;
    Ok(shards.into_iter().map(|(c, _)| BigUint::from(c)).sum())
}

/// `|{h in S_q : h commutes with every generator}|` by full scan.
pub fn centralizer_bruteforce(g: &OrderedGroup, guard: usize) -> Result<BigUint> {
    let own: Vec<u32> = g
        .gens
        .iter()
        .map(|gen| g.position(gen).map(|t| t as u32))
        .collect::<Option<_>>()
        .ok_or_else(|| EnumerateError::InvalidGroup("generator missing from element list".into()))?;
    count_matching(g, guard, &own)
}

/// `|{h in S_q : h g_k h⁻¹ = elements[targets[k]] for all k}|` by full scan.
pub fn nset_bruteforce(g: &OrderedGroup, targets: &[u32], guard: usize) -> Result<BigUint> {
    count_matching(g, guard, targets)
}

/// One of the two built-in group families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    T31(T31Params),
    Klenian(KlenianParams),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::T31(_) => "t31",
            Family::Klenian(_) => "klenian",
        }
    }

    pub fn q(&self) -> u32 {
        match self {
            Family::T31(p) => p.q(),
            Family::Klenian(p) => p.q(),
        }
    }

    pub fn group(&self) -> Result<OrderedGroup> {
        Ok(match self {
            Family::T31(p) => OrderedGroup::t31(p)?,
            Family::Klenian(p) => OrderedGroup::klenian(p)?,
        })
    }

    pub fn params_json(&self) -> serde_json::Value {
        match self {
            Family::T31(p) => serde_json::json!({"p": p.p, "n": p.n, "delta": p.delta}),
            Family::Klenian(p) => serde_json::json!({"p": p.p, "n": p.n, "e": p.e}),
        }
    }

    pub fn closed_form_count(&self) -> Result<BigUint> {
        match self {
            Family::T31(p) => count_t31(p),
            Family::Klenian(p) => count_klenian(p),
        }
    }

    /// Equivalence count for the family's group. Scans `S_q` when `q` is
    /// within the guard; otherwise uses `|C(G)| = q`, which holds for both
    /// built-in families.
    pub fn count_equivalents(&self, guard: usize) -> Result<BigUint> {
        let g = self.group()?;
        if g.q <= guard {
            count_equivalents(&g, guard)
        } else {
            equivalents_from_centralizer(self.q(), &BigUint::from(self.q()))
        }
    }
}

/// Closed-form count next to the normalizer oracle `(q!)^2 / |N(G)|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub family: String,
    pub params: serde_json::Value,
    pub closed_form: String,
    pub oracle: Option<String>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

/// Counts a family, optionally confirming it by scanning `S_q`.
pub fn count_report(family: &Family, with_oracle: bool, guard: usize) -> Result<CountReport> {
    let closed = family.closed_form_count()?;
    let oracle = if with_oracle {
        let norm = normalizer_bruteforce(&family.group()?, guard)?;
        let qf = factorial(family.q() as u64);
        Some(exact_div(&(&qf * &qf), &norm, "normalizer oracle")?)
    } else {
        None
    };
    Ok(CountReport {
        family: family.name().to_string(),
        params: family.params_json(),
        closed_form: closed.to_string(),
        matches: oracle.as_ref().map(|o| *o == closed),
        oracle: oracle.map(|o| o.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn t31(p: u32, n: u32, d: u32) -> T31Params {
        T31Params::new(p, n, d).unwrap()
    }

    fn kl(p: u32, n: u32, e: u32) -> KlenianParams {
        KlenianParams::new(p, n, e).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn ev(entries: &[u32], params: &T31Params) -> ExponentVector {
        ExponentVector::new(entries.to_vec(), params).unwrap()
    }

    #[test]
    fn matrix_a_examples() {
        let p221 = t31(2, 2, 1);
        let a = matrix_A(&[ev(&[1, 0], &p221), ev(&[0, 1], &p221)], 2, 1).unwrap();
        assert_eq!(a.rows, vec![vec![1, 0], vec![0, 1]]);
        let p232 = t31(2, 3, 2);
        let a = matrix_A(&[ev(&[1, 0], &p232), ev(&[2, 1], &p232)], 2, 2).unwrap();
        assert_eq!(a.rows, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(
            matrix_A(&[ev(&[1, 0], &p232), ev(&[1, 1], &p232)], 2, 2),
            Err(EnumerateError::DivisibilityFails(1))
        );
    }

    #[test]
    fn det_examples() {
        let m = |rows: Vec<Vec<u32>>, p| ModpMatrix::new(p, rows).unwrap();
        assert_eq!(det_mod_p(&m(vec![vec![1, 0], vec![0, 1]], 2)), 1);
        assert_eq!(det_mod_p(&m(vec![vec![1, 0], vec![1, 1]], 2)), 1);
        assert_eq!(det_mod_p(&m(vec![vec![1, 1], vec![1, 1]], 2)), 0);
        assert_eq!(det_mod_p(&m(vec![vec![0, 1], vec![1, 0]], 3)), 2);
        assert_eq!(det_mod_p(&m(vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]], 5)), 4);
    }

    /// Cofactor expansion over the integers, reduced at the end.
    fn det_cofactor(rows: &[Vec<i64>]) -> i64 {
        if rows.len() == 1 {
            return rows[0][0];
        }
        (0..rows.len())
            .map(|c| {
                let minor: Vec<Vec<i64>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * rows[0][c] * det_cofactor(&minor)
            })
            .sum()
    }

    proptest::proptest! {
        #[test]
        fn det_matches_cofactor(
            p in proptest::sample::select(vec![2u32, 3, 5, 7]),
            d in 1usize..=4,
            seed in proptest::collection::vec(0u32..1000, 16),
        ) {
            let rows: Vec<Vec<u32>> = (0..d).map(|r| (0..d).map(|c| seed[r * 4 + c] % p).collect()).collect();
            let ints: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
            let expected = det_cofactor(&ints).rem_euclid(p as i64) as u32;
            proptest::prop_assert_eq!(det_mod_p(&ModpMatrix::new(p, rows).unwrap()), expected);
        }
    }

    #[test]
    fn nset_t31_examples() {
        let p = t31(2, 2, 1);
        assert!(nset_nonempty_t31(&[ev(&[1, 0], &p), ev(&[0, 1], &p)], &p));
        assert!(!nset_nonempty_t31(&[ev(&[1, 0], &p), ev(&[1, 0], &p)], &p));
        assert!(nset_nonempty_t31(&[ev(&[0, 1], &p), ev(&[1, 0], &p)], &p));
        let g = OrderedGroup::t31(&p).unwrap();
        let targets = [ev(&[0, 1], &p).element_index(&p), ev(&[1, 0], &p).element_index(&p)];
        assert_eq!(nset_bruteforce(&g, &targets, DEFAULT_GUARD).unwrap(), big(4));
    }

    #[test]
    fn nset_klenian_examples() {
        let p = kl(2, 3, 1);
        assert_eq!(nset_nonempty_klenian(1, 0, 0, 1, &p), Ok(true));
        assert_eq!(nset_nonempty_klenian(0, 0, 0, 1, &p), Ok(false));
        assert_eq!(
            nset_nonempty_klenian(1, 1, 0, 1, &p),
            Err(EnumerateError::PreconditionJ { j: 1, modulus: 2 })
        );
        assert!(matches!(nset_nonempty_klenian(2, 0, 0, 1, &p), Err(EnumerateError::BadRange(_))));
        assert!(matches!(
            nset_nonempty_klenian(1, 0, 0, 1, &kl(2, 3, 0)),
            Err(EnumerateError::BadRange(_))
        ));
    }

    #[test]
    fn klenian_criterion_needs_equal_s_collisions() {
        // b -> identity is never a conjugation, yet no collision with
        // differing s exists; only the equal-s case rules it out.
        let p = kl(2, 3, 1);
        let g = OrderedGroup::klenian(&p).unwrap();
        assert_eq!(nset_bruteforce(&g, &[1, 0], DEFAULT_GUARD).unwrap(), big(0));
        assert_eq!(nset_nonempty_klenian(1, 0, 0, 0, &p), Ok(false));
    }

    #[test]
    fn count_t31_examples() {
        assert_eq!(count_t31(&t31(2, 2, 1)).unwrap(), big(24));
        assert_eq!(count_t31(&t31(2, 2, 2)).unwrap(), big(72));
        assert_eq!(count_t31(&t31(2, 3, 1)).unwrap(), big(1_209_600));
        assert_eq!(count_t31(&t31(2, 3, 2)).unwrap(), big(25_401_600));
        assert_eq!(count_t31(&t31(3, 2, 1)).unwrap(), big(304_819_200));
        assert_eq!(count_t31(&t31(3, 2, 2)).unwrap(), factorial(9) * factorial(8) / 6u32);
    }

    #[test]
    fn count_klenian_examples() {
        assert_eq!(count_klenian(&kl(2, 2, 1)).unwrap(), big(24));
        assert_eq!(count_klenian(&kl(2, 3, 1)).unwrap(), big(25_401_600));
        assert_eq!(count_klenian(&kl(2, 3, 2)).unwrap(), big(25_401_600));
        assert_eq!(count_klenian(&kl(3, 2, 1)).unwrap(), big(304_819_200));
        assert_eq!(
            count_klenian(&kl(3, 2, 0)),
            Err(EnumerateError::OutOfRangeE { n: 2, e: 0 })
        );
    }

    #[test]
    fn counts_agree_at_order_four() {
        assert_eq!(count_t31(&t31(2, 2, 1)), count_klenian(&kl(2, 2, 1)));
    }

    #[test]
    fn phi_is_exact() {
        for (p, k) in [(2u32, 1u32), (2, 5), (3, 3), (7, 2)] {
            let by_count = (1..=p.pow(k)).filter(|&x| gcd(x, p.pow(k)) == 1).count() as u64;
            assert_eq!(phi_prime_power(p, k), big(by_count));
        }
    }

    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 { a } else { gcd(b, a % b) }
    }

    #[test]
    fn bruteforce_examples() {
        let g221 = OrderedGroup::t31(&t31(2, 2, 1)).unwrap();
        let g222 = OrderedGroup::t31(&t31(2, 2, 2)).unwrap();
        let k231 = OrderedGroup::klenian(&kl(2, 3, 1)).unwrap();
        assert_eq!(normalizer_bruteforce(&g221, DEFAULT_GUARD).unwrap(), big(24));
        assert_eq!(normalizer_bruteforce(&g222, DEFAULT_GUARD).unwrap(), big(8));
        assert_eq!(normalizer_bruteforce(&k231, DEFAULT_GUARD).unwrap(), big(64));
        assert_eq!(centralizer_bruteforce(&g221, DEFAULT_GUARD).unwrap(), big(4));
        assert_eq!(centralizer_bruteforce(&k231, DEFAULT_GUARD).unwrap(), big(8));
        assert_eq!(nset_bruteforce(&k231, &[1, 2], DEFAULT_GUARD).unwrap(), big(8));
    }

    #[test]
    fn equivalents_examples() {
        let g221 = OrderedGroup::t31(&t31(2, 2, 1)).unwrap();
        let k231 = OrderedGroup::klenian(&kl(2, 3, 1)).unwrap();
        assert_eq!(count_equivalents(&g221, DEFAULT_GUARD).unwrap(), big(24));
        assert_eq!(count_equivalents(&k231, DEFAULT_GUARD).unwrap(), big(40320));
        let big_fam = Family::T31(t31(2, 4, 1));
        assert_eq!(big_fam.count_equivalents(DEFAULT_GUARD).unwrap(), factorial(16));
    }

    #[test]
    fn guard_is_enforced() {
        let g = OrderedGroup::t31(&t31(2, 4, 1)).unwrap();
        assert_eq!(
            normalizer_bruteforce(&g, DEFAULT_GUARD),
            Err(EnumerateError::GuardExceeded { q: 16, guard: 9 })
        );
        assert_eq!(
            count_equivalents(&g, DEFAULT_GUARD),
            Err(EnumerateError::GuardExceeded { q: 16, guard: 9 })
        );
        let g4 = OrderedGroup::t31(&t31(2, 2, 1)).unwrap();
        assert!(matches!(normalizer_bruteforce(&g4, 3), Err(EnumerateError::GuardExceeded { .. })));
    }

    #[test]
    fn rejects_non_regular_groups() {
        let g = OrderedGroup::from_elements(
            2,
            vec![Permutation::identity(2), Permutation::identity(2)],
        );
        assert!(matches!(normalizer_bruteforce(&g, 9), Err(EnumerateError::InvalidGroup(_))));
    }

    #[test]
    fn scan_visits_every_permutation_once() {
        for q in 1..=6usize {
            let shards = scan_symmetric_group(q, 9, Vec::new, |acc: &mut Vec<Vec<u32>>, h| acc.push(h.to_vec())).unwrap();
            let all: Vec<Vec<u32>> = shards.into_iter().flatten().collect();
            let fact: usize = (1..=q).product();
            assert_eq!(all.len(), fact);
            assert!(all.windows(2).all(|w| w[0] < w[1]), "lexicographic order");
            assert!(all.iter().all(|h| Permutation::from_images(h.clone()).is_ok()));
        }
    }

    #[test]
    fn histogram_matches_direct_counts() {
        let g = OrderedGroup::t31(&t31(2, 2, 1)).unwrap();
        let hist = conjugation_histogram(&g, DEFAULT_GUARD).unwrap();
        assert_eq!(hist.values().sum::<u64>(), 24);
        assert_eq!(hist.len(), 6);
        for (targets, &c) in &hist {
            assert_eq!(nset_bruteforce(&g, targets, DEFAULT_GUARD).unwrap(), big(c));
        }
    }

    #[test]
    fn report_json_shape() {
        let r = count_report(&Family::Klenian(kl(2, 2, 1)), true, DEFAULT_GUARD).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"family":"klenian","params":{"e":1,"n":2,"p":2},"closed_form":"24","oracle":"24","match":true}"#
        );
        let r = count_report(&Family::T31(t31(2, 4, 1)), false, DEFAULT_GUARD).unwrap();
        assert_eq!(r.oracle, None);
        assert_eq!(r.matches, None);
    }
}
