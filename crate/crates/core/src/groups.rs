//! The two generator families of regular abelian subgroups of `S_q` and their
//! expansion into ordered groups.
//!
//! The multi-generator family is parameterised by `(p, n, delta)` with
//! `delta` in `{1, 2}`: `a_0` rotates the lowest mixed-radix digit modulo
//! `p^delta` and each `a_i` (for `1 <= i <= n - delta`) rotates digit `i`
//! modulo `p`, where an index `t` is read as
//! `t = t_0 + t_1 p^delta + t_2 p^(delta+1) + ... + t_(n-delta) p^(n-1)`.
//!
//! The two-generator ("e-Klenian") family is parameterised by `(p, n, e)`:
//! `a` is a product of `p^(n-e)` block cycles of length `p^e`, and `b` is a
//! product of `p^e` strided cycles of length `p^(n-e)`.
//!
//! In both cases the group element at position `t` is the product of
//! generator powers whose exponents are the mixed-radix digits of `t`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{checked_order, is_prime};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("generators {0} and {1} do not commute")]
    NonCommutingGenerators(usize, usize),
    #[error("generator products are not distinct")]
    DegenerateGroup,
    #[error("exponent bounds do not match the generators or the degree")]
    BoundsMismatch,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("element set is not a group")]
    NotAGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct T31Params {
    pub p: u32,
    pub n: u32,
    pub delta: u32,
}

impl T31Params {
    pub fn new(p: u32, n: u32, delta: u32) -> Result<Self, GroupError> {
        let params = T31Params { p, n, delta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        if !is_prime(self.p) {
            return Err(GroupError::InvalidParams(format!("{} is not prime", self.p)));
        }
        if self.n < 2 {
            return Err(GroupError::InvalidParams("n must be at least 2".into()));
        }
        if self.delta != 1 && self.delta != 2 {
            return Err(GroupError::InvalidParams("delta must be 1 or 2".into()));
        }
        if checked_order(self.p, self.n).is_none() {
            return Err(GroupError::InvalidParams(format!(
                "{}^{} exceeds the supported field order",
                self.p, self.n
            )));
        }
        Ok(())
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.n)
    }

    /// Number of generators, `n - delta + 1`.
    pub fn rank(&self) -> usize {
        (self.n - self.delta + 1) as usize
    }

    /// Exponent bounds `(p^delta, p, ..., p)`.
    pub fn bounds(&self) -> Vec<u32> {
        let mut b = vec![self.p.pow(self.delta)];
        b.extend(std::iter::repeat_n(self.p, self.rank() - 1));
        b
    }

    /// Mixed-radix digits `(t_0, t_1, ..., t_(n-delta))` of `t`.
    pub fn digits(&self, t: u32) -> Vec<u32> {
        mixed_radix_digits(t, &self.bounds())
    }

    pub fn index(&self, digits: &[u32]) -> u32 {
        mixed_radix_index(digits, &self.bounds())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlenianParams {
    pub p: u32,
    pub n: u32,
    pub e: u32,
}

impl KlenianParams {
    pub fn new(p: u32, n: u32, e: u32) -> Result<Self, GroupError> {
        let params = KlenianParams { p, n, e };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        if !is_prime(self.p) {
            return Err(GroupError::InvalidParams(format!("{} is not prime", self.p)));
        }
        if self.n < 1 {
            return Err(GroupError::InvalidParams("n must be at least 1".into()));
        }
        if self.e >= self.n {
            return Err(GroupError::InvalidParams("e must satisfy 0 <= e < n".into()));
        }
        if checked_order(self.p, self.n).is_none() {
            return Err(GroupError::InvalidParams(format!(
                "{}^{} exceeds the supported field order",
                self.p, self.n
            )));
        }
        Ok(())
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.n)
    }

    /// Block length `p^e`.
    pub fn ell(&self) -> u32 {
        self.p.pow(self.e)
    }

    /// Number of blocks `q / p^e`.
    pub fn t(&self) -> u32 {
        self.p.pow(self.n - self.e)
    }

    pub fn bounds(&self) -> Vec<u32> {
        vec![self.ell(), self.t()]
    }
}

pub(crate) fn mixed_radix_digits(mut t: u32, bounds: &[u32]) -> Vec<u32> {
    bounds
        .iter()
        .map(|&b| {
            let d = t % b;
            t /= b;
            d
        })
        .collect()
}

pub(crate) fn mixed_radix_index(digits: &[u32], bounds: &[u32]) -> u32 {
    digits
        .iter()
        .zip(bounds)
        .rev()
        .fold(0, |acc, (&d, &b)| acc * b + d % b)
}

/// Generators `[a_0, a_1, ..., a_(n-delta)]` of the multi-generator family.
pub fn t31_generators(params: &T31Params) -> Result<Vec<Permutation>, GroupError> {
    params.validate()?;
    let (p, n, delta) = (params.p, params.n, params.delta);
    let q = params.q() as usize;
    let mut gens = Vec::with_capacity(params.rank());

    let block = p.pow(delta);
    let a0: Vec<Vec<u32>> = (0..p.pow(n - delta))
        .map(|j| (0..block).map(|r| j * block + r).collect())
        .collect();
    gens.push(Permutation::from_cycles(q, &a0).expect("disjoint blocks"));

    for i in 1..=(n - delta) {
        let stride = p.pow(i + delta - 1);
        let period = stride * p;
        let cycles: Vec<Vec<u32>> = (0..q as u32)
            .filter(|j| j % period < stride)
            .map(|j| (0..p).map(|r| j + r * stride).collect())
            .collect();
        gens.push(Permutation::from_cycles(q, &cycles).expect("disjoint strided cycles"));
    }
    Ok(gens)
}

/// The generator pair `(a, b)` of the two-generator family.
pub fn klenian_generators(params: &KlenianParams) -> Result<(Permutation, Permutation), GroupError> {
    params.validate()?;
    let q = params.q() as usize;
    let (ell, t) = (params.ell(), params.t());
    let a_cycles: Vec<Vec<u32>> = (0..t)
        .map(|i| (i * ell..(i + 1) * ell).collect())
        .collect();
    let b_cycles: Vec<Vec<u32>> = (0..ell)
        .map(|j| (0..t).map(|k| j + k * ell).collect())
        .collect();
    Ok((
        Permutation::from_cycles(q, &a_cycles).expect("disjoint blocks"),
        Permutation::from_cycles(q, &b_cycles).expect("disjoint strided cycles"),
    ))
}

/// A group of permutations listed in a fixed order, with element `t` equal to
/// the generator word whose exponents are the mixed-radix digits of `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedGroup {
    pub q: usize,
    pub bounds: Vec<u32>,
    pub gens: Vec<Permutation>,
    pub elements: Vec<Permutation>,
}

impl OrderedGroup {
    /// Wraps an arbitrary ordered tuple of permutations without checking
    /// anything; use [`validate_pgp_group`] to inspect it.
    pub fn from_elements(q: usize, elements: Vec<Permutation>) -> Self {
        OrderedGroup {
            q,
            bounds: Vec::new(),
            gens: Vec::new(),
            elements,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn t31(params: &T31Params) -> Result<Self, GroupError> {
        let gens = t31_generators(params)?;
        enumerate_group(&gens, &params.bounds())
    }

    pub fn klenian(params: &KlenianParams) -> Result<Self, GroupError> {
        let (a, b) = klenian_generators(params)?;
        enumerate_group(&[a, b], &params.bounds())
    }

    /// Position of each element's image table, for membership lookups.
    pub fn index_map(&self) -> HashMap<&[u32], usize> {
        self.elements
            .iter()
            .enumerate()
            .map(|(t, e)| (e.images(), t))
            .collect()
    }

    pub fn position(&self, g: &Permutation) -> Option<usize> {
        self.elements.iter().position(|e| e == g)
    }
}

/// Expands commuting generators into the ordered list of all products
/// `gens[0]^d_0 ∘ gens[1]^d_1 ∘ ...` where `(d_0, d_1, ...)` are the
/// mixed-radix digits of the position with the given bounds.
pub fn enumerate_group(gens: &[Permutation], bounds: &[u32]) -> Result<OrderedGroup, GroupError> {
    if gens.is_empty() || gens.len() != bounds.len() || bounds.contains(&0) {
        return Err(GroupError::BoundsMismatch);
    }
    let q = gens[0].degree();
    if gens.iter().any(|g| g.degree() != q) {
        return Err(GroupError::BoundsMismatch);
    }
    let total = bounds.iter().try_fold(1usize, |acc, &b| acc.checked_mul(b as usize));
    if total != Some(q) {
        return Err(GroupError::BoundsMismatch);
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i].compose_unchecked(&gens[j]) != gens[j].compose_unchecked(&gens[i]) {
                return Err(GroupError::NonCommutingGenerators(i, j));
            }
        }
    }

    let powers: Vec<Vec<Permutation>> = gens
        .iter()
        .zip(bounds)
        .map(|(g, &b)| (0..b as i64).map(|k| g.power(k)).collect())
        .collect();
    let mut elements = Vec::with_capacity(q);
    for t in 0..q as u32 {
        let digits = mixed_radix_digits(t, bounds);
        let mut word = Permutation::identity(q);
        for (k, &d) in digits.iter().enumerate().rev() {
            word = powers[k][d as usize].compose_unchecked(&word);
        }
        elements.push(word);
    }
    let distinct: HashSet<&[u32]> = elements.iter().map(Permutation::images).collect();
    if distinct.len() != q {
        return Err(GroupError::DegenerateGroup);
    }
    Ok(OrderedGroup {
        q,
        bounds: bounds.to_vec(),
        gens: gens.to_vec(),
        elements,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub order_is_q: bool,
    pub closed: bool,
    pub abelian: bool,
    pub fixed_point_free: bool,
    pub contains_identity_at_0: bool,
}

impl ValidationReport {
    pub fn all_true(&self) -> bool {
        self.order_is_q
            && self.closed
            && self.abelian
            && self.fixed_point_free
            && self.contains_identity_at_0
    }
}

/// Checks the conditions under which an ordered tuple is the permutation
/// tuple of a permutation group polynomial. Never fails; inconsistent input
/// simply produces `false` flags.
pub fn validate_pgp_group(g: &OrderedGroup) -> ValidationReport {
    let q = g.q;
    if g.elements.iter().any(|e| e.degree() != q) {
        return ValidationReport {
            order_is_q: false,
            closed: false,
            abelian: false,
            fixed_point_free: false,
            contains_identity_at_0: false,
        };
    }
    let members: HashSet<&[u32]> = g.elements.iter().map(Permutation::images).collect();
    let order_is_q = g.elements.len() == q && members.len() == q;
    let contains_identity_at_0 = g.elements.first().is_some_and(Permutation::is_identity);
    let fixed_point_free = g
        .elements
        .iter()
        .filter(|e| !e.is_identity())
        .all(|e| !e.has_fixed_point());

    let mut closed = !g.elements.is_empty();
    let mut abelian = true;
    for (i, x) in g.elements.iter().enumerate() {
        for y in &g.elements[i..] {
            let xy = x.compose_unchecked(y);
            let yx = y.compose_unchecked(x);
            if xy != yx {
                abelian = false;
            }
            if !members.contains(xy.images()) || !members.contains(yx.images()) {
                closed = false;
            }
        }
    }
    ValidationReport {
        order_is_q,
        closed,
        abelian,
        fixed_point_free,
        contains_identity_at_0,
    }
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn exact_log(mut x: u64, p: u64) -> Option<u32> {
    let mut k = 0;
    while x > 1 {
        if !x.is_multiple_of(p) {
            return None;
        }
        x /= p;
        k += 1;
    }
    (x == 1).then_some(k)
}

/// Elementary divisors (prime-power cyclic factor orders) of an abelian
/// group, sorted ascending, recovered from its element-order statistics.
///
/// For the `p`-primary part `⊕ Z_(p^e_i)`, the number of elements whose order
/// divides `p^k` is `p^(Σ min(k, e_i))`, so successive differences of the
/// exponents count the factors with `e_i >= k`.
pub fn group_invariants(g: &OrderedGroup) -> Result<Vec<u64>, GroupError> {
    for (i, x) in g.elements.iter().enumerate() {
        for y in &g.elements[i + 1..] {
            if x.compose_unchecked(y) != y.compose_unchecked(x) {
                return Err(GroupError::NotAbelian);
            }
        }
    }
    let size = g.elements.len() as u64;
    if size == 0 {
        return Err(GroupError::NotAGroup);
    }
    let orders: Vec<u64> = g
        .elements
        .iter()
        .map(|e| u64::try_from(e.order()).map_err(|_| GroupError::NotAGroup))
        .collect::<Result<_, _>>()?;
    if orders.iter().any(|o| !size.is_multiple_of(*o)) {
        return Err(GroupError::NotAGroup);
    }

    let mut divisors = Vec::new();
    for (p, a) in prime_factors(size) {
        let mut prev = 0u32;
        let mut at_least = Vec::new();
        for k in 1..=a {
            let pk = p.pow(k);
            // Elements of the p-primary part with order dividing p^k.
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let s = exact_log(count, p).ok_or(GroupError::NotAGroup)?;
            if s < prev {
                return Err(GroupError::NotAGroup);
            }
            at_least.push(s - prev);
            prev = s;
        }
        if prev != a {
            return Err(GroupError::NotAGroup);
        }
        // at_least[k-1] = #{i : e_i >= k}; factor with exponent k appears
        // at_least[k-1] - at_least[k] times.
        for k in 1..=a as usize {
            let here = at_least[k - 1];
            let next = at_least.get(k).copied().unwrap_or(0);
            if here < next {
                return Err(GroupError::NotAGroup);
            }
            for _ in 0..(here - next) {
                divisors.push(p.pow(k as u32));
            }
        }
    }
    divisors.sort_unstable();
    Ok(divisors)
}
