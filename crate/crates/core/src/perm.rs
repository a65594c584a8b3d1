//! Permutations of `{0, ..., q-1}` stored as dense image tables.
//!
//! Composition is right-to-left: `f.compose(&g)` is the map `x -> f(g(x))`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("permutation degrees differ ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("point {0} appears in more than one cycle")]
    OverlappingCycles(u32),
    #[error("point {point} is out of range for degree {degree}")]
    IndexOutOfRange { point: u32, degree: usize },
    #[error("image table is not a bijection")]
    NotABijection,
    #[error("cannot parse cycle notation: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = PermError;

    fn try_from(images: Vec<u32>) -> Result<Self, PermError> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let mut seen = vec![false; images.len()];
        for &y in &images {
            let slot = seen.get_mut(y as usize).ok_or(PermError::NotABijection)?;
            if *slot {
                return Err(PermError::NotABijection);
            }
            *slot = true;
        }
        Ok(Permutation { images })
    }

    /// Trusted constructor for tables built by this crate.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Product of disjoint cycles; points not mentioned are fixed.
    pub fn from_cycles<C: AsRef<[u32]>>(degree: usize, cycles: &[C]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &x in cycle {
                if x as usize >= degree {
                    return Err(PermError::IndexOutOfRange { point: x, degree });
                }
                if used[x as usize] {
                    return Err(PermError::OverlappingCycles(x));
                }
                used[x as usize] = true;
            }
            for (k, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses disjoint-cycle notation such as `"(0 1)(2 3)"`; `"()"` is the
    /// identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self, PermError> {
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Parse(format!("expected '(' at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| PermError::Parse("unterminated cycle".into()))?;
            let cycle = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>().map_err(|e| PermError::Parse(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cycle);
            rest = body[close + 1..].trim_start();
        }
        Permutation::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// `self ∘ g`, i.e. apply `g` first.
    pub fn compose(&self, g: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(g)?;
        Ok(self.compose_unchecked(g))
    }

    pub(crate) fn compose_unchecked(&self, g: &Permutation) -> Permutation {
        Permutation {
            images: g.images.iter().map(|&y| self.images[y as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation { images: inv }
    }

    /// `self^k` for any integer `k`; negative powers use the inverse. Each
    /// cycle is rotated by `k` modulo its own length, which is the same as
    /// reducing `k` modulo the order.
    pub fn power(&self, k: i64) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for cycle in self.all_cycles() {
            let len = cycle.len() as i64;
            let shift = k.rem_euclid(len) as usize;
            for (pos, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(pos + shift) % cycle.len()];
            }
        }
        Permutation { images }
    }

    /// `s ∘ f ∘ s⁻¹`.
    pub fn conjugate(s: &Permutation, f: &Permutation) -> Result<Permutation, PermError> {
        s.check_degree(f)?;
        Ok(Permutation::conjugate_unchecked(s, f))
    }

    pub(crate) fn conjugate_unchecked(s: &Permutation, f: &Permutation) -> Permutation {
        // (s f s^-1)(s(x)) = s(f(x))
        let mut images = vec![0u32; f.images.len()];
        for (x, &fx) in f.images.iter().enumerate() {
            images[s.images[x] as usize] = s.images[fx as usize];
        }
        Permutation { images }
    }

    pub fn fixed_points(&self) -> Vec<u32> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x as u32 == y)
            .map(|(x, _)| x as u32)
            .collect()
    }

    pub fn has_fixed_point(&self) -> bool {
        self.images.iter().enumerate().any(|(x, &y)| x as u32 == y)
    }

    /// Number of points where `self` and `other` agree.
    pub fn coincidences(&self, other: &Permutation) -> Result<usize, PermError> {
        self.check_degree(other)?;
        Ok(self
            .images
            .iter()
            .zip(&other.images)
            .filter(|(a, b)| a == b)
            .count())
    }

    /// Every cycle including fixed points, each starting at its smallest
    /// point, ordered by that point.
    fn all_cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.images.len()];
        let mut cycles = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.images[x as usize];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Cycles of length at least two in canonical order.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        self.all_cycles().into_iter().filter(|c| c.len() > 1).collect()
    }

    /// Sorted multiset of cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.all_cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    /// Order as the lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut lens = self.cycle_type();
        lens.dedup();
        lens.into_iter().fold(BigUint::one(), |acc, l| {
            let l = BigUint::from(l);
            let g = gcd_big(&acc, &l);
            acc * l / g
        })
    }

    fn check_degree(&self, other: &Permutation) -> Result<(), PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }
}

fn gcd_big(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while b != BigUint::from(0u32) {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
