//! Arithmetic in `F_q = F_p[X] / (m(X))` with a fixed labeling of the field
//! elements by integers.
//!
//! Element `c_t` is the residue class whose coordinate vector in the power
//! basis `1, X, ..., X^{n-1}` equals the little-endian base-`p` digits of `t`.
//! So `c_0` is zero, `c_1` is one, and addition is digitwise addition mod `p`.
//! Every other module addresses field elements through this labeling, which
//! means interpolated polynomial coefficients depend on it while group and
//! Latin square results do not.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field order {p}^{n} exceeds the supported maximum of {max}", max = MAX_FIELD_ORDER)]
    FieldTooLarge { p: u32, n: u32 },
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("index {index} is out of range for a field with {q} elements")]
    IndexOutOfRange { index: u64, q: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
}

/// Parameters of a finite field `F_{p^n}` together with its defining modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FieldParamsRepr", into = "FieldParamsRepr")]
pub struct FieldParams {
    p: u32,
    n: u32,
    q: u32,
    /// `n + 1` digits, little-endian, leading digit 1.
    modulus: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct FieldParamsRepr {
    p: u32,
    n: u32,
    modulus: Vec<u32>,
}

impl TryFrom<FieldParamsRepr> for FieldParams {
    type Error = FieldError;

    fn try_from(r: FieldParamsRepr) -> Result<Self, FieldError> {
        FieldParams::with_modulus(r.p, r.n, r.modulus)
    }
}

impl From<FieldParams> for FieldParamsRepr {
    fn from(f: FieldParams) -> Self {
        FieldParamsRepr {
            p: f.p,
            n: f.n,
            modulus: f.modulus,
        }
    }
}

/// Compact identity of a field, carried by every [`FieldElement`] so that
/// mixing elements of different fields is detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldId {
    p: u32,
    n: u32,
    modulus_code: u64,
}

/// The element `c_index` of a particular field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldId,
    index: u32,
}

impl FieldElement {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn field_id(&self) -> FieldId {
        self.field
    }

    /// Little-endian base-`p` digits of the index, exactly `n` of them.
    pub fn digits(&self) -> Vec<u32> {
        to_digits(self.index, self.field.p, self.field.n)
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c_{}", self.index)
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Checked `p^n` that fails once the value exceeds [`MAX_FIELD_ORDER`].
pub(crate) fn checked_order(p: u32, n: u32) -> Option<u32> {
    let mut q: u64 = 1;
    for _ in 0..n {
        q *= p as u64;
        if q > MAX_FIELD_ORDER {
            return None;
        }
    }
    Some(q as u32)
}

pub(crate) fn to_digits(mut t: u32, p: u32, n: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(n as usize);
    for _ in 0..n {
        d.push(t % p);
        t /= p;
    }
    d
}

pub(crate) fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

// Dense polynomials over F_p, little-endian coefficient vectors.

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is prime and a != 0, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `a` divided by `b` over F_p. `b` must be nonzero.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p) as u64;
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = r[dr] as u64 * lead_inv % p as u64;
        let shift = dr - db;
        for (k, &bk) in b.iter().enumerate() {
            let sub = factor * bk as u64 % p as u64;
            r[shift + k] = ((r[shift + k] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor = to_digits(code as u32, p, d as u32);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldParams {
    /// Builds `F_{p^n}` with the lexicographically smallest monic irreducible
    /// modulus, comparing coefficients from the constant term upward.
    pub fn new(p: u32, n: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::DegreeZero);
        }
        let q = checked_order(p, n).ok_or(FieldError::FieldTooLarge { p, n })?;
        // Low-degree-first lex order: the constant term varies slowest, so
        // read the counter's digits big-endian into coefficients 0..n-1.
        for code in 0..q {
            let mut modulus: Vec<u32> = to_digits(code, p, n).into_iter().rev().collect();
            modulus.push(1);
            if is_irreducible(&modulus, p) {
                return Ok(FieldParams { p, n, q, modulus });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    /// Builds a field from an explicit modulus, checking that it is monic and
    /// irreducible of degree `n`.
    pub fn with_modulus(p: u32, n: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::DegreeZero);
        }
        let q = checked_order(p, n).ok_or(FieldError::FieldTooLarge { p, n })?;
        if modulus.len() != n as usize + 1 {
            return Err(FieldError::InvalidModulus(format!(
                "expected {} digits, got {}",
                n + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&d| d >= p) {
            return Err(FieldError::InvalidModulus("digit out of range".into()));
        }
        if modulus[n as usize] != 1 {
            return Err(FieldError::InvalidModulus("not monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::InvalidModulus("reducible".into()));
        }
        Ok(FieldParams { p, n, q, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn id(&self) -> FieldId {
        FieldId {
            p: self.p,
            n: self.n,
            modulus_code: self
                .modulus
                .iter()
                .rev()
                .fold(0u64, |acc, &d| acc * self.p as u64 + d as u64),
        }
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, FieldError> {
        if index >= self.q {
            return Err(FieldError::IndexOutOfRange {
                index: index as u64,
                q: self.q,
            });
        }
        Ok(FieldElement {
            field: self.id(),
            index,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.id(),
            index: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            field: self.id(),
            index: 1,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let id = self.id();
        (0..self.q).map(move |index| FieldElement { field: id, index })
    }

    fn check(&self, a: &FieldElement) -> Result<(), FieldError> {
        if a.field != self.id() {
            return Err(FieldError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(FieldElement {
            field: a.field,
            index: self.add_idx(a.index, b.index),
        })
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&a)?;
        Ok(FieldElement {
            field: a.field,
            index: self.neg_idx(a.index),
        })
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(FieldElement {
            field: a.field,
            index: self.sub_idx(a.index, b.index),
        })
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(FieldElement {
            field: a.field,
            index: self.mul_idx(a.index, b.index),
        })
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> Result<FieldElement, FieldError> {
        self.check(&a)?;
        Ok(FieldElement {
            field: a.field,
            index: self.pow_idx(a.index, e),
        })
    }

    /// Inverse computed as `a^(q-2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&a)?;
        if a.index == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(FieldElement {
            field: a.field,
            index: self.pow_idx(a.index, self.q as u64 - 2),
        })
    }

    // Index-level arithmetic. Callers guarantee indices are below q.

    pub(crate) fn add_idx(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place = place.wrapping_mul(self.p);
        }
        out
    }

    pub(crate) fn neg_idx(&self, a: u32) -> u32 {
        let digits: Vec<u32> = to_digits(a, self.p, self.n)
            .into_iter()
            .map(|d| (self.p - d) % self.p)
            .collect();
        from_digits(&digits, self.p)
    }

    pub(crate) fn sub_idx(&self, a: u32, b: u32) -> u32 {
        self.add_idx(a, self.neg_idx(b))
    }

    pub(crate) fn mul_idx(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let p = self.p as u64;
        let da = to_digits(a, self.p, self.n);
        let db = to_digits(b, self.p, self.n);
        let mut prod = vec![0u64; 2 * self.n as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce with the monic modulus: X^n = -(m_0 + ... + m_{n-1} X^{n-1}).
        let n = self.n as usize;
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &m) in self.modulus[..n].iter().enumerate() {
                let idx = k - n + j;
                prod[idx] = (prod[idx] + p - c * m as u64 % p) % p;
            }
        }
        let digits: Vec<u32> = prod[..n].iter().map(|&d| d as u32).collect();
        from_digits(&digits, self.p)
    }

    pub(crate) fn pow_idx(&self, a: u32, mut e: u64) -> u32 {
        let mut result = 1u32;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_idx(result, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        result
    }
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod ", self.p, self.n)?;
        let mut first = true;
        for (k, &d) in self.modulus.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, d) {
                (0, d) => write!(f, "{d}")?,
                (1, 1) => write!(f, "X")?,
                (1, d) => write!(f, "{d}X")?,
                (k, 1) => write!(f, "X^{k}")?,
                (k, d) => write!(f, "{d}X^{k}")?,
            }
        }
        Ok(())
    }
}
