//! Permutation tuples, Latin squares, companions and orthogonality.
//!
//! A bivariate local permutation polynomial `f` corresponds to a Latin square
//! (`cells[x][y]` is the index of `f(c_x, c_y)`) and to a tuple of
//! permutations `(β_0, ..., β_(q-1))` with `f(x, β_i(x)) = c_i`. A permutation
//! `h` that meets every `β_i` in exactly one point turns the tuple
//! `(h∘β_0, ..., h∘β_(q-1))` into a companion, whose square is orthogonal to
//! the original one.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{t31_generators, OrderedGroup, T31Params};
use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LppError {
    #[error("tuple is not a permutation polynomial tuple (cell ({x}, {y}) is {problem})")]
    NotAPermTuple { x: u32, y: u32, problem: &'static str },
    #[error("grid is not a Latin square: {0}")]
    NotLatin(String),
    #[error("sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("h does not intersect β_{0} simply")]
    NotSimpleIntersection(usize),
    #[error(
        "no closed-form companion for p = 2, delta = 2 when n < 5 (got n = {0}); \
         use mate search instead"
    )]
    UnsupportedCase(u32),
    #[error("mate search exceeded its budget of {0} steps")]
    BudgetExceeded(u64),
    #[error("cannot parse square: {0}")]
    Parse(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] crate::groups::GroupError),
}

/// Default step budget for [`mate_search`].
pub const DEFAULT_MATE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermTuple {
    betas: Vec<Permutation>,
}

impl PermTuple {
    /// Validates that `β_i ∘ β_j⁻¹` is fixed-point-free for all `i != j`.
    pub fn new(betas: Vec<Permutation>) -> Result<Self, LppError> {
        let q = betas.len();
        if let Some(b) = betas.iter().find(|b| b.degree() != q) {
            return Err(LppError::SizeMismatch(q, b.degree()));
        }
        fill_square(&betas)?;
        Ok(PermTuple { betas })
    }

    pub fn from_group(g: &OrderedGroup) -> Result<Self, LppError> {
        PermTuple::new(g.elements.clone())
    }

    pub fn q(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[Permutation] {
        &self.betas
    }

    /// `(σ∘β_0∘λ, ..., σ∘β_(q-1)∘λ)`.
    pub fn transform(&self, sigma: &Permutation, lambda: &Permutation) -> Result<PermTuple, LppError> {
        let betas = self
            .betas
            .iter()
            .map(|b| sigma.compose(b).and_then(|sb| sb.compose(lambda)))
            .collect::<Result<Vec<_>, _>>()?;
        PermTuple::new(betas)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SquareRepr", into = "SquareRepr")]
pub struct LatinSquare {
    cells: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct SquareRepr {
    q: usize,
    cells: Vec<Vec<u32>>,
}

impl TryFrom<SquareRepr> for LatinSquare {
    type Error = LppError;

    fn try_from(r: SquareRepr) -> Result<Self, LppError> {
        if r.cells.len() != r.q {
            return Err(LppError::NotLatin(format!(
                "declared order {} but {} rows",
                r.q,
                r.cells.len()
            )));
        }
        LatinSquare::new(r.cells)
    }
}

impl From<LatinSquare> for SquareRepr {
    fn from(s: LatinSquare) -> Self {
        SquareRepr {
            q: s.cells.len(),
            cells: s.cells,
        }
    }
}

/// Why a grid fails to be Latin, or `None` if it is Latin.
#[allow(clippy::needless_range_loop)]
pub fn latin_defect(cells: &[Vec<u32>]) -> Option<String> {
    let q = cells.len();
    for (x, row) in cells.iter().enumerate() {
        if row.len() != q {
            return Some(format!("row {x} has {} entries, expected {q}", row.len()));
        }
    }
    for x in 0..q {
        let mut row_seen = vec![false; q];
        let mut col_seen = vec![false; q];
        for y in 0..q {
            let v = cells[x][y] as usize;
            if v >= q {
                return Some(format!("symbol {v} at ({x}, {y}) is out of range"));
            }
            if std::mem::replace(&mut row_seen[v], true) {
                return Some(format!("symbol {v} repeats in row {x}"));
            }
            let w = cells[y][x] as usize;
            if w >= q {
                return Some(format!("symbol {w} at ({y}, {x}) is out of range"));
            }
            if std::mem::replace(&mut col_seen[w], true) {
                return Some(format!("symbol {w} repeats in column {x}"));
            }
        }
    }
    None
}

pub fn is_latin(cells: &[Vec<u32>]) -> bool {
    latin_defect(cells).is_none()
}

impl LatinSquare {
    pub fn new(cells: Vec<Vec<u32>>) -> Result<Self, LppError> {
        match latin_defect(&cells) {
            Some(why) => Err(LppError::NotLatin(why)),
            None => Ok(LatinSquare { cells }),
        }
    }

    pub fn q(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.cells[x][y]
    }

    /// Whitespace-separated rows, one per line.
    pub fn parse_text(text: &str) -> Result<Self, LppError> {
        LatinSquare::parse_rows(text, |line| {
            line.split_whitespace().map(str::to_owned).collect()
        })
    }

    pub fn parse_csv(text: &str) -> Result<Self, LppError> {
        LatinSquare::parse_rows(text, |line| line.split(',').map(|s| s.trim().to_owned()).collect())
    }

    fn parse_rows(text: &str, split: impl Fn(&str) -> Vec<String>) -> Result<Self, LppError> {
        let cells = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|line| {
                split(line)
                    .iter()
                    .map(|tok| tok.parse::<u32>().map_err(|e| LppError::Parse(format!("{tok:?}: {e}"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        LatinSquare::new(cells)
    }

    pub fn to_text(&self) -> String {
        self.join_rows(" ")
    }

    pub fn to_csv(&self) -> String {
        self.join_rows(",")
    }

    fn join_rows(&self, sep: &str) -> String {
        let mut out = String::new();
        for row in &self.cells {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&line.join(sep));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Two squares with an orthogonality attestation, as exported for MOLS.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarePair {
    pub first: LatinSquare,
    pub second: LatinSquare,
    pub orthogonal: bool,
}

impl SquarePair {
    pub fn new(first: LatinSquare, second: LatinSquare) -> Result<Self, LppError> {
        let orthogonal = are_orthogonal(&first, &second)?;
        Ok(SquarePair {
            first,
            second,
            orthogonal,
        })
    }
}

#[allow(clippy::needless_range_loop)]
fn fill_square(betas: &[Permutation]) -> Result<Vec<Vec<u32>>, LppError> {
    const EMPTY: u32 = u32::MAX;
    let q = betas.len();
    let mut cells = vec![vec![EMPTY; q]; q];
    for (i, beta) in betas.iter().enumerate() {
        for x in 0..q {
            let y = beta.apply(x as u32) as usize;
            if cells[x][y] != EMPTY {
                return Err(LppError::NotAPermTuple {
                    x: x as u32,
                    y: y as u32,
                    problem: "written twice",
                });
            }
            cells[x][y] = i as u32;
        }
    }
    // q^2 writes with no collision fill every cell, so nothing is left empty.
    Ok(cells)
}

/// `cells[x][β_i(x)] = i`.
pub fn tuple_to_square(t: &PermTuple) -> LatinSquare {
    let cells = fill_square(&t.betas).expect("PermTuple invariant");
    LatinSquare { cells }
}

/// Builds the square directly from raw permutations, reporting the first
/// collision when the tuple condition fails.
pub fn betas_to_square(betas: &[Permutation]) -> Result<LatinSquare, LppError> {
    let tuple = PermTuple::new(betas.to_vec())?;
    Ok(tuple_to_square(&tuple))
}

/// `β_i(x)` is the unique column `y` with `cells[x][y] = i`.
pub fn square_to_tuple(s: &LatinSquare) -> PermTuple {
    let q = s.q();
    let mut images = vec![vec![0u32; q]; q];
    for x in 0..q {
        for y in 0..q {
            images[s.get(x, y) as usize][x] = y as u32;
        }
    }
    PermTuple {
        betas: images
            .into_iter()
            .map(Permutation::from_images_unchecked)
            .collect(),
    }
}

/// True iff superimposing the squares yields every ordered pair once.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool, LppError> {
    let q = a.q();
    if b.q() != q {
        return Err(LppError::SizeMismatch(q, b.q()));
    }
    let mut seen = vec![false; q * q];
    for x in 0..q {
        for y in 0..q {
            let pair = a.get(x, y) as usize * q + b.get(x, y) as usize;
            if std::mem::replace(&mut seen[pair], true) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn intersects_simply(h: &Permutation, b: &Permutation) -> Result<bool, LppError> {
    Ok(h.coincidences(b)? == 1)
}

pub fn intersects_lpp_simply(h: &Permutation, t: &PermTuple) -> Result<bool, LppError> {
    for b in &t.betas {
        if !intersects_simply(h, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exponents of the generator word that `h` applies to `c_t`, reduced
/// modulo the generator orders.
fn companion_exponents(params: &T31Params, t: &[u32]) -> Result<Vec<i64>, LppError> {
    let (p, n, delta) = (params.p, params.n as usize, params.delta);
    let t: Vec<i64> = t.iter().map(|&d| d as i64).collect();
    let exps = if p % 2 == 1 {
        t
    } else if delta == 1 {
        // a_0^(t_(n-1)) a_1^(t_0 + t_(n-1)) a_2^(t_1) ... a_(n-1)^(t_(n-2))
        let mut e = vec![t[n - 1], t[0] + t[n - 1]];
        e.extend((2..n).map(|k| t[k - 1]));
        e
    } else {
        if n < 5 {
            return Err(LppError::UnsupportedCase(n as u32));
        }
        let (t00, t01) = (t[0] % 2, t[0] / 2);
        let s1: i64 = (1..=(n - 3) / 2).map(|k| t[2 * k - 1] + t[2 * k + 1]).sum();
        let s2: i64 = (1..=(n - 4) / 2).map(|k| t[2 * k] + t[2 * k + 2]).sum();
        // a_0^(t_(n-2) + 2 t_(n-3)) a_1^(t00 + S1 - t_1) a_2^(t01 + S2 - t_2)
        //   a_3^(t_1) ... a_(n-2)^(t_(n-4))
        let mut e = vec![t[n - 2] + 2 * t[n - 3], t00 + s1 - t[1], t01 + s2 - t[2]];
        e.extend((3..=n - 2).map(|k| t[k - 2]));
        e
    };
    let bounds = params.bounds();
    Ok(exps
        .into_iter()
        .zip(&bounds)
        .map(|(e, &b)| e.rem_euclid(b as i64))
        .collect())
}

/// The closed-form permutation `h` whose composition with the group tuple of
/// the multi-generator family gives a companion.
///
/// Supported for odd `p` (any `n >= 2`), for `p = 2, delta = 1`, and for
/// `p = 2, delta = 2` with `n >= 5`.
pub fn companion_h(params: &T31Params) -> Result<Permutation, LppError> {
    params.validate()?;
    if params.p == 2 && params.delta == 2 && params.n < 5 {
        return Err(LppError::UnsupportedCase(params.n));
    }
    let gens = t31_generators(params)?;
    let q = params.q();
    let mut images = Vec::with_capacity(q as usize);
    for t in 0..q {
        let exps = companion_exponents(params, &params.digits(t))?;
        // Generators commute, so the order of application is immaterial.
        let mut x = t;
        for (g, &e) in gens.iter().zip(&exps) {
            for _ in 0..e {
                x = g.apply(x);
            }
        }
        images.push(x);
    }
    Ok(Permutation::from_images(images)?)
}

/// `(h∘β_0, ..., h∘β_(q-1))`, provided `h` meets every `β_i` exactly once.
pub fn companion_tuple(t: &PermTuple, h: &Permutation) -> Result<PermTuple, LppError> {
    for (i, b) in t.betas.iter().enumerate() {
        if !intersects_simply(h, b)? {
            return Err(LppError::NotSimpleIntersection(i));
        }
    }
    let betas = t
        .betas
        .iter()
        .map(|b| h.compose_unchecked(b))
        .collect::<Vec<_>>();
    PermTuple::new(betas)
}

struct MateSearch<'a> {
    q: usize,
    square: &'a LatinSquare,
    mate: Vec<u32>,
    row_used: Vec<bool>,
    col_used: Vec<bool>,
    pair_used: Vec<bool>,
    steps: u64,
    budget: u64,
}

impl MateSearch<'_> {
    fn place(&mut self, x: usize, y: usize, v: usize, on: bool) {
        let q = self.q;
        self.row_used[x * q + v] = on;
        self.col_used[y * q + v] = on;
        self.pair_used[self.square.get(x, y) as usize * q + v] = on;
    }

    fn solve(&mut self, cell: usize) -> Result<bool, LppError> {
        let q = self.q;
        if cell == q * q {
            return Ok(true);
        }
        let (x, y) = (cell / q, cell % q);
        let s = self.square.get(x, y) as usize;
        for v in 0..q {
            if self.row_used[x * q + v] || self.col_used[y * q + v] || self.pair_used[s * q + v] {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return Err(LppError::BudgetExceeded(self.budget));
            }
            self.mate[cell] = v as u32;
            self.place(x, y, v, true);
            if self.solve(cell + 1)? {
                return Ok(true);
            }
            self.place(x, y, v, false);
        }
        Ok(false)
    }
}

/// Lexicographically first orthogonal mate of `s` (row-major, symbols tried
/// in increasing order), found by cell-by-cell backtracking.
///
/// Returns `Ok(None)` when the search space is exhausted, which proves that
/// no mate exists, and [`LppError::BudgetExceeded`] when it gives up.
///
/// Relabeling the symbols of a mate gives another mate, so the first row of
/// the lexicographically smallest mate is always `0, 1, ..., q-1`; the search
/// starts from that row.
pub fn mate_search(s: &LatinSquare, budget: u64) -> Result<Option<LatinSquare>, LppError> {
    let q = s.q();
    if q == 0 {
        return Ok(Some(s.clone()));
    }
    let mut search = MateSearch {
        q,
        square: s,
        mate: vec![0; q * q],
        row_used: vec![false; q * q],
        col_used: vec![false; q * q],
        pair_used: vec![false; q * q],
        steps: 0,
        budget,
    };
    for y in 0..q {
        search.mate[y] = y as u32;
        search.place(0, y, y, true);
    }
    if !search.solve(q)? {
        return Ok(None);
    }
    let cells = search.mate.chunks(q).map(<[u32]>::to_vec).collect();
    Ok(Some(LatinSquare::new(cells)?))
}
