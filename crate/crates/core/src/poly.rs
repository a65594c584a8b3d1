//! Bivariate polynomials over `F_q` with degree below `q` in each variable.
//!
//! Coefficients are stored as element indices, so their values depend on the
//! labeling `c_t` and on the modulus chosen by [`FieldParams::new`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{FieldElement, FieldError, FieldParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("expected a {q}x{q} grid: {detail}")]
    Shape { q: u32, detail: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `coeffs[i][j]` is the index of the coefficient of `X1^i X2^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct BivariatePoly {
    field: FieldParams,
    coeffs: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    field: FieldParams,
    coeffs: Vec<Vec<u32>>,
}

impl TryFrom<PolyRepr> for BivariatePoly {
    type Error = PolyError;

    fn try_from(r: PolyRepr) -> Result<Self, PolyError> {
        BivariatePoly::new(r.field, r.coeffs)
    }
}

impl From<BivariatePoly> for PolyRepr {
    fn from(p: BivariatePoly) -> Self {
        PolyRepr {
            field: p.field,
            coeffs: p.coeffs,
        }
    }
}

fn check_grid(q: u32, grid: &[Vec<u32>]) -> Result<(), PolyError> {
    let shape = |detail: String| PolyError::Shape { q, detail };
    if grid.len() != q as usize {
        return Err(shape(format!("{} rows", grid.len())));
    }
    for (i, row) in grid.iter().enumerate() {
        if row.len() != q as usize {
            return Err(shape(format!("row {i} has {} entries", row.len())));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= q) {
            return Err(FieldError::IndexOutOfRange { index: v as u64, q }.into());
        }
    }
    Ok(())
}

impl BivariatePoly {
    pub fn new(field: FieldParams, coeffs: Vec<Vec<u32>>) -> Result<Self, PolyError> {
        check_grid(field.q(), &coeffs)?;
        Ok(BivariatePoly { field, coeffs })
    }

    pub fn zero(field: FieldParams) -> Self {
        let q = field.q() as usize;
        BivariatePoly {
            field,
            coeffs: vec![vec![0; q]; q],
        }
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn coeffs(&self) -> &[Vec<u32>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> FieldElement {
        self.field
            .element(self.coeffs[i][j])
            .expect("coefficients are in range")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|&c| c == 0)
    }

    fn eval_idx(&self, x: u32, y: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, row| {
            let inner = row.iter().rev().fold(0, |a, &c| f.add_idx(f.mul_idx(a, y), c));
            f.add_idx(f.mul_idx(acc, x), inner)
        })
    }

    /// `table[x][y]` is the index of `P(c_x, c_y)`.
    pub fn value_table(&self) -> Vec<Vec<u32>> {
        let q = self.field.q();
        (0..q)
            .map(|x| (0..q).map(|y| self.eval_idx(x, y)).collect())
            .collect()
    }
}

/// Coefficients (lowest degree first) of the Lagrange basis polynomial that
/// is 1 at `c_a` and 0 elsewhere, namely `-(X^q - X) / (X - c_a)`.
fn lagrange_basis(field: &FieldParams, a: u32) -> Vec<u32> {
    let q = field.q() as usize;
    // Synthetic division: b_(q-1) = 1, b_(k-1) = f_k + a b_k, where the only
    // other nonzero coefficient of X^q - X is f_1 = -1.
    let mut b = vec![0u32; q];
    b[q - 1] = 1;
    for k in (1..q).rev() {
        let f_k = if k == 1 { field.neg_idx(1) } else { 0 };
        b[k - 1] = field.add_idx(f_k, field.mul_idx(a, b[k]));
    }
    b.into_iter().map(|c| field.neg_idx(c)).collect()
}

/// The unique polynomial of degree below `q` in each variable whose value at
/// `(c_x, c_y)` is `c_(table[x][y])`.
pub fn interpolate_bivariate(field: &FieldParams, table: &[Vec<u32>]) -> Result<BivariatePoly, PolyError> {
    let q = field.q() as usize;
    check_grid(field.q(), table)?;
    let f = field;
    let basis: Vec<Vec<u32>> = (0..q as u32).map(|a| lagrange_basis(f, a)).collect();
    // coeffs = Lᵀ T L with L[a][k] the X^k coefficient of the basis at c_a.
    let mut tl = vec![vec![0u32; q]; q];
    for x in 0..q {
        for y in 0..q {
            let t = table[x][y];
            if t == 0 {
                continue;
            }
            for (j, &l) in basis[y].iter().enumerate() {
                tl[x][j] = f.add_idx(tl[x][j], f.mul_idx(t, l));
            }
        }
    }
    let mut coeffs = vec![vec![0u32; q]; q];
    for (x, row) in tl.iter().enumerate() {
        for (i, &l) in basis[x].iter().enumerate() {
            if l == 0 {
                continue;
            }
            for j in 0..q {
                coeffs[i][j] = f.add_idx(coeffs[i][j], f.mul_idx(l, row[j]));
            }
        }
    }
    Ok(BivariatePoly {
        field: field.clone(),
        coeffs,
    })
}

pub fn eval_poly(p: &BivariatePoly, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
    let id = p.field.id();
    if x.field_id() != id || y.field_id() != id {
        return Err(FieldError::FieldMismatch);
    }
    p.field.element(p.eval_idx(x.index(), y.index()))
}

/// True iff every section `x -> P(x, a)` and `y -> P(a, y)` permutes `F_q`.
pub fn is_lpp_poly(p: &BivariatePoly) -> bool {
    crate::lpp::is_latin(&p.value_table())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{OrderedGroup, T31Params};
    use crate::lpp::{tuple_to_square, PermTuple};
    use proptest::prelude::*;

    fn monomials(field: &FieldParams, terms: &[(usize, usize, u32)]) -> BivariatePoly {
        let mut p = BivariatePoly::zero(field.clone());
        for &(i, j, c) in terms {
            p.coeffs[i][j] = c;
        }
        p
    }

    /// Direct definition: sum of c_ij x^i y^j with explicit powers.
    fn eval_naive(p: &BivariatePoly, x: FieldElement, y: FieldElement) -> FieldElement {
        let f = p.field();
        let mut acc = f.zero();
        for i in 0..f.q() as usize {
            for j in 0..f.q() as usize {
                let term = f
                    .mul(p.coeff(i, j), f.mul(f.pow(x, i as u64).unwrap(), f.pow(y, j as u64).unwrap()).unwrap())
                    .unwrap();
                acc = f.add(acc, term).unwrap();
            }
        }
        acc
    }

    #[test]
    fn interpolate_examples() {
        let f2 = FieldParams::new(2, 1).unwrap();
        let p = interpolate_bivariate(&f2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(p, monomials(&f2, &[(1, 0, 1), (0, 1, 1)]));

        let f4 = FieldParams::new(2, 2).unwrap();
        let g = OrderedGroup::t31(&T31Params::new(2, 2, 1).unwrap()).unwrap();
        let square = tuple_to_square(&PermTuple::from_group(&g).unwrap());
        let p = interpolate_bivariate(&f4, square.cells()).unwrap();
        assert_eq!(p, monomials(&f4, &[(1, 0, 1), (0, 1, 1)]));
        for x in f4.elements() {
            for y in f4.elements() {
                assert_eq!(eval_poly(&p, x, y).unwrap().index(), square.get(x.index() as usize, y.index() as usize));
            }
        }

        assert!(interpolate_bivariate(&f4, &vec![vec![0; 4]; 4]).unwrap().is_zero());
        assert!(interpolate_bivariate(&f4, &vec![vec![0; 3]; 4]).is_err());
        assert!(interpolate_bivariate(&f4, &vec![vec![4; 4]; 4]).is_err());
    }

    #[test]
    fn eval_examples() {
        let f4 = FieldParams::new(2, 2).unwrap();
        let c = |i| f4.element(i).unwrap();
        assert_eq!(eval_poly(&BivariatePoly::zero(f4.clone()), c(3), c(2)).unwrap(), c(0));
        let sum = monomials(&f4, &[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(eval_poly(&sum, c(1), c(2)).unwrap(), c(3));
        let prod = monomials(&f4, &[(1, 1, 1)]);
        assert_eq!(eval_poly(&prod, c(2), c(2)).unwrap(), c(3));
        let f9 = FieldParams::new(3, 2).unwrap();
        assert_eq!(
            eval_poly(&sum, f9.element(1).unwrap(), c(1)),
            Err(FieldError::FieldMismatch)
        );
    }

    #[test]
    fn lpp_examples() {
        for (p, n) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)] {
            let f = FieldParams::new(p, n).unwrap();
            assert!(is_lpp_poly(&monomials(&f, &[(1, 0, 1), (0, 1, 1)])));
        }
        let f4 = FieldParams::new(2, 2).unwrap();
        assert!(!is_lpp_poly(&monomials(&f4, &[(0, 1, 1)])));
        assert!(!is_lpp_poly(&monomials(&f4, &[(1, 1, 1)])));
    }

    #[test]
    fn json_shape() {
        let f2 = FieldParams::new(2, 1).unwrap();
        let p = monomials(&f2, &[(1, 0, 1), (0, 1, 1)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"field":{"p":2,"n":1,"modulus":[0,1]},"coeffs":[[0,1],[1,0]]}"#);
        assert_eq!(serde_json::from_str::<BivariatePoly>(&json).unwrap(), p);
        assert!(serde_json::from_str::<BivariatePoly>(r#"{"field":{"p":2,"n":1,"modulus":[0,1]},"coeffs":[[0,1]]}"#).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = BivariatePoly> {
        prop::sample::select(vec![(2u32, 1u32), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4)])
            .prop_flat_map(|(p, n)| {
                let f = FieldParams::new(p, n).unwrap();
                let q = f.q() as usize;
                prop::collection::vec(prop::collection::vec(0..f.q(), q), q)
                    .prop_map(move |coeffs| BivariatePoly::new(f.clone(), coeffs).unwrap())
            })
    }

    proptest! {
        #[test]
        fn interpolation_round_trip(p in arb_poly()) {
            let back = interpolate_bivariate(p.field(), &p.value_table()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn horner_matches_naive(p in arb_poly(), xs in any::<u32>(), ys in any::<u32>()) {
            let f = p.field();
            let x = f.element(xs % f.q()).unwrap();
            let y = f.element(ys % f.q()).unwrap();
            prop_assert_eq!(eval_poly(&p, x, y).unwrap(), eval_naive(&p, x, y));
        }
    }
}
