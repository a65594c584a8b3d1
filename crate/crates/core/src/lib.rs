//! Permutation group polynomials over finite fields.
//!
//! A bivariate local permutation polynomial over `F_q` is determined by a
//! tuple of `q` permutations of `F_q`, and its value table is a Latin square.
//! When the permutations form a group the polynomial is a permutation group
//! polynomial. This crate builds two families of such groups, turns them into
//! squares and polynomials, constructs orthogonal companions, and counts the
//! polynomials of each form exactly, with brute-force checks for small `q`.
//!
//! ```
//! use lpp_core::groups::{OrderedGroup, T31Params};
//! use lpp_core::lpp::{are_orthogonal, companion_h, companion_tuple, tuple_to_square, PermTuple};
//!
//! let params = T31Params::new(3, 2, 1).unwrap();
//! let tuple = PermTuple::from_group(&OrderedGroup::t31(&params).unwrap()).unwrap();
//! let mate = companion_tuple(&tuple, &companion_h(&params).unwrap()).unwrap();
//! assert!(are_orthogonal(&tuple_to_square(&tuple), &tuple_to_square(&mate)).unwrap());
//! ```
//!
//! Points `0..q` stand for the field elements `c_0, ..., c_(q-1)`; see
//! [`ffield`] for the labeling.

pub mod enumerate;
pub mod ffield;
pub mod groups;
pub mod lpp;
pub mod perm;
pub mod poly;

pub use enumerate::EnumerateError;
pub use ffield::FieldError;
pub use groups::GroupError;
pub use lpp::LppError;
pub use perm::PermError;
pub use poly::PolyError;

// The guide's code listings run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/latin-squares.md")]
    mod latin_squares {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
