//! Exact arithmetic for involution fixity of finite exceptional groups of Lie type.
//!
//! The crate is organised bottom-up: [`qpoly`] supplies integer polynomials in `q`,
//! [`rootdata`] the Weyl group combinatorics, [`lieorders`] order polynomials and the
//! involution class table, [`fixity`] the fixed-point engines, [`algdim`] dimension
//! ratios for algebraic groups, [`oracle`] brute-force permutation actions and
//! [`fixtures`] the encoded table data.

pub mod algdim;
pub mod fixity;
pub mod fixtures;
pub mod lieorders;
pub mod oracle;
pub mod qpoly;
pub mod rootdata;
