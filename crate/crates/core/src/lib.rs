//! Toolkit for polynomials that do not vanish on products of open right
//! half planes ("stable" polynomials).
// Negated float comparisons are deliberate: they treat NaN as failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod construct;
pub mod error;
pub mod factcheck;
pub mod interlace;
pub mod poly;
pub mod preservers;
pub mod stability;
pub mod uniroots;

pub use error::{Error, Result};
pub use poly::{format_text, parse_text, parse_text_with_nvars, ComplexPoint, MultiPoly, UniPoly, C64};
