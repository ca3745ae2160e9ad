//! Spectral multipliers of Toeplitz operators with moment-map symbols on the
//! unit ball and the Siegel domain.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coords;
pub mod error;
pub mod geometry;
pub mod multi_index;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod spectra;
pub mod symbol;

pub use error::{Error, Result};
pub use multi_index::MultiIndex;
pub use quadrature::{Estimate, Method, QuadratureSpec};
pub use symbol::SymbolSpec;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/symbols.md")]
    mod symbols {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/multipliers.md")]
    mod multipliers {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
