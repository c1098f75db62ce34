//! Parallel-beam projections computed through the central slice theorem,
//! a real-valued DCT approximation of the same pipeline, and a detector for
//! round signs crossed by 45 degree stripes.

// `!(x > 0.0)` is how parameter checks reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detector;
pub mod error;
pub mod eval;
pub mod image;
pub mod transforms;

pub use error::{Error, Result};

// The guide's code blocks run as doctests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/images.md")]
    mod images {}
    #[doc = include_str!("../../../book/src/central-slice.md")]
    mod central_slice {}
    #[doc = include_str!("../../../book/src/dct.md")]
    mod dct {}
    #[doc = include_str!("../../../book/src/profiles.md")]
    mod profiles {}
    #[doc = include_str!("../../../book/src/detector.md")]
    mod detector {}
    #[doc = include_str!("../../../book/src/hough.md")]
    mod hough {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
}
