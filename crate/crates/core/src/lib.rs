//! Exact checks for universal r-forms on the FRT quantum groups of type GL, SL, O and Sp.
#![allow(clippy::needless_range_loop)]

pub mod bichar;
pub mod braid;
pub mod bwm;
pub mod error;
pub mod functionals;
pub mod ideal;
pub mod linalg;
pub mod matrix;
pub mod outcome;
pub mod poly;
pub mod rmatrix;
pub mod rtable;
pub mod scalar;
pub mod series;
pub mod table;
pub mod toy;
pub mod verify;
pub mod words;
pub mod yd;

pub use error::{Error, Result};
pub use matrix::{QMatrix, SparseVec};
pub use poly::Poly;
pub use scalar::Scalar;
pub use series::{build_series, Series, SeriesSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/scalars.md")]
    struct Scalars;
    #[doc = include_str!("../../../book/src/rmatrices.md")]
    struct RMatrices;
    #[doc = include_str!("../../../book/src/rforms.md")]
    struct RForms;
    #[doc = include_str!("../../../book/src/yetter-drinfeld.md")]
    struct YetterDrinfeld;
    #[doc = include_str!("../../../book/src/classification.md")]
    struct Classification;
    #[doc = include_str!("../../../book/src/three-strands.md")]
    struct ThreeStrands;
    #[doc = include_str!("../../../book/src/functionals.md")]
    struct Functionals;
    #[doc = include_str!("../../../book/src/integers.md")]
    struct Integers;
    #[doc = include_str!("../../../book/src/reports.md")]
    struct Reports;
}
