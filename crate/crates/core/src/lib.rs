//! Exact intersection theory of boundary 2-strata on M̄₀,₇ and certified
//! cone membership for the cycles built from them.
//!
//! ```
//! use strata_cones::classes::stratum_class;
//! use strata_cones::cone::{membership, ConeSpec};
//! use strata_cones::lifts::kv_lift;
//!
//! let v2 = ConeSpec::v2();
//! assert!(membership(&stratum_class("12,3,4567".parse()?), &v2)?.is_member());
//! assert!(!membership(&kv_lift("67,5,12".parse()?), &v2)?.is_member());
//! # Ok::<(), strata_cones::Error>(())
//! ```

pub mod classes;
pub mod cone;
pub mod error;
pub mod intersection;
pub mod labels;
pub mod lifts;
pub mod linalg;
pub mod perm;
pub mod plane;

pub use error::{Error, Result};

/// The book's chapters, compiled so their examples run as doc-tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/labels.md")]
    pub mod labels {}
    #[doc = include_str!("../../../book/src/intersections.md")]
    pub mod intersections {}
    #[doc = include_str!("../../../book/src/classes.md")]
    pub mod classes {}
    #[doc = include_str!("../../../book/src/lifts.md")]
    pub mod lifts {}
    #[doc = include_str!("../../../book/src/plane.md")]
    pub mod plane {}
    #[doc = include_str!("../../../book/src/cones.md")]
    pub mod cones {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
