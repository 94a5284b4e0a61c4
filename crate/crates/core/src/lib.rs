//! Exact-arithmetic kernel for regular subdivisions of hypersimplices and
//! general point configurations: secondary cones and their rays, tight
//! spans, flip-graph enumeration of regular triangulations up to symmetry,
//! metric cones and fans, coherency indices and split decomposition of
//! finite metrics.
//!
//! All computations are over arbitrary-precision rationals; there are no
//! tolerances anywhere in this crate. Decimal input is converted to exact
//! rationals at the parsing boundary, and decimal output is rendered from
//! exact values for reporting only.

pub mod error;
pub mod exactgeom;
pub mod hypersimplex;
pub mod jsonio;
pub mod metrics;
pub mod secfan;
pub mod subdivide;
pub mod symmetry;

pub use error::{Error, Result};
