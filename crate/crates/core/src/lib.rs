//! Computations in the complex hyperbolic plane: PU(2,1) isometries,
//! complex hyperbolic triangle groups, the real (3,3,9) reflection group with
//! a genus-2 surface subgroup, and cyclic covers of that surface.

pub mod cxcore;
pub mod error;
pub mod isometry;
pub mod linalg;
pub mod plot;
pub mod realhyp;
pub mod surfaces;
pub mod triangle;

pub use error::{Error, Result};
