//! Exact intersection multiplicities between CM curves and vertical
//! components of Lubin-Tate spaces of height two, basin classification of
//! CM points, and equidistribution diagnostics.

pub mod error;
pub mod padic;
pub mod lattice;
pub mod exec;
pub mod levels;
pub mod intersect;
pub mod equidist;
pub mod selftest;

pub use error::{Error, Result};
