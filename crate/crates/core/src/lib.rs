//! Exact computations for SL2 in odd characteristic: characters, explicit
//! modules over the divided-power hyperalgebra, certified tilting
//! decompositions and verification reports.

pub mod characters;
pub mod decompose;
pub mod error;
pub mod exactcore;
pub mod limits;
pub mod slmod;
pub mod verify;

pub use error::{Error, Result};
