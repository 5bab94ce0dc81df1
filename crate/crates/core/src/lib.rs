// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod families;
pub mod figures;
pub mod ode;
pub mod params;
pub mod quad;
pub mod report;
pub mod roots;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
