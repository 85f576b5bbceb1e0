//! Verification toolkit for singularity and limit invariants of higher Chow
//! cycles on the degeneration L_1⋯L_d + t·M_1⋯M_d = 0 of degree-d surfaces.

pub mod error;
pub mod arrangement;
pub mod cycles;
pub mod degeneration;
pub mod exactlin;
pub mod limits;
pub mod periods;

pub use error::{Error, Result};
