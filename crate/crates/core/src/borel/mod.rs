//! Borel-plane pipeline for K_ν and Airy Ai.

mod kernel;
pub mod quad;

pub use kernel::*;
mod table;

pub use table::*;
mod expansion;

pub use expansion::*;
