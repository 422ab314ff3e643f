mod identities;
mod plan;

pub use identities::*;
pub use plan::*;
