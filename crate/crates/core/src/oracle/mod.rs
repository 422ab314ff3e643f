//! Independent reference implementations used to validate the expansions.

mod contour;
mod quad;
mod refs;

pub use contour::{Contour, Segment};
pub use quad::{quad_ray, quad_real, quad_real_inf, quad_segment, CompensatedSum};
pub use refs::*;
