//! Quivers attached to smooth toric fans, and the gluing conditions their
//! representations must satisfy.
//!
//! Everything runs over exact arithmetic (`num_bigint` / `num_rational`);
//! there is no floating point anywhere in the crate.

pub mod builtin;
pub mod category;
pub mod cone;
pub mod fan;
pub mod json;
pub mod linalg;
pub mod quiver;

pub use category::{ConditionReport, Representation};
pub use cone::{Cone, RayId};
pub use fan::Fan;
pub use quiver::Quiver;
