//! Weierstrass models, the group law over exact fields, reduction data at
//! finite places, and component-group bookkeeping.

pub mod weierstrass;
pub mod divpoly;
pub mod minimal;
pub mod reduction;
pub mod reduce;
pub mod component;
pub mod parse;

pub use minimal::{global_minimal_model, MinimalModel, ModelMap};
pub use reduction::{reduction_data, ReductionData, ReductionType};
pub use weierstrass::{EllipticCurve, Point};
