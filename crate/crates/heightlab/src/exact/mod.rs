//! Exact arithmetic: rationals, cyclotomic fields, finite fields,
//! controlled-precision ball arithmetic, and p-adic valuations at
//! unramified places via Hensel-lifted roots of cyclotomic polynomials.

pub mod field;
pub mod rat;
pub mod poly;
pub mod quad;
pub mod ball;
pub mod cyclotomic;
pub mod minpoly;
pub mod mahler;
pub mod weil;
pub mod ffield;
pub mod places;

pub use ball::{ComplexBall, RealBall};
pub use cyclotomic::Cyclo;
pub use places::{place_structure, valuation, valuation_auto, FinitePlaceData};
pub use field::FieldElem;
