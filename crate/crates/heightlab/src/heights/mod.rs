//! Néron local heights (archimedean by theta series, non-archimedean exact),
//! global canonical heights by local decomposition and by the doubling limit,
//! and the parallelogram-law machinery.

pub mod value;
pub mod nonarch;
pub mod arch;
pub mod hdiff;
pub mod xonly;
pub mod global;
pub mod parallelogram;

pub use global::{canonical_height_doubling, canonical_height_local_sum, HeightDecomposition};
pub use nonarch::{lambda_nonarch, LocalHeight};
pub use value::HeightValue;
