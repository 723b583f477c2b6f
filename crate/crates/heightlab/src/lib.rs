//! Canonical heights on elliptic curves over ℚ and cyclotomic fields.
//!
//! The library computes Néron local heights (archimedean via theta series,
//! non-archimedean exactly as rational multiples of log p), assembles global
//! canonical heights by two independent routes (local decomposition and the
//! doubling limit of naive heights), and provides CM machinery (canonical
//! Frobenius lifts at split ordinary primes, Galois actions on cyclotomic
//! coordinates) together with executable checkers for the explicit height
//! lower-bound constants on points over abelian extensions.

pub mod error;
pub mod exact;
pub mod curve;
pub mod heights;
pub mod cm;
pub mod bounds;
pub mod par;

pub use error::{Error, Result};
