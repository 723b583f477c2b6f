//! Bounds module.
