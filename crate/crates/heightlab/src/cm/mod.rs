//! CM module.
