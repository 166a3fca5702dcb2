//! K-Bessel functions `K_{r+it}(y)` of large complex order.
//!
//! Asymptotic evaluators (nonuniform Laplace terms, uniform Airy-type terms),
//! the saddle-point geometry they are built on, extended-precision oracles to
//! check them against, and modular-group Eisenstein series built on top.

pub mod airy;
pub mod asymptotics;
pub mod eisenstein;
pub mod error;
pub mod oracle;
pub mod saddle;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use types::*;
