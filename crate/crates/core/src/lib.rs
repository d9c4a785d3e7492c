//! Sequential CHSH nonlocality sharing.
//!
//! A two-qubit state is shared between one fixed party and a chain of
//! sequential parties who each test a CHSH inequality against the fixed
//! party and pass their qubit on through a projective instrument. This
//! crate simulates such strategies exactly, carries the closed-form
//! trade-off curves between successive CHSH values, and searches the
//! trade-off region numerically.

pub mod analysis;
pub mod boundary;
pub mod catalog;
pub mod io;
pub mod linalg;
pub mod optimizer;
pub mod report;
pub mod scenario;

mod error;

pub use error::{Error, Result};
