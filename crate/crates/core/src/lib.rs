//! Exact rowmotion, whirling and whorm analysis on finite posets.

pub mod error;
pub mod functions;
pub mod ideal;
pub mod io;
pub mod orbit;
pub mod poset;
pub mod render;
pub mod set;
pub mod stat;
pub mod verify;
pub mod whirl;
pub mod whorm;

pub use error::{Error, Limits, Result};
