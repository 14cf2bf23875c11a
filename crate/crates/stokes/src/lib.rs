pub mod error;
pub mod formal_model;
pub mod laplace_engine;
pub mod matrix;
pub mod par;
pub mod special_fn;
pub mod stokes_core;
pub mod verify;

pub use error::{Error, Result};
