pub mod blocking;
pub mod classify;
pub mod cli;
pub mod curve;
pub mod error;
pub mod language;
pub(crate) mod layered;
pub mod measure;
pub mod render;
pub mod rng;
pub mod rule;
pub mod symbolic;
pub mod zoo;

pub use error::{Error, Result};
