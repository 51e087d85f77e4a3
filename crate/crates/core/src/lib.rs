pub mod error;
pub mod frames;
pub mod catalog;
pub mod config;
pub mod grid;
pub mod radial;
pub mod symmetry;
pub mod evolve;
pub mod verify;

pub use error::{Error, Result};
