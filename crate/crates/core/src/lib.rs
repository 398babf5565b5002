pub mod cli;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod lattice;
pub mod scalar;
pub mod system;
pub mod tree;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
