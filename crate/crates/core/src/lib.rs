pub mod bggcheck;
pub mod borels;
pub mod charring;
pub mod diagrams;
pub mod error;
pub mod linalg;
pub mod rootdata;
pub mod vermacalc;

pub use error::{Error, Result};
