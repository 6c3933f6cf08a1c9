pub mod arith;
pub mod chain;
pub mod decomposition;
pub mod endo;
pub mod error;
pub mod fmodule;
pub mod hom;
pub mod random;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
