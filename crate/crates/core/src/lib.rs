pub mod cfrac;
pub mod error;
pub mod exec;
pub mod field;
pub mod indec;
pub mod lattice;
pub mod partcount;
pub mod qfield;
pub mod theorems;

pub use error::{Error, Result};
pub use field::Field;
