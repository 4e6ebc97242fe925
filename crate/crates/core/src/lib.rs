pub mod augment;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod io;
pub mod schemas;
pub mod scorer;
pub mod similarity;
pub mod transition;

pub use error::{Error, Result};
