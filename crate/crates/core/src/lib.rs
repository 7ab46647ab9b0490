pub mod arith;
pub mod cli;
pub mod error;
pub mod finfield;
pub mod fpcore;
pub mod prop;
pub mod quatlab;
pub mod twistknot;

pub use error::{Error, Result};
