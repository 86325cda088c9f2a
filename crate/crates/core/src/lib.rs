pub mod algnum;
pub mod arb;
pub mod error;
pub mod gutkin;
pub mod linforms;
pub mod poly;
pub mod rational_approx;

pub use error::{Error, Result};
