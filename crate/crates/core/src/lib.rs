pub mod bounds;
pub mod error;
pub mod experiments;
pub mod extraction;
pub mod linalg;
pub mod model;
pub mod projection;
pub mod random;
pub mod solver;

pub use error::{NepError, Result};
