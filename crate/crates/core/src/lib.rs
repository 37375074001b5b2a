pub mod detector;
pub mod differentiator;
pub mod error;
pub mod harness;
pub mod kinematics;
pub mod simulator;

pub use error::{Error, Result};
