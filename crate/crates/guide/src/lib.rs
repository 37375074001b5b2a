//! The book chapters, so that `cargo test` runs their code blocks.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/kinematics.md")]
pub mod kinematics {}

#[doc = include_str!("../../../book/src/differentiation.md")]
pub mod differentiation {}

#[doc = include_str!("../../../book/src/detection.md")]
pub mod detection {}

#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}

#[doc = include_str!("../../../book/src/settings.md")]
pub mod settings {}
