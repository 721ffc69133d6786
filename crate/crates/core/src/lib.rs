//! Coding discretizations of continuous functions on `[0, 1]`.
//!
//! * [`grid`]: nested discretization systems and the uniform image grid.
//! * [`codec`]: piecewise-linear functions and their quantitative,
//!   qualitative and stretched codes.
//! * [`words`]: occurrence counts, frequencies, minimal periods, and
//!   synthesis of words with a prescribed frequency.
//! * [`cover`]: subdiscretizations and ε-boxes around a target function.
//! * [`forge`]: construction of nearby PL witnesses whose codes realize a
//!   prescribed word frequency or large alternating jumps.
//! * [`sturmian`]: cutting sequences of straight lines as an independent
//!   cross-check of the stretched code.

pub mod codec;
pub mod cover;
pub mod forge;
pub mod grid;
pub mod rational;
pub mod sturmian;
pub mod words;

pub use codec::{Code, CodeKind, PlFunction};
pub use grid::{DiscretizationSystem, LevelResolutions};
pub use rational::Rational;
