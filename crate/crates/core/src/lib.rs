//! Free semi-theories, their completion to algebraic theories as categories
//! of grafting trees, strict algebras over them, and bounded verification of
//! the combinatorial facts about filtrations and simplicial resolutions.

pub mod algebra;
pub mod completion;
pub mod dot;
pub mod error;
pub mod filtration;
pub mod presentation;
pub mod report;
pub mod resolution;

pub use error::{Error, Result};
pub use presentation::{GeneratorDecl, Letter, Presentation, Word};
pub use report::{Report, Verdict};
