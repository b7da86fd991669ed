//! Holomorphic Lie algebroids in one chart: anchor, structure functions,
//! section brackets and load-time validation.

mod model;
mod section;
mod validate;

pub use model::{AlgebroidModel, ModelError, ModelSource, StructureEntry};
pub use section::Section;
pub use validate::{Invariant, ValidationOptions, ValidationReport};
