//! Engine for generating personalized Parsons problems with a language
//! model: request catalogs, prompt construction, solution validation,
//! puzzle building and grading, and request analytics.

pub mod analytics;
pub mod api;
pub mod bank;
pub mod catalog;
pub mod llm;
pub mod pipeline;
pub mod prompt;
pub mod puzzle;
pub mod request;
pub mod rng;
pub mod source;
pub mod validate;

pub use catalog::{Catalog, CatalogError, RequestInput};
pub use pipeline::{Exercise, ExerciseId, GenerationError, Generator, PipelineConfig};
pub use puzzle::{Attempt, GradeReport, PuzzleSpec};
pub use request::{ContextMode, GenerationRequest};
