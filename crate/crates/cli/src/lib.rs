//! Manifold-description DSL and workbench commands.

pub mod app;
pub mod commands;
pub mod dsl;
pub mod model;
pub mod report;

pub use app::{execute, run, Outcome};
pub use commands::{Command, Selection};
pub use dsl::{parse_document, DiagKind, Diagnostic, Document};
pub use model::{InputError, Model};
pub use report::{Format, Report};
