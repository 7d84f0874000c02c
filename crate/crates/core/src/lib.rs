//! Static analysis and formatting for Prolog source.
//!
//! [`rules::lint_source`] runs the lint rules over one file and
//! [`format::format_source`] produces the canonical layout.

pub mod body;
pub mod config;
pub mod diagnostics;
pub mod doc;
pub mod format;
pub mod lexer;
pub mod ops;
pub mod program;
pub mod reader;
pub mod rules;
pub mod source;
pub mod term;

pub use config::{load_config, Config};
pub use diagnostics::{Diagnostic, FileReport, Severity};
pub use format::{check_format, format_program, format_source, FormatCheck};
pub use reader::parse_source;
pub use rules::{lint_source, run};
pub use source::SourceFile;
