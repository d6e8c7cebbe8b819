//! Command-line front end: problem documents, the expression language and
//! the `star`, `bracket`, `cr`, `norm`, `expect` and `verify` commands.
//!
//! ```
//! use stomoyal::{load_problem, run_command, Command, Options};
//!
//! let problem = load_problem("grid 2\nkernel e = 1 1\nvar X = 1 e\nvar Y = 2 e\n").unwrap();
//! let args = ["X".to_string(), "Y".to_string()];
//! let out = run_command(&problem, Command::Star, &args, &Options::default()).unwrap();
//! assert_eq!(out.text, "X*Y + h\n");
//! ```

pub mod cli;
pub mod commands;
pub mod diagnostics;
pub mod document;
pub mod dsl;

pub use cli::{run_cli, Outcome};
pub use commands::{run_command, Command, CommandOutput, Options, OutputFormat};
pub use diagnostics::{Code, Diagnostic, Location};
pub use document::{load_problem, parse_document, Problem, ProblemDocument};
pub use dsl::parse_expression;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod guide {}
