//! Setup documents, rendering, and the command line.

pub mod cli;
pub mod dsl;
pub mod render;

pub use cli::{run_cli, CliOutput};
pub use dsl::{parse_setup, render_setup};
pub use render::Format;
