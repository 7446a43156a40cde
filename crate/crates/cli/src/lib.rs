//! File formats and diagram rendering behind the `weft` command.

pub mod braid_file;
pub mod render;

pub use braid_file::{BraidFile, ParseError};
pub use render::{render, Format, RenderSpec};
