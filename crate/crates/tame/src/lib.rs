//! File formats, SVG rendering and the `tame` command-line tool.

pub mod cli;
pub mod io;
pub mod render;
