//! IO companion to `skeltrop-core`: JSON interchange formats, deterministic
//! reports, SVG rendering, and the command-line front end.

pub mod commands;
pub mod formats;
pub mod report;
pub mod svg;

pub use commands::{execute, Outcome};
