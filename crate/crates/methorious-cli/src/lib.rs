//! Command line front end for the methorious calculus: text parsers,
//! canonical renderers, JSON input/output, and a floating-point
//! verification mode. The symbolic engine lives in the `methorious`
//! crate.

pub mod cli;
pub mod json;
pub mod parse;
pub mod render;
pub mod selftest;
pub mod verify;
