//! Command-line front end for `thompson-core`: JSON forms, rectangle
//! diagrams and the `thompson` binary.

pub mod app;
pub mod json;
pub mod svg;
