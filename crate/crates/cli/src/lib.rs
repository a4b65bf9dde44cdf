//! Command-line front end for `bezmerge`: curve documents, reports and plots.

pub mod commands;
pub mod document;
pub mod format;
pub mod svg;
