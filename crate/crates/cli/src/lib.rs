//! Command-line front end for `partconj-core`: file formats, reports and
//! the subcommand implementations used by the `partconj` binary.

pub mod commands;
pub mod io;
pub mod report;
