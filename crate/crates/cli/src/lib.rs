//! Command-line companion to the `clustnet` library: file formats,
//! argument handling, and the subcommands that drive graph generation,
//! statistics, null-model ensembles, and path-length comparisons.

pub mod commands;
pub mod edgelist;
pub mod render;
