//! File formats, a threaded block runner and the `qrnoise` command line on
//! top of `qrnoise-core`.

pub mod cli;
pub mod csv;
pub mod errata;
pub mod runner;
