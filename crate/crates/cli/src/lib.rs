//! Library half of the `equinorm` command-line tool.

pub mod instance;
pub mod report;
pub mod run;
