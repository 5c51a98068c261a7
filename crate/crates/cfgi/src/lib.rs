//! File formats, reporting, the differential harness and the command-line
//! front end for `cfgi-core`.

pub mod cli;
pub mod differential;
pub mod dot;
pub mod format;
pub mod pipeline;
pub mod random;
pub mod report;
