//! Library half of the `unring` binary: parsing, evaluation, and report
//! rendering, kept separate from the process glue so they can be tested
//! directly.

pub mod eval;
pub mod parser;
pub mod report;
