//! Input handling, command dispatch, and report emission for the
//! `latticerect` binary.

pub mod dot;
pub mod input;
pub mod report;
pub mod run;

pub use input::{parse_input, InputError, InputSpec, Problem};
pub use report::Report;
pub use run::{run, Command, Outcome, RunOptions};
