//! Front end for the `bvfrob` binary: file formats and commands.

pub mod commands;
pub mod format;

pub use commands::{
    cmd_check_axioms, cmd_fixture, cmd_run, cmd_tensor, cmd_validate, exit_code, load_input, CommandOutput,
    Format, Input, RunOptions,
};
